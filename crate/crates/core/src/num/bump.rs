//! Compactly supported C-infinity test functions with analytic derivatives.
//!
//! Two shape families cover every weight used in the lab:
//!
//! * `Mollifier` — the standard `exp(-1/(1-u^2))` profile rescaled so the
//!   peak value is 1.
//! * `GaussianCore` — `exp(-u^2/(2 sigma^2))` times a C-infinity edge taper.
//!   A wide Gaussian core buys much faster Fourier decay than the bare
//!   mollifier, which several truncation thresholds in the suites need.
//!
//! Derivatives up to order 4 come from exact jet (truncated Taylor)
//! arithmetic, not finite differences.

use super::quad;

/// Truncated 4th-order jet: value and derivatives [f, f', f'', f''', f''''].
pub type Jet5 = [f64; 5];

pub const JET_ZERO: Jet5 = [0.0; 5];
pub const JET_ONE: Jet5 = [1.0, 0.0, 0.0, 0.0, 0.0];

const BINOM: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

pub fn jet_mul(a: &Jet5, b: &Jet5) -> Jet5 {
    let mut out = JET_ZERO;
    for n in 0..5 {
        let mut s = 0.0;
        for i in 0..=n {
            s += BINOM[n][i] * a[i] * b[n - i];
        }
        out[n] = s;
    }
    out
}

/// Jet of a/b (requires b[0] != 0).
pub fn jet_div(a: &Jet5, b: &Jet5) -> Jet5 {
    let mut c = JET_ZERO;
    for n in 0..5 {
        let mut s = a[n];
        for i in 0..n {
            s -= BINOM[n][i] * c[i] * b[n - i];
        }
        c[n] = s / b[0];
    }
    c
}

/// Jet of exp(a): E^(n) = sum_{i<n} C(n-1,i) a^(n-i) E^(i).
pub fn jet_exp(a: &Jet5) -> Jet5 {
    let mut e = JET_ZERO;
    e[0] = a[0].exp();
    for n in 1..5 {
        let mut s = 0.0;
        for i in 0..n {
            s += BINOM[n - 1][i] * a[n - i] * e[i];
        }
        e[n] = s;
    }
    e
}

/// Mollifier profile exp(1 - 1/(1-u^2)) on |u| < 1, zero outside.
fn mollifier_jet(u: f64) -> Jet5 {
    if u.abs() >= 1.0 {
        return JET_ZERO;
    }
    let d: Jet5 = [1.0 - u * u, -2.0 * u, -2.0, 0.0, 0.0];
    let inv = jet_div(&JET_ONE, &d);
    let arg = [1.0 - inv[0], -inv[1], -inv[2], -inv[3], -inv[4]];
    jet_exp(&arg)
}

/// C-infinity step: h(s) = f(1-s)/(f(s)+f(1-s)), f(s)=exp(-1/s).
/// Identically 1 for s <= 0, identically 0 for s >= 1, flat at both ends.
fn smoothstep_jet(s: f64) -> Jet5 {
    if s <= 0.0 {
        return JET_ONE;
    }
    if s >= 1.0 {
        return JET_ZERO;
    }
    let f_at = |t: f64, sign: f64| -> Jet5 {
        // jet of exp(-1/t) in the s-variable, t = t(s) with dt/ds = sign
        let tj: Jet5 = [t, sign, 0.0, 0.0, 0.0];
        let inv = jet_div(&JET_ONE, &tj);
        jet_exp(&[-inv[0], -inv[1], -inv[2], -inv[3], -inv[4]])
    };
    let f1 = f_at(1.0 - s, -1.0);
    let f0 = f_at(s, 1.0);
    let den = [
        f0[0] + f1[0],
        f0[1] + f1[1],
        f0[2] + f1[2],
        f0[3] + f1[3],
        f0[4] + f1[4],
    ];
    jet_div(&f1, &den)
}

/// Shape of a bump on the normalized variable u in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BumpShape {
    /// exp(1 - 1/(1-u^2)), peak 1 at the center.
    Mollifier,
    /// exp(-u^2/(2 sigma^2)) times an edge taper. With `taper_start = 0`
    /// the taper is the full mollifier profile; with `taper_start = t0 > 0`
    /// the bump has a plateau-taper on t0 < |u| < 1 and is exactly Gaussian
    /// inside.
    GaussianCore { sigma: f64, taper_start: f64 },
}

/// Smooth compactly supported weight on [center-width, center+width].
#[derive(Debug, Clone)]
pub struct SmoothBump {
    center: f64,
    width: f64,
    shape: BumpShape,
    /// Recorded sup-norm constants: deriv_sup[j] >= sup |w^(j)(x)| * width^j.
    deriv_sup: [f64; 5],
}

impl SmoothBump {
    pub fn new(center: f64, width: f64, shape: BumpShape) -> SmoothBump {
        assert!(width > 0.0, "bump width must be positive");
        if let BumpShape::GaussianCore { sigma, taper_start } = shape {
            assert!(sigma > 0.0 && (0.0..1.0).contains(&taper_start));
        }
        let mut b = SmoothBump {
            center,
            width,
            shape,
            deriv_sup: [0.0; 5],
        };
        let mut sup = [0.0f64; 5];
        let samples = 4001;
        for i in 0..samples {
            let u = -1.0 + 2.0 * (i as f64) / ((samples - 1) as f64);
            let j = b.shape_jet(u);
            for (k, s) in sup.iter_mut().enumerate() {
                *s = s.max(j[k].abs()); // u-variable jet: already width-scaled
            }
        }
        b.deriv_sup = sup;
        b
    }

    pub fn mollifier(center: f64, width: f64) -> SmoothBump {
        SmoothBump::new(center, width, BumpShape::Mollifier)
    }

    pub fn gaussian_core(center: f64, width: f64, sigma: f64, taper_start: f64) -> SmoothBump {
        SmoothBump::new(center, width, BumpShape::GaussianCore { sigma, taper_start })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }

    /// Recorded constants C_j with |w^(j)| <= C_j * width^-j.
    pub fn deriv_sup(&self) -> [f64; 5] {
        self.deriv_sup
    }

    fn shape_jet(&self, u: f64) -> Jet5 {
        match self.shape {
            BumpShape::Mollifier => mollifier_jet(u),
            BumpShape::GaussianCore { sigma, taper_start } => {
                if u.abs() >= 1.0 {
                    return JET_ZERO;
                }
                let g = jet_exp(&[
                    -u * u / (2.0 * sigma * sigma),
                    -u / (sigma * sigma),
                    -1.0 / (sigma * sigma),
                    0.0,
                    0.0,
                ]);
                let taper = if taper_start == 0.0 {
                    mollifier_jet(u)
                } else if u.abs() <= taper_start {
                    JET_ONE
                } else {
                    // s = (|u| - t0)/(1 - t0); chain rule for the sign of u
                    let sgn = u.signum();
                    let scale = 1.0 / (1.0 - taper_start);
                    let s = (u.abs() - taper_start) * scale;
                    let h = smoothstep_jet(s);
                    let mut out = JET_ZERO;
                    let mut pw = 1.0;
                    for k in 0..5 {
                        out[k] = h[k] * pw;
                        pw *= scale * sgn;
                    }
                    out
                };
                jet_mul(&g, &taper)
            }
        }
    }

    /// Value at x.
    pub fn value(&self, x: f64) -> f64 {
        self.shape_jet((x - self.center) / self.width)[0]
    }

    /// Value and derivatives up to order 4 at x.
    pub fn jet(&self, x: f64) -> Jet5 {
        let j = self.shape_jet((x - self.center) / self.width);
        let mut out = JET_ZERO;
        let mut pw = 1.0;
        for k in 0..5 {
            out[k] = j[k] * pw;
            pw /= self.width;
        }
        out
    }

    pub fn derivative(&self, x: f64, order: usize) -> f64 {
        assert!(order <= 4);
        self.jet(x)[order]
    }

    /// Integral of the bump over its support.
    pub fn mass(&self) -> f64 {
        let (a, b) = self.support();
        quad::integrate_real(|x| self.value(x), a, b, 1e-13).value
    }

    /// Fourier transform at frequency xi in cycles: int w(x) e(-xi x) dx.
    pub fn fourier(&self, xi: f64) -> num_complex::Complex64 {
        let (a, b) = self.support();
        quad::integrate(|x| self.value(x).into(), |x| -xi * x, a, b, 1e-13).value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_derivative(b: &SmoothBump, x: f64, order: usize, h: f64) -> f64 {
        // central differences on the next-lower derivative order
        (b.derivative(x + h, order - 1) - b.derivative(x - h, order - 1)) / (2.0 * h)
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cases = [
            SmoothBump::mollifier(1.5, 0.5),
            SmoothBump::gaussian_core(0.0, 5.25, 1.0 / 7.0, 6.0 / 7.0),
            SmoothBump::gaussian_core(1.5, 0.5, 2.0 / 7.0, 0.0),
        ];
        for b in &cases {
            let (lo, hi) = b.support();
            for i in 1..20 {
                let x = lo + (hi - lo) * (i as f64) / 20.0;
                for order in 1..=4 {
                    let exact = b.derivative(x, order);
                    let h = b.width() * 1e-5;
                    let fd = fd_derivative(b, x, order, h);
                    let scale = b.deriv_sup()[order] / b.width().powi(order as i32);
                    assert!(
                        (exact - fd).abs() <= 1e-6 * scale.max(exact.abs()),
                        "order {order} at x={x}: jet {exact} vs fd {fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn support_and_positivity() {
        let b = SmoothBump::mollifier(1.5, 0.5);
        assert_eq!(b.value(0.99), 0.0);
        assert_eq!(b.value(2.01), 0.0);
        assert!(b.value(1.5) > 0.9999);
        assert!((b.value(1.2) - b.value(1.8)).abs() < 1e-15); // even about the center
    }

    #[test]
    fn deriv_sup_bounds_hold_on_fresh_grid() {
        let b = SmoothBump::gaussian_core(2.0, 1.0, 0.2, 0.0);
        let sup = b.deriv_sup();
        for i in 0..1777 {
            let x = 1.0 + 2.0 * (i as f64) / 1776.0;
            let j = b.jet(x);
            for (k, s) in sup.iter().enumerate() {
                assert!(j[k].abs() <= s / b.width().powi(k as i32) + 1e-9 * s.max(1.0));
            }
        }
    }

    #[test]
    fn smoothstep_endpoints() {
        assert_eq!(smoothstep_jet(-0.1), JET_ONE);
        assert_eq!(smoothstep_jet(1.1), JET_ZERO);
        let mid = smoothstep_jet(0.5);
        assert!((mid[0] - 0.5).abs() < 1e-15);
    }
}
