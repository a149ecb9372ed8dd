//! Bessel kernels J_nu (integer order), Y_0 and K_0.
//!
//! Two-regime scheme: power series below the seam, Hankel-type asymptotic
//! expansions above it, with a seam band where both are computed and
//! cross-checked by the tests. The power series are accumulated in
//! double-double arithmetic because the alternating terms cancel by up to
//! fourteen digits near the turning point x ~ order. For orders >= 2 in the
//! asymptotic regime the value is reached by forward recurrence from the
//! J_0/J_1 Hankel anchors, which is stable there (order < argument); the
//! bare Hankel series for J_64 would not converge until x ~ order^2.

use super::dd::Dd;
use crate::error::NumericsError;

/// Seam between power series and asymptotics for J: x <= max(12, order).
pub fn j_seam(order: u32) -> f64 {
    12f64.max(order as f64)
}

/// Seam for Y_0 and K_0. The asymptotic error floor at the seam is about
/// exp(-2x); 20 keeps it near 4e-18, far below the 1e-10 contract.
pub const Y0_K0_SEAM: f64 = 20.0;

pub const MAX_ORDER: u32 = 64;
pub const MAX_ARGUMENT: f64 = 1.0e5;

const GAMMA_DD: Dd = Dd { hi: 0.577_215_664_901_532_9, lo: -4.942_915_152_430_645e-18 };
const LN2_DD: Dd = Dd { hi: 0.693_147_180_559_945_3, lo: 2.319_046_813_846_299_6e-17 };
const PI_DD: Dd = Dd { hi: 3.141_592_653_589_793, lo: 1.224_646_799_147_353_2e-16 };

/// ln(x) in double-double: exact binary split plus an atanh series.
fn dd_ln(x: f64) -> Dd {
    assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let (m, e) = if raw_exp == 0 {
        // subnormal: rescale first
        let y = x * 2f64.powi(108);
        let by = y.to_bits();
        let re = ((by >> 52) & 0x7ff) as i64 - 1023 - 108;
        (f64::from_bits((by & !(0x7ffu64 << 52)) | (1023u64 << 52)), re)
    } else {
        (f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52)), raw_exp - 1023)
    };
    // m in [1,2); pull into [sqrt(1/2), sqrt(2)) for a small atanh argument
    let (m, e) = if m > std::f64::consts::SQRT_2 { (m / 2.0, e + 1) } else { (m, e) };
    let num = Dd::from_f64(m).sub(Dd::ONE);
    let den = Dd::from_f64(m).add(Dd::ONE);
    // y = (m-1)/(m+1) via one Newton-free dd division: y = num/den
    let y0 = num.to_f64() / den.to_f64();
    let r = num.sub(den.mul_f64(y0));
    let y = Dd::from_f64(y0).add(r.div_f64(den.to_f64()));
    let y2 = y.mul(y);
    let mut term = y;
    let mut sum = y;
    let mut k = 1usize;
    loop {
        term = term.mul(y2);
        let add = term.div_f64((2 * k + 1) as f64);
        sum = sum.add(add);
        if add.abs() < 1e-36 {
            break;
        }
        k += 1;
        debug_assert!(k < 200);
    }
    sum.mul_f64(2.0).add(LN2_DD.mul_f64(e as f64))
}

/// ln(x/2) + gamma in double-double; the cancellation-critical scalar of
/// the Y_0/K_0 series.
fn log_half_x_plus_gamma(x: f64) -> Dd {
    dd_ln(x).sub(LN2_DD).add(GAMMA_DD)
}

/// Power series for J_nu, double-double accumulation.
pub fn bessel_j_series(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let half = x / 2.0;
    // t0 = (x/2)^nu / nu! built factor by factor to avoid overflow pairs
    let mut t = Dd::ONE;
    for i in 1..=order {
        t = t.mul_f64(half).div_f64(i as f64);
    }
    let q = Dd::from_f64(half).mul(Dd::from_f64(half));
    let mut sum = t;
    let mut m = 0usize;
    loop {
        m += 1;
        t = t.mul(q).div_f64(m as f64).div_f64((m + order as usize) as f64).neg();
        sum = sum.add(t);
        if t.abs() < 1e-40 * sum.abs().max(1e-280) && m > (half as usize) {
            break;
        }
        debug_assert!(m < 600);
    }
    sum.to_f64()
}

/// Hankel asymptotic P/Q pair for order nu, truncated at the smallest term.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k
    let mut k = 1usize;
    let mut last = f64::INFINITY;
    loop {
        let num = mu - ((2 * k - 1) as f64).powi(2);
        a *= num / (k as f64 * 8.0 * x);
        if a.abs() >= last || a.abs() < 1e-19 {
            break;
        }
        last = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        k += 1;
        if k > 60 {
            break;
        }
    }
    (p, q)
}

/// cos/sin of chi = x - nu*pi/2 - pi/4 with double-double phase reduction.
fn chi_cos_sin(nu: f64, x: f64) -> (f64, f64) {
    let chi = Dd::from_f64(x).sub(PI_DD.mul_f64(nu / 2.0 + 0.25));
    // reduce hi modulo 2π keeping the dd correction
    let two_pi = PI_DD.mul_f64(2.0);
    let n = (chi.to_f64() / two_pi.to_f64()).round();
    let red = chi.sub(two_pi.mul_f64(n));
    let hi = red.hi;
    let lo = red.lo;
    let (s, c) = hi.sin_cos();
    // first-order correction in lo
    (c - s * lo, s + c * lo)
}

fn bessel_j01_asymptotic(order: u32, x: f64) -> f64 {
    let nu = order as f64;
    let (p, q) = hankel_pq(nu, x);
    let (c, s) = chi_cos_sin(nu, x);
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * c - q * s)
}

/// Asymptotic-regime J_nu: Hankel anchors at orders 0,1 plus forward
/// recurrence in the order (stable for order < x).
pub fn bessel_j_asymptotic(order: u32, x: f64) -> f64 {
    let j0 = bessel_j01_asymptotic(0, x);
    if order == 0 {
        return j0;
    }
    let j1 = bessel_j01_asymptotic(1, x);
    if order == 1 {
        return j1;
    }
    let mut prev = j0;
    let mut cur = j1;
    for k in 1..order {
        let next = (2 * k) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// J_nu(x) for integer order, relative accuracy ~1e-12 over the contract
/// range order <= 64, 0 <= x <= 1e5.
pub fn bessel_j(order: u32, x: f64) -> Result<f64, NumericsError> {
    if order > MAX_ORDER {
        return Err(NumericsError::Domain(format!("bessel_j order {order} > {MAX_ORDER}")));
    }
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(NumericsError::Domain(format!("bessel_j argument {x} outside [0, {MAX_ARGUMENT}]")));
    }
    Ok(if x <= j_seam(order) {
        bessel_j_series(order, x)
    } else {
        bessel_j_asymptotic(order, x)
    })
}

pub fn bessel_y0_series(x: f64) -> f64 {
    // Y0 = (2/pi) [ (ln(x/2)+gamma) J0(x) + sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2 ]
    let c = log_half_x_plus_gamma(x);
    // J0 in dd
    let q = Dd::from_f64(x / 2.0).mul(Dd::from_f64(x / 2.0));
    let mut t = Dd::ONE;
    let mut j0 = Dd::ONE;
    let mut h = Dd::ZERO;
    let mut s = Dd::ZERO;
    let mut k = 0usize;
    loop {
        k += 1;
        t = t.mul(q).div_f64(k as f64).div_f64(k as f64).neg();
        j0 = j0.add(t);
        h = h.add(Dd::ONE.div_f64(k as f64));
        // (-1)^{k+1} H_k q^k/(k!)^2 = -t * H_k  (t carries (-1)^k)
        s = s.add(t.mul(h).neg());
        if t.abs() < 1e-40 && k > x as usize {
            break;
        }
        debug_assert!(k < 400);
    }
    c.mul(j0).add(s).mul_f64(2.0 / std::f64::consts::PI).to_f64()
}

pub fn bessel_y0_asymptotic(x: f64) -> f64 {
    let (p, q) = hankel_pq(0.0, x);
    let (c, s) = chi_cos_sin(0.0, x);
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * s + q * c)
}

pub fn bessel_y0(x: f64) -> Result<f64, NumericsError> {
    if !(x > 0.0 && x <= MAX_ARGUMENT) {
        return Err(NumericsError::Domain(format!("bessel_y0 argument {x} outside (0, {MAX_ARGUMENT}]")));
    }
    Ok(if x <= Y0_K0_SEAM { bessel_y0_series(x) } else { bessel_y0_asymptotic(x) })
}

pub fn bessel_k0_series(x: f64) -> f64 {
    // K0 = -(ln(x/2)+gamma) I0(x) + sum_{k>=1} H_k (x^2/4)^k/(k!)^2
    let c = log_half_x_plus_gamma(x);
    let q = Dd::from_f64(x / 2.0).mul(Dd::from_f64(x / 2.0));
    let mut t = Dd::ONE;
    let mut i0 = Dd::ONE;
    let mut h = Dd::ZERO;
    let mut s = Dd::ZERO;
    let mut k = 0usize;
    loop {
        k += 1;
        t = t.mul(q).div_f64(k as f64).div_f64(k as f64);
        i0 = i0.add(t);
        h = h.add(Dd::ONE.div_f64(k as f64));
        s = s.add(t.mul(h));
        if t.abs() < 1e-40 * i0.abs() && k > x as usize {
            break;
        }
        debug_assert!(k < 400);
    }
    s.sub(c.mul(i0)).to_f64()
}

pub fn bessel_k0_asymptotic(x: f64) -> f64 {
    // K0 ~ sqrt(pi/(2x)) e^-x sum_k (-1)^k ((2k-1)!!)^2 / (k! (8x)^k)
    let mut sum = 1.0;
    let mut a = 1.0;
    let mut k = 1usize;
    let mut last = f64::INFINITY;
    loop {
        let odd = (2 * k - 1) as f64;
        a *= -(odd * odd) / (k as f64 * 8.0 * x);
        if a.abs() >= last || a.abs() < 1e-19 {
            break;
        }
        last = a.abs();
        sum += a;
        k += 1;
        if k > 60 {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}

pub fn bessel_k0(x: f64) -> Result<f64, NumericsError> {
    if !(x > 0.0 && x <= MAX_ARGUMENT) {
        return Err(NumericsError::Domain(format!("bessel_k0 argument {x} outside (0, {MAX_ARGUMENT}]")));
    }
    Ok(if x <= Y0_K0_SEAM { bessel_k0_series(x) } else { bessel_k0_asymptotic(x) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(65, 1.0).is_err());
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(0, 2.0e5).is_err());
        assert!(bessel_y0(0.0).is_err());
        assert!(bessel_k0(-2.0).is_err());
    }

    #[test]
    fn seam_band_consistency() {
        // both regimes agree in a band above the seam
        for order in [0u32, 1, 3, 11] {
            let seam = j_seam(order);
            for f in [1.05, 1.2, 1.5, 2.0] {
                let x = seam * f;
                let a = bessel_j_series(order, x);
                let b = bessel_j_asymptotic(order, x);
                assert!(
                    (a - b).abs() <= 1e-10 * a.abs().max(1e-3),
                    "order {order} x {x}: series {a} vs asymptotic {b}"
                );
            }
        }
        // the dd series holds ~31 digits; the K0 cancellation ratio grows
        // like e^{2x}, so the cross-check band stops at 24
        for x in [20.5f64, 22.0, 24.0] {
            let a = bessel_y0_series(x);
            let b = bessel_y0_asymptotic(x);
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-3));
            let a = bessel_k0_series(x);
            let b = bessel_k0_asymptotic(x);
            assert!((a - b).abs() <= 1e-9 * a.abs());
        }
    }

    #[test]
    fn k0_monotone_decreasing() {
        let mut prev = f64::INFINITY;
        let mut x = 0.1;
        while x <= 20.0 {
            let v = bessel_k0(x).unwrap();
            assert!(v < prev && v > 0.0, "K0 must decrease, x={x}");
            prev = v;
            x += 0.1;
        }
    }

    #[test]
    fn y0_j0_no_common_zero() {
        let mut x = 0.5;
        while x <= 60.0 {
            let y = bessel_y0(x).unwrap();
            let j = bessel_j(0, x).unwrap();
            assert!(y * y + j * j > 1e-6);
            x += 0.25;
        }
    }

    #[test]
    fn recurrence_residual_grid() {
        // |J_{v-1} + J_{v+1} - (2v/x) J_v| <= 1e-8 on 1<=x<=100, 1<=v<=20
        for v in 1u32..=20 {
            let mut x = 1.0f64;
            while x <= 100.0 {
                let a = bessel_j(v - 1, x).unwrap();
                let b = bessel_j(v + 1, x).unwrap();
                let c = bessel_j(v, x).unwrap();
                let res = (a + b - 2.0 * v as f64 / x * c).abs();
                assert!(res <= 1e-8, "residual {res} at v={v} x={x}");
                x += 1.618;
            }
        }
    }
}
