//! Two-sided numerical engines for GL(2)/divisor Voronoi summation and for
//! Poisson summation in arithmetic progressions.
//!
//! Conventions (each fixed by requiring the two-sided identity to hold
//! numerically, not by trusting any one printed formula):
//!
//! * holomorphic weight k:
//!   sum lambda(n) e(na/q) V(n/X)
//!     = (X/q) sum lambda(n) e(-abar n/q) F_plus(nX/q^2),
//!   F_plus(z) = 2 pi i^k int V(y) J_{k-1}(4 pi sqrt(zy)) dy;
//! * divisor function:
//!   main term (X/q) int V(x) (log(xX) + 2 gamma - 2 log q) dx, plus
//!   (X/q) sum tau(n) [ e(-abar n/q) (-2 pi) int V Y_0(4 pi sqrt(zy)) dy
//!                    + e(+abar n/q)   4      int V K_0(4 pi sqrt(zy)) dy ].
//!
//! The Bessel arguments use the 4 pi sqrt(xy) convention; with the
//! sqrt(4 pi x y) variant the identity fails at the first digit.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::{gcd_i64, inv_mod, Coefficients};
use crate::error::SummationError;
use crate::num::bessel;
use crate::num::bump::SmoothBump;
use crate::num::quad;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// One Voronoi verification case.
pub struct VoronoiCase<'a> {
    pub coeffs: &'a dyn Coefficients,
    pub a: i64,
    pub q: i64,
    pub x_scale: f64,
    pub v: SmoothBump,
}

impl<'a> VoronoiCase<'a> {
    pub fn new(
        coeffs: &'a dyn Coefficients,
        a: i64,
        q: i64,
        x_scale: f64,
        v: SmoothBump,
    ) -> Result<Self, SummationError> {
        if q < 1 {
            return Err(SummationError::Invalid("q must be >= 1".into()));
        }
        if a == 0 && q != 1 {
            return Err(SummationError::Invalid("a = 0 is only permitted at q = 1".into()));
        }
        if gcd_i64(a, q) != 1 {
            return Err(SummationError::Invalid(format!("gcd({a},{q}) != 1")));
        }
        if x_scale <= 0.0 {
            return Err(SummationError::Invalid("X must be positive".into()));
        }
        if v.support().0 <= 0.0 {
            return Err(SummationError::Invalid("V must be supported in (0, inf)".into()));
        }
        Ok(VoronoiCase { coeffs, a, q, x_scale, v })
    }

    fn abar(&self) -> i64 {
        if self.q == 1 {
            0
        } else {
            inv_mod(self.a, self.q).expect("gcd(a,q)=1 was validated")
        }
    }
}

/// Direct side: finite sum over the support of V(n/X).
pub fn voronoi_lhs(case: &VoronoiCase) -> Result<Complex64, SummationError> {
    let (lo, hi) = case.v.support();
    let n_lo = ((lo * case.x_scale).floor().max(1.0)) as usize;
    let n_hi = (hi * case.x_scale).ceil() as usize;
    if n_hi > case.coeffs.max_index() {
        return Err(SummationError::InsufficientTable {
            need: n_hi,
            have: case.coeffs.max_index(),
        });
    }
    let mut s = Complex64::new(0.0, 0.0);
    for n in n_lo..=n_hi {
        let w = case.v.value(n as f64 / case.x_scale);
        if w != 0.0 {
            let ph = 2.0 * PI * ((case.a * n as i64).rem_euclid(case.q) as f64) / case.q as f64;
            s += case.coeffs.lambda(n) * w * Complex64::new(ph.cos(), ph.sin());
        }
    }
    Ok(s)
}

fn bessel_transform<F: Fn(f64) -> f64>(v: &SmoothBump, z: f64, kernel: F) -> f64 {
    let (lo, hi) = v.support();
    quad::integrate_real(|y| v.value(y) * kernel(4.0 * PI * (z * y).sqrt()), lo, hi, 1e-13).value
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Holomorphic kernel F_plus(z); F_minus vanishes identically.
pub fn kernel_f_plus_holomorphic(v: &SmoothBump, z: f64, weight: u32) -> Complex64 {
    let t = bessel_transform(v, z, |arg| bessel::bessel_j(weight - 1, arg).unwrap_or(0.0));
    2.0 * PI * i_pow(weight) * t
}

/// Divisor kernels: (Y_0 transform scaled by -2 pi, K_0 transform scaled by 4).
pub fn kernel_divisor(v: &SmoothBump, z: f64) -> (f64, f64) {
    let y = bessel_transform(v, z, |arg| bessel::bessel_y0(arg).unwrap_or(0.0));
    let k = bessel_transform(v, z, |arg| bessel::bessel_k0(arg).unwrap_or(0.0));
    (-2.0 * PI * y, 4.0 * k)
}

/// Divisor-case main term (zero for cusp forms).
pub fn voronoi_main_term(case: &VoronoiCase) -> f64 {
    if case.coeffs.holomorphic_weight().is_some() {
        return 0.0;
    }
    let (lo, hi) = case.v.support();
    let q = case.q as f64;
    let x = case.x_scale;
    x / q
        * quad::integrate_real(
            |u| case.v.value(u) * ((u * x).ln() + 2.0 * EULER_GAMMA - 2.0 * q.ln()),
            lo,
            hi,
            1e-13,
        )
        .value
}

/// Dual side: main term plus truncated Bessel-kernel sums.
pub fn voronoi_rhs(case: &VoronoiCase, dual_cutoff: usize) -> Result<Complex64, SummationError> {
    if dual_cutoff > case.coeffs.max_index() {
        return Err(SummationError::InsufficientTable {
            need: dual_cutoff,
            have: case.coeffs.max_index(),
        });
    }
    let q = case.q as f64;
    let x = case.x_scale;
    let abar = case.abar();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut window: Vec<f64> = Vec::new();
    let phase = |sign: f64, n: usize| -> Complex64 {
        let ph = 2.0 * PI * sign * ((abar * n as i64).rem_euclid(case.q) as f64) / q;
        Complex64::new(ph.cos(), ph.sin())
    };
    let mut converged = false;
    for n in 1..=dual_cutoff {
        let z = n as f64 * x / (q * q);
        let term = match case.coeffs.holomorphic_weight() {
            Some(k) => {
                let f = kernel_f_plus_holomorphic(&case.v, z, k);
                case.coeffs.lambda(n) * phase(-1.0, n) * f
            }
            None => {
                let (fy, fk) = kernel_divisor(&case.v, z);
                case.coeffs.lambda(n) * (phase(-1.0, n) * fy + phase(1.0, n) * fk)
            }
        };
        sum += term;
        window.push(term.norm());
        if window.len() > 8 {
            window.remove(0);
        }
        let scale = 1.0 + sum.norm();
        if window.len() == 8 && window.iter().all(|&m| m < 1e-12 * scale) {
            converged = true;
            break;
        }
    }
    if !converged {
        let achieved = window.iter().cloned().fold(0.0f64, f64::max) * x / q;
        if achieved > 1e-10 * (1.0 + sum.norm() * x / q) {
            return Err(SummationError::TailNotDecayed { achieved });
        }
    }
    Ok(Complex64::new(voronoi_main_term(case), 0.0) + sum * (x / q))
}

/// A safe dual cutoff for the suite weight: its kernel transforms have
/// died by z ~ 260, i.e. n ~ 260 q^2 / X.
pub fn suggested_dual_cutoff(q: i64, x_scale: f64) -> usize {
    (260.0 * (q * q) as f64 / x_scale).ceil() as usize + 60
}

/// Test weight shared by the verification suites: Gaussian of width 0.1
/// around 1.5 carried on the support [0.75, 2.25], so the edge taper only
/// acts where the Gaussian is already below 1e-12 and cannot pollute the
/// transform tails.
pub fn suite_weight() -> SmoothBump {
    SmoothBump::gaussian_core(1.5, 0.75, 2.0 / 15.0, 0.0)
}

/// One Poisson verification case.
pub struct PoissonCase {
    pub w: SmoothBump,
    pub a: i64,
    pub q: i64,
    pub x_scale: f64,
}

impl PoissonCase {
    pub fn new(w: SmoothBump, a: i64, q: i64, x_scale: f64) -> Result<Self, SummationError> {
        if q < 1 {
            return Err(SummationError::Invalid("q must be >= 1".into()));
        }
        if x_scale <= 0.0 {
            return Err(SummationError::Invalid("X must be positive".into()));
        }
        Ok(PoissonCase { w, a, q, x_scale })
    }

    /// Full dual term at frequency m: (X/q) sum_alpha e(alpha(a+m)/q) W^(mX/q).
    pub fn dual_term(&self, m: i64) -> Complex64 {
        let q = self.q as f64;
        let mut alpha_sum = Complex64::new(0.0, 0.0);
        for alpha in 0..self.q {
            let ph = 2.0 * PI * ((alpha * (self.a + m)).rem_euclid(self.q) as f64) / q;
            alpha_sum += Complex64::new(ph.cos(), ph.sin());
        }
        if alpha_sum.norm() < 1e-12 {
            return Complex64::new(0.0, 0.0);
        }
        let wh = self.w.fourier(m as f64 * self.x_scale / q);
        self.x_scale / q * alpha_sum * wh
    }
}

/// Direct and dual sides of the Poisson identity.
pub fn poisson_two_sided(case: &PoissonCase) -> (Complex64, Complex64) {
    let (lo, hi) = case.w.support();
    let n_lo = (lo * case.x_scale).floor() as i64;
    let n_hi = (hi * case.x_scale).ceil() as i64;
    let mut lhs = Complex64::new(0.0, 0.0);
    for n in n_lo..=n_hi {
        let w = case.w.value(n as f64 / case.x_scale);
        if w != 0.0 {
            let ph = 2.0 * PI * ((case.a * n).rem_euclid(case.q) as f64) / case.q as f64;
            lhs += w * Complex64::new(ph.cos(), ph.sin());
        }
    }
    let mut rhs = case.dual_term(0);
    let mut m = 1i64;
    let mut quiet = 0usize;
    while quiet < 4 && m < 200_000 {
        let t = case.dual_term(m) + case.dual_term(-m);
        rhs += t;
        // the alpha-sum kills all but one class mod q; count only live terms
        if t.norm() > 0.0 {
            if t.norm() < 1e-13 * (1.0 + rhs.norm()) {
                quiet += 1;
            } else {
                quiet = 0;
            }
        }
        m += 1;
    }
    (lhs, rhs)
}

/// Table of (m, |dual term|) out to a margin past the support threshold
/// m* = 10 (q/X) (qX)^0.05 from the dual-length remark.
pub fn dual_truncation_profile(case: &PoissonCase) -> Vec<(i64, f64)> {
    let q = case.q as f64;
    let threshold = 10.0 * q / case.x_scale * (q * case.x_scale).powf(0.05);
    let m_max = (threshold.ceil() as i64 + 3 * case.q + 20).max(30);
    (-m_max..=m_max)
        .map(|m| (m, case.dual_term(m).norm()))
        .collect()
}

/// The remark's support threshold for a given case.
pub fn dual_support_threshold(case: &PoissonCase) -> f64 {
    let q = case.q as f64;
    10.0 * q / case.x_scale * (q * case.x_scale).powf(0.05)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisor_sequence, generate_delta_coefficients};

    fn test_bump() -> SmoothBump {
        suite_weight()
    }

    #[test]
    fn lhs_empty_window_is_zero() {
        let d = divisor_sequence(100);
        let case = VoronoiCase::new(&d, 0, 1, 0.2, test_bump()).unwrap();
        assert_eq!(voronoi_lhs(&case).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn lhs_matches_term_by_term_oracle() {
        let f = generate_delta_coefficients(64).unwrap();
        let case = VoronoiCase::new(&f, 0, 1, 10.0, test_bump()).unwrap();
        let got = voronoi_lhs(&case).unwrap();
        let mut oracle = 0.0;
        for n in 8..=23 {
            oracle += f.lambda(n) * case.v.value(n as f64 / 10.0);
        }
        assert!((got.re - oracle).abs() < 1e-14);
        assert!(got.im.abs() < 1e-14);
    }

    #[test]
    fn divisor_lhs_is_real_at_a_zero() {
        let d = divisor_sequence(100);
        let case = VoronoiCase::new(&d, 0, 1, 20.0, test_bump()).unwrap();
        let got = voronoi_lhs(&case).unwrap();
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn case_validation() {
        let d = divisor_sequence(10);
        assert!(VoronoiCase::new(&d, 0, 2, 5.0, test_bump()).is_err());
        assert!(VoronoiCase::new(&d, 2, 4, 5.0, test_bump()).is_err());
        let centered = SmoothBump::mollifier(0.0, 1.0);
        assert!(VoronoiCase::new(&d, 0, 1, 5.0, centered).is_err());
    }

    #[test]
    fn voronoi_two_sided_holomorphic_q1() {
        let f = generate_delta_coefficients(200).unwrap();
        let case = VoronoiCase::new(&f, 0, 1, 10.0, test_bump()).unwrap();
        let lhs = voronoi_lhs(&case).unwrap();
        let rhs = voronoi_rhs(&case, suggested_dual_cutoff(1, 10.0)).unwrap();
        let gap = (lhs - rhs).norm() / lhs.norm();
        assert!(gap < 1e-6, "holomorphic q=1 gap {gap:e}");
    }

    #[test]
    fn voronoi_two_sided_divisor_q2() {
        let d = divisor_sequence(200);
        let case = VoronoiCase::new(&d, 1, 2, 20.0, test_bump()).unwrap();
        let lhs = voronoi_lhs(&case).unwrap();
        let rhs = voronoi_rhs(&case, suggested_dual_cutoff(2, 20.0)).unwrap();
        let gap = (lhs - rhs).norm() / lhs.norm();
        assert!(gap < 1e-6, "divisor q=2 gap {gap:e}");
    }

    #[test]
    fn divisor_main_term_is_live() {
        let d = divisor_sequence(200);
        let case = VoronoiCase::new(&d, 1, 2, 20.0, test_bump()).unwrap();
        let lhs = voronoi_lhs(&case).unwrap();
        let rhs = voronoi_rhs(&case, suggested_dual_cutoff(2, 20.0)).unwrap();
        let main = voronoi_main_term(&case);
        let broken = rhs - Complex64::new(main, 0.0);
        assert!((lhs - broken).norm() / lhs.norm() > 1e-2, "main term must matter");
    }

    #[test]
    fn poisson_classical_q1() {
        let case = PoissonCase::new(test_bump(), 0, 1, 30.0).unwrap();
        let (lhs, rhs) = poisson_two_sided(&case);
        assert!((lhs - rhs).norm() < 1e-8, "gap {:e}", (lhs - rhs).norm());
    }

    #[test]
    fn poisson_q3() {
        let case = PoissonCase::new(test_bump(), 1, 3, 50.0).unwrap();
        let (lhs, rhs) = poisson_two_sided(&case);
        assert!((lhs - rhs).norm() < 1e-8, "gap {:e}", (lhs - rhs).norm());
    }

    #[test]
    fn profile_symmetric_for_even_real_weight() {
        // W even about its center is not even about 0; symmetry in m holds
        // for the centered even weight
        let w = SmoothBump::gaussian_core(0.0, 1.0, 0.2, 0.0);
        let case = PoissonCase { w, a: 0, q: 1, x_scale: 10.0 };
        let profile = dual_truncation_profile(&case);
        let by_m: std::collections::HashMap<i64, f64> = profile.iter().cloned().collect();
        for (m, v) in &profile {
            if *m > 0 {
                assert!((v - by_m[&(-m)]).abs() <= 1e-12 * (1.0 + v));
            }
        }
    }
}
