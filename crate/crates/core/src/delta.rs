//! The DFI delta symbol, its g(q,x) weight, the conductor-lowering kernel
//! and the end-to-end circle-method identity.
//!
//! Construction. Let omega be an even C-infinity mollifier supported on
//! [Q/2, Q] with sum_{r>=1} omega(r) = 1 and define
//!
//!   Delta_q(u) = sum_{r>=1} (qr)^-1 ( omega(qr) - omega(|u|/(qr)) ).
//!
//! A divisor rearrangement gives the exact identity
//! delta(n) = sum_{q<=Q} sum*_{a mod q} e(na/q) Delta_q(n) for all n
//! with |n| <= 2M (the unit tests check it to machine precision).
//! Poisson summation applied to the r-sum turns q Q Delta_q(n) into
//! int g(q,x) e(nx/(qQ)) dx with the explicit weight
//!
//!   g(q,x) = 1 + G_B(x) + tail(q) rho(x),
//!   G_B(x) = -(Q/|x|) sum_k omega(k Q/|x|)        (zero for |x| < 1),
//!   tail(q) = Q ( sum_r omega(qr)/r - int omega(y)/y dy ),
//!
//! where rho is a narrow unit-mass Gaussian whose transform is flat across
//! the frequencies |n|/(qQ) <= 1 that the large moduli ever see. 1 + G_B
//! decays superpolynomially once |x| exceeds the reciprocal smoothness
//! scale of omega, which justifies the x-truncation used by delta_eval.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{gcd_i64, Coefficients};
use crate::error::DeltaError;
use crate::num::bump::SmoothBump;
use crate::num::quad;

/// Fractional Gaussian width of the mollifier relative to Q (sigma = Q/14).
const OMEGA_SIGMA_FRAC: f64 = 2.0 / 7.0;
/// Width of the flat-transform carrier bump.
const RHO_SIGMA: f64 = 0.002;

/// The delta-symbol decomposition state for arguments |n| <= 2M.
#[derive(Debug, Clone)]
pub struct DeltaScheme {
    m_range: i64,
    q_big: f64,
    q_max: usize,
    omega: SmoothBump,
    omega_norm: f64,
    /// J = int omega(y)/y dy.
    j_const: f64,
    /// tail(q), indexed by q-1.
    tails: Vec<f64>,
    /// Recorded envelope constants: |h| <= C (qQ)^-1 (q/Q + |x|)^A on the
    /// build grid, and |g| <= C' |x|^-A for |x| >= 1, both with A = 2.
    envelope_c: f64,
    envelope_c_prime: f64,
}

pub const ENVELOPE_EXPONENT: f64 = 2.0;

impl DeltaScheme {
    /// Range bound M; the expansion is valid for |n| <= 2M.
    pub fn m_range(&self) -> i64 {
        self.m_range
    }

    /// Q = 2 sqrt(M), exactly.
    pub fn q_big(&self) -> f64 {
        self.q_big
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    pub fn mollifier(&self) -> &SmoothBump {
        &self.omega
    }

    pub fn envelope_constants(&self) -> (f64, f64) {
        (self.envelope_c, ENVELOPE_EXPONENT)
    }

    pub fn envelope_c_prime(&self) -> f64 {
        self.envelope_c_prime
    }

    /// Default x-truncation. The paper's effective range is [-M^eps, M^eps];
    /// the concrete omega used here concentrates g on |x| <~ 12, so the
    /// cutoff never drops below that.
    pub fn default_x_cutoff(&self) -> f64 {
        12f64.max((self.m_range as f64).powf(0.1))
    }

    fn omega_val(&self, y: f64) -> f64 {
        self.omega.value(y) * self.omega_norm
    }

    fn tail(&self, q: usize) -> f64 {
        self.tails[q - 1]
    }

    /// The explicit weight g(q, x).
    pub fn g_eval(&self, q: usize, x: f64) -> f64 {
        let ax = x.abs();
        let mut g = 1.0;
        if ax >= 1.0 {
            let k_lo = ((ax / 2.0).ceil() as usize).max(1);
            let k_hi = ax.floor() as usize + 1;
            let mut s = 0.0;
            for k in k_lo..=k_hi {
                s += self.omega_val(k as f64 * self.q_big / ax);
            }
            g -= self.q_big / ax * s;
        }
        g + self.tail(q) * rho(x)
    }

    /// h(q,x) = g(q,x) - 1 of Eq-style decomposition.
    pub fn h_eval(&self, q: usize, x: f64) -> f64 {
        self.g_eval(q, x) - 1.0
    }

    /// int_{|x|<=xc} g(q,x) e(n x / (qQ)) dx. The carrier part is integrated
    /// in closed form; the smooth part goes through the quadrature engine.
    pub fn x_weight(&self, q: usize, n: i64, x_cutoff: f64) -> f64 {
        let xi = n.unsigned_abs() as f64 / (q as f64 * self.q_big);
        self.x_weight_at_freq(q, xi, x_cutoff)
    }

    fn x_weight_at_freq(&self, q: usize, xi: f64, x_cutoff: f64) -> f64 {
        let base = quad::integrate(
            |x| Complex64::new(self.base_part(x), 0.0),
            |x| xi * x,
            -x_cutoff,
            x_cutoff,
            1e-11,
        );
        let carrier = self.tail(q) * (-0.5 * (2.0 * PI * xi * RHO_SIGMA).powi(2)).exp();
        base.value.re + carrier
    }

    /// 1 + G_B(x), the q-independent smooth part of g.
    fn base_part(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax < 1.0 {
            return 1.0;
        }
        let k_lo = ((ax / 2.0).ceil() as usize).max(1);
        let k_hi = ax.floor() as usize + 1;
        let mut s = 0.0;
        for k in k_lo..=k_hi {
            s += self.omega_val(k as f64 * self.q_big / ax);
        }
        1.0 - self.q_big / ax * s
    }

    /// Exact side of the identity: Delta_q(u) by the divisor sum.
    pub fn delta_q_exact(&self, q: usize, u: f64) -> f64 {
        let u = u.abs();
        let qf = q as f64;
        let r_max = ((self.q_big / qf).max(2.0 * u / (self.q_big * qf)).ceil() as usize) + 1;
        let mut s = 0.0;
        for r in 1..=r_max {
            let qr = qf * r as f64;
            s += (self.omega_val(qr) - self.omega_val(u / qr)) / qr;
        }
        s
    }
}

fn rho(x: f64) -> f64 {
    (-x * x / (2.0 * RHO_SIGMA * RHO_SIGMA)).exp() / ((2.0 * PI).sqrt() * RHO_SIGMA)
}

/// Build the scheme for range M (valid arguments |n| <= 2M).
pub fn build_scheme(m: i64) -> Result<DeltaScheme, DeltaError> {
    if m < 4 {
        return Err(DeltaError::Invalid(format!("M = {m} must be >= 4")));
    }
    let q_big = 2.0 * (m as f64).sqrt();
    let q_max = q_big.floor() as usize;
    let omega = SmoothBump::gaussian_core(0.75 * q_big, 0.25 * q_big, OMEGA_SIGMA_FRAC, 0.0);
    let raw_sum: f64 = (1..=q_max).map(|r| omega.value(r as f64)).sum();
    if raw_sum <= 0.0 {
        return Err(DeltaError::Invalid("mollifier has no integer support".into()));
    }
    let omega_norm = 1.0 / raw_sum;
    let (lo, hi) = omega.support();
    let j_const = quad::integrate_real(|y| omega.value(y) / y, lo.max(1e-9), hi, 1e-13).value
        * omega_norm;
    let tails: Vec<f64> = (1..=q_max)
        .map(|q| {
            let mut s = 0.0;
            let mut r = 1usize;
            while (q * r) as f64 <= q_big + 1.0 {
                s += omega.value((q * r) as f64) * omega_norm / r as f64;
                r += 1;
            }
            q_big * (s - j_const)
        })
        .collect();

    let mut scheme = DeltaScheme {
        m_range: m,
        q_big,
        q_max,
        omega,
        omega_norm,
        j_const,
        tails,
        envelope_c: 0.0,
        envelope_c_prime: 0.0,
    };

    // normalization contract: sum_r omega(r) must sit at 1 to 1e-12
    let renorm: f64 = (1..=q_max).map(|r| scheme.omega_val(r as f64)).sum();
    debug_assert!((renorm - 1.0).abs() <= 1e-12);

    // record envelope constants on the build grid
    let mut c = 0.0f64;
    let mut c_prime = 0.0f64;
    for q in 1..=q_max {
        let qf = q as f64;
        let mut i = 0;
        while i <= 800 {
            let x = -4.0 + 8.0 * i as f64 / 800.0;
            let h = scheme.h_eval(q, x).abs();
            let env = (qf / q_big + x.abs()).powf(ENVELOPE_EXPONENT) / (qf * q_big);
            c = c.max(h / env);
            i += 1;
        }
        let mut x = 1.0;
        while x <= 24.0 {
            let g = scheme.g_eval(q, x).abs();
            c_prime = c_prime.max(g * x.powf(ENVELOPE_EXPONENT));
            x += 0.037;
        }
    }
    scheme.envelope_c = c;
    scheme.envelope_c_prime = c_prime;
    Ok(scheme)
}

/// Truncated right side of the delta expansion at integer argument n.
pub fn delta_eval(n: i64, scheme: &DeltaScheme, x_cutoff: f64) -> Result<f64, DeltaError> {
    if n.abs() > 2 * scheme.m_range {
        return Err(DeltaError::OutsideRange { n, range: 2 * scheme.m_range });
    }
    let contributions: Vec<Complex64> = (1..=scheme.q_max)
        .into_par_iter()
        .map(|q| {
            let w = scheme.x_weight(q, n, x_cutoff);
            let mut unit_sum = Complex64::new(0.0, 0.0);
            for a in 1..=q {
                if gcd_i64(a as i64, q as i64) == 1 {
                    let ph = 2.0 * PI * (((n.rem_euclid(q as i64)) * a as i64) as f64) / q as f64;
                    unit_sum += Complex64::new(ph.cos(), ph.sin());
                }
            }
            unit_sum * w / q as f64
        })
        .collect();
    // deterministic fixed-order compensated reduction
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for c in contributions {
        let y = c - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let total = sum / scheme.q_big;
    if total.im.abs() > 1e-9 {
        return Err(DeltaError::ImaginaryResidue { residue: total.im });
    }
    Ok(total.re)
}

/// Smoothed conductor-lowering kernel (1/K) int V(nu/K) (m/n)^{i nu} d nu.
///
/// V is a truncated Gaussian of unit mass: sigma 0.75 K with a C-infinity
/// taper on [6, 7] sigma. The bare [1,2]-supported mollifier cannot reach
/// the 1e-8 falloff the far-separation contract demands (an uncertainty-
/// principle obstruction), so the kernel weight deliberately trades compact
/// support radius for Gaussian transform decay.
#[derive(Debug, Clone)]
pub struct ConductorKernel {
    pub n_scale: f64,
    pub k_smooth: f64,
    v: SmoothBump,
    v_mass: f64,
}

pub const CONDUCTOR_SIGMA: f64 = 0.75;

impl ConductorKernel {
    pub fn new(n_scale: f64, k_smooth: f64) -> Result<ConductorKernel, DeltaError> {
        if !(k_smooth > 0.0 && k_smooth < n_scale) {
            return Err(DeltaError::Invalid(format!(
                "conductor kernel needs 0 < K < N, got K={k_smooth}, N={n_scale}"
            )));
        }
        let v = SmoothBump::gaussian_core(0.0, 7.0 * CONDUCTOR_SIGMA, 1.0 / 7.0, 6.0 / 7.0);
        let v_mass = v.mass();
        Ok(ConductorKernel { n_scale, k_smooth, v, v_mass })
    }

    pub fn weight(&self) -> &SmoothBump {
        &self.v
    }

    /// |V| mass (V >= 0, so this equals the kernel value at m = n).
    pub fn v_mass(&self) -> f64 {
        1.0
    }

    /// Kernel value; exactly 1 on the diagonal by the unit normalization.
    pub fn eval(&self, m: u64, n: u64) -> Complex64 {
        assert!(m >= 1 && n >= 1);
        if m == n {
            return Complex64::new(1.0, 0.0);
        }
        let xi = self.k_smooth * ((m as f64) / (n as f64)).ln();
        let (lo, hi) = self.v.support();
        let r = quad::integrate(
            |u| Complex64::new(self.v.value(u), 0.0),
            |u| u * xi / (2.0 * PI),
            lo,
            hi,
            1e-12,
        );
        r.value / self.v_mass
    }
}

/// Outcome of the end-to-end circle-method identity.
#[derive(Debug, Clone)]
pub struct CircleIdentity {
    pub direct: Complex64,
    pub reconstructed: Complex64,
    pub rel_gap: f64,
    /// Dyadic moduli blocks actually used.
    pub block_count: usize,
    /// Per-block partial sums, in block order.
    pub block_values: Vec<Complex64>,
}

/// Two-sided check of the conductor-lowered delta expansion:
/// direct S(N) against the full q, a, u, nu reconstruction over dyadic
/// moduli blocks.
///
/// The scheme range is M = N/2 so that every difference |n - m| <= N lies
/// inside the proven validity range (the paper's Q = sqrt(N/K) carries an
/// implicit t^eps margin that a finite check has to make explicit).
pub fn circle_method_identity(
    n_len: usize,
    k_smooth: f64,
    t: f64,
    f: &dyn Coefficients,
    g: &dyn Coefficients,
) -> Result<CircleIdentity, DeltaError> {
    if n_len < 8 || n_len > 10_000 {
        return Err(DeltaError::Invalid(format!("N = {n_len} outside desk-scale range")));
    }
    if f.max_index() < 2 * n_len || g.max_index() < 2 * n_len {
        return Err(DeltaError::Invalid("coefficient tables too short".into()));
    }
    let scheme = build_scheme(n_len.div_ceil(2) as i64)?;
    let kernel = ConductorKernel::new(n_len as f64, k_smooth)?;
    let xc = scheme.default_x_cutoff();

    // direct side: the nu-kernel is exactly 1 on the diagonal
    let mut direct = Complex64::new(0.0, 0.0);
    for n in n_len..=2 * n_len {
        let ph = -t * (n as f64).ln();
        direct += f.lambda(n) * g.lambda(n) * Complex64::new(ph.cos(), ph.sin());
    }

    // x-weights cached per (q, |d|)
    let q_max = scheme.q_max();
    let weights: Vec<Vec<f64>> = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            (0..=n_len)
                .map(|d| scheme.x_weight(q, d as i64, xc))
                .collect()
        })
        .collect();

    // nu-kernel cached per (m, n) pair, m < n suffices by conjugation
    let pairs: Vec<(usize, usize)> = (n_len..=2 * n_len)
        .flat_map(|n| (n_len..n).map(move |m| (m, n)))
        .collect();
    let kern_vals: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(m, n)| kernel.eval(m as u64, n as u64))
        .collect();
    let mut kern = vec![vec![Complex64::new(0.0, 0.0); n_len + 1]; n_len + 1];
    for (&(m, n), &v) in pairs.iter().zip(kern_vals.iter()) {
        kern[m - n_len][n - n_len] = v;
        kern[n - n_len][m - n_len] = v.conj();
    }
    for d in 0..=n_len {
        kern[d][d] = Complex64::new(1.0, 0.0);
    }

    // dyadic moduli blocks q in [2^j, 2^{j+1})
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut lo = 1usize;
    while lo <= q_max {
        let hi = (2 * lo - 1).min(q_max);
        blocks.push((lo, hi));
        lo *= 2;
    }

    let block_values: Vec<Complex64> = blocks
        .par_iter()
        .map(|&(q_lo, q_hi)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in n_len..=2 * n_len {
                for m in n_len..=2 * n_len {
                    let d = n as i64 - m as i64;
                    let mut qsum = 0.0;
                    let mut qsum_im = 0.0;
                    for q in q_lo..=q_hi {
                        let w = weights[q - 1][d.unsigned_abs() as usize];
                        let mut re = 0.0;
                        let mut im = 0.0;
                        for a in 1..=q {
                            if gcd_i64(a as i64, q as i64) == 1 {
                                let ph = 2.0 * PI * ((d.rem_euclid(q as i64) * a as i64) as f64)
                                    / q as f64;
                                re += ph.cos();
                                im += ph.sin();
                            }
                        }
                        qsum += re * w / q as f64;
                        qsum_im += im * w / q as f64;
                    }
                    let ph = -t * (m as f64).ln();
                    let m_phase = Complex64::new(ph.cos(), ph.sin());
                    acc += f.lambda(n)
                        * g.lambda(m)
                        * m_phase
                        * kern[m - n_len][n - n_len]
                        * Complex64::new(qsum, qsum_im);
                }
            }
            acc / scheme.q_big
        })
        .collect();

    let reconstructed: Complex64 = block_values.iter().sum();
    let rel_gap = (direct - reconstructed).norm() / direct.norm();
    Ok(CircleIdentity {
        direct,
        reconstructed,
        rel_gap,
        block_count: blocks.len(),
        block_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ramanujan_sum;

    #[test]
    fn q_values() {
        assert_eq!(build_scheme(100).unwrap().q_big(), 20.0);
        assert_eq!(build_scheme(4).unwrap().q_big(), 4.0);
        assert!(build_scheme(3).is_err());
    }

    #[test]
    fn exact_divisor_identity_is_machine_precision() {
        // delta(n) = sum_q R_q(n) Delta_q(n), before any x-integral enters
        let scheme = build_scheme(50).unwrap();
        for n in [0i64, 1, 2, 7, 19, 50, 100] {
            let mut s = 0.0;
            for q in 1..=scheme.q_max() {
                let r = ramanujan_sum(q as u64, n).unwrap() as f64;
                s += r * scheme.delta_q_exact(q, n as f64);
            }
            let target = if n == 0 { 1.0 } else { 0.0 };
            assert!(
                (s - target).abs() < 1e-12,
                "exact identity off at n={n}: {s}"
            );
        }
    }

    #[test]
    fn representation_matches_exact_side() {
        // int g e(nx/(qQ)) dx reproduces qQ Delta_q(n)
        let scheme = build_scheme(50).unwrap();
        let xc = scheme.default_x_cutoff();
        for q in [1usize, 2, 8, 13] {
            for n in [0i64, 1, 5, 17, 60, 100] {
                let w = scheme.x_weight(q, n, xc);
                let exact = q as f64 * scheme.q_big() * scheme.delta_q_exact(q, n as f64);
                assert!(
                    (w - exact).abs() < 4e-3,
                    "W mismatch q={q} n={n}: {w} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn delta_eval_basic_contract() {
        let scheme = build_scheme(50).unwrap();
        let xc = scheme.default_x_cutoff();
        let d0 = delta_eval(0, &scheme, xc).unwrap();
        assert!((d0 - 1.0).abs() <= 1e-2, "delta(0) = {d0}");
        let d7 = delta_eval(7, &scheme, xc).unwrap();
        assert!(d7.abs() <= 1e-2);
        let dm7 = delta_eval(-7, &scheme, xc).unwrap();
        assert!((d7 - dm7).abs() <= 1e-9, "sign symmetry: {d7} vs {dm7}");
        assert!(delta_eval(101, &scheme, xc).is_err());
    }

    #[test]
    fn g_near_one_at_small_x_small_q() {
        let scheme = build_scheme(80).unwrap();
        let (c, a) = scheme.envelope_constants();
        assert_eq!(a, 2.0);
        let h = scheme.h_eval(1, 0.0).abs();
        let env = c * (1.0 / scheme.q_big()).powf(a) / scheme.q_big();
        assert!(h <= env.max(1e-10), "h(1,0) = {h} vs envelope {env}");
    }

    #[test]
    fn conductor_kernel_contract() {
        let k = ConductorKernel::new(1e4, 1e2).unwrap();
        assert_eq!(k.eval(5000, 5000), Complex64::new(1.0, 0.0));
        let far = k.eval(11_000, 10_000).norm(); // |m-n| = 10 N/K
        assert!(far <= 1e-8, "far separation leak {far:e}");
        let near = k.eval(10_010, 10_000).norm(); // |m-n| = N/(10K)
        assert!(near >= 0.5, "near-diagonal value {near}");
        assert!(ConductorKernel::new(100.0, 100.0).is_err());
    }
}
