//! Exact multiplicative arithmetic: eigenform coefficients, the divisor
//! function, Moebius, Euler phi and Ramanujan sums.
//!
//! Raw eigenform coefficients are arbitrary-size integers (they grow like
//! n^{11/2} and leave i64 near n ~ 300). The generating convolution runs in
//! checked i128 — raw values stay below 1e36 for n <= 1e6 — and falls back
//! to big-integer arithmetic if a single step would overflow.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::ArithError;

/// A level-1 holomorphic Hecke eigenform held as exact integer coefficients
/// plus the normalized real sequence lambda(n) = a(n) / n^{(k-1)/2}.
#[derive(Debug, Clone)]
pub struct CuspFormData {
    weight: u32,
    raw: Vec<BigInt>,    // raw[n] = a(n), raw[0] unused
    lambda: Vec<f64>,    // lambda[n], lambda[0] = 0
}

/// A real multiplicative sequence (eigenform-normalized or divisor).
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceLabel {
    EigenformNormalized,
    Divisor,
}

#[derive(Debug, Clone)]
pub struct MultiplicativeSequence {
    pub label: SequenceLabel,
    values: Vec<f64>, // values[n], values[0] = 0
}

impl MultiplicativeSequence {
    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Common read access for the analytic modules: normalized coefficients.
pub trait Coefficients: Sync {
    fn lambda(&self, n: usize) -> f64;
    fn max_index(&self) -> usize;
    /// Weight for the holomorphic Voronoi kernel; None selects the divisor
    /// branch.
    fn holomorphic_weight(&self) -> Option<u32>;
}

impl Coefficients for CuspFormData {
    fn lambda(&self, n: usize) -> f64 {
        self.lambda[n]
    }
    fn max_index(&self) -> usize {
        self.lambda.len() - 1
    }
    fn holomorphic_weight(&self) -> Option<u32> {
        Some(self.weight)
    }
}

impl Coefficients for MultiplicativeSequence {
    fn lambda(&self, n: usize) -> f64 {
        self.values[n]
    }
    fn max_index(&self) -> usize {
        self.values.len() - 1
    }
    fn holomorphic_weight(&self) -> Option<u32> {
        match self.label {
            SequenceLabel::Divisor => None,
            SequenceLabel::EigenformNormalized => Some(12),
        }
    }
}

/// Generalized pentagonal exponents of Euler's product, as (index, sign).
fn pentagonal_terms(len: usize) -> Vec<(usize, i64)> {
    let mut out = vec![(0usize, 1i64)];
    let mut k = 1i64;
    loop {
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let mut pushed = false;
        if g1 < len {
            out.push((g1, sign));
            pushed = true;
        }
        if g2 < len {
            out.push((g2, sign));
            pushed = true;
        }
        if !pushed {
            break;
        }
        k += 1;
    }
    out
}

/// Jacobi's sparse expansion of Euler's product cubed:
/// prod (1-q^m)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}.
fn jacobi_cube_terms(len: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let mut k = 0i64;
    loop {
        let idx = (k * (k + 1) / 2) as usize;
        if idx >= len {
            break;
        }
        out.push((idx, if k % 2 == 0 { 2 * k + 1 } else { -(2 * k + 1) }));
        k += 1;
    }
    out
}

fn sparse_mul_i128(dense: &[i128], sparse: &[(usize, i64)], len: usize) -> Option<Vec<i128>> {
    let mut out = vec![0i128; len];
    for &(off, c) in sparse {
        let c = c as i128;
        for i in 0..len.saturating_sub(off) {
            let d = dense[i];
            if d != 0 {
                let prod = d.checked_mul(c)?;
                let slot = &mut out[i + off];
                *slot = slot.checked_add(prod)?;
            }
        }
    }
    Some(out)
}

fn sparse_mul_big(dense: &[BigInt], sparse: &[(usize, i64)], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for &(off, c) in sparse {
        for i in 0..len.saturating_sub(off) {
            if !dense[i].is_zero() {
                out[i + off] += &dense[i] * c;
            }
        }
    }
    out
}

/// Coefficients of prod (1-q^m)^24 up to q^{len-1}: built as (E^3)^8 from
/// Jacobi's sparse cube, six dense-times-sparse passes in total.
fn eta24_coefficients(len: usize) -> Result<Vec<BigInt>, ArithError> {
    let cube = jacobi_cube_terms(len);
    // i128 fast path
    let fast = (|| -> Option<Vec<i128>> {
        let mut dense = vec![0i128; len];
        for &(off, c) in &cube {
            dense[off] = c as i128;
        }
        let mut acc = dense;
        for _ in 0..7 {
            acc = sparse_mul_i128(&acc, &cube, len)?;
        }
        Some(acc)
    })();
    if let Some(v) = fast {
        return Ok(v.into_iter().map(BigInt::from).collect());
    }
    // exact fallback
    let mut dense = vec![BigInt::zero(); len];
    for &(off, c) in &cube {
        dense[off] = BigInt::from(c);
    }
    let mut acc = dense;
    for _ in 0..7 {
        acc = sparse_mul_big(&acc, &cube, len);
    }
    Ok(acc)
}

/// Exact a(n) for the weight-12 level-1 eigenform from the eta-product
/// q prod (1-q^m)^24, with normalized lambda(n) = a(n)/n^{11/2} attached.
pub fn generate_delta_coefficients(n_max: usize) -> Result<CuspFormData, ArithError> {
    if n_max < 1 {
        return Err(ArithError::Invalid("n_max must be >= 1".into()));
    }
    let eta = eta24_coefficients(n_max)?;
    let mut raw = Vec::with_capacity(n_max + 1);
    raw.push(BigInt::zero());
    raw.extend_from_slice(&eta[..n_max]);
    let mut lambda = vec![0.0; n_max + 1];
    for (n, l) in lambda.iter_mut().enumerate().skip(1) {
        let a = raw[n].to_f64().ok_or_else(|| {
            ArithError::Overflow(format!("a({n}) does not fit in f64 range"))
        })?;
        *l = a / (n as f64).powf(5.5);
    }
    Ok(CuspFormData { weight: 12, raw, lambda })
}

impl CuspFormData {
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn raw(&self, n: usize) -> &BigInt {
        &self.raw[n]
    }

    pub fn len(&self) -> usize {
        self.raw.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Eigenform-normalized multiplicative view of the same data.
    pub fn normalized(&self) -> MultiplicativeSequence {
        MultiplicativeSequence {
            label: SequenceLabel::EigenformNormalized,
            values: self.lambda.clone(),
        }
    }

    /// CSV export: n, a_n, lambda_n.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,a_n,lambda_n")?;
        for n in 1..self.raw.len() {
            writeln!(out, "{},{},{}", n, self.raw[n], self.lambda[n])?;
        }
        Ok(())
    }
}

/// Exact divisor counts d(n) for n <= n_max via a linear sieve.
pub fn divisor_sequence(n_max: usize) -> MultiplicativeSequence {
    assert!(n_max >= 1);
    let mut d = vec![0u32; n_max + 1];
    let mut cnt = vec![0u32; n_max + 1]; // exponent of the smallest prime
    let mut primes = Vec::new();
    d[1] = 1;
    for i in 2..=n_max {
        if d[i] == 0 {
            primes.push(i);
            d[i] = 2;
            cnt[i] = 1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n_max {
                break;
            }
            if i % p == 0 {
                cnt[ip] = cnt[i] + 1;
                d[ip] = d[i] / (cnt[i] + 1) * (cnt[i] + 2);
                break;
            }
            cnt[ip] = 1;
            d[ip] = d[i] * 2;
        }
    }
    MultiplicativeSequence {
        label: SequenceLabel::Divisor,
        values: std::iter::once(0.0).chain((1..=n_max).map(|n| d[n] as f64)).collect(),
    }
}

/// Moebius function table up to n_max.
pub fn moebius_table(n_max: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n_max + 1];
    let mut is_comp = vec![false; n_max + 1];
    let mut primes = Vec::new();
    for i in 2..=n_max {
        if !is_comp[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n_max {
                break;
            }
            is_comp[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu[0] = 0;
    mu
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular inverse by the extended Euclid algorithm; requires gcd(a,q)=1.
pub fn inv_mod(a: i64, q: i64) -> Option<i64> {
    if q <= 0 {
        return None;
    }
    let (mut r0, mut r1) = (q, a.rem_euclid(q));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(q))
}

pub fn euler_phi(q: u64) -> u64 {
    let mut n = q;
    let mut result = q;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn moebius_one(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Ramanujan sum R_q(m), computed two independent ways:
/// the direct exponential sum over units mod q and the divisor-Moebius
/// identity sum_{d | (q,m)} d mu(q/d). The routes must agree exactly after
/// rounding the (numerically real) direct sum.
pub fn ramanujan_sum(q: u64, m: i64) -> Result<i64, ArithError> {
    if q == 0 {
        return Err(ArithError::Invalid("modulus q must be >= 1".into()));
    }
    // formula route: gcd(q, |m|) with gcd(q, 0) = q
    let g = gcd_i64(q as i64, m) as u64;
    let g = if m == 0 { q } else { g };
    let mut formula = 0i64;
    let mut d = 1u64;
    while d * d <= g {
        if g % d == 0 {
            formula += d as i64 * moebius_one(q / d);
            let e = g / d;
            if e != d {
                formula += e as i64 * moebius_one(q / e);
            }
        }
        d += 1;
    }
    // direct route
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    let step = 2.0 * std::f64::consts::PI * (m.rem_euclid(q as i64) as f64) / q as f64;
    for a in 1..=q {
        if gcd_i64(a as i64, q as i64) == 1 {
            let (s, c) = (step * a as f64).sin_cos();
            re += c;
            im += s;
        }
    }
    if im.abs() > 1e-9 {
        return Err(ArithError::CrossCheck(format!(
            "R_{q}({m}) direct sum has imaginary residue {im:e}"
        )));
    }
    let rounded = re.round() as i64;
    if (re - rounded as f64).abs() > 1e-6 || rounded != formula {
        return Err(ArithError::CrossCheck(format!(
            "R_{q}({m}): direct {re} vs formula {formula}"
        )));
    }
    Ok(formula)
}

/// Hecke multiplicativity on raw integer coefficients:
/// a(m) a(n) = sum_{d | (m,n)} d^{k-1} a(mn/d^2), checked exactly.
pub fn hecke_relation_check(f: &CuspFormData, m: usize, n: usize) -> Result<bool, ArithError> {
    if m < 1 || n < 1 || m * n > f.len() {
        return Err(ArithError::OutOfRange(format!(
            "hecke check needs a(mn), mn = {} > {}",
            m.max(1) * n.max(1),
            f.len()
        )));
    }
    let lhs = f.raw(m) * f.raw(n);
    let mut rhs = BigInt::zero();
    let g = gcd_i64(m as i64, n as i64) as usize;
    for d in 1..=g {
        if g % d == 0 {
            let dk = BigInt::from(d).pow(f.weight - 1);
            rhs += dk * f.raw(m * n / (d * d));
        }
    }
    Ok(lhs == rhs)
}

/// sum_{n<=x} lambda(n)^2 with compensated accumulation.
pub fn rankin_selberg_average<C: Coefficients + ?Sized>(seq: &C, x: f64) -> f64 {
    let top = (x.floor() as usize).min(seq.max_index());
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=top {
        let v = seq.lambda(n);
        let y = v * v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Least-squares slope of log(sum_{n<=x} lambda^2) against log x.
pub fn rankin_selberg_slope<C: Coefficients + ?Sized>(seq: &C, xs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| (x.ln(), rankin_selberg_average(seq, x).ln()))
        .collect();
    least_squares_slope(&pts)
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force truncated expansion of prod (1-q^m)^24, the independent
    /// oracle for the eta-product convolution.
    fn eta24_bruteforce(len: usize) -> Vec<i128> {
        let mut poly = vec![0i128; len];
        poly[0] = 1;
        for m in 1..len {
            for _ in 0..24 {
                // multiply by (1 - q^m)
                for i in (m..len).rev() {
                    let t = poly[i - m];
                    poly[i] -= t;
                }
            }
        }
        poly
    }

    #[test]
    fn delta_matches_bruteforce_expansion() {
        let f = generate_delta_coefficients(48).unwrap();
        let brute = eta24_bruteforce(48);
        for n in 1..=48 {
            assert_eq!(f.raw(n), &BigInt::from(brute[n - 1]), "a({n})");
        }
        assert_eq!(f.raw(1), &BigInt::from(1));
        assert_eq!(f.raw(2), &BigInt::from(-24));
        assert_eq!(f.raw(3), &BigInt::from(252));
    }

    #[test]
    fn hecke_relation_small_cases() {
        let f = generate_delta_coefficients(64).unwrap();
        assert!(hecke_relation_check(&f, 1, 5).unwrap());
        assert!(hecke_relation_check(&f, 2, 3).unwrap());
        // a(2)^2 = a(4) + 2^11
        assert!(hecke_relation_check(&f, 2, 2).unwrap());
        assert_eq!(f.raw(2) * f.raw(2), f.raw(4) + BigInt::from(2048));
        assert!(hecke_relation_check(&f, 9, 8).is_err());
    }

    #[test]
    fn divisor_counts() {
        let d = divisor_sequence(24);
        assert_eq!(d.value(1), 1.0);
        assert_eq!(d.value(6), 4.0);
        assert_eq!(d.value(12), 6.0);
        assert_eq!(d.value(16), 5.0);
        assert_eq!(d.value(24), 8.0);
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan_sum(1, 7).unwrap(), 1);
        assert_eq!(ramanujan_sum(4, 2).unwrap(), -2);
        assert_eq!(ramanujan_sum(6, 3).unwrap(), -2);
        assert_eq!(ramanujan_sum(5, 0).unwrap(), 4); // phi(5)
    }

    #[test]
    fn moebius_and_phi() {
        let mu = moebius_table(30);
        assert_eq!(mu[1], 1);
        assert_eq!(mu[6], 1);
        assert_eq!(mu[30], -1);
        assert_eq!(mu[12], 0);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(4, 8), None);
        for q in 2..50i64 {
            for a in 1..q {
                if gcd_i64(a, q) == 1 {
                    let inv = inv_mod(a, q).unwrap();
                    assert_eq!((a * inv).rem_euclid(q), 1);
                }
            }
        }
    }

    #[test]
    fn rankin_selberg_basics() {
        let f = generate_delta_coefficients(10_000).unwrap();
        assert!((rankin_selberg_average(&f, 1.0) - 1.0).abs() < 1e-15);
        let slope = rankin_selberg_slope(&f, &[100.0, 1000.0, 10_000.0]);
        assert!((0.9..=1.1).contains(&slope), "slope {slope}");
        let d = divisor_sequence(1000);
        assert!(rankin_selberg_average(&d, 1000.0) >= 1000.0);
    }
}
