//! Double-double arithmetic for series summation with heavy cancellation.
//!
//! An unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2 gives ~31 significant
//! digits, enough to absorb the ~14 digits lost to cancellation in the worst
//! Bessel power-series regime (order 64 near the turning point).

/// Unevaluated double-word float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const SPLITTER: f64 = 134217729.0; // 2^27 + 1, Dekker split constant

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let r = ((self.hi - p) - e + self.lo) / b;
        let (hi, lo) = quick_two_sum(q1, r);
        Dd { hi, lo }
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_beyond_f64() {
        // sum 1 + eps - 1 with eps far below f64 resolution of the partials
        let eps = 1e-25;
        let s = Dd::ONE.add(Dd::from_f64(eps)).sub(Dd::ONE);
        assert!((s.to_f64() - eps).abs() < 1e-40);
    }

    #[test]
    fn product_error_term() {
        let a = 1.0 + 2f64.powi(-30);
        let b = 1.0 - 2f64.powi(-30);
        let p = Dd::from_f64(a).mul(Dd::from_f64(b));
        // exact product is 1 - 2^-60
        let exact_lo = -(2f64.powi(-60));
        assert!((p.to_f64() - (1.0 + exact_lo)).abs() < 1e-32);
    }

    #[test]
    fn division_roundtrip() {
        let x = Dd::from_f64(std::f64::consts::PI);
        let y = x.div_f64(7.0).mul_f64(7.0);
        assert!((y.to_f64() - std::f64::consts::PI).abs() < 1e-30);
    }
}
