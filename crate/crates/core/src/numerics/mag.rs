//! Upper bounds for ball radii.
//!
//! A [`Mag`] is a non-negative number `m * 2^e` with an `f64` mantissa and an
//! unbounded exponent. Every operation rounds upward, so a `Mag` produced from
//! other `Mag`s is always an upper bound of the exact result.

use std::cmp::Ordering;

use rug::float::Round;
use rug::Float;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mag {
    // 0.0, or in [0.5, 1)
    m: f64,
    e: i64,
}

// TwoSum: bump `s = a + b` up only when the addition was inexact and rounded down
fn round_up_sum(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Exact `2^e` for a normal exponent.
pub(crate) fn pow2f(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

pub(crate) fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (m, raw_exp - 1022)
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0.0, e: 0 };

    fn normalized(x: f64, e: i64) -> Mag {
        if x == 0.0 {
            return Mag::ZERO;
        }
        let (m, k) = frexp(x);
        Mag { m, e: e + k }
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag { m: 0.5, e: e + 1 }
    }

    /// Upper bound of a non-negative finite `f64`.
    pub fn from_f64(x: f64) -> Mag {
        assert!(x >= 0.0 && x.is_finite(), "invalid magnitude {x}");
        Mag::normalized(x, 0)
    }

    /// Upper bound of `|x|`.
    pub fn from_float_abs(x: &Float) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let (m, e) = x.to_f64_exp_round(Round::Up);
        let m = m.abs();
        // to_f64_exp_round may return exactly 1.0 after rounding up
        Mag::normalized(m, e as i64)
    }

    /// Lower bound of `|x|`.
    pub fn lower_from_float_abs(x: &Float) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let (m, e) = x.to_f64_exp_round(Round::Zero);
        Mag::normalized(m.abs(), e as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    /// Exponent `e` such that `self < 2^e`, or `None` for zero.
    pub fn exp_bound(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.e)
        }
    }

    pub fn add(self, other: Mag) -> Mag {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= other.e { (self, other) } else { (other, self) };
        let shift = small.e - big.e;
        if shift < -100 {
            return Mag::normalized(big.m.next_up(), big.e);
        }
        let b = small.m * 2f64.powi(shift as i32);
        let s = big.m + b;
        Mag::normalized(round_up_sum(big.m, b, s), big.e)
    }

    pub fn mul(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        let p = self.m * other.m;
        let p = if self.m.mul_add(other.m, -p) > 0.0 { p.next_up() } else { p };
        Mag::normalized(p, self.e + other.e)
    }

    pub fn mul_2exp(self, k: i64) -> Mag {
        if self.is_zero() {
            self
        } else {
            Mag { m: self.m, e: self.e + k }
        }
    }

    /// Upper bound of `self * x` for a small non-negative constant.
    pub fn scale(self, x: f64) -> Mag {
        self.mul(Mag::from_f64(x))
    }

    /// Lower bound of `self - other`, or zero if that may be non-positive.
    ///
    /// Only meaningful when `self` is itself a lower bound.
    pub fn sub_lower(self, other: Mag) -> Mag {
        if other.is_zero() {
            return self;
        }
        if self.is_zero() || self.cmp_value(&other) != Ordering::Greater {
            return Mag::ZERO;
        }
        let shift = other.e - self.e;
        if shift < -100 {
            return Mag::normalized(self.m.next_down(), self.e);
        }
        let d = self.m - other.m * 2f64.powi(shift as i32);
        if d <= 0.0 {
            return Mag::ZERO;
        }
        Mag::normalized(d.next_down(), self.e)
    }

    /// Upper bound of `self / den` where `den` is a positive lower bound.
    pub fn div(self, den: Mag) -> Mag {
        assert!(!den.is_zero(), "division of a magnitude by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalized((self.m / den.m).next_up(), self.e - den.e)
    }

    /// Lower bound of `self * other` when both are lower bounds.
    pub fn mul_lower(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag::normalized((self.m * other.m).next_down(), self.e + other.e)
    }

    /// Lower bound of `self + other` when both are lower bounds.
    pub fn add_lower(self, other: Mag) -> Mag {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= other.e { (self, other) } else { (other, self) };
        let shift = small.e - big.e;
        if shift < -100 {
            return big;
        }
        let s = big.m + small.m * 2f64.powi(shift as i32);
        Mag::normalized(s.next_down(), big.e)
    }

    pub fn max(self, other: Mag) -> Mag {
        if self.cmp_value(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn cmp_value(&self, other: &Mag) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.e.cmp(&other.e).then(self.m.partial_cmp(&other.m).unwrap()),
        }
    }

    /// Exact conversion.
    pub fn to_float(&self) -> Float {
        let f = Float::with_val(53, self.m);
        if self.is_zero() {
            return f;
        }
        f << (self.e as i32)
    }

    /// Upper bound of `self * 2^-k` as an `f64`; tiny values round up to the
    /// smallest subnormal, huge ones to infinity.
    pub fn to_f64_up_scaled(&self, k: i64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.e - k;
        if e > 1023 {
            f64::INFINITY
        } else if e < -1073 {
            f64::from_bits(1)
        } else if e >= -1021 {
            self.m * pow2f(e as i32)
        } else {
            // multiples of the smallest subnormal
            (self.m * pow2f((e + 1074) as i32)).ceil() * f64::from_bits(1)
        }
    }

    /// Approximate value, for diagnostics.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else if self.e > 1023 {
            f64::INFINITY
        } else if self.e < -1074 {
            0.0
        } else {
            self.m * 2f64.powi(self.e as i32)
        }
    }

    /// Compare against `|x|`.
    pub fn cmp_float_abs(&self, x: &Float) -> Ordering {
        if x.is_zero() {
            return if self.is_zero() { Ordering::Equal } else { Ordering::Greater };
        }
        if self.is_zero() {
            return Ordering::Less;
        }
        let xe = x.get_exp().unwrap() as i64;
        if self.e > xe {
            return Ordering::Greater;
        }
        if self.e < xe {
            return Ordering::Less;
        }
        self.to_float().cmp_abs(x).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frexp_matches_definition() {
        for &x in &[1.0, 0.75, 3.0, 1e-300, 5e-324, 1e300] {
            let (m, e) = frexp(x);
            assert!((0.5..1.0).contains(&m));
            assert_eq!(Float::with_val(53, m) << (e as i32), x);
        }
    }

    #[test]
    fn huge_exponents_survive() {
        let tiny = Mag::pow2(-100_000);
        let sq = tiny.mul(tiny);
        assert_eq!(sq.exp_bound(), Some(-199_999));
        assert!(!sq.is_zero());
        let sum = sq.add(Mag::pow2(3));
        assert_eq!(sum.cmp_value(&Mag::pow2(3)), Ordering::Greater);
    }

    proptest! {
        #[test]
        fn add_and_mul_are_upper_bounds(a in 0.0f64..1e6, b in 0.0f64..1e6, ka in -50i64..50, kb in -50i64..50) {
            let ma = Mag::from_f64(a).mul_2exp(ka);
            let mb = Mag::from_f64(b).mul_2exp(kb);
            let fa = Float::with_val(200, a) << (ka as i32);
            let fb = Float::with_val(200, b) << (kb as i32);
            let sum = Float::with_val(400, &fa + &fb);
            let prod = Float::with_val(400, &fa * &fb);
            prop_assert!(ma.add(mb).to_float() >= sum);
            prop_assert!(ma.mul(mb).to_float() >= prod);
            let lo = ma.sub_lower(mb).to_float();
            let diff = Float::with_val(400, &fa - &fb);
            prop_assert!(lo <= diff.max(&Float::with_val(10, 0)));
        }
    }
}
