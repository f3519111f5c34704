//! Complex balls with double-double midpoints and an unbounded exponent.
//!
//! A [`DdBall`] is the disc `D((re + i*im) * 2^e, rad * 2^e)` where `re` and `im`
//! are unevaluated sums of two `f64`s (about 106 bits). Operations allocate
//! nothing and round the radius upward, so they are a fast stand-in for
//! [`ComplexInterval`] at working precisions up to 106 bits.

use rug::Float;

use super::interval::{ComplexInterval, RealInterval};
use super::mag::{frexp, pow2f, Mag};

// Generous bound on the absolute effect of underflow in one operation, in units of the
// operation's scale. Results are normalized so the scale is within a factor
// two of the largest component.
const TINY: f64 = f64::from_bits((1023 - 1000) << 52); // 2^-1000
// relative slack for rounding of radius arithmetic
const UP: f64 = 1.0 + 1.0 / (1u64 << 48) as f64;
const DOWN: f64 = 1.0 - 1.0 / (1u64 << 48) as f64;
// relative error bound of one double-double add or multiply, with margin
const DD_EPS: f64 = 1.0 / (1u128 << 97) as f64;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

const DD_ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = 134217729.0 * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

// Dekker's exact product; no fused multiply-add needed
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (sh, sl) = two_sum(self.hi, o.hi);
        let (th, tl) = two_sum(self.lo, o.lo);
        let (sh, sl) = fast_two_sum(sh, sl + th);
        let (hi, lo) = fast_two_sum(sh, sl + tl);
        Dd { hi, lo }
    }

    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (ch, cl1) = two_prod(self.hi, o.hi);
        let cl2 = self.lo * o.hi + self.hi * o.lo;
        let (hi, lo) = fast_two_sum(ch, cl1 + cl2);
        Dd { hi, lo }
    }

    #[inline]
    fn scale(self, k: i64) -> Dd {
        Dd { hi: ldexp(self.hi, k), lo: ldexp(self.lo, k) }
    }

    #[inline]
    fn abs_upper(self) -> f64 {
        self.hi.abs() + self.lo.abs()
    }

    #[inline]
    fn abs_lower(self) -> f64 {
        (self.hi.abs() - self.lo.abs()).max(0.0)
    }
}

/// `x * 2^k`, exact unless the result underflows.
#[inline]
fn ldexp(x: f64, k: i64) -> f64 {
    if x == 0.0 || k == 0 {
        x
    } else if (-1022..=1023).contains(&k) {
        x * pow2f(k as i32)
    } else if k < -2200 {
        0.0
    } else if k < 0 {
        x * pow2f(-1022) * pow2f((k + 1022).max(-1022) as i32)
    } else {
        x * pow2f(1023) * pow2f((k - 1023).min(1023) as i32)
    }
}

/// Complex ball with a double-double midpoint; see the module docs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdBall {
    re: Dd,
    im: Dd,
    rad: f64,
    e: i64,
}

impl DdBall {
    pub const ZERO: DdBall = DdBall { re: DD_ZERO, im: DD_ZERO, rad: 0.0, e: 0 };

    fn normalize(re: Dd, im: Dd, rad: f64, e: i64) -> DdBall {
        let m = re.hi.abs().max(im.hi.abs()).max(rad);
        if m == 0.0 {
            return DdBall::ZERO;
        }
        let (_, k) = frexp(m);
        if k == 0 {
            return DdBall { re, im, rad, e };
        }
        let rad = if k > 0 { ldexp(rad, -k) * UP + TINY } else { ldexp(rad, -k) };
        DdBall { re: re.scale(-k), im: im.scale(-k), rad, e: e + k }
    }

    /// Upper bound of the midpoint modulus, in scale units.
    #[inline]
    fn mid_upper(&self) -> f64 {
        let (a, b) = (self.re.abs_upper(), self.im.abs_upper());
        (a * a + b * b).sqrt() * UP
    }

    #[inline]
    fn mid_lower(&self) -> f64 {
        let (a, b) = (self.re.abs_lower(), self.im.abs_lower());
        (a * a + b * b).sqrt() * DOWN
    }

    /// The exact complex number `re + i im`.
    pub fn from_f64(re: f64, im: f64) -> DdBall {
        assert!(re.is_finite() && im.is_finite(), "non-finite ball center");
        DdBall::normalize(Dd { hi: re, lo: 0.0 }, Dd { hi: im, lo: 0.0 }, 0.0, 0)
    }

    pub fn one() -> DdBall {
        DdBall::from_f64(1.0, 0.0)
    }

    pub fn is_exact(&self) -> bool {
        self.rad == 0.0
    }

    pub fn add(&self, o: &DdBall) -> DdBall {
        if o.re.hi == 0.0 && o.im.hi == 0.0 && o.rad == 0.0 {
            return *self;
        }
        if self.re.hi == 0.0 && self.im.hi == 0.0 && self.rad == 0.0 {
            return *o;
        }
        let (x, y) = if self.e >= o.e { (self, o) } else { (o, self) };
        let k = y.e - x.e;
        let (yre, yim, yrad) = if k == 0 {
            (y.re, y.im, y.rad)
        } else {
            (y.re.scale(k), y.im.scale(k), ldexp(y.rad, k) * UP + TINY)
        };
        let re = x.re.add(yre);
        let im = x.im.add(yim);
        let mx = x.mid_upper();
        let my = (yre.abs_upper().powi(2) + yim.abs_upper().powi(2)).sqrt() * UP;
        let rad = (x.rad + yrad + DD_EPS * 4.0 * (mx + my)) * UP + TINY;
        DdBall::normalize(re, im, rad, x.e)
    }

    pub fn neg(&self) -> DdBall {
        DdBall { re: self.re.neg(), im: self.im.neg(), ..*self }
    }

    pub fn sub(&self, o: &DdBall) -> DdBall {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &DdBall) -> DdBall {
        let (a, b, c, d) = (self.re, self.im, o.re, o.im);
        let re = a.mul(c).add(b.mul(d).neg());
        let im = a.mul(d).add(b.mul(c));
        let mx = self.mid_upper();
        let my = o.mid_upper();
        let rad = (mx * o.rad + self.rad * my + self.rad * o.rad + DD_EPS * 8.0 * mx * my) * UP + TINY;
        DdBall::normalize(re, im, rad, self.e + o.e)
    }

    /// `1 / self`, or `None` when the ball contains zero.
    pub fn inv(&self) -> Option<DdBall> {
        let lower = self.mid_lower();
        if lower <= self.rad * UP {
            return None;
        }
        let (a, b) = (self.re, self.im);
        let n = a.mul(a).add(b.mul(b));
        // one Newton step from the f64 reciprocal
        let y0 = Dd { hi: 1.0 / n.hi, lo: 0.0 };
        let t = Dd { hi: 1.0, lo: 0.0 }.add(n.mul(y0).neg());
        let y = y0.add(y0.mul(t));
        let re = a.mul(y);
        let im = b.mul(y).neg();
        // |1/z - 1/m| <= |z - m| / (|z| |m|); the midpoint carries a few roundings
        let gap = (lower - self.rad * UP) * DOWN;
        let rad = (self.rad / (gap * lower * DOWN) + DD_EPS * 64.0 / lower) * UP * UP + TINY;
        Some(DdBall::normalize(re, im, rad, -self.e))
    }

    pub fn sqr(&self) -> DdBall {
        self.mul(self)
    }

    pub fn mul_2exp(&self, k: i64) -> DdBall {
        if *self == DdBall::ZERO {
            return *self;
        }
        DdBall { e: self.e + k, ..*self }
    }

    /// Upper bound of every `|z|` in the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_f64((self.mid_upper() + self.rad) * UP).mul_2exp(self.e)
    }

    /// Lower bound of every `|z|` in the ball.
    pub fn abs_lower(&self) -> Mag {
        let v = (self.mid_lower() - self.rad) * DOWN;
        if v <= 0.0 {
            Mag::ZERO
        } else {
            Mag::from_f64(v).mul_2exp(self.e)
        }
    }

    /// Modulus of the midpoint, rounded up; ignores the radius.
    pub fn mid_abs(&self) -> Mag {
        Mag::from_f64(self.mid_upper()).mul_2exp(self.e)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    /// Midpoint rounded to `f64`; infinite or zero when out of range.
    pub fn mid_f64(&self) -> (f64, f64) {
        (ldexp(self.re.hi, self.e), ldexp(self.im.hi, self.e))
    }

    /// True when the radius is below `2^-bits` times the midpoint modulus.
    pub fn has_relative_bits(&self, bits: i32) -> bool {
        self.rad * pow2f(bits) < self.mid_lower()
    }

    /// Radius, as an upper bound.
    pub fn radius(&self) -> Mag {
        Mag::from_f64(self.rad).mul_2exp(self.e)
    }

    pub fn from_interval(z: &ComplexInterval) -> DdBall {
        let exp_of = |x: &RealInterval| -> Option<i64> {
            let m = x.mid().get_exp().map(|v| v as i64);
            let r = x.rad().exp_bound();
            match (m, r) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            }
        };
        let e = match (exp_of(&z.re), exp_of(&z.im)) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return DdBall::ZERO,
        };
        let (re, re_err) = split_float(z.re.mid(), e);
        let (im, im_err) = split_float(z.im.mid(), e);
        let rr = z.re.rad().to_f64_up_scaled(e) + re_err;
        let ri = z.im.rad().to_f64_up_scaled(e) + im_err;
        let rad = (rr * rr + ri * ri).sqrt() * UP * UP + TINY;
        DdBall::normalize(re, im, rad, e)
    }

    /// Rectangle enclosure at `prec` bits.
    pub fn to_interval(&self, prec: u32) -> ComplexInterval {
        let part = |d: Dd| -> RealInterval {
            let hi = RealInterval::exact(Float::with_val(53, d.hi));
            let lo = RealInterval::exact(Float::with_val(53, d.lo));
            let mut v = hi.add(&lo, prec).mul_2exp(self.e);
            v.add_error(self.radius());
            v
        };
        ComplexInterval::new(part(self.re), part(self.im))
    }
}

// `x * 2^-e` as a double-double plus an upper bound on what was dropped
fn split_float(x: &Float, e: i64) -> (Dd, f64) {
    if x.is_zero() {
        return (DD_ZERO, 0.0);
    }
    let prec = x.prec().max(128);
    let scaled = Float::with_val(prec, x >> (e as i32));
    let hi = scaled.to_f64();
    let rest = Float::with_val(prec + 64, &scaled - hi);
    let lo = rest.to_f64();
    let tail = Float::with_val(prec + 128, &rest - lo);
    let err = if tail.is_zero() { 0.0 } else { Mag::from_float_abs(&tail).to_f64_up_scaled(0) };
    (Dd { hi, lo }, err)
}
