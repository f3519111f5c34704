//! Real and complex intervals.
//!
//! A [`RealInterval`] is stored as a midpoint with an upward-rounded radius.
//! A [`ComplexInterval`] is a rectangle made of two independent real intervals.
//! All operations round outward: the result contains every value the operation
//! can take on points of the operands.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use super::dyadic::{Dyadic, DyadicComplex};
use super::mag::Mag;
use super::NumericsError;

/// Error bound for a correctly rounded result: one ulp at `prec` bits.
fn rounding_error(f: &Float, ord: Ordering, prec: u32) -> Mag {
    if ord == Ordering::Equal || f.is_zero() {
        return Mag::ZERO;
    }
    Mag::pow2(f.get_exp().unwrap() as i64 - prec as i64)
}

#[derive(Clone, Debug)]
pub struct RealInterval {
    mid: Float,
    rad: Mag,
}

impl RealInterval {
    pub fn new(mid: Float, rad: Mag) -> RealInterval {
        RealInterval { mid, rad }
    }

    pub fn exact(mid: Float) -> RealInterval {
        RealInterval { mid, rad: Mag::ZERO }
    }

    pub fn zero() -> RealInterval {
        RealInterval::exact(Float::new(2))
    }

    pub fn from_i64(v: i64) -> RealInterval {
        RealInterval::exact(Float::with_val(64, v))
    }

    /// Encloses `d` after rounding to `prec` bits.
    pub fn from_dyadic(d: &Dyadic, prec: u32) -> RealInterval {
        let (mid, ord) = d.to_float_round(prec);
        let rad = rounding_error(&mid, ord, prec);
        RealInterval { mid, rad }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> RealInterval {
        let (mid, ord) = Float::with_val_round(prec, r, Round::Nearest);
        let rad = rounding_error(&mid, ord, prec);
        RealInterval { mid, rad }
    }

    /// Smallest enclosure of `[lo, hi]` representable as a ball.
    pub fn from_endpoints(lo: &Float, hi: &Float) -> RealInterval {
        assert!(lo <= hi, "empty interval");
        let prec = lo.prec().max(hi.prec()) + 2;
        let (mid, ord) = Float::with_val_round(prec, lo + hi, Round::Nearest);
        let mid = mid / 2u32;
        let half = Float::with_val_round(prec, hi - lo, Round::Up).0 / 2u32;
        let rad = Mag::from_float_abs(&half).add(rounding_error(&mid, ord, prec));
        RealInterval { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    /// Width `hi - lo`, rounded up.
    pub fn width(&self) -> Mag {
        self.rad.mul_2exp(1)
    }

    pub fn lo(&self) -> Float {
        let r = self.rad.to_float();
        Float::with_val_round(self.mid.prec().max(64), &self.mid - &r, Round::Down).0
    }

    pub fn hi(&self) -> Float {
        let r = self.rad.to_float();
        Float::with_val_round(self.mid.prec().max(64), &self.mid + &r, Round::Up).0
    }

    pub fn contains_zero(&self) -> bool {
        self.rad.cmp_float_abs(&self.mid) != Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_sign_positive() && !self.contains_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_sign_negative() && !self.contains_zero()
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        &self.lo() <= x && x <= &self.hi()
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        let lo = Rational::from(self.lo().to_rational().unwrap());
        let hi = Rational::from(self.hi().to_rational().unwrap());
        &lo <= x && x <= &hi
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        let (slo, shi) = (self.lo().to_rational().unwrap(), self.hi().to_rational().unwrap());
        let olo = Rational::from(&other.mid.to_rational().unwrap() - &other.rad.to_float().to_rational().unwrap());
        let ohi = Rational::from(&other.mid.to_rational().unwrap() + &other.rad.to_float().to_rational().unwrap());
        slo <= olo && ohi <= shi
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        !(self.hi() < other.lo() || other.hi() < self.lo())
    }

    /// Upper bound of `|x|` over the interval.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_float_abs(&self.mid).add(self.rad)
    }

    /// Lower bound of `|x|` over the interval (zero if it contains zero).
    pub fn abs_lower(&self) -> Mag {
        Mag::lower_from_float_abs(&self.mid).sub_lower(self.rad)
    }

    pub fn add_error(&mut self, err: Mag) {
        self.rad = self.rad.add(err);
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval { mid: Float::with_val(self.mid.prec(), -&self.mid), rad: self.rad }
    }

    pub fn mul_2exp(&self, k: i64) -> RealInterval {
        let mid = if self.mid.is_zero() {
            self.mid.clone()
        } else {
            self.mid.clone() << (k as i32)
        };
        RealInterval { mid, rad: self.rad.mul_2exp(k) }
    }

    pub fn add(&self, other: &RealInterval, prec: u32) -> RealInterval {
        let (mid, ord) = Float::with_val_round(prec, &self.mid + &other.mid, Round::Nearest);
        let rad = self.rad.add(other.rad).add(rounding_error(&mid, ord, prec));
        RealInterval { mid, rad }
    }

    pub fn sub(&self, other: &RealInterval, prec: u32) -> RealInterval {
        let (mid, ord) = Float::with_val_round(prec, &self.mid - &other.mid, Round::Nearest);
        let rad = self.rad.add(other.rad).add(rounding_error(&mid, ord, prec));
        RealInterval { mid, rad }
    }

    fn product_radius(&self, other: &RealInterval) -> Mag {
        if self.rad.is_zero() && other.rad.is_zero() {
            return Mag::ZERO;
        }
        let a = Mag::from_float_abs(&self.mid).mul(other.rad);
        let b = Mag::from_float_abs(&other.mid).mul(self.rad);
        a.add(b).add(self.rad.mul(other.rad))
    }

    pub fn mul(&self, other: &RealInterval, prec: u32) -> RealInterval {
        let (mid, ord) = Float::with_val_round(prec, &self.mid * &other.mid, Round::Nearest);
        let rad = self.product_radius(other).add(rounding_error(&mid, ord, prec));
        RealInterval { mid, rad }
    }

    pub fn sqr(&self, prec: u32) -> RealInterval {
        self.mul(self, prec)
    }

    pub fn div(&self, other: &RealInterval, prec: u32) -> Result<RealInterval, NumericsError> {
        let den_lo = other.abs_lower();
        if den_lo.is_zero() {
            return Err(NumericsError::DivisionByIntervalContainingZero);
        }
        let (mid, ord) = Float::with_val_round(prec, &self.mid / &other.mid, Round::Nearest);
        let mut rad = rounding_error(&mid, ord, prec);
        if !(self.rad.is_zero() && other.rad.is_zero()) {
            // |a/b - am/bm| <= (|am| rb + |bm| ra) / (|bm| (|bm| - rb))
            let num = Mag::from_float_abs(&self.mid)
                .mul(other.rad)
                .add(Mag::from_float_abs(&other.mid).mul(self.rad));
            let den = Mag::lower_from_float_abs(&other.mid).mul_lower(den_lo);
            rad = rad.add(num.div(den));
        }
        Ok(RealInterval { mid, rad })
    }

    pub fn sqrt(&self, prec: u32) -> Result<RealInterval, NumericsError> {
        let lo = self.abs_lower();
        if !self.mid.is_sign_positive() || lo.is_zero() {
            return Err(NumericsError::Domain("square root of an interval touching zero"));
        }
        let (mid, ord) = Float::with_val_round(prec, self.mid.sqrt_ref(), Round::Nearest);
        let mut rad = rounding_error(&mid, ord, prec);
        if !self.rad.is_zero() {
            // |sqrt(x) - sqrt(m)| <= r / sqrt(lo)
            let (s, _) = Float::with_val_round(64, lo.to_float().sqrt_ref(), Round::Down);
            rad = rad.add(self.rad.div(Mag::lower_from_float_abs(&s)));
        }
        Ok(RealInterval { mid, rad })
    }

    /// Reduce the stored precision, widening to keep containment.
    pub fn round_to(&self, prec: u32) -> RealInterval {
        if self.mid.prec() <= prec {
            return self.clone();
        }
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = self.rad.add(rounding_error(&mid, ord, prec));
        RealInterval { mid, rad }
    }

    /// Integers contained in the interval, if there are at most `limit` of them.
    pub fn integers(&self, limit: u32) -> Option<Vec<Integer>> {
        let lo = self.lo().ceil();
        let hi = self.hi().floor();
        let lo = lo.to_integer()?;
        let hi = hi.to_integer()?;
        if hi < lo {
            return Some(Vec::new());
        }
        if Integer::from(&hi - &lo) >= limit {
            return None;
        }
        let mut out = Vec::new();
        let mut k = lo;
        while k <= hi {
            out.push(k.clone());
            k += 1;
        }
        Some(out)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.20e} +/- {:.3e}]", self.mid.to_f64(), self.rad.to_f64())
    }
}

#[derive(Clone, Debug)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> ComplexInterval {
        ComplexInterval { re, im }
    }

    pub fn zero() -> ComplexInterval {
        ComplexInterval::new(RealInterval::zero(), RealInterval::zero())
    }

    pub fn one() -> ComplexInterval {
        ComplexInterval::new(RealInterval::from_i64(1), RealInterval::zero())
    }

    pub fn from_real(re: RealInterval) -> ComplexInterval {
        ComplexInterval::new(re, RealInterval::zero())
    }

    pub fn from_dyadic(z: &DyadicComplex, prec: u32) -> ComplexInterval {
        ComplexInterval::new(RealInterval::from_dyadic(&z.re, prec), RealInterval::from_dyadic(&z.im, prec))
    }

    /// Exact enclosure of a dyadic point (radius zero).
    pub fn exact_dyadic(z: &DyadicComplex) -> ComplexInterval {
        ComplexInterval::new(
            RealInterval::exact(z.re.to_float(2)),
            RealInterval::exact(z.im.to_float(2)),
        )
    }

    pub fn from_rational(re: &Rational, im: &Rational, prec: u32) -> ComplexInterval {
        ComplexInterval::new(RealInterval::from_rational(re, prec), RealInterval::from_rational(im, prec))
    }

    /// Maximum of the real and imaginary widths.
    pub fn width(&self) -> Mag {
        self.re.width().max(self.im.width())
    }

    /// True when `width <= 2^-bits`.
    pub fn width_at_most_2exp(&self, bits: i64) -> bool {
        self.width().cmp_value(&Mag::pow2(-bits)) != Ordering::Greater
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Float, im: &Float) -> bool {
        self.re.contains_float(re) && self.im.contains_float(im)
    }

    pub fn contains_rational(&self, re: &Rational, im: &Rational) -> bool {
        self.re.contains_rational(re) && self.im.contains_rational(im)
    }

    pub fn contains_interval(&self, other: &ComplexInterval) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn overlaps(&self, other: &ComplexInterval) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    /// Radius of a disc around the midpoint enclosing the rectangle.
    fn disc_radius(&self) -> Mag {
        self.re.rad.add(self.im.rad)
    }

    /// True when `0` is safely excluded for division (the midpoint lies
    /// farther from zero than the enclosing disc radius).
    pub fn is_division_safe(&self) -> bool {
        !self.modulus_lower().sub_lower(self.disc_radius()).is_zero()
    }

    fn modulus_lower(&self) -> Mag {
        let (m, _) = Float::with_val_round(64, self.re.mid.hypot_ref(&self.im.mid), Round::Down);
        Mag::lower_from_float_abs(&m)
    }

    fn modulus_upper(&self) -> Mag {
        let (m, _) = Float::with_val_round(64, self.re.mid.hypot_ref(&self.im.mid), Round::Up);
        Mag::from_float_abs(&m)
    }

    /// Upper bound of `|z|` over the rectangle.
    pub fn abs_upper(&self) -> Mag {
        self.modulus_upper().add(self.disc_radius())
    }

    /// Lower bound of `|z|` over the rectangle.
    pub fn abs_lower(&self) -> Mag {
        self.modulus_lower().sub_lower(self.disc_radius())
    }

    pub fn neg(&self) -> ComplexInterval {
        ComplexInterval::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval::new(self.re.clone(), self.im.neg())
    }

    pub fn mul_2exp(&self, k: i64) -> ComplexInterval {
        ComplexInterval::new(self.re.mul_2exp(k), self.im.mul_2exp(k))
    }

    pub fn add(&self, other: &ComplexInterval, prec: u32) -> ComplexInterval {
        ComplexInterval::new(self.re.add(&other.re, prec), self.im.add(&other.im, prec))
    }

    pub fn sub(&self, other: &ComplexInterval, prec: u32) -> ComplexInterval {
        ComplexInterval::new(self.re.sub(&other.re, prec), self.im.sub(&other.im, prec))
    }

    pub fn mul_real(&self, x: &RealInterval, prec: u32) -> ComplexInterval {
        ComplexInterval::new(self.re.mul(x, prec), self.im.mul(x, prec))
    }

    pub fn mul(&self, other: &ComplexInterval, prec: u32) -> ComplexInterval {
        let (a, b) = (&self.re, &self.im);
        let (c, d) = (&other.re, &other.im);
        let (re_mid, ord_re) = Float::with_val_round(prec, &a.mid * &c.mid - &b.mid * &d.mid, Round::Nearest);
        let (im_mid, ord_im) = Float::with_val_round(prec, &a.mid * &d.mid + &b.mid * &c.mid, Round::Nearest);
        let re_rad = a.product_radius(c).add(b.product_radius(d)).add(rounding_error(&re_mid, ord_re, prec));
        let im_rad = a.product_radius(d).add(b.product_radius(c)).add(rounding_error(&im_mid, ord_im, prec));
        ComplexInterval::new(RealInterval::new(re_mid, re_rad), RealInterval::new(im_mid, im_rad))
    }

    pub fn sqr(&self, prec: u32) -> ComplexInterval {
        self.mul(self, prec)
    }

    /// Complex division, bounded in midpoint-radius form and returned as a rectangle.
    pub fn div(&self, other: &ComplexInterval, prec: u32) -> Result<ComplexInterval, NumericsError> {
        if other.contains_zero() || !other.is_division_safe() {
            return Err(NumericsError::DivisionByIntervalContainingZero);
        }
        // quotient of the midpoints, enclosed rigorously
        let xm = ComplexInterval::new(RealInterval::exact(self.re.mid.clone()), RealInterval::exact(self.im.mid.clone()));
        let ym = ComplexInterval::new(RealInterval::exact(other.re.mid.clone()), RealInterval::exact(other.im.mid.clone()));
        let num = xm.mul(&ym.conj(), prec);
        let den = ym.re.sqr(prec).add(&ym.im.sqr(prec), prec);
        let mut q = ComplexInterval::new(num.re.div(&den, prec)?, num.im.div(&den, prec)?);
        // propagated radius: (|xm| ry + |ym| rx) / (|ym| (|ym| - ry))
        let rx = self.disc_radius();
        let ry = other.disc_radius();
        if !(rx.is_zero() && ry.is_zero()) {
            let ym_lo = other.modulus_lower();
            let gap = ym_lo.sub_lower(ry);
            let numer = self.modulus_upper().mul(ry).add(other.modulus_upper().mul(rx));
            let err = numer.div(ym_lo.mul_lower(gap));
            q.re.add_error(err);
            q.im.add_error(err);
        }
        Ok(q)
    }

    pub fn round_to(&self, prec: u32) -> ComplexInterval {
        ComplexInterval::new(self.re.round_to(prec), self.im.round_to(prec))
    }

    /// The unique Gaussian integer in the rectangle when it is a real integer;
    /// `None` if the rectangle holds no integer or more than one.
    pub fn unique_integer(&self) -> Option<Integer> {
        if !self.im.contains_zero() {
            return None;
        }
        let ints = self.im.integers(2)?;
        if ints.len() != 1 {
            return None;
        }
        let re = self.re.integers(2)?;
        if re.len() == 1 {
            Some(re[0].clone())
        } else {
            None
        }
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

/// Arithmetic operation selector for [`interval_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn interval_arith(
    op: ArithOp,
    x: &ComplexInterval,
    y: &ComplexInterval,
    prec: u32,
) -> Result<ComplexInterval, NumericsError> {
    Ok(match op {
        ArithOp::Add => x.add(y, prec),
        ArithOp::Sub => x.sub(y, prec),
        ArithOp::Mul => x.mul(y, prec),
        ArithOp::Div => x.div(y, prec)?,
    })
}
