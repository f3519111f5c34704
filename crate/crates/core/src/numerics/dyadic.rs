//! Exact dyadic rationals `m * 2^e`, used for every box and disc coordinate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rug::{Float, Integer, Rational};

use super::NumericsError;

/// An exact dyadic number. Normalized: the mantissa is odd, or zero with `exp == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: Integer,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: Integer, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: Integer::new(), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Dyadic {
        Dyadic::new(Integer::from(v), 0)
    }

    /// `2^k`
    pub fn pow2(k: i64) -> Dyadic {
        Dyadic { mant: Integer::from(1), exp: k }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite());
        let f = Float::with_val(53, x);
        Dyadic::from_float(&f)
    }

    /// Exact conversion of a finite `Float`.
    pub fn from_float(f: &Float) -> Dyadic {
        match f.to_integer_exp() {
            Some((m, e)) => Dyadic::new(m, e as i64),
            None => panic!("non-finite float cannot be made dyadic"),
        }
    }

    fn normalize(&mut self) {
        if self.mant == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.mant.find_one(0).unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &Integer {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    pub fn signum(&self) -> Ordering {
        self.mant.cmp0()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.clone().abs(), exp: self.exp }
    }

    /// Multiply by `2^k`, exactly.
    pub fn mul_2exp(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Bits needed for an exact binary floating-point representation.
    pub fn bits(&self) -> u32 {
        self.mant.significant_bits().max(1)
    }

    /// Exact conversion to a float of at least `min_prec` bits.
    pub fn to_float(&self, min_prec: u32) -> Float {
        let prec = min_prec.max(self.bits());
        let f = Float::with_val(prec, &self.mant);
        if self.is_zero() {
            f
        } else {
            f << (self.exp as i32)
        }
    }

    /// Correctly rounded conversion at exactly `prec` bits.
    pub fn to_float_round(&self, prec: u32) -> (Float, Ordering) {
        let exact = self.to_float(prec);
        Float::with_val_round(prec, &exact, rug::float::Round::Nearest)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(53).to_f64()
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from(self.mant.clone() << (self.exp as u32))
        } else {
            Rational::from((self.mant.clone(), Integer::from(1) << ((-self.exp) as u32)))
        }
    }

    /// Exact conversion of a rational whose denominator is a power of two.
    pub fn from_rational(r: &Rational) -> Option<Dyadic> {
        let den = r.denom();
        if !den.is_power_of_two() {
            return None;
        }
        let k = den.significant_bits() as i64 - 1;
        Some(Dyadic::new(r.numer().clone(), -k))
    }

    fn aligned(&self, other: &Dyadic) -> (Integer, Integer, i64) {
        if self.is_zero() {
            return (Integer::new(), other.mant.clone(), other.exp);
        }
        if other.is_zero() {
            return (self.mant.clone(), Integer::new(), self.exp);
        }
        let e = self.exp.min(other.exp);
        let a = self.mant.clone() << ((self.exp - e) as u32);
        let b = other.mant.clone() << ((other.exp - e) as u32);
        (a, b, e)
    }

    /// Exact decimal expansion (every dyadic has a finite one).
    pub fn to_decimal_string(&self) -> String {
        if self.exp >= 0 {
            return (self.mant.clone() << (self.exp as u32)).to_string();
        }
        // m / 2^k = m * 5^k / 10^k
        let k = (-self.exp) as u32;
        let scaled = self.mant.clone() * Integer::from(Integer::u_pow_u(5, k));
        let neg = scaled < 0;
        let digits = scaled.abs().to_string();
        let k = k as usize;
        let (int_part, frac_part) = if digits.len() > k {
            let (a, b) = digits.split_at(digits.len() - k);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(k - digits.len()), digits))
        };
        let frac = frac_part.trim_end_matches('0');
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int_part);
        if !frac.is_empty() {
            s.push('.');
            s.push_str(frac);
        }
        s
    }

    /// Parse a decimal (`-1.25`, `3e-2`) or rational (`3/4`) literal, which must be dyadic.
    pub fn parse(s: &str) -> Result<Dyadic, NumericsError> {
        let r = parse_rational(s)?;
        Dyadic::from_rational(&r).ok_or_else(|| NumericsError::NotDyadic(s.to_string()))
    }
}

/// Parse a decimal or `num/den` literal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || NumericsError::BadLiteral(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let (mant, exp10) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t.as_str(), 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let mut n = Integer::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let e = exp10 - fp.len() as i64;
    if e.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let p = Integer::from(Integer::u_pow_u(10, e.unsigned_abs() as u32));
    Ok(if e >= 0 { Rational::from(n * p) } else { Rational::from((n, p)) })
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, other: &Dyadic) -> Dyadic {
        Dyadic::new(Integer::from(&self.mant * &other.mant), self.exp + other.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: Integer::from(-&self.mant), exp: self.exp }
    }
}

/// Exact dyadic complex number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicComplex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl DyadicComplex {
    pub fn new(re: Dyadic, im: Dyadic) -> DyadicComplex {
        DyadicComplex { re, im }
    }

    pub fn zero() -> DyadicComplex {
        DyadicComplex { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    pub fn real(re: Dyadic) -> DyadicComplex {
        DyadicComplex { re, im: Dyadic::zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> DyadicComplex {
        DyadicComplex { re: Dyadic::from_f64(re), im: Dyadic::from_f64(im) }
    }

    pub fn conj(&self) -> DyadicComplex {
        DyadicComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits().max(self.im.bits())
    }

    /// Squared modulus, exactly.
    pub fn norm_sqr(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
}

impl fmt::Display for DyadicComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}
