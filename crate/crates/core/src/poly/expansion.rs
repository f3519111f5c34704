//! Exact Taylor expansions of a dense polynomial about Gaussian integers.
//!
//! Far from the origin the monomial basis cancels badly: evaluating a
//! Bernoulli polynomial of degree 256 near `17 + 3i` loses over 130 bits.
//! Re-expanding exactly about a nearby lattice point brings the loss back to
//! a few bits, so double-double arithmetic suffices again.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rug::{Assign, Integer, Rational};

use super::CoefficientList;
use crate::numerics::{ComplexInterval, DdBall, Dyadic, DyadicComplex, Mag};

/// Precision of the stored coefficient enclosures; higher requests fall back
/// to the original coefficients.
pub const EXPANSION_BITS: u32 = 1024;
const MAX_CENTERS: usize = 1024;
const MAX_CENTER_COORD: f64 = (1u64 << 20) as f64;

/// Coefficients of `p(center + u)` in powers of `u`.
#[derive(Debug)]
pub struct Expansion {
    pub center: DyadicComplex,
    pub balls: Vec<DdBall>,
    pub magnitudes: Vec<Mag>,
    high: Vec<ComplexInterval>,
    rounded: Mutex<HashMap<u32, Arc<Vec<ComplexInterval>>>>,
}

impl Expansion {
    /// Enclosures at `prec` bits, when the stored ones are precise enough.
    pub fn enclosures(&self, prec: u32) -> Option<Arc<Vec<ComplexInterval>>> {
        if prec > EXPANSION_BITS {
            return None;
        }
        let mut cache = self.rounded.lock().unwrap();
        Some(cache.entry(prec).or_insert_with(|| Arc::new(self.high.iter().map(|c| c.round_to(prec)).collect())).clone())
    }
}

/// Gaussian integer numerators over a common denominator, and the expansions
/// built from them so far.
pub(super) struct Expansions {
    num: Vec<(Integer, Integer)>,
    den: Integer,
    cache: Mutex<HashMap<(i64, i64), Arc<Expansion>>>,
}

impl Expansions {
    /// `None` unless every coefficient is an exact rational.
    pub(super) fn new(coeffs: &CoefficientList) -> Option<Expansions> {
        let exact = coeffs.exact()?;
        let mut den = Integer::from(1);
        for (re, im) in &exact {
            den.lcm_mut(re.denom());
            den.lcm_mut(im.denom());
        }
        let scaled = |q: &Rational| Integer::from(q.numer() * Integer::from(&den / q.denom()));
        let num = exact.iter().map(|(re, im)| (scaled(re), scaled(im))).collect();
        Some(Expansions { num, den, cache: Mutex::new(HashMap::new()) })
    }

    /// Expansion about the lattice point nearest to `(re, im)`; `None` at the
    /// origin, where the original coefficients already serve.
    pub(super) fn nearest(&self, re: f64, im: f64) -> Option<Arc<Expansion>> {
        if !(re.abs() < MAX_CENTER_COORD && im.abs() < MAX_CENTER_COORD) {
            return None;
        }
        let key = (re.round() as i64, im.round() as i64);
        if key == (0, 0) {
            return None;
        }
        let mut cache = self.cache.lock().unwrap();
        if let Some(e) = cache.get(&key) {
            return Some(e.clone());
        }
        if cache.len() >= MAX_CENTERS {
            cache.clear();
        }
        let e = Arc::new(self.build(key.0, key.1));
        cache.insert(key, e.clone());
        Some(e)
    }

    /// Repeated synthetic division by `z - (x + iy)`, in exact arithmetic.
    fn build(&self, x: i64, y: i64) -> Expansion {
        let mut b = self.num.clone();
        let d = b.len() - 1;
        let mut t = Integer::new();
        for i in 0..d {
            for j in (i..d).rev() {
                let (lo, hi) = b.split_at_mut(j + 1);
                let (next_re, next_im) = &hi[0];
                let cur = &mut lo[j];
                t.assign(next_re * x);
                cur.0 += &t;
                t.assign(next_im * y);
                cur.0 -= &t;
                t.assign(next_im * x);
                cur.1 += &t;
                t.assign(next_re * y);
                cur.1 += &t;
            }
        }
        let high: Vec<ComplexInterval> = b
            .into_iter()
            .map(|(re, im)| {
                let re = Rational::from((re, self.den.clone()));
                let im = Rational::from((im, self.den.clone()));
                ComplexInterval::from_rational(&re, &im, EXPANSION_BITS)
            })
            .collect();
        Expansion {
            center: DyadicComplex::new(Dyadic::from_i64(x), Dyadic::from_i64(y)),
            balls: high.iter().map(DdBall::from_interval).collect(),
            magnitudes: high.iter().map(ComplexInterval::abs_upper).collect(),
            high,
            rounded: Mutex::new(HashMap::new()),
        }
    }
}
