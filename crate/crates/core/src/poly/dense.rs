use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Rational;

use super::expansion::{Expansion, Expansions};
use super::{Evaluator, ExactCoefficient, PolyError, PolynomialOracle, Provenance};
use crate::numerics::{ComplexInterval, DdBall, DyadicComplex, OracleNumber};

#[derive(Clone, Debug)]
pub enum Coefficient {
    Exact(Rational, Rational),
    Oracle(OracleNumber),
}

impl Coefficient {
    pub fn real(r: Rational) -> Coefficient {
        Coefficient::Exact(r, Rational::new())
    }

    fn enclosure(&self, prec: u32) -> ComplexInterval {
        match self {
            Coefficient::Exact(re, im) => ComplexInterval::from_rational(re, im, prec),
            Coefficient::Oracle(o) => o.at_prec(prec),
        }
    }

    fn is_exact_zero(&self) -> bool {
        matches!(self, Coefficient::Exact(re, im) if *re == 0 && *im == 0)
    }
}

/// Coefficients `c_0..c_d` in ascending degree.
#[derive(Clone, Debug)]
pub struct CoefficientList {
    coeffs: Vec<Coefficient>,
}

impl CoefficientList {
    /// Trailing exact zeros are dropped so the leading coefficient is nonzero.
    pub fn new(mut coeffs: Vec<Coefficient>) -> Result<CoefficientList, PolyError> {
        while coeffs.last().is_some_and(Coefficient::is_exact_zero) {
            coeffs.pop();
        }
        let lead = coeffs.last().ok_or(PolyError::EmptyPolynomial)?;
        if let Coefficient::Oracle(o) = lead {
            if o.at_prec(1024).contains_zero() {
                return Err(PolyError::EmptyPolynomial);
            }
        }
        Ok(CoefficientList { coeffs })
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Result<CoefficientList, PolyError> {
        CoefficientList::new(coeffs.into_iter().map(Coefficient::real).collect())
    }

    pub fn from_complex_rationals(coeffs: Vec<ExactCoefficient>) -> Result<CoefficientList, PolyError> {
        CoefficientList::new(coeffs.into_iter().map(|(re, im)| Coefficient::Exact(re, im)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn as_slice(&self) -> &[Coefficient] {
        &self.coeffs
    }

    /// True when every coefficient is an exact real rational.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| matches!(c, Coefficient::Exact(_, im) if *im == 0))
    }

    /// All coefficients as exact rationals, if they are.
    pub fn exact(&self) -> Option<Vec<ExactCoefficient>> {
        self.coeffs
            .iter()
            .map(|c| match c {
                Coefficient::Exact(re, im) => Some((re.clone(), im.clone())),
                Coefficient::Oracle(_) => None,
            })
            .collect()
    }

    pub fn enclosures(&self, prec: u32) -> Vec<ComplexInterval> {
        self.coeffs.iter().map(|c| c.enclosure(prec)).collect()
    }
}

/// Horner evaluation over cached coefficient enclosures. Where the monomial
/// basis cancels too much, the evaluation is repeated in an exact expansion
/// about the nearest Gaussian integer.
pub(super) struct Horner {
    coeffs: Arc<CoefficientList>,
    cache: Mutex<HashMap<u32, Arc<Vec<ComplexInterval>>>>,
    balls: OnceLock<Vec<DdBall>>,
    expansions: OnceLock<Option<Expansions>>,
}

// relative bits below which a result is retried in a local expansion
const DD_RETRY_BITS: i32 = 40;

fn horner_pair(c: &[ComplexInterval], z: &ComplexInterval, prec: u32) -> (ComplexInterval, ComplexInterval) {
    let mut p = c[c.len() - 1].clone();
    let mut dp = ComplexInterval::zero();
    for a in c[..c.len() - 1].iter().rev() {
        dp = dp.mul(z, prec).add(&p, prec);
        p = p.mul(z, prec).add(a, prec);
    }
    (p, dp)
}

fn horner_pair_dd(c: &[DdBall], z: &DdBall) -> (DdBall, DdBall) {
    let mut p = c[c.len() - 1];
    let mut dp = DdBall::ZERO;
    for a in c[..c.len() - 1].iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(a);
    }
    (p, dp)
}

fn has_relative_bits(v: &ComplexInterval, bits: i64) -> bool {
    v.abs_lower().cmp_value(&v.width().mul_2exp(bits)).is_gt()
}

impl Horner {
    pub(super) fn new(coeffs: Arc<CoefficientList>) -> Horner {
        Horner { coeffs, cache: Mutex::new(HashMap::new()), balls: OnceLock::new(), expansions: OnceLock::new() }
    }

    fn enclosures(&self, prec: u32) -> Arc<Vec<ComplexInterval>> {
        let mut cache = self.cache.lock().unwrap();
        cache.entry(prec).or_insert_with(|| Arc::new(self.coeffs.enclosures(prec))).clone()
    }

    fn expansion_at(&self, re: f64, im: f64) -> Option<Arc<Expansion>> {
        self.expansions.get_or_init(|| Expansions::new(&self.coeffs)).as_ref()?.nearest(re, im)
    }

    fn local_pair(&self, z: &ComplexInterval, prec: u32) -> Option<(ComplexInterval, ComplexInterval)> {
        let e = self.expansion_at(z.re.mid().to_f64(), z.im.mid().to_f64())?;
        let c = e.enclosures(prec)?;
        let u = z.sub(&ComplexInterval::from_dyadic(&e.center, prec), prec);
        Some(horner_pair(&c, &u, prec))
    }
}

impl Evaluator for Horner {
    fn eval_pair(&self, z: &ComplexInterval, prec: u32) -> (ComplexInterval, ComplexInterval) {
        let (p, dp) = horner_pair(&self.enclosures(prec), z, prec);
        let half = prec as i64 / 2;
        if has_relative_bits(&p, half) && has_relative_bits(&dp, half) {
            return (p, dp);
        }
        self.local_pair(z, prec).unwrap_or((p, dp))
    }

    fn eval_pair_dd(&self, z: &DdBall) -> Option<(DdBall, DdBall)> {
        let c = self.balls.get_or_init(|| self.enclosures(256).iter().map(DdBall::from_interval).collect());
        let (p, dp) = horner_pair_dd(c, z);
        if p.has_relative_bits(DD_RETRY_BITS) && dp.has_relative_bits(DD_RETRY_BITS) {
            return Some((p, dp));
        }
        let (re, im) = z.mid_f64();
        match self.expansion_at(re, im) {
            Some(e) => Some(horner_pair_dd(&e.balls, &z.sub(&DdBall::from_f64(re.round(), im.round())))),
            None => Some((p, dp)),
        }
    }

    fn eval(&self, z: &ComplexInterval, prec: u32) -> ComplexInterval {
        let c = self.enclosures(prec);
        let mut p = c[c.len() - 1].clone();
        for a in c[..c.len() - 1].iter().rev() {
            p = p.mul(z, prec).add(a, prec);
        }
        if has_relative_bits(&p, prec as i64 / 2) {
            return p;
        }
        self.local_pair(z, prec).map_or(p, |(v, _)| v)
    }

    fn expansion_near(&self, c: &DyadicComplex) -> Option<Arc<Expansion>> {
        self.expansion_at(c.re.to_f64(), c.im.to_f64())
    }
}

/// Horner-based oracle pair for a dense coefficient list.
pub fn dense_oracle(coeffs: CoefficientList) -> PolynomialOracle {
    let is_real = coeffs.is_real();
    let degree = coeffs.degree();
    let shared = Arc::new(coeffs.clone());
    PolynomialOracle::new(degree, Arc::new(Horner::new(shared)), is_real, Provenance::Coefficients)
        .with_coefficients(coeffs)
}
