//! Evaluation oracles for polynomials and their derivatives.
//!
//! A [`PolynomialOracle`] only promises enclosures of `p(z)` and `p'(z)`.
//! Exact coefficients are attached when they are cheap to know; the
//! coefficient-based counting test uses them and falls back to interpolation
//! otherwise.

mod dense;
mod expansion;
mod families;
mod file;
mod series;

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Rational;

use crate::numerics::{ComplexInterval, DdBall, DyadicComplex, Mag, OracleNumber, GUARD_BITS};

pub use dense::{dense_oracle, Coefficient, CoefficientList};
pub use expansion::{Expansion, EXPANSION_BITS};
pub use families::{
    bernoulli_numbers, family_bernoulli, family_mandelbrot, family_mignotte, family_runnels,
    mandelbrot_coefficients, runnels_coefficients,
};
pub use file::{parse_poly_file, parse_poly_str};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("line {line}: {message}")]
    FormatError { line: usize, message: String },
    #[error("polynomial has no nonzero coefficient")]
    EmptyPolynomial,
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid family descriptor `{0}`")]
    BadFamily(String),
}

/// Straight-line or dense evaluation of `p` and `p'` at a working precision.
pub trait Evaluator: Send + Sync {
    /// Enclosures of `(p(z), p'(z))` for every point of `z`.
    fn eval_pair(&self, z: &ComplexInterval, prec: u32) -> (ComplexInterval, ComplexInterval);

    /// Enclosure of `p(z)`. Override when `p` alone is cheaper.
    fn eval(&self, z: &ComplexInterval, prec: u32) -> ComplexInterval {
        self.eval_pair(z, prec).0
    }

    /// `(p(z), p'(z))` in double-double ball arithmetic, if supported.
    fn eval_pair_dd(&self, _z: &DdBall) -> Option<(DdBall, DdBall)> {
        None
    }

    /// The first `k` Taylor coefficients of `p(c + r t)` in double-double ball
    /// arithmetic, if the evaluator can expand itself.
    fn taylor_dd(&self, _c: &DdBall, _r: &DdBall, _k: usize) -> Option<Vec<DdBall>> {
        None
    }

    /// Exact re-expansion of a dense polynomial about a lattice point near `c`.
    fn expansion_near(&self, _c: &DyadicComplex) -> Option<Arc<Expansion>> {
        None
    }
}

/// Benchmark families with their parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Mignotte { a: u32, d: u32 },
    Mandelbrot { k: u32 },
    Bernoulli { d: u32 },
    Runnels { k: u32 },
}

impl Family {
    pub fn oracle(&self) -> PolynomialOracle {
        match *self {
            Family::Mignotte { a, d } => family_mignotte(a, d),
            Family::Mandelbrot { k } => family_mandelbrot(k),
            Family::Bernoulli { d } => family_bernoulli(d),
            Family::Runnels { k } => family_runnels(k),
        }
    }

    /// Short label in the style of the benchmark tables.
    pub fn label(&self) -> String {
        match *self {
            Family::Mignotte { a, d } => format!("Mig({a},{d})"),
            Family::Mandelbrot { k } => format!("Man_{k}"),
            Family::Bernoulli { d } => format!("Ber{d}"),
            Family::Runnels { k } => format!("Run_{k}"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Mignotte { a, d } => write!(f, "mignotte:a={a},d={d}"),
            Family::Mandelbrot { k } => write!(f, "mandelbrot:k={k}"),
            Family::Bernoulli { d } => write!(f, "bernoulli:d={d}"),
            Family::Runnels { k } => write!(f, "runnels:k={k}"),
        }
    }
}

impl FromStr for Family {
    type Err = PolyError;

    /// `NAME:k=v,...`, e.g. `mignotte:a=14,d=64`.
    fn from_str(s: &str) -> Result<Family, PolyError> {
        let bad = |why: &str| PolyError::BadFamily(format!("{s} ({why})"));
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let mut params = HashMap::new();
        for kv in args.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let v: u32 = v.trim().parse().map_err(|_| bad("parameter must be a non-negative integer"))?;
            if params.insert(k.trim().to_string(), v).is_some() {
                return Err(bad("repeated parameter"));
            }
        }
        let mut take = |key: &str| params.remove(key).ok_or_else(|| bad(&format!("missing `{key}`")));
        let fam = match name.trim().to_ascii_lowercase().as_str() {
            "mignotte" | "mig" => {
                let a = take("a")?;
                let d = take("d")?;
                if a < 1 || d < 3 {
                    return Err(bad("need a >= 1 and d >= 3"));
                }
                Family::Mignotte { a, d }
            }
            "mandelbrot" | "man" => Family::Mandelbrot { k: take("k")? },
            "bernoulli" | "ber" => {
                let d = take("d")?;
                if d < 1 {
                    return Err(bad("need d >= 1"));
                }
                Family::Bernoulli { d }
            }
            "runnels" | "run" => Family::Runnels { k: take("k")? },
            _ => return Err(bad("unknown family")),
        };
        if let Some(extra) = params.keys().next() {
            return Err(bad(&format!("unexpected parameter `{extra}`")));
        }
        Ok(fam)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Family(Family),
    File(PathBuf),
    Coefficients,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Family(fam) => write!(f, "{fam}"),
            Provenance::File(p) => write!(f, "file:{}", p.display()),
            Provenance::Coefficients => f.write_str("coefficients"),
        }
    }
}

/// Exact complex rational coefficient, ascending degree.
pub type ExactCoefficient = (Rational, Rational);

type EnclosureCache = Mutex<HashMap<u32, Arc<Vec<ComplexInterval>>>>;

/// Coefficients as double-double balls, with upper bounds of their moduli.
#[derive(Clone, Debug)]
pub struct CoefficientBalls {
    pub balls: Vec<DdBall>,
    pub magnitudes: Vec<Mag>,
}

/// Paired evaluation oracles for `p` and `p'`.
#[derive(Clone)]
pub struct PolynomialOracle {
    degree: usize,
    evaluator: Arc<dyn Evaluator>,
    is_real: bool,
    provenance: Provenance,
    coefficients: Option<Arc<CoefficientList>>,
    enclosures: Arc<EnclosureCache>,
    balls: Arc<OnceLock<CoefficientBalls>>,
}

impl fmt::Debug for PolynomialOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolynomialOracle")
            .field("degree", &self.degree)
            .field("is_real", &self.is_real)
            .field("provenance", &self.provenance)
            .field("has_coefficients", &self.coefficients.is_some())
            .finish()
    }
}

impl PolynomialOracle {
    pub fn new(degree: usize, evaluator: Arc<dyn Evaluator>, is_real: bool, provenance: Provenance) -> Self {
        PolynomialOracle {
            degree,
            evaluator,
            is_real,
            provenance,
            coefficients: None,
            enclosures: Arc::new(Mutex::new(HashMap::new())),
            balls: Arc::new(OnceLock::new()),
        }
    }

    pub fn with_coefficients(mut self, coeffs: CoefficientList) -> Self {
        assert_eq!(coeffs.degree(), self.degree, "coefficient list disagrees with degree");
        self.coefficients = Some(Arc::new(coeffs));
        self.enclosures = Arc::new(Mutex::new(HashMap::new()));
        self.balls = Arc::new(OnceLock::new());
        self
    }

    /// The same oracle with coefficients hidden, so every consumer treats it as a black box.
    pub fn black_box(&self) -> Self {
        PolynomialOracle {
            coefficients: None,
            enclosures: Arc::new(Mutex::new(HashMap::new())),
            balls: Arc::new(OnceLock::new()),
            ..self.clone()
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn coefficients(&self) -> Option<&CoefficientList> {
        self.coefficients.as_deref()
    }

    /// Enclosures of all coefficients at working precision `prec`, if known.
    pub fn coefficient_enclosures(&self, prec: u32) -> Option<Arc<Vec<ComplexInterval>>> {
        let coeffs = self.coefficients.as_ref()?;
        let mut cache = self.enclosures.lock().unwrap();
        let entry = cache.entry(prec).or_insert_with(|| Arc::new(coeffs.enclosures(prec)));
        Some(entry.clone())
    }

    /// Double-double coefficient balls, if coefficients are known.
    pub fn coefficient_balls(&self) -> Option<&CoefficientBalls> {
        self.coefficients.as_ref()?;
        Some(self.balls.get_or_init(|| {
            let enc = self.coefficient_enclosures(256).expect("coefficients present");
            CoefficientBalls {
                balls: enc.iter().map(DdBall::from_interval).collect(),
                magnitudes: enc.iter().map(ComplexInterval::abs_upper).collect(),
            }
        }))
    }

    /// `(p(z), p'(z))` at working precision `prec`; no width guarantee.
    pub fn eval_pair(&self, z: &ComplexInterval, prec: u32) -> (ComplexInterval, ComplexInterval) {
        self.evaluator.eval_pair(z, prec)
    }

    /// Double-double evaluation of `(p(z), p'(z))`; `None` for evaluators without one.
    pub fn eval_pair_dd(&self, z: &DdBall) -> Option<(DdBall, DdBall)> {
        self.evaluator.eval_pair_dd(z)
    }

    /// First `k` Taylor coefficients of `p(c + r t)`, when the evaluator can
    /// expand its own program.
    pub fn taylor_dd(&self, c: &DdBall, r: &DdBall, k: usize) -> Option<Vec<DdBall>> {
        self.evaluator.taylor_dd(c, r, k)
    }

    /// Coefficients of `p` about a nearby Gaussian integer, for dense
    /// polynomials with exact coefficients.
    pub fn expansion_near(&self, c: &DyadicComplex) -> Option<Arc<Expansion>> {
        self.coefficients.as_ref()?;
        self.evaluator.expansion_near(c)
    }

    pub fn eval_at(&self, z: &ComplexInterval, prec: u32) -> ComplexInterval {
        self.evaluator.eval(z, prec)
    }

    fn contract_eval(&self, point: &OracleNumber, bits: u32, derivative: bool) -> ComplexInterval {
        let mut prec = bits + GUARD_BITS;
        loop {
            let z = point.at_prec(prec);
            let v = if derivative { self.evaluator.eval_pair(&z, prec).1 } else { self.evaluator.eval(&z, prec) };
            if v.width_at_most_2exp(bits as i64) {
                return v;
            }
            prec = prec.checked_mul(2).expect("evaluation oracle failed to converge");
        }
    }

    /// Evaluation oracle for `p`: contains `p(a)`, width at most `2^-bits`.
    pub fn eval_p(&self, point: &OracleNumber, bits: u32) -> ComplexInterval {
        self.contract_eval(point, bits, false)
    }

    /// Evaluation oracle for `p'`.
    pub fn eval_dp(&self, point: &OracleNumber, bits: u32) -> ComplexInterval {
        self.contract_eval(point, bits, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_descriptors_parse() {
        assert_eq!("mignotte:a=14,d=64".parse::<Family>().unwrap(), Family::Mignotte { a: 14, d: 64 });
        assert_eq!("mandelbrot:k=6".parse::<Family>().unwrap(), Family::Mandelbrot { k: 6 });
        assert_eq!("bernoulli:d=64".parse::<Family>().unwrap(), Family::Bernoulli { d: 64 });
        assert_eq!("runnels:k=8".parse::<Family>().unwrap(), Family::Runnels { k: 8 });
        assert!("mignotte:a=14".parse::<Family>().is_err());
        assert!("mignotte:a=14,d=64,x=1".parse::<Family>().is_err());
        assert!("foo:k=1".parse::<Family>().is_err());
        let f = Family::Mignotte { a: 14, d: 64 };
        assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
    }
}
