//! Oracle numbers: precision-queryable complex numbers.

use std::fmt;
use std::sync::{Arc, Mutex};

use super::dyadic::DyadicComplex;
use super::interval::ComplexInterval;
use super::GUARD_BITS;

type Procedure = dyn Fn(u32) -> ComplexInterval + Send + Sync;

/// A complex number `a` known through enclosures: `refine(L)` contains `a`
/// and has width at most `2^-L`.
#[derive(Clone)]
pub struct OracleNumber {
    kind: Kind,
}

#[derive(Clone)]
enum Kind {
    Exact(DyadicComplex),
    Procedure {
        // enclosure at a given working precision; must converge as precision grows
        f: Arc<Procedure>,
        // highest-precision answer so far: (L, interval)
        memo: Arc<Mutex<Option<(u32, ComplexInterval)>>>,
    },
}

impl OracleNumber {
    pub fn exact(z: DyadicComplex) -> OracleNumber {
        OracleNumber { kind: Kind::Exact(z) }
    }

    /// Wrap a procedure that encloses the number at a given working precision.
    /// `refine` raises the working precision until the width contract holds.
    pub fn from_fn(f: impl Fn(u32) -> ComplexInterval + Send + Sync + 'static) -> OracleNumber {
        OracleNumber {
            kind: Kind::Procedure { f: Arc::new(f), memo: Arc::new(Mutex::new(None)) },
        }
    }

    pub fn as_exact(&self) -> Option<&DyadicComplex> {
        match &self.kind {
            Kind::Exact(z) => Some(z),
            Kind::Procedure { .. } => None,
        }
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn refine(&self, bits: u32) -> ComplexInterval {
        assert!(bits >= 1, "precision must be positive");
        match &self.kind {
            Kind::Exact(z) => ComplexInterval::exact_dyadic(z),
            Kind::Procedure { f, memo } => {
                if let Some((l, iv)) = memo.lock().unwrap().as_ref() {
                    if *l >= bits {
                        let coarse = iv.round_to(bits + GUARD_BITS);
                        if coarse.width_at_most_2exp(bits as i64) {
                            return coarse;
                        }
                        return iv.clone();
                    }
                }
                let mut prec = bits + GUARD_BITS;
                let iv = loop {
                    let iv = f(prec);
                    if iv.width_at_most_2exp(bits as i64) {
                        break iv;
                    }
                    prec = prec.checked_mul(2).expect("oracle failed to converge");
                };
                let mut slot = memo.lock().unwrap();
                if slot.as_ref().map_or(true, |(l, _)| *l < bits) {
                    *slot = Some((bits, iv.clone()));
                }
                iv
            }
        }
    }

    /// Enclosure at working precision `prec`, without the width contract.
    pub fn at_prec(&self, prec: u32) -> ComplexInterval {
        match &self.kind {
            Kind::Exact(z) => ComplexInterval::exact_dyadic(z),
            Kind::Procedure { f, .. } => f(prec),
        }
    }
}

impl fmt::Debug for OracleNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Exact(z) => write!(f, "OracleNumber::Exact({z})"),
            Kind::Procedure { .. } => f.write_str("OracleNumber::Procedure"),
        }
    }
}

impl From<DyadicComplex> for OracleNumber {
    fn from(z: DyadicComplex) -> OracleNumber {
        OracleNumber::exact(z)
    }
}

/// `oracle_refine` under its operation name.
pub fn oracle_refine(o: &OracleNumber, bits: u32) -> ComplexInterval {
    o.refine(bits)
}
