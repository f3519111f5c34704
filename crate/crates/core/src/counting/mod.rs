//! Root counting in discs: exclusion test `C0` and counting test `C*`.

mod pstar;
mod tstar;

use std::time::{Duration, Instant};

use rug::Rational;
use thiserror::Error;

use crate::geometry::Disc;
use crate::poly::PolynomialOracle;

pub use pstar::{choose_q, pstar_approx, pstar_count, s0_star, PSTAR_APPROX_MAX_BITS, PSTAR_MAX_BITS};
pub use tstar::{graeffe_count, graeffe_iterate, tstar, tstar_detail, TStarOutcome, TSTAR_MAX_PREC};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("polynomial evaluation on the contour contains zero")]
    ContourEvaluationContainsZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountKind {
    Certified,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub value: i64,
    pub kind: CountKind,
    /// last value of `L` tried
    pub precision_used: u32,
    pub evaluations: usize,
}

/// Isolation ratio and error bound used to pick the number of contour points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationParams {
    pub rho: Rational,
    pub e: Rational,
    pub q: u32,
}

impl IsolationParams {
    pub fn new(d: usize, rho: Rational, e: Rational) -> IsolationParams {
        let q = choose_q(d, &rho, &e);
        IsolationParams { rho, e, q }
    }
}

/// Which predicates back `C0` and `C*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TestMode {
    /// `C0` and `C*` both use T*
    #[default]
    TStarOnly,
    /// approximate P* filters `C0` before T*, and `C*` uses certified P*
    PStarFiltered,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TestCounters {
    pub c0_calls: u64,
    pub cstar_calls: u64,
    pub tstar_calls: u64,
    pub pstar_calls: u64,
    pub pstar_approx_calls: u64,
    /// approximate P* gave `-1`
    pub approx_undecided: u64,
    /// approximate P* gave `-2`
    pub approx_on_root: u64,
    /// approximate P* gave `0` but T* did not confirm it
    pub approx_wrong: u64,
    /// T* calls that needed more than double-double precision
    pub tstar_escalations: u64,
    pub c0_time: Duration,
    pub cstar_time: Duration,
}

impl TestCounters {
    fn tstar(&mut self, p: &PolynomialOracle, delta: &Disc) -> i64 {
        self.tstar_calls += 1;
        let out = tstar_detail(p, delta);
        if out.precision > 106 {
            self.tstar_escalations += 1;
        }
        out.value
    }
}

/// Exclusion test: `0` only if `delta` holds no root, `-1` otherwise.
pub fn c0_test(p: &PolynomialOracle, delta: &Disc, mode: TestMode, counters: &mut TestCounters) -> i64 {
    let start = Instant::now();
    counters.c0_calls += 1;
    let verdict = match mode {
        TestMode::TStarOnly => {
            if counters.tstar(p, delta) == 0 {
                0
            } else {
                -1
            }
        }
        TestMode::PStarFiltered => {
            counters.pstar_approx_calls += 1;
            let approx = pstar_approx(p, delta, &Rational::from(2)).value;
            match approx {
                -1 => {
                    counters.approx_undecided += 1;
                    -1
                }
                v if v > 0 => -1,
                v => {
                    if v == -2 {
                        counters.approx_on_root += 1;
                    }
                    let t = counters.tstar(p, delta);
                    if t == 0 {
                        0
                    } else {
                        if v == 0 {
                            counters.approx_wrong += 1;
                        }
                        -1
                    }
                }
            }
        }
    };
    counters.c0_time += start.elapsed();
    verdict
}

/// Counting test for a disc whose 4-fold dilation is isolated: the root
/// count, or `-1` if it could not be established.
pub fn cstar_test(p: &PolynomialOracle, delta: &Disc, mode: TestMode, counters: &mut TestCounters) -> i64 {
    let start = Instant::now();
    counters.cstar_calls += 1;
    let v = match mode {
        TestMode::TStarOnly => counters.tstar(p, delta),
        TestMode::PStarFiltered => {
            counters.pstar_calls += 1;
            pstar_count(p, &delta.times(2), &Rational::from(2)).value
        }
    };
    counters.cstar_time += start.elapsed();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Dyadic, DyadicComplex};
    use crate::poly::{dense_oracle, CoefficientList};

    fn fifth_roots() -> PolynomialOracle {
        let c = [-1, 0, 0, 0, 0, 1].iter().map(|&x| Rational::from(x)).collect();
        dense_oracle(CoefficientList::from_rationals(c).unwrap())
    }

    fn disc(re: f64, im: f64, r: f64) -> Disc {
        Disc::new(DyadicComplex::from_f64(re, im), Dyadic::from_f64(r))
    }

    #[test]
    fn filter_rejects_without_tstar() {
        let p = fifth_roots();
        let mut c = TestCounters::default();
        assert_eq!(c0_test(&p, &disc(1.0, 0.0, 0.25), TestMode::PStarFiltered, &mut c), -1);
        assert_eq!(c.tstar_calls, 0);
        assert_eq!(c.pstar_approx_calls, 1);
        assert_eq!(c0_test(&p, &disc(0.0, 0.0, 0.5), TestMode::PStarFiltered, &mut c), 0);
        assert_eq!(c.tstar_calls, 1);
        assert_eq!(c.c0_calls, 2);
    }

    #[test]
    fn modes_agree_on_counts() {
        let p = fifth_roots();
        let mut c = TestCounters::default();
        for mode in [TestMode::TStarOnly, TestMode::PStarFiltered] {
            assert_eq!(c0_test(&p, &disc(0.0, 0.0, 0.5), mode, &mut c), 0);
            assert_eq!(c0_test(&p, &disc(1.0, 0.0, 0.25), mode, &mut c), -1);
            assert_eq!(cstar_test(&p, &disc(1.0, 0.0, 0.125), mode, &mut c), 1);
            assert_eq!(cstar_test(&p, &disc(0.0, 0.0, 0.25), mode, &mut c), 0);
        }
        assert_eq!(c.pstar_calls, 2);
    }

    #[test]
    fn isolation_params() {
        let ip = IsolationParams::new(500, Rational::from(2), Rational::from((1, 4)));
        assert_eq!(ip.q, 11);
    }
}
