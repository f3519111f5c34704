//! Counting by discretized contour integrals of `p'/p`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use rug::{Integer, Rational};

use crate::geometry::Disc;
use crate::numerics::{root_of_unity, ComplexInterval, DdBall, DyadicComplex, Mag, RealInterval, GUARD_BITS};
use crate::poly::PolynomialOracle;

use super::{CountKind, CountResult, CountingError};

pub const PSTAR_MAX_BITS: u32 = 1 << 16;
pub const PSTAR_APPROX_MAX_BITS: u32 = 1 << 12;
const DD_PREC: u32 = 106;

/// Smallest `q >= 1` with `rho^q >= (d + e) / e`.
pub fn choose_q(d: usize, rho: &Rational, e: &Rational) -> u32 {
    assert!(*rho > 1, "isolation ratio must exceed 1");
    assert!(*e > 0, "error bound must be positive");
    let target = (Rational::from(d) + e) / e;
    let mut pw = rho.clone();
    let mut q = 1;
    while pw < target {
        pw *= rho;
        q += 1;
    }
    q
}

/// Enclosure of `(r/q) sum_g w^g p'(z_g)/p(z_g)`, `z_g = c + r w^g`, `w = e^(2 pi i/q)`.
///
/// Returns the evaluation count alongside. Fails when some `p(z_g)` cannot be
/// separated from zero at `2^-bits` resolution.
pub fn s0_star(
    p: &PolynomialOracle,
    delta: &Disc,
    q: u32,
    bits: u32,
) -> Result<(ComplexInterval, usize), CountingError> {
    let prec = bits + GUARD_BITS;
    if prec <= DD_PREC {
        if let Some(s) = s0_star_dd(p, delta, q) {
            return Ok((s.to_interval(prec), q as usize));
        }
    }
    let q64 = q as u64;
    let mut sum = ComplexInterval::zero();
    let mut evaluations = 0;
    for g in 0..q64 {
        let mut wp = prec;
        let term = loop {
            let w = root_of_unity(g, q64, wp);
            let z = ComplexInterval::from_dyadic(&delta.center, wp)
                .add(&w.mul_real(&RealInterval::from_dyadic(&delta.radius, wp), wp), wp);
            let (v, dv) = eval_pair(p, &z, wp);
            evaluations += 1;
            if v.is_division_safe() {
                break w.mul(&dv, wp).div(&v, wp).expect("checked division").round_to(prec);
            }
            if v.width_at_most_2exp(bits as i64) || wp >= 64 * prec {
                return Err(CountingError::ContourEvaluationContainsZero);
            }
            wp *= 2;
        };
        sum = sum.add(&term, prec);
    }
    let scale = RealInterval::from_rational(&(delta.radius.to_rational() / q), prec);
    Ok((sum.mul_real(&scale, prec), evaluations))
}

thread_local! {
    static UNITY_DD: RefCell<HashMap<u32, Rc<Vec<DdBall>>>> = RefCell::new(HashMap::new());
}

fn unity_dd(q: u32) -> Rc<Vec<DdBall>> {
    UNITY_DD.with(|cache| {
        cache
            .borrow_mut()
            .entry(q)
            .or_insert_with(|| Rc::new((0..q as u64).map(|g| DdBall::from_interval(&root_of_unity(g, q as u64, 128))).collect()))
            .clone()
    })
}

/// The contour sum in double-double arithmetic; `None` when the evaluator has
/// no such route or some `p(z_g)` cannot be separated from zero there.
fn s0_star_dd(p: &PolynomialOracle, delta: &Disc, q: u32) -> Option<DdBall> {
    let c = DdBall::from_interval(&ComplexInterval::from_dyadic(&delta.center, 128));
    let r = DdBall::from_interval(&ComplexInterval::from_dyadic(&DyadicComplex::real(delta.radius.clone()), 128));
    let mut sum = DdBall::ZERO;
    for w in unity_dd(q).iter() {
        let (v, dv) = p.eval_pair_dd(&c.add(&r.mul(w)))?;
        sum = sum.add(&w.mul(&dv).mul(&v.inv()?));
    }
    Some(sum.mul(&r).mul(&DdBall::from_f64(q as f64, 0.0).inv()?))
}

/// `(p(z), p'(z))`, in double-double arithmetic when that is precise enough.
fn eval_pair(p: &PolynomialOracle, z: &ComplexInterval, wp: u32) -> (ComplexInterval, ComplexInterval) {
    if wp <= DD_PREC {
        if let Some((v, dv)) = p.eval_pair_dd(&DdBall::from_interval(z)) {
            return (v.to_interval(wp), dv.to_interval(wp));
        }
    }
    p.eval_pair(z, wp)
}

fn inflated(s: &ComplexInterval, by: Mag) -> ComplexInterval {
    let mut s = s.clone();
    s.re.add_error(by);
    s.im.add_error(by);
    s
}

fn in_range(k: Integer, d: usize) -> Option<i64> {
    let k = k.to_i64()?;
    (0..=d as i64).contains(&k).then_some(k)
}

/// Certified count of roots in `delta`, valid when `delta` is `rho`-isolated.
/// Value `-1` means the result could not be certified within the precision cap.
pub fn pstar_count(p: &PolynomialOracle, delta: &Disc, rho: &Rational) -> CountResult {
    let d = p.degree();
    let q = choose_q(d, rho, &Rational::from((1, 4)));
    let mut bits = 53;
    let mut evaluations = 0;
    while bits <= PSTAR_MAX_BITS {
        if let Ok((s, n)) = s0_star(p, delta, q, bits) {
            evaluations += n;
            if s.width_at_most_2exp(1) {
                // a narrow enclosure without an in-range integer means the
                // isolation hypothesis is false; more bits will not help
                let value = inflated(&s, Mag::pow2(-2)).unique_integer().and_then(|k| in_range(k, d)).unwrap_or(-1);
                return CountResult { value, kind: CountKind::Certified, precision_used: bits, evaluations };
            }
        } else {
            evaluations += q as usize;
        }
        bits *= 2;
    }
    CountResult { value: -1, kind: CountKind::Certified, precision_used: PSTAR_MAX_BITS, evaluations }
}

/// Heuristic count: `-2` when a contour point is numerically a root, `-1`
/// when no single integer in `0..=d` is indicated.
pub fn pstar_approx(p: &PolynomialOracle, delta: &Disc, rho: &Rational) -> CountResult {
    let d = p.degree();
    let q = choose_q(d, rho, &Rational::from((1, 4)));
    let mut bits = 53;
    let mut evaluations = 0;
    let done = |value, bits, evaluations| CountResult { value, kind: CountKind::Heuristic, precision_used: bits, evaluations };
    while bits <= PSTAR_APPROX_MAX_BITS {
        match s0_star(p, delta, q, bits) {
            Err(CountingError::ContourEvaluationContainsZero) => return done(-2, bits, evaluations + q as usize),
            Ok((s, n)) => {
                evaluations += n;
                if s.width_at_most_2exp(1) {
                    let value = inflated(&s, Mag::pow2(-1)).unique_integer().and_then(|k| in_range(k, d)).unwrap_or(-1);
                    return done(value, bits, evaluations);
                }
            }
        }
        bits *= 2;
    }
    done(-1, PSTAR_APPROX_MAX_BITS, evaluations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Dyadic, DyadicComplex};
    use crate::poly::{dense_oracle, CoefficientList};

    fn poly(c: &[i64]) -> PolynomialOracle {
        dense_oracle(CoefficientList::from_rationals(c.iter().map(|&x| Rational::from(x)).collect()).unwrap())
    }

    fn disc(re: f64, im: f64, r: f64) -> Disc {
        Disc::new(DyadicComplex::from_f64(re, im), Dyadic::from_f64(r))
    }

    fn rat(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn q_choices() {
        assert_eq!(choose_q(500, &rat(2, 1), &rat(1, 4)), 11);
        assert_eq!(choose_q(1, &rat(2, 1), &rat(1, 1)), 1);
        assert_eq!(choose_q(100, &rat(4, 1), &rat(1, 4)), 5);
        // rho^q must reach (d + e)/e exactly or beyond
        assert_eq!(choose_q(3, &rat(2, 1), &rat(1, 1)), 2);
    }

    #[test]
    fn power_sum_of_single_root() {
        // (z - 1/2) on the unit disc with q = 4: 1/(1 - 2^-4) = 16/15
        let p = dense_oracle(CoefficientList::from_rationals(vec![rat(-1, 2), rat(1, 1)]).unwrap());
        let (s, n) = s0_star(&p, &disc(0.0, 0.0, 1.0), 4, 80).unwrap();
        assert_eq!(n, 4);
        assert!(s.contains_rational(&rat(16, 15), &Rational::new()));
        // root outside: 2^-4 / (2^-4 - 1) = -1/15
        let p = poly(&[-2, 1]);
        let (s, _) = s0_star(&p, &disc(0.0, 0.0, 1.0), 4, 80).unwrap();
        assert!(s.contains_rational(&rat(-1, 15), &Rational::new()));
        // z^5: the sum is exactly 5 for q > 5
        let p = poly(&[0, 0, 0, 0, 0, 1]);
        let (s, _) = s0_star(&p, &disc(0.0, 0.0, 1.0), 7, 80).unwrap();
        assert!(s.contains_rational(&rat(5, 1), &Rational::new()));
        assert!(s.width_at_most_2exp(60));
    }

    #[test]
    fn certified_count_in_isolated_disc() {
        // (z-1)(z-2)(z-3)(z-4)(z-5)
        let p = poly(&[-120, 274, -225, 85, -15, 1]);
        let r = pstar_count(&p, &disc(1.1, 0.0, 0.3), &rat(2, 1));
        assert_eq!(r.value, 1);
        assert_eq!(r.kind, CountKind::Certified);
        assert_eq!(pstar_count(&p, &disc(3.0, 0.0, 0.4), &rat(2, 1)).value, 1);
        assert_eq!(pstar_count(&p, &disc(3.0, 0.0, 0.4), &rat(2, 1)).precision_used, 53);
        assert_eq!(pstar_count(&p, &disc(6.5, 0.0, 0.5), &rat(2, 1)).value, 0);
    }

    #[test]
    fn approximate_count_on_root() {
        // the contour of D(0, 1) passes through the root 1 of z^5 - 1
        let p = poly(&[-1, 0, 0, 0, 0, 1]);
        let r = pstar_approx(&p, &disc(0.0, 0.0, 1.0), &rat(2, 1));
        assert_eq!(r.value, -2);
        assert_eq!(r.kind, CountKind::Heuristic);
        assert_eq!(pstar_approx(&p, &disc(0.0, 0.0, 0.5), &rat(2, 1)).value, 0);
        assert_eq!(pstar_approx(&p, &disc(1.0, 0.0, 0.25), &rat(2, 1)).value, 1);
    }
}
