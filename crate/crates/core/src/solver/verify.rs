//! Post-hoc checks of a cluster report and of the annulus precondition.

use crate::counting::tstar;
use crate::geometry::{ClusterReport, Disc, Square};
use crate::numerics::{Dyadic, DyadicComplex};
use crate::poly::PolynomialOracle;

/// Outcome of [`verify_report_detailed`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub problems: Vec<String>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

fn scaled(d: &Disc, num: i64, log_den: i64) -> Disc {
    d.dilate(&Dyadic::new(num.into(), -log_den))
}

/// Certifies `#roots(Δ) = #roots(3Δ) = m`: T* returns `m` on some disc inside
/// `Δ` and on some disc containing `3Δ`, and counts are monotone under inclusion.
fn certify_cluster(p: &PolynomialOracle, d: &Disc, m: u64) -> Result<(), String> {
    let m = m as i64;
    // radius factors num / 2^log_den
    let inner = [(1, 0), (3, 2), (1, 1), (1, 2)];
    let outer = [(3, 0), (7, 1), (4, 0)];
    let hit = |factors: &[(i64, i64)]| factors.iter().map(|&(n, k)| tstar(p, &scaled(d, n, k))).find(|&v| v >= 0);
    match hit(&inner) {
        Some(v) if v == m => {}
        Some(v) => return Err(format!("{d}: counted {v} roots inside, reported {m}")),
        None => return Err(format!("{d}: could not count the roots inside")),
    }
    match hit(&outer) {
        Some(v) if v == m => Ok(()),
        Some(v) => Err(format!("{d}: counted {v} roots in the 3-fold dilation, reported {m}")),
        None => Err(format!("{d}: could not count the roots in the 3-fold dilation")),
    }
}

/// Re-checks the output contract: multiplicities confirmed by independent
/// counts on `Δ` and `3Δ`, discs pairwise disjoint, total at most the degree.
pub fn verify_report_detailed(p: &PolynomialOracle, report: &ClusterReport) -> Verification {
    let mut problems = Vec::new();
    for (d, m) in &report.clusters {
        if *m == 0 {
            problems.push(format!("{d}: zero multiplicity"));
        } else if let Err(e) = certify_cluster(p, d, *m) {
            problems.push(e);
        }
    }
    for (i, (a, _)) in report.clusters.iter().enumerate() {
        for (b, _) in &report.clusters[i + 1..] {
            if a.intersects_disc(b) {
                problems.push(format!("{a} and {b} overlap"));
            }
        }
    }
    if report.total_roots() > p.degree() as u64 {
        problems.push(format!("total multiplicity {} exceeds the degree {}", report.total_roots(), p.degree()));
    }
    Verification { problems }
}

pub fn verify_report(p: &PolynomialOracle, report: &ClusterReport) -> bool {
    verify_report_detailed(p, report).ok()
}

/// Squares of the annulus `2B_0 \ B_0` whose discs could not be shown root-free;
/// empty when the solver precondition is certified.
pub fn check_annulus(p: &PolynomialOracle, b0: &Square) -> Vec<Square> {
    const MAX_REFINE: usize = 4;
    let w = &b0.width;
    let big = b0.scaled(&Dyadic::from_i64(2));
    // 8 x 8 grid over 2B_0; the inner 4 x 4 is B_0 itself
    let step = w.mul_2exp(-2);
    let mut work: Vec<(Square, usize)> = Vec::new();
    for i in 0..8i64 {
        for j in 0..8i64 {
            if (2..6).contains(&i) && (2..6).contains(&j) {
                continue;
            }
            let half = step.mul_2exp(-1);
            let cx = &(&big.x_min() + &(&step * &Dyadic::from_i64(i))) + &half;
            let cy = &(&big.y_min() + &(&step * &Dyadic::from_i64(j))) + &half;
            work.push((Square::new(DyadicComplex::new(cx, cy), step.clone()), 0));
        }
    }
    let mut doubtful = Vec::new();
    while let Some((s, level)) = work.pop() {
        if tstar(p, &s.containing_disc()) == 0 {
            continue;
        }
        if level == MAX_REFINE {
            doubtful.push(s);
            continue;
        }
        for child in s.children() {
            if !b0.contains_square(&child) {
                work.push((child, level + 1));
            }
        }
    }
    doubtful.sort_by(|a, b| a.corner_cmp(b));
    doubtful
}

#[cfg(test)]
mod tests {
    use rug::Rational;

    use super::*;
    use crate::poly::{dense_oracle, CoefficientList};
    use crate::solver::{solve_lcp, SolverConfig};

    fn poly(c: &[i64]) -> PolynomialOracle {
        dense_oracle(CoefficientList::from_rationals(c.iter().map(|&x| Rational::from(x)).collect()).unwrap())
    }

    fn roi(w: i64) -> Square {
        Square::new(DyadicComplex::zero(), Dyadic::from_i64(w))
    }

    #[test]
    fn tampered_radius_is_rejected() {
        let p = poly(&[-1, 0, 1]);
        let mut r = solve_lcp(&p, &SolverConfig::new(roi(4), Dyadic::pow2(-10))).unwrap();
        assert!(verify_report(&p, &r));
        // a radius of 3/4 around -1 makes the 3-fold dilation reach +1
        r.clusters[0].0.radius = Dyadic::new(3.into(), -2);
        let v = verify_report_detailed(&p, &r);
        assert!(!v.ok());
    }

    #[test]
    fn wrong_multiplicity_is_rejected() {
        let p = poly(&[-1, 0, 1]);
        let mut r = solve_lcp(&p, &SolverConfig::new(roi(4), Dyadic::pow2(-10))).unwrap();
        r.clusters[1].1 = 2;
        assert!(!verify_report(&p, &r));
    }

    #[test]
    fn empty_report_is_valid() {
        let p = poly(&[-10, 1]);
        let r = solve_lcp(&p, &SolverConfig::new(roi(4), Dyadic::pow2(-10))).unwrap();
        assert!(r.clusters.is_empty());
        assert!(verify_report(&p, &r));
    }

    #[test]
    fn annulus_check() {
        // roots at +-1 are inside [-2, 2]^2 and far from the annulus
        assert!(check_annulus(&poly(&[-1, 0, 1]), &roi(4)).is_empty());
        // a root at 3 sits in 2B_0 \ B_0
        let bad = check_annulus(&poly(&[-3, 1]), &roi(4));
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|s| s.containing_disc().contains_point(&DyadicComplex::from_f64(3.0, 0.0))));
    }
}
