//! Subdivision drivers for the local clustering problem.

mod verify;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use thiserror::Error;

use crate::counting::{c0_test, cstar_test, TestCounters, TestMode};
use crate::geometry::{group_components, is_separated, ClusterReport, Component, ImaginarySign, SolveStats, Square};
use crate::numerics::Dyadic;
use crate::poly::PolynomialOracle;

pub use verify::{check_annulus, verify_report, verify_report_detailed, Verification};

pub const DEFAULT_MAX_DEPTH: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("subdivision depth exceeded the cap of {0}")]
    DepthCapExceeded(usize),
    #[error("real symmetry needs a polynomial with real coefficients")]
    NotReal,
    #[error("real symmetry needs a region of interest centered on the real axis")]
    NotSymmetric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub roi: Square,
    pub epsilon: Dyadic,
    pub mode: TestMode,
    pub real_symmetry: bool,
    pub max_depth: usize,
    /// keep every box of the subdivision tree in the report
    pub record_tree: bool,
}

impl SolverConfig {
    pub fn new(roi: Square, epsilon: Dyadic) -> SolverConfig {
        assert!(epsilon.signum() == Ordering::Greater, "epsilon must be positive");
        SolverConfig {
            roi,
            epsilon,
            mode: TestMode::TStarOnly,
            real_symmetry: false,
            max_depth: DEFAULT_MAX_DEPTH,
            record_tree: false,
        }
    }

    pub fn with_mode(mut self, mode: TestMode) -> SolverConfig {
        self.mode = mode;
        self
    }

    pub fn with_real_symmetry(mut self, on: bool) -> SolverConfig {
        self.real_symmetry = on;
        self
    }
}

struct Entry {
    comp: Component,
    depth: usize,
    seq: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // the heap pops the greatest entry, which must be the first by priority
    fn cmp(&self, other: &Self) -> Ordering {
        other.comp.priority_cmp(&self.comp).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Components waiting for processing, widest component box first.
#[derive(Default)]
pub struct WorkQueue {
    heap: BinaryHeap<Entry>,
    seq: u64,
}

impl WorkQueue {
    pub fn new() -> WorkQueue {
        WorkQueue::default()
    }

    pub fn push(&mut self, comp: Component, depth: usize) {
        self.seq += 1;
        self.heap.push(Entry { comp, depth, seq: self.seq });
    }

    pub fn pop(&mut self) -> Option<(Component, usize)> {
        self.heap.pop().map(|e| (e.comp, e.depth))
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.heap.iter().map(|e| &e.comp)
    }
}

fn quadrisect_counted(
    c: &Component,
    p: &PolynomialOracle,
    cfg: &SolverConfig,
    counters: &mut TestCounters,
) -> (Vec<Component>, Vec<Square>) {
    let mut kept = Vec::new();
    for b in c.boxes() {
        if cfg.real_symmetry && b.imaginary_sign() == ImaginarySign::Negative {
            continue;
        }
        for child in b.children() {
            // the closed upper child already covers the real segment
            if cfg.real_symmetry && child.in_closed_lower_half_plane() {
                continue;
            }
            if c0_test(p, &child.containing_disc(), cfg.mode, counters) == -1 {
                kept.push(child);
            }
        }
    }
    (group_components(&kept, &cfg.roi), kept)
}

/// Children of the boxes of `c` that may hold roots, grouped into components.
pub fn quadrisect(c: &Component, p: &PolynomialOracle, cfg: &SolverConfig) -> Vec<Component> {
    quadrisect_counted(c, p, cfg, &mut TestCounters::default()).0
}

/// Clusters of roots in the region of interest, each in a disc of radius at most epsilon.
pub fn solve_lcp(p: &PolynomialOracle, cfg: &SolverConfig) -> Result<ClusterReport, SolverError> {
    let cfg = SolverConfig { real_symmetry: false, ..cfg.clone() };
    run(p, &cfg)
}

/// Same output contract as [`solve_lcp`], exploiting the symmetry of the roots
/// of a real polynomial; only the upper half plane is subdivided.
pub fn solve_lcp_real(p: &PolynomialOracle, cfg: &SolverConfig) -> Result<ClusterReport, SolverError> {
    if !p.is_real() {
        return Err(SolverError::NotReal);
    }
    if !cfg.roi.center.im.is_zero() {
        return Err(SolverError::NotSymmetric);
    }
    let cfg = SolverConfig { real_symmetry: true, ..cfg.clone() };
    run(p, &cfg)
}

/// Runs the solver selected by `cfg.real_symmetry`.
pub fn solve(p: &PolynomialOracle, cfg: &SolverConfig) -> Result<ClusterReport, SolverError> {
    if cfg.real_symmetry {
        solve_lcp_real(p, cfg)
    } else {
        solve_lcp(p, cfg)
    }
}

fn run(p: &PolynomialOracle, cfg: &SolverConfig) -> Result<ClusterReport, SolverError> {
    let start = Instant::now();
    let b0 = &cfg.roi;
    let mut counters = TestCounters::default();
    let mut report = ClusterReport::default();
    let mut stats = SolveStats { tree_size: 1, ..SolveStats::default() };
    if cfg.record_tree {
        report.tree.push(b0.clone());
    }
    let mut queue = WorkQueue::new();
    queue.push(Component::root(b0), 0);

    while let Some((c, depth)) = queue.pop() {
        stats.depth = stats.depth.max(depth);
        if depth > cfg.max_depth {
            return Err(SolverError::DepthCapExceeded(cfg.max_depth));
        }
        let (c, separated, mirrored) = if !cfg.real_symmetry {
            let sep = is_separated(&c, queue.components(), b0);
            (c, sep, false)
        } else if c.imaginary_sign() != ImaginarySign::Positive {
            let closed = c.conjugate_closure(b0).expect("kept components meet the real axis or lie above it");
            let sep = is_separated(&closed, queue.components(), b0);
            (closed, sep, false)
        } else {
            let sep = is_separated(&c, queue.components(), b0) && !c.conj(b0).meets_disc(&c.disc().times(4));
            (c, sep, true)
        };

        if c.width() <= &cfg.epsilon && c.is_compact() && separated {
            let delta = c.disc();
            let m = cstar_test(p, &delta, cfg.mode, &mut counters);
            if m > 0 {
                if mirrored {
                    report.clusters.push((delta.conj(), m as u64));
                }
                report.clusters.push((delta, m as u64));
                continue;
            }
        }

        let (children, kept) = quadrisect_counted(&c, p, cfg, &mut counters);
        stats.tree_size += kept.len();
        if cfg.record_tree {
            report.tree.extend(kept);
        }
        for child in children {
            queue.push(child, depth + 1);
        }
    }

    let to = |v: u64| v as usize;
    stats.c0_calls = to(counters.c0_calls);
    stats.cstar_calls = to(counters.cstar_calls);
    stats.tstar_calls = to(counters.tstar_calls);
    stats.pstar_calls = to(counters.pstar_calls);
    stats.pstar_approx_calls = to(counters.pstar_approx_calls);
    stats.approx_undecided = to(counters.approx_undecided);
    stats.approx_on_root = to(counters.approx_on_root);
    stats.approx_wrong = to(counters.approx_wrong);
    stats.tstar_escalations = to(counters.tstar_escalations);
    stats.c0_time = counters.c0_time;
    stats.cstar_time = counters.cstar_time;
    stats.wall_time = start.elapsed();
    report.stats = stats;
    report.clusters.sort_by(|(a, _), (b, _)| a.center.re.cmp(&b.center.re).then_with(|| a.center.im.cmp(&b.center.im)));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use rug::Rational;

    use super::*;
    use crate::numerics::DyadicComplex;
    use crate::poly::{dense_oracle, CoefficientList};

    fn poly(c: &[i64]) -> PolynomialOracle {
        dense_oracle(CoefficientList::from_rationals(c.iter().map(|&x| Rational::from(x)).collect()).unwrap())
    }

    fn roi(w: i64) -> Square {
        Square::new(DyadicComplex::zero(), Dyadic::from_i64(w))
    }

    fn cfg(w: i64, eps: i64) -> SolverConfig {
        SolverConfig::new(roi(w), Dyadic::pow2(-eps))
    }

    #[test]
    fn queue_pops_widest_first() {
        let b0 = roi(8);
        let mut q = WorkQueue::new();
        let small = Component::from_boxes(vec![Square::new(DyadicComplex::from_f64(1.0, 1.0), Dyadic::from_i64(1))], &b0);
        let big = Component::from_boxes(vec![Square::new(DyadicComplex::from_f64(-2.0, 2.0), Dyadic::from_i64(2))], &b0);
        let left = Component::from_boxes(vec![Square::new(DyadicComplex::from_f64(-3.0, 1.0), Dyadic::from_i64(1))], &b0);
        q.push(small.clone(), 2);
        q.push(big.clone(), 1);
        q.push(left.clone(), 2);
        assert_eq!(q.pop().unwrap().0, big);
        assert_eq!(q.pop().unwrap().0, left);
        assert_eq!(q.pop().unwrap().0, small);
        assert!(q.is_empty());
    }

    #[test]
    fn quadrisect_keeps_root_boxes() {
        let p = poly(&[1, 0, 1]);
        let b0 = roi(4);
        let c = Component::root(&b0);
        let plain = quadrisect(&c, &p, &cfg(4, 20));
        let total: usize = plain.iter().map(Component::len).sum();
        assert!(total >= 2);
        for comp in &plain {
            assert!(comp.boxes().iter().all(|b| {
                let d = b.containing_disc();
                d.contains_point(&DyadicComplex::from_f64(0.0, 1.0)) || d.contains_point(&DyadicComplex::from_f64(0.0, -1.0))
            }));
        }
        let sym = quadrisect(&c, &p, &cfg(4, 20).with_real_symmetry(true));
        assert!(sym.iter().all(|comp| comp.boxes().iter().all(|b| b.y_min() >= Dyadic::zero())));
        assert!(!sym.is_empty());
        // a far root leaves nothing
        assert!(quadrisect(&c, &poly(&[-10, 1]), &cfg(4, 20)).is_empty());
    }

    #[test]
    fn two_real_roots() {
        let p = poly(&[-1, 0, 1]);
        let r = solve_lcp(&p, &cfg(4, 20)).unwrap();
        assert_eq!(r.multiplicities(), vec![1, 1]);
        assert!(r.discs_disjoint());
        for (d, _) in &r.clusters {
            assert!(d.radius <= Dyadic::pow2(-20));
        }
        assert!(r.clusters[0].0.contains_point(&DyadicComplex::from_f64(-1.0, 0.0)));
        assert!(r.clusters[1].0.contains_point(&DyadicComplex::from_f64(1.0, 0.0)));
        assert!(verify_report(&p, &r));
    }

    #[test]
    fn conjugate_pair_via_symmetry() {
        let p = poly(&[1, 0, 1]);
        let r = solve_lcp_real(&p, &cfg(4, 20)).unwrap();
        assert_eq!(r.multiplicities(), vec![1, 1]);
        let (a, b) = (&r.clusters[0].0, &r.clusters[1].0);
        assert_eq!(a.conj(), *b);
        let plain = solve_lcp(&p, &cfg(4, 20)).unwrap();
        assert!(r.stats.tree_size < plain.stats.tree_size);
        assert!(verify_report(&p, &r));
    }

    #[test]
    fn double_root_cluster() {
        // (z - 1/2)^2 (z + 1)
        let c = vec![Rational::from((1, 4)), Rational::from((-3, 4)), Rational::from(0), Rational::from(1)];
        let p = dense_oracle(CoefficientList::from_rationals(c).unwrap());
        for mode in [TestMode::TStarOnly, TestMode::PStarFiltered] {
            for sym in [false, true] {
                let r = solve(&p, &cfg(4, 30).with_mode(mode).with_real_symmetry(sym)).unwrap();
                assert_eq!(r.multiplicities(), vec![1, 2], "{mode:?} {sym}");
                assert!(verify_report(&p, &r));
            }
        }
    }

    #[test]
    fn depth_cap_is_reported() {
        let p = poly(&[-1, 0, 1]);
        let mut c = cfg(4, 40);
        c.max_depth = 5;
        assert_eq!(solve_lcp(&p, &c).unwrap_err(), SolverError::DepthCapExceeded(5));
    }

    #[test]
    fn symmetry_preconditions() {
        let p = poly(&[-1, 0, 1]);
        let off = SolverConfig::new(Square::new(DyadicComplex::from_f64(0.0, 1.0), Dyadic::from_i64(4)), Dyadic::pow2(-10));
        assert_eq!(solve_lcp_real(&p, &off).unwrap_err(), SolverError::NotSymmetric);
    }
}
