//! Exact dyadic squares, discs, connected components and the conjugate machinery
//! used by the symmetric solver.

mod component;
mod disc;
mod square;

use std::time::Duration;

pub use component::{box_set, component_predicates, conjugate_closure, group_components, is_separated, Component};
pub use disc::Disc;
pub use square::{box_children, containing_disc, ImaginarySign, Square};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("component does not meet the real axis")]
    NotRealIntersecting,
}

/// `imaginary_sign` for a single box.
pub fn imaginary_sign(b: &Square) -> ImaginarySign {
    b.imaginary_sign()
}

/// Counters gathered during one solve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// deepest subdivision level reached (root is 0)
    pub depth: usize,
    /// number of boxes created, including the root
    pub tree_size: usize,
    pub c0_calls: usize,
    pub cstar_calls: usize,
    pub tstar_calls: usize,
    pub pstar_calls: usize,
    pub pstar_approx_calls: usize,
    /// approximate P* returned `-1`
    pub approx_undecided: usize,
    /// approximate P* returned `-2`
    pub approx_on_root: usize,
    /// approximate P* returned `0` and T* disagreed
    pub approx_wrong: usize,
    /// T* calls that went beyond the fast precision level
    pub tstar_escalations: usize,
    pub c0_time: Duration,
    pub cstar_time: Duration,
    pub wall_time: Duration,
}

/// Output of a solve: isolating discs with root counts.
#[derive(Clone, Debug, Default)]
pub struct ClusterReport {
    pub clusters: Vec<(Disc, u64)>,
    pub stats: SolveStats,
    /// every box of the subdivision tree, when recording was requested
    pub tree: Vec<Square>,
}

impl ClusterReport {
    /// Sum of multiplicities.
    pub fn total_roots(&self) -> u64 {
        self.clusters.iter().map(|(_, m)| m).sum()
    }

    /// Multiplicities in increasing order.
    pub fn multiplicities(&self) -> Vec<u64> {
        let mut m: Vec<u64> = self.clusters.iter().map(|(_, m)| *m).collect();
        m.sort_unstable();
        m
    }

    /// Discs pairwise disjoint.
    pub fn discs_disjoint(&self) -> bool {
        self.clusters
            .iter()
            .enumerate()
            .all(|(i, (a, _))| self.clusters[i + 1..].iter().all(|(b, _)| !a.intersects_disc(b)))
    }
}
