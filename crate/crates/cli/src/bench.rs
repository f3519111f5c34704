//! Benchmark suites: each polynomial is solved under the plain, real and
//! real + P* configurations and reported with the speed-up ratios.

use std::io::Write;
use std::time::Instant;

use rootclust::counting::TestMode;
use rootclust::geometry::{ClusterReport, Square};
use rootclust::numerics::{Dyadic, DyadicComplex};
use rootclust::poly::Family;
use rootclust::solver::{solve, SolverConfig, SolverError};

use crate::args::Suite;

/// One polynomial in one region of interest.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub family: Family,
    pub roi_label: &'static str,
    pub roi: Square,
}

/// `(name, mode, real symmetry)` in the order `t1, t2, t3`.
pub const CONFIGS: [(&str, TestMode, bool); 3] =
    [("t-star", TestMode::TStarOnly, false), ("real", TestMode::TStarOnly, true), ("real-ps", TestMode::PStarFiltered, true)];

pub const HEADER: [&str; 15] = [
    "polynomial",
    "roi",
    "config",
    "clusters",
    "solutions",
    "depth",
    "tree_size",
    "wall_s",
    "c0_calls",
    "cstar_calls",
    "tstar_calls",
    "pstar_calls",
    "t1/t2",
    "t2/t3",
    "t1/t3",
];

fn global() -> Square {
    Square::new(DyadicComplex::zero(), Dyadic::from_i64(1000))
}

fn square(cx: f64, w_log2: i64) -> Square {
    Square::new(DyadicComplex::from_f64(cx, 0.0), Dyadic::pow2(w_log2))
}

fn row(family: Family, roi_label: &'static str, roi: Square) -> BenchRow {
    BenchRow { family, roi_label, roi }
}

pub fn suite_rows(suite: Suite) -> Vec<BenchRow> {
    let g = |f| row(f, "global", global());
    match suite {
        Suite::PaperTable3 => [
            Family::Bernoulli { d: 128 },
            Family::Bernoulli { d: 191 },
            Family::Bernoulli { d: 256 },
            Family::Mignotte { a: 14, d: 128 },
            Family::Mignotte { a: 14, d: 191 },
            Family::Mignotte { a: 14, d: 256 },
            Family::Mandelbrot { k: 7 },
            Family::Mandelbrot { k: 8 },
            Family::Runnels { k: 8 },
            Family::Runnels { k: 9 },
        ]
        .into_iter()
        .map(g)
        .collect(),
        Suite::PaperTable1 => {
            let mut rows = Vec::new();
            for d in [128, 256] {
                let f = Family::Mignotte { a: 14, d };
                // the cluster of two roots near 2^-14
                rows.push(row(f, "local", square(0.0, -8)));
                rows.push(g(f));
            }
            for k in [7, 8] {
                let f = Family::Mandelbrot { k };
                // a small box near the tip of the real segment
                rows.push(row(f, "local", square(-1.9921875, -6)));
                rows.push(g(f));
            }
            rows
        }
        Suite::Quick => [
            Family::Mignotte { a: 14, d: 32 },
            Family::Mandelbrot { k: 5 },
            Family::Bernoulli { d: 32 },
            Family::Runnels { k: 6 },
        ]
        .into_iter()
        .map(g)
        .collect(),
    }
}

fn ratio(a: f64, b: f64) -> String {
    if b > 0.0 {
        format!("{:.2}", a / b)
    } else {
        String::new()
    }
}

/// Runs every row of `suite` under the three configurations, writing CSV rows
/// in suite order.
pub fn benchmark_run(suite: Suite, eps_exp: u32, max_depth: Option<usize>, out: impl Write) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    w.flush()?;
    for r in suite_rows(suite) {
        let p = r.family.oracle();
        let mut runs: Vec<(ClusterReport, f64)> = Vec::new();
        for (_, mode, sym) in CONFIGS {
            let mut cfg = SolverConfig::new(r.roi.clone(), Dyadic::pow2(-(eps_exp as i64))).with_mode(mode).with_real_symmetry(sym);
            if let Some(m) = max_depth {
                cfg.max_depth = m;
            }
            let t = Instant::now();
            let rep = solve(&p, &cfg)?;
            runs.push((rep, t.elapsed().as_secs_f64()));
        }
        let (t1, t2, t3) = (runs[0].1, runs[1].1, runs[2].1);
        for ((name, _, _), (rep, secs)) in CONFIGS.iter().zip(&runs) {
            let s = &rep.stats;
            w.write_record([
                r.family.label(),
                r.roi_label.to_string(),
                name.to_string(),
                rep.clusters.len().to_string(),
                rep.total_roots().to_string(),
                s.depth.to_string(),
                s.tree_size.to_string(),
                format!("{secs:.3}"),
                s.c0_calls.to_string(),
                s.cstar_calls.to_string(),
                s.tstar_calls.to_string(),
                (s.pstar_calls + s.pstar_approx_calls).to_string(),
                ratio(t1, t2),
                ratio(t2, t3),
                ratio(t1, t3),
            ])?;
        }
        w.flush()?;
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("cannot write the table: {0}")]
    Output(#[from] std::io::Error),
    #[error("cannot write the table: {0}")]
    Csv(#[from] csv::Error),
}
