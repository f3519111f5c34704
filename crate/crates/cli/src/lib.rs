//! Command-line front end: `run_cli` parses flags, solves and writes the report.

pub mod args;
pub mod bench;
pub mod emit;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::{CommandFactory, Parser};
use rootclust::numerics::Dyadic;
use rootclust::poly::{parse_poly_file, PolynomialOracle};
use rootclust::solver::{check_annulus, solve, SolverConfig};

use args::{Algo, Cli, Command, Format, PolySource, RunSpec};
use emit::{emit_report, ReportMeta};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;

/// Runs one invocation and returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return EXIT_OK;
            }
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return EXIT_USAGE;
        }
    };
    match cli.into_command() {
        Command::Solve(spec) => run_solve(&spec),
        Command::Bench { suite, eps_exp, max_depth, out_path } => {
            let result = match open_output(out_path.as_deref()) {
                Ok(out) => bench::benchmark_run(suite, eps_exp, max_depth, out),
                Err(e) => return usage_error(&e),
            };
            match result {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_SOLVER
                }
            }
        }
    }
}

fn usage_error(msg: &dyn std::fmt::Display) -> i32 {
    eprintln!("error: {msg}\n\n{}\n\nFor more information, try '--help'.", Cli::command().render_usage());
    EXIT_USAGE
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn load(source: &PolySource) -> Result<PolynomialOracle, String> {
    match source {
        PolySource::Family(f) => Ok(f.oracle()),
        PolySource::File(path) => parse_poly_file(path).map_err(|e| e.to_string()),
    }
}

/// The configuration picked when `--algo` is absent.
pub fn auto_algo(p: &PolynomialOracle, spec: &RunSpec) -> Algo {
    if p.is_real() && spec.roi.center.im.is_zero() {
        Algo::RealPs
    } else {
        Algo::Ps
    }
}

fn run_solve(spec: &RunSpec) -> i32 {
    let p = match load(&spec.source) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let algo = spec.algo.unwrap_or_else(|| auto_algo(&p, spec));
    let mut cfg = SolverConfig::new(spec.roi.clone(), Dyadic::pow2(-(spec.eps_exp as i64)))
        .with_mode(algo.mode())
        .with_real_symmetry(algo.real_symmetry());
    if let Some(m) = spec.max_depth {
        cfg.max_depth = m;
    }
    cfg.record_tree = spec.svg_tree && spec.format == Format::Svg;

    let annulus_certified = spec.check_annulus.then(|| {
        let doubtful = check_annulus(&p, &spec.roi);
        if !doubtful.is_empty() {
            eprintln!("warning: {} squares of 2B0 \\ B0 may hold roots; clusters near the boundary may be missed", doubtful.len());
        }
        doubtful.is_empty()
    });
    let report = match solve(&p, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_SOLVER;
        }
    };
    let meta = ReportMeta {
        degree: p.degree(),
        roi: spec.roi.clone(),
        eps_exp: spec.eps_exp,
        algo: algo.name().to_string(),
        annulus_certified,
        stats: spec.stats,
        svg_tree: spec.svg_tree,
    };
    let doc = emit_report(&report, &meta, spec.format);
    let written = open_output(spec.out_path.as_deref()).and_then(|mut out| {
        out.write_all(doc.as_bytes())?;
        out.flush()
    });
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => usage_error(&format!("cannot write the report: {e}")),
    }
}
