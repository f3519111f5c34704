//! Command-line flags and their validation into a [`RunSpec`].

use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Parser, ValueEnum};
use rootclust::counting::TestMode;
use rootclust::geometry::Square;
use rootclust::numerics::{Dyadic, DyadicComplex};
use rootclust::poly::Family;

#[derive(Parser, Debug)]
#[command(name = "rootclust", version, about = "Certified root clusters of a polynomial in a square region")]
#[command(group(ArgGroup::new("source").args(["family", "poly", "bench"]).required(true)))]
pub struct Cli {
    /// benchmark family, e.g. `mignotte:a=14,d=64`, `mandelbrot:k=6`, `bernoulli:d=64`, `runnels:k=8`
    #[arg(long, value_name = "NAME:k=v,...", value_parser = parse_family)]
    pub family: Option<Family>,
    /// coefficient file: one `R` or `R,I` line per coefficient, constant term first
    #[arg(long, value_name = "PATH")]
    pub poly: Option<PathBuf>,
    /// region of interest: center and width of a square, as dyadic literals
    #[arg(long, value_name = "CX,CY,W", default_value = "0,0,1000", allow_hyphen_values = true, value_parser = parse_roi)]
    pub roi: Square,
    /// cluster radius bound 2^-K
    #[arg(long, value_name = "K", default_value_t = 53, value_parser = clap::value_parser!(u32).range(1..))]
    pub eps: u32,
    /// solver configuration (default: real-ps for real polynomials, ps otherwise)
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    /// report format (benchmarks always write CSV)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub out: Format,
    /// write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out_path: Option<PathBuf>,
    /// certify that 2B0 \ B0 holds no root before solving
    #[arg(long)]
    pub check_annulus: bool,
    /// include counters and timings in the report
    #[arg(long)]
    pub stats: bool,
    /// subdivision depth cap
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub max_depth: Option<u64>,
    /// run a benchmark suite and write a CSV table
    #[arg(long, value_enum)]
    pub bench: Option<Suite>,
    /// draw the subdivision tree in SVG output
    #[arg(long)]
    pub svg_tree: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// T* for both tests, no symmetry
    TStar,
    /// approximate P* filter before T*, P* for counting
    Ps,
    /// T* with real symmetry
    Real,
    /// real symmetry with the P* filter
    RealPs,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::TStar => "t-star",
            Algo::Ps => "ps",
            Algo::Real => "real",
            Algo::RealPs => "real-ps",
        }
    }

    pub fn mode(self) -> TestMode {
        match self {
            Algo::TStar | Algo::Real => TestMode::TStarOnly,
            Algo::Ps | Algo::RealPs => TestMode::PStarFiltered,
        }
    }

    pub fn real_symmetry(self) -> bool {
        matches!(self, Algo::Real | Algo::RealPs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Txt,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    PaperTable3,
    PaperTable1,
    Quick,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PolySource {
    Family(Family),
    File(PathBuf),
}

/// One solve, fully validated.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub source: PolySource,
    pub roi: Square,
    pub eps_exp: u32,
    /// `None` picks from the polynomial
    pub algo: Option<Algo>,
    pub format: Format,
    pub out_path: Option<PathBuf>,
    pub check_annulus: bool,
    pub stats: bool,
    pub max_depth: Option<usize>,
    pub svg_tree: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Solve(RunSpec),
    Bench { suite: Suite, eps_exp: u32, max_depth: Option<usize>, out_path: Option<PathBuf> },
}

impl Cli {
    pub fn into_command(self) -> Command {
        let max_depth = self.max_depth.map(|n| n as usize);
        if let Some(suite) = self.bench {
            return Command::Bench { suite, eps_exp: self.eps, max_depth, out_path: self.out_path };
        }
        let source = match (self.family, self.poly) {
            (Some(f), None) => PolySource::Family(f),
            (None, Some(p)) => PolySource::File(p),
            _ => unreachable!("clap enforces exactly one source"),
        };
        Command::Solve(RunSpec {
            source,
            roi: self.roi,
            eps_exp: self.eps,
            algo: self.algo,
            format: self.out,
            out_path: self.out_path,
            check_annulus: self.check_annulus,
            stats: self.stats,
            max_depth,
            svg_tree: self.svg_tree,
        })
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_str(s).map_err(|e| e.to_string())
}

/// `cx,cy,w` with a positive dyadic width.
pub fn parse_roi(s: &str) -> Result<Square, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [cx, cy, w] = parts[..] else {
        return Err(format!("expected CX,CY,W, got `{s}`"));
    };
    let num = |t: &str| Dyadic::parse(t).map_err(|e| e.to_string());
    let (cx, cy, w) = (num(cx)?, num(cy)?, num(w)?);
    if w.signum().is_le() {
        return Err("the width must be positive".into());
    }
    Ok(Square::new(DyadicComplex::new(cx, cy), w))
}
