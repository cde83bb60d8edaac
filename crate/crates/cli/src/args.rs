use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multigraded::rational::{parse_rational, Rational};

#[derive(Debug, Parser)]
#[command(name = "multigraded", version, about = "Exact asymptotic invariants of multigraded systems of monomial ideals")]
pub struct Cli {
    /// Run every parallel section on one thread.
    #[arg(long, global = true)]
    pub single_thread: bool,
    /// Write the report's CSV table(s) here (extra tables get `.<name>.csv` beside it).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single monomial ideals.
    #[command(subcommand)]
    Ideal(IdealCommand),
    /// Graded systems given by a system file.
    #[command(subcommand)]
    System(SystemCommand),
    /// Reproduce the nef-cone, kinked-order and gauge constructions.
    #[command(subcommand)]
    Repro(ReproCommand),
}

#[derive(Debug, Subcommand)]
pub enum IdealCommand {
    /// Order, Arnold multiplicity, log-canonical threshold, multiplicity, colength, Newton polyhedron.
    Info { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Sequence,
    Geometric,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleKind {
    Factorial,
    Doubling,
}

#[derive(Debug, Subcommand)]
pub enum SystemCommand {
    /// Ideal at one index.
    Eval {
        path: PathBuf,
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Vec<i64>,
    },
    /// ord0, Arn and multiplicity along a direction.
    Invariants {
        path: PathBuf,
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Vec<i64>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, value_enum, default_value_t = ScheduleKind::Factorial)]
        schedule: ScheduleKind,
        /// Largest L (factorial) or J (doubling); defaults to 5 and 8.
        #[arg(long)]
        max: Option<u32>,
    },
    /// Nef and effective lattice points in `[-R, R]^ρ` with their ray hulls.
    Cones {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: i64,
        /// Cone file the nef lattice points are compared against.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Gradedness `a_v·a_w ⊆ a_(v+w)` over a box of indices.
    Verify {
        path: PathBuf,
        #[arg(long, conflicts_with = "window")]
        radius: Option<i64>,
        /// Per-coordinate ranges, e.g. `0:8` or `-3:3,-3:3`.
        #[arg(long, value_parser = parse_range, value_delimiter = ',', allow_hyphen_values = true)]
        window: Option<Vec<(i64, i64)>>,
    },
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// rmin rmax smin smax steps
    #[arg(long, num_args = 5, value_names = ["RMIN", "RMAX", "SMIN", "SMAX", "STEPS"], allow_hyphen_values = true)]
    pub grid: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum ReproCommand {
    /// Ceiling system of an epigraph cone: nef cone equals the cone; closed-form invariants.
    Thm1 {
        /// Epigraph cone file (default `y ≥ |x1| + |x2|`).
        #[arg(long)]
        cone: Option<PathBuf>,
        /// Base ideal file (default the maximal ideal in two variables).
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        radius: i64,
        /// Largest L of the factorial schedule.
        #[arg(long, default_value_t = 4)]
        max: u32,
        /// Number of integral directions checked against the closed forms.
        #[arg(long, default_value_t = 20)]
        directions: usize,
    },
    /// Kinked intersection system: ord0 grid, kink table, nef cone.
    Thm2 {
        #[arg(long, default_value_t = 1)]
        kinks: usize,
        #[command(flatten)]
        grid: GridArgs,
        /// r of the kink scan.
        #[arg(long, value_parser = parse_positive_rational, default_value = "1")]
        scan_r: Rational,
        /// s window of the kink scan.
        #[arg(long, num_args = 2, value_names = ["SMIN", "SMAX"])]
        scan: Option<Vec<String>>,
        #[arg(long, default_value_t = 6)]
        radius: i64,
        /// Also truncate by `{s ≥ ε r}` and compare kink tables.
        #[arg(long, value_parser = parse_positive_rational)]
        truncate: Option<Rational>,
    },
    /// Symmetric gauge body with dense kinks.
    Appendix {
        #[arg(long, default_value_t = 1)]
        kinks: usize,
        /// Spot checks of homogeneity and convexity.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

/// One `lo:hi` range of a gradedness window.
pub fn parse_range(part: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = part.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{part}`"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad bound `{lo}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

pub fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).ok_or_else(|| format!("not a rational: `{s}`"))
}

pub fn parse_positive_rational(s: &str) -> Result<Rational, String> {
    let r = parse_rational_arg(s)?;
    if r <= Rational::from_integer(0.into()) {
        return Err(format!("must be positive: `{s}`"));
    }
    Ok(r)
}
