use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use l1tv::analytic::{Axis, Param, Params};
use l1tv::shapes::Family;
use l1tv::solver::{Neighborhood, DEFAULT_MEMORY_BUDGET};

/// Closed-form, numeric, and discrete energies of `Per(Σ) + λ|Σ △ Ω|` for
/// annuli, square annuli, and dumbbells.
///
/// Exit codes: 0 success, 1 usage, 2 inadmissible parameters, 3 novel
/// minimizer, 4 resource limit, 5 failed verification check.
///
/// The L1TV_THREADS environment variable sets the worker thread count.
#[derive(Debug, Parser)]
#[command(name = "l1tv", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energy of every candidate, as CSV on standard output.
    Energy(EnergyArgs),
    /// Sweep two parameters and record the winning candidate per cell.
    Phase(PhaseArgs),
    /// Compare the closed forms against the numeric oracle.
    Verify(VerifyArgs),
    /// Minimize the discrete energy on a pixel grid with a min-cut.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Annulus,
    #[value(alias = "square-annulus")]
    Square,
    Dumbbell,
    Disc,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Annulus => Family::Annulus,
            FamilyArg::Square => Family::SquareAnnulus,
            FamilyArg::Dumbbell => Family::Dumbbell,
            FamilyArg::Disc => Family::Disc,
        }
    }
}

/// Shape parameters. Each family reads the ones it uses:
/// annulus R, r, delta; square r, L, delta; dumbbell R, r, L, delta;
/// disc R.
#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Outer radius, dumbbell end radius, or disc radius.
    #[arg(long = "R", value_name = "R")]
    pub outer_radius: Option<f64>,
    /// Inner radius, square corner radius, or dumbbell fillet radius.
    #[arg(long = "r", value_name = "r")]
    pub inner_radius: Option<f64>,
    /// Annulus gap or dumbbell handle width.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Square inner side or dumbbell handle length.
    #[arg(long = "L", value_name = "L")]
    pub length: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

impl ShapeArgs {
    pub fn family(&self) -> Family {
        self.family.into()
    }

    pub fn params(&self) -> Params {
        let mut p = Params::new();
        for (param, value) in [
            (Param::OuterRadius, self.outer_radius),
            (Param::InnerRadius, self.inner_radius),
            (Param::Delta, self.delta),
            (Param::Length, self.length),
            (Param::Lambda, self.lambda),
        ] {
            if let Some(v) = value {
                p.set(param, v);
            }
        }
        p
    }
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// Parameters held fixed; swept ones may be omitted.
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// First axis as name:min:max:steps, e.g. delta:0.002:0.2:100.
    #[arg(long)]
    pub x: Axis,
    /// Second axis, e.g. lambda:2.55:12:100.
    #[arg(long)]
    pub y: Axis,
    /// Output prefix: writes PREFIX.csv, PREFIX.pgm with --image, and
    /// PREFIX_touch.csv for the annulus.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the winner map as a graymap.
    #[arg(long)]
    pub image: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// File with one problem per line, as key=value pairs separated by
    /// spaces, e.g. `family=annulus R=1 r=0.8 delta=0.1 lambda=10`. Lines
    /// starting with '#' are skipped. Replaces the shape flags.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Raster resolution in pixels across.
    #[arg(long, default_value_t = 2048)]
    pub resolution: usize,
    /// Absolute angle tolerance in radians.
    #[arg(long, default_value_t = 1e-9)]
    pub angle_tol: f64,
    /// Relative tolerance of closed-form against arc-exact energies.
    #[arg(long, default_value_t = 1e-6)]
    pub energy_tol: f64,
    /// Relative tolerance of raster measurements.
    #[arg(long, default_value_t = 0.01)]
    pub raster_tol: f64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Raster resolution in pixels across.
    #[arg(long, default_value_t = 1024)]
    pub resolution: usize,
    /// Neighbourhood of the length term: 8 or 16.
    #[arg(long, default_value_t = Neighborhood::Sixteen)]
    pub stencil: Neighborhood,
    /// Output prefix: writes PREFIX.pgm (mask) and PREFIX.csv (summary).
    #[arg(long)]
    pub out: PathBuf,
    /// Largest graph to build, in bytes.
    #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
    pub memory_budget: u64,
}
