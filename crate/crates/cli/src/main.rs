mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fourvertex::analysis::DEFAULT_MEC_SEED;
use fourvertex::curvature::DEFAULT_GRID;
use fourvertex::io::Format;
use fourvertex::Error;

#[derive(Debug, Parser)]
#[command(name = "fourvertex", version, about = "Plane curves with prescribed curvature, and vertex checks for closed curves")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Grid size; a power of two, at least 512.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID, value_parser = parse_grid)]
    pub grid: usize,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = DEFAULT_MEC_SEED)]
    pub seed: u64,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Format of curve output files.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    pub format: OutFormat,
    /// Also write SVG figures.
    #[arg(long, global = true)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 512 || !n.is_power_of_two() {
        return Err(format!("grid must be a power of two >= 512, got {n}"));
    }
    Ok(n)
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a closed curve whose curvature is read from a file
    /// (`t,kappa` CSV or JSON samples).
    Synth(SynthArgs),
    /// Count vertices of a closed curve (`s,x,y,theta` CSV or JSON) and
    /// compare with its circumscribed circle.
    Analyze(AnalyzeArgs),
    /// Figures for two-valued step curvature.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    pub kappa_file: PathBuf,
    /// Initial measure allowance for the step approximation.
    #[arg(long, default_value_t = 0.1)]
    pub eps0: f64,
    /// Initial search radius in the disk.
    #[arg(long, default_value_t = 0.2)]
    pub r0: f64,
    #[arg(long, default_value_t = 20)]
    pub max_rounds: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub curve_file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Closed curve made of four arcs from two circles.
    Bicircle {
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
    },
    /// Open curves for Möbius parameters on a circle, with their error vectors.
    Compass {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        r: f64,
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
    },
    /// The disk's image in the tetrahedron of reduced configurations.
    Tetrahedron {
        /// Circles of constant |beta| sampled.
        #[arg(long, default_value_t = 8)]
        rings: usize,
        /// Rays of constant arg(beta) sampled.
        #[arg(long, default_value_t = 16)]
        spokes: usize,
    },
}

/// Exit status for an error: 1 for unreadable or unwritable files, 2 for
/// inputs outside the hypotheses, 3 when the construction itself fails.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse(_) => 1,
        Error::HypothesisViolated { .. }
        | Error::NotClosed { .. }
        | Error::IdenticallyZero
        | Error::ZeroTotalCurvature { .. }
        | Error::NoPositiveWindow
        | Error::InvalidInput(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Synth(args) => commands::synth(&cli.run, args),
        Command::Analyze(args) => commands::analyze(&cli.run, args),
        Command::Demo { which } => commands::demo(&cli.run, which),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
