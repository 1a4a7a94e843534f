//! `magicdamp` — reproducible tables for the resource dynamics of locally
//! amplitude-damped multiqubit states.
//!
//! Every subcommand emits either CSV (with a `# config:` echo line) or
//! JSON, with floats at 12 significant digits, so a fixed configuration
//! always produces byte-identical output.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 capability limit.

mod commands;
mod table;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use table::{fmt_f64, Table};

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Comma-separated values with a config-echo comment line.
    Csv,
    /// A JSON document with the same rows.
    Json,
}

/// Inclusive uniform grid `min:max:points`.
#[derive(Debug, Clone)]
pub struct GridSpec {
    /// Left endpoint.
    pub min: f64,
    /// Right endpoint.
    pub max: f64,
    /// Number of points (at least 2).
    pub points: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid '{s}' must have the form MIN:MAX:POINTS"));
        }
        let min: f64 = parts[0].parse().map_err(|_| format!("bad grid min '{}'", parts[0]))?;
        let max: f64 = parts[1].parse().map_err(|_| format!("bad grid max '{}'", parts[1]))?;
        let points: usize =
            parts[2].parse().map_err(|_| format!("bad grid point count '{}'", parts[2]))?;
        if !min.is_finite() || !max.is_finite() || min >= max {
            return Err(format!("grid '{s}' needs finite min < max"));
        }
        if points < 2 {
            return Err(format!("grid '{s}' needs at least 2 points"));
        }
        Ok(GridSpec { min, max, points })
    }
}

impl GridSpec {
    /// The grid values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + step * i as f64).collect()
    }

    /// Canonical echo string.
    pub fn echo(&self) -> String {
        format!("{}:{}:{}", fmt_f64(self.min), fmt_f64(self.max), self.points)
    }
}

/// Top-level CLI definition.
#[derive(Debug, Parser)]
#[command(
    name = "magicdamp",
    version,
    about = "Magic and entanglement resource dynamics under local amplitude damping"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    /// Output file path (stdout when omitted).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Emit an integrated-rate column kt = -ln(1-gamma) alongside every
    /// gamma column.
    #[arg(long, global = true)]
    pub kt: bool,

    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form thresholds (magic death/rebirth, entanglement death)
    /// and regime labels for cat states.
    Thresholds {
        /// Qubit count.
        #[arg(long)]
        n: usize,
        /// Single cat amplitude.
        #[arg(long, conflicts_with = "alpha_grid")]
        alpha: Option<f64>,
        /// Amplitude grid MIN:MAX:POINTS.
        #[arg(long)]
        alpha_grid: Option<GridSpec>,
    },
    /// Closed-form trajectory scan: populations, coherence, membership,
    /// robustness over a damping grid.
    Scan {
        /// Qubit count.
        #[arg(long)]
        n: usize,
        /// Cat amplitude.
        #[arg(long)]
        alpha: f64,
        /// Damping grid MIN:MAX:POINTS.
        #[arg(long)]
        gamma_grid: GridSpec,
    },
    /// Dense-simulation trajectory: robustness, negativity, concurrence,
    /// and the linearized stabilizer entropy over a damping grid.
    Trajectory {
        /// Qubit count (dense simulation, n <= 8).
        #[arg(long)]
        n: usize,
        /// Cat amplitude.
        #[arg(long)]
        alpha: f64,
        /// Damping grid MIN:MAX:POINTS.
        #[arg(long)]
        gamma_grid: GridSpec,
    },
    /// Robustness of magic at a single point, optionally certified
    /// against the LP oracle.
    Rom {
        /// Qubit count.
        #[arg(long)]
        n: usize,
        /// Cat amplitude.
        #[arg(long)]
        alpha: f64,
        /// Damping strength.
        #[arg(long)]
        gamma: f64,
        /// Cross-check against the enumeration + LP oracle (n <= 3).
        #[arg(long)]
        verify_lp: bool,
    },
    /// Parity-syndrome extraction over a damping grid: decoded Bloch
    /// coordinates and distillation-window classification.
    Extract {
        /// Qubit count.
        #[arg(long)]
        n: usize,
        /// Cat amplitude.
        #[arg(long)]
        alpha: f64,
        /// Single damping strength.
        #[arg(long, conflicts_with = "gamma_grid")]
        gamma: Option<f64>,
        /// Damping grid MIN:MAX:POINTS.
        #[arg(long)]
        gamma_grid: Option<GridSpec>,
    },
    /// Enumerate all pure stabilizer states in canonical affine form.
    Enumerate {
        /// Qubit count (n <= 4).
        #[arg(long)]
        n: usize,
    },
    /// Classify every pure stabilizer state as magic insulator or magic
    /// generator.
    Classify {
        /// Qubit count (n <= 4).
        #[arg(long)]
        n: usize,
    },
    /// Damped Dicke-state diagnostics over a damping grid.
    Dicke {
        /// Qubit count (n <= 6).
        #[arg(long)]
        n: usize,
        /// Excitation number.
        #[arg(long)]
        k: usize,
        /// Damping grid MIN:MAX:POINTS.
        #[arg(long, default_value = "0.05:0.95:19")]
        gamma_grid: GridSpec,
    },
    /// Haar endpoint-only violation statistics with a fixed seed.
    Haar {
        /// Qubit count (n <= 6).
        #[arg(long)]
        n: usize,
        /// Number of Haar samples.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// RNG seed.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Damping grid MIN:MAX:POINTS.
        #[arg(long, default_value = "0.1:0.9:9")]
        gamma_grid: GridSpec,
    },
    /// Punctured affine-plane slice: membership and thresholds of the cat
    /// over a two-dimensional code.
    Slice {
        /// Qubit count.
        #[arg(long)]
        n: usize,
        /// Basis words of the code as two integers W1,W2.
        #[arg(long)]
        basis: String,
        /// Cat amplitude.
        #[arg(long)]
        alpha: f64,
        /// Single damping strength.
        #[arg(long, conflicts_with = "gamma_grid")]
        gamma: Option<f64>,
        /// Damping grid MIN:MAX:POINTS.
        #[arg(long)]
        gamma_grid: Option<GridSpec>,
    },
    /// Three-qubit pairing-Hamiltonian ground state and its slice
    /// thresholds as a function of the coupling.
    Pairing {
        /// Single coupling strength.
        #[arg(long, conflicts_with = "xi_grid")]
        xi: Option<f64>,
        /// Coupling grid MIN:MAX:POINTS.
        #[arg(long)]
        xi_grid: Option<GridSpec>,
    },
    /// Two-qubit reborn-branch resource mirror: robustness against the
    /// mirrored concurrence.
    Mirror {
        /// Cat amplitude.
        #[arg(long)]
        alpha: f64,
        /// Damping grid MIN:MAX:POINTS.
        #[arg(long)]
        gamma_grid: GridSpec,
    },
    /// Run the closed-form-vs-oracle certification suite; exits 2 on any
    /// violation.
    Verify {
        /// Include the slower n=4 enumeration and classification checks.
        #[arg(long)]
        full: bool,
    },
}

/// CLI-level error, carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or out-of-domain parameters (exit 1).
    Usage(String),
    /// A certification check failed (exit 2).
    Verification(String),
    /// The request exceeds a documented size guard (exit 3).
    Capability(String),
}

/// Maps library errors onto exit-code categories.
pub fn lib_err(e: magicdamp::Error) -> CliError {
    use magicdamp::Error;
    match e {
        Error::CapabilityLimit(m) => CliError::Capability(m),
        Error::Solver(m) => CliError::Verification(format!("solver failure: {m}")),
        other => CliError::Usage(other.to_string()),
    }
}

/// Integrated damping rate `kt = -ln(1-gamma)`.
pub fn kt_of(gamma: f64) -> f64 {
    -(1.0 - gamma).ln()
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        None => {
            print!("{text}");
            std::io::stdout().flush().map_err(|e| CliError::Usage(e.to_string()))
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
    }
}

fn emit_table(cli: &Cli, table: &Table, echo: &str) -> Result<(), CliError> {
    let full_echo = format!(
        "magicdamp {echo} format={} kt={}",
        match cli.format {
            Format::Csv => "csv",
            Format::Json => "json",
        },
        cli.kt
    );
    let text = match cli.format {
        Format::Csv => table.to_csv(&full_echo),
        Format::Json => table.to_json(&full_echo),
    };
    emit(cli, &text)
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    if let Command::Verify { full } = cli.command {
        let (report, failures) = verify::run(full)?;
        emit(cli, &report)?;
        return if failures == 0 {
            Ok(())
        } else {
            Err(CliError::Verification(format!("{failures} check(s) failed")))
        };
    }
    let (table, echo, post_error) = commands::run(cli)?;
    emit_table(cli, &table, &echo)?;
    match post_error {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(CliError::Verification(m)) => {
            eprintln!("verification failure: {m}");
            2
        }
        Err(CliError::Capability(m)) => {
            eprintln!("capability limit: {m}");
            3
        }
    }
}
