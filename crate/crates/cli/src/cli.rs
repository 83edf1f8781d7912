use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, read_json, write_output};
use crate::error::CliResult;
use crate::schema::Overrides;

/// Environment variable holding the log filter (`error`, `warn`, `info`, `debug`).
pub const LOG_ENV: &str = "MINDLIN_LOG";

#[derive(Parser, Debug)]
#[command(name = "mindlin", version)]
#[command(about = "Effective second-gradient elasticity of dilute two-phase composites")]
#[command(after_help = "Log verbosity is read from MINDLIN_LOG (default: warn).\n\
Exit codes: 0 ok, 1 i/o, 2 usage, 3 schema, 4 symmetry, 5 precondition, 6 certification.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Io {
    /// Input JSON file
    #[arg(long, short)]
    pub input: PathBuf,
    /// Report path; stdout when omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Run {
    #[command(flatten)]
    pub io: Io,
    /// Number of sampled boundary data sets [default: file value or 20]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Sampling seed [default: file value or 20260101]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Certification tolerance on the relative energy mismatch [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Run {
    fn overrides(&self) -> Overrides {
        Overrides {
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute A_eq, its definiteness and an energy certificate
    Homogenize(Run),
    /// Check centroid, isotropy and inertia-radius conditions of an RVE
    Geometry {
        #[command(flatten)]
        io: Io,
        /// Tolerance of the geometric checks
        #[arg(long)]
        tol: Option<f64>,
        /// Also check that the inclusion inertia radius vanishes as f shrinks
        #[arg(long)]
        fsweep: bool,
    },
    /// Positive-definiteness verdict for a C or A tensor
    CheckPd {
        #[command(flatten)]
        io: Io,
    },
    /// Evaluate the energy mismatch over sampled quadratic boundary data
    VerifyEnergy {
        #[command(flatten)]
        run: Run,
        /// Repeat over a ladder of volume fractions and report decay slopes
        #[arg(long)]
        fsweep: bool,
    },
}

/// Runs one command and writes its report. A failed check is returned as an
/// error after the report has been written.
pub fn run(cli: &Cli) -> CliResult<()> {
    let (outcome, output) = match &cli.command {
        Command::Homogenize(r) => (
            commands::homogenize(&read_json(&r.io.input)?, r.overrides())?,
            &r.io.output,
        ),
        Command::Geometry { io, tol, fsweep } => (
            commands::geometry(&read_json(&io.input)?, *tol, *fsweep)?,
            &io.output,
        ),
        Command::CheckPd { io } => (commands::check_pd(&read_json(&io.input)?)?, &io.output),
        Command::VerifyEnergy { run, fsweep } => (
            commands::verify_energy(&read_json(&run.io.input)?, run.overrides(), *fsweep)?,
            &run.io.output,
        ),
    };
    write_output(output.as_deref(), &outcome.json)?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
