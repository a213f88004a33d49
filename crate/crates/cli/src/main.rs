//! `torelim`: batch front-end for toric Sylvester forms and elimination.
//!
//! Every invocation reads one job file (see [`job`]) and runs one command.
//! Exit status is 0 on success, 2 on usage errors and one code per failing
//! module otherwise (see [`CliError::exit_code`]).

mod commands;
mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use torelim_core::{PrimeField, Rationals};

use job::FieldChoice;

pub const COMMANDS: &[&str] = &[
    "check-positivity",
    "monomials",
    "decompose",
    "sylvester",
    "build-matrix",
    "degree-valid",
    "count-solutions",
    "resultant",
    "residue",
];

#[derive(Debug, Parser)]
#[command(name = "torelim", version, about = "Toric Sylvester forms, elimination matrices, resultants and residues")]
struct Cli {
    /// Job file (TOML) describing the fan and the system.
    #[arg(long, global = true)]
    job: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Coefficient field: `q` or `p:<prime>`. Overrides the job file.
    #[arg(long, global = true)]
    field: Option<FieldChoice>,
    /// Seed for random systems, fitted systems and random P/Q.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Parser)]
#[command(name = "torelim", no_binary_name = true)]
struct JobCommand {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Macaulay,
    Hybrid,
    Overdetermined,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Validate the fan and report positivity data for sigma.
    CheckPositivity,
    /// List the monomial basis of a class, e.g. `(2,1)`.
    Monomials { class: String },
    /// Decompose each polynomial at the monomial `mu`.
    Decompose {
        mu: String,
        /// Only this polynomial (0-based).
        #[arg(long)]
        poly: Option<usize>,
    },
    /// Sylvester form of the system at the monomial `mu`.
    Sylvester { mu: String },
    /// Elimination matrix in degree `alpha` as labeled CSV.
    BuildMatrix {
        alpha: String,
        #[arg(long)]
        mode: Option<ModeArg>,
        /// Pivot set for overdetermined systems, e.g. `0,1,2`.
        #[arg(long, value_delimiter = ',')]
        pivot_set: Option<Vec<usize>>,
        /// Build even if the degree is not certified.
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Report whether `alpha` is an admissible degree and why.
    DegreeValid {
        alpha: String,
        #[arg(long, value_delimiter = ',')]
        pivot_set: Option<Vec<usize>>,
    },
    /// Corank of the elimination matrix in degree `alpha`.
    CountSolutions {
        alpha: String,
        #[arg(long)]
        mode: Option<ModeArg>,
        #[arg(long, value_delimiter = ',')]
        pivot_set: Option<Vec<usize>>,
        #[arg(long)]
        force: bool,
    },
    /// Sparse resultant (up to a constant) as the determinant of a Koszul strand.
    Resultant {
        alpha: String,
        #[arg(long)]
        force: bool,
    },
    /// Residue of P*Q with P of class `nu` and Q of class delta-nu.
    Residue {
        nu: String,
        /// P as `c*monomial + ...`, or `random`.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Q as `c*monomial + ...`, or `random`.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Run the command stored in the job file.
    Run,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] torelim_core::Error),
    #[error("{}", .0.join("\n"))]
    Job(Vec<String>),
    #[error("{0}")]
    Io(String),
}

macro_rules! core_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_from!(
    torelim_core::LatticeError,
    torelim_core::ToricError,
    torelim_core::PolyError,
    torelim_core::SylvesterError,
    torelim_core::EliminationError,
    torelim_core::ComplexError
);

impl CliError {
    pub fn module(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.module(),
            CliError::Job(_) => "job",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.module() {
            "lattice" => 3,
            "toric" => 4,
            "polyalg" => 5,
            "sylvester" => 6,
            "elimination" => 7,
            "resrescomplex" => 8,
            "job" => 9,
            _ => 10,
        }
    }
}

fn execute(cli: Cli) -> Result<String, CliError> {
    let path = cli.job.ok_or_else(|| CliError::Job(vec!["--job <file> is required".into()]))?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let spec = job::parse_job(&text).map_err(CliError::Job)?;
    let cmd = match cli.cmd {
        Cmd::Run => {
            let words = spec
                .command
                .clone()
                .ok_or_else(|| CliError::Job(vec!["`run` needs a `command` in the job file".into()]))?;
            JobCommand::try_parse_from(words).map_err(|e| CliError::Job(vec![e.to_string()]))?.cmd
        }
        other => other,
    };
    let field = cli.field.or(spec.field.clone()).unwrap_or(FieldChoice::Rationals);
    match field {
        FieldChoice::Rationals => commands::run(&Rationals, &spec, &cmd, cli.seed),
        FieldChoice::Prime(p) => commands::run(&PrimeField::new(p)?, &spec, &cmd, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = execute(cli).and_then(|text| match &out {
        Some(p) => std::fs::write(p, &text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let text = e.to_string();
            let tag = format!("{}: ", e.module());
            eprintln!("error[{}]: {}", e.module(), text.strip_prefix(&tag).unwrap_or(&text));
            ExitCode::from(e.exit_code())
        }
    }
}
