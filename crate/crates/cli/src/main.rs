//! Command-line front end: load a problem file, run one operation, emit a
//! machine-readable JSON document.
//!
//! Exit codes: 0 success, 1 validation error, 2 domain error (e.g. a point
//! outside the ball it must belong to), 3 certificate failure in `verify`.

mod commands;
mod output;
mod problem;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bochner_opt::ErrorKind;

use crate::commands::ProjectionKind;
use crate::problem::Problem;

#[derive(Debug)]
pub enum CliError {
    Core(bochner_opt::Error),
    Validation(String),
}

impl From<bochner_opt::Error> for CliError {
    fn from(e: bochner_opt::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Validation(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Config => 1,
                ErrorKind::Domain => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bochner-opt",
    about = "Duality mappings, ball projections and linear optimization over convex sets \
             in finite atomic vector-valued L_p models",
    version
)]
struct Cli {
    /// Problem description file (JSON).
    #[arg(long, global = true)]
    problem: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norm of a named function (primal or dual).
    Norm { function: String },
    /// Pairing of a dual function against a primal function.
    Pair { dual: String, function: String },
    /// Duality map of a primal function.
    Dualmap { function: String },
    /// Inverse duality map of a dual function.
    #[command(name = "dualmap-inv")]
    DualmapInv { dual: String },
    /// Projection onto a named ball.
    Project {
        /// Primal function name (metric/gpi) or dual function name (pi).
        function: String,
        #[arg(long)]
        set: String,
        #[arg(long, value_enum)]
        kind: ProjectKind,
        /// Cross-check the result against the sampling oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Maximize a dual pairing over a named set.
    Solve {
        dual: String,
        #[arg(long)]
        set: String,
    },
    /// Is the function a maximizer of the dual pairing over the set?
    Member {
        dual: String,
        function: String,
        #[arg(long)]
        set: String,
    },
    /// Dual (or primal, with --star) ray of functionals maximized at the
    /// function over an origin-centered ball.
    #[command(name = "inverse-image")]
    InverseImage {
        function: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        star: bool,
    },
    /// Optimal/none-optimal classification of a ball point.
    Classify {
        function: String,
        #[arg(long)]
        set: String,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        what: DemoCommand,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Sampling effort for randomized suites.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// RNG seed; defaults to BOCHNER_OPT_SEED or 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory holding the shipped problem files.
        #[arg(long, default_value = "problems")]
        problems_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProjectKind {
    Metric,
    Pi,
    Gpi,
}

#[derive(Subcommand)]
enum DemoCommand {
    /// The segment counterexample: certifying functions do not form a convex
    /// set.
    Nonconvexity,
}

fn env_seed() -> u64 {
    std::env::var("BOCHNER_OPT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn load_problem(cli_problem: &Option<PathBuf>) -> Result<(Problem, String), CliError> {
    let path = cli_problem
        .as_ref()
        .ok_or_else(|| CliError::Validation("--problem <file> is required".to_string()))?;
    Ok((Problem::load(path)?, path.display().to_string()))
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let doc = match &cli.command {
        Command::Norm { function } => {
            let (problem, path) = load_problem(&cli.problem)?;
            commands::norm(&problem, function, &path)?
        }
        Command::Pair { dual, function } => {
            let (problem, path) = load_problem(&cli.problem)?;
            commands::pair(&problem, dual, function, &path)?
        }
        Command::Dualmap { function } => {
            let (problem, path) = load_problem(&cli.problem)?;
            commands::dualmap(&problem, function, &path)?
        }
        Command::DualmapInv { dual } => {
            let (problem, path) = load_problem(&cli.problem)?;
            commands::dualmap_inv(&problem, dual, &path)?
        }
        Command::Project {
            function,
            set,
            kind,
            oracle,
        } => {
            let (problem, path) = load_problem(&cli.problem)?;
            let kind = match kind {
                ProjectKind::Metric => ProjectionKind::Metric,
                ProjectKind::Pi => ProjectionKind::Pi,
                ProjectKind::Gpi => ProjectionKind::Gpi,
            };
            commands::project(&problem, function, set, kind, *oracle, env_seed(), &path)?
        }
        Command::Solve { dual, set } => {
            let (problem, path) = load_problem(&cli.problem)?;
            commands::solve_cmd(&problem, dual, set, &path)?
        }
        Command::Member {
            dual,
            function,
            set,
        } => {
            let (problem, path) = load_problem(&cli.problem)?;
            commands::member(&problem, dual, function, set, &path)?
        }
        Command::InverseImage {
            function,
            set,
            star,
        } => {
            let (problem, path) = load_problem(&cli.problem)?;
            commands::inverse_image(&problem, function, set, *star, &path)?
        }
        Command::Classify { function, set } => {
            let (problem, path) = load_problem(&cli.problem)?;
            commands::classify(&problem, function, set, &path)?
        }
        Command::Demo { what } => match what {
            DemoCommand::Nonconvexity => commands::demo_nonconvexity()?,
        },
        Command::Verify {
            suite,
            samples,
            seed,
            problems_dir,
        } => {
            let seed = seed.unwrap_or_else(env_seed);
            let (doc, all_passed) = verify::run(suite, *samples, seed, problems_dir)?;
            output::print_doc(&doc)
                .map_err(|e| CliError::Validation(format!("cannot write output: {e}")))?;
            return Ok(if all_passed { 0 } else { 3 });
        }
    };
    output::print_doc(&doc)
        .map_err(|e| CliError::Validation(format!("cannot write output: {e}")))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
