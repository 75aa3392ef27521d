use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dglie::moduli::Convention;
use dglie_cli::commands::{self, Degrees};
use dglie_cli::{CliError, Config, Outcome};

/// Exact computations with differential graded Lie algebras over ℚ.
///
/// Exit codes: 0 success, 1 mathematical failure, 2 input or configuration error.
#[derive(Parser, Debug)]
#[command(name = "dglie", version)]
struct Cli {
    /// Print the result document as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Standard,
    PaperLiteral,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Standard => Convention::Standard,
            ConventionArg::PaperLiteral => Convention::PaperLiteral,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of any input document.
    Validate { file: PathBuf },
    /// Homology of the underlying complex, or Chevalley–Eilenberg homology with --ce.
    Homology {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "all")]
        degree: Option<i32>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        ce: bool,
        /// Weight cutoff of the CE complex.
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        /// Print homology representatives.
        #[arg(long)]
        witnesses: bool,
    },
    /// The cone on a dg-Lie algebra, as a new document.
    Cone {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PBW filtration of the universal enveloping algebra.
    Env {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        cutoff: usize,
    },
    /// Free dg-Lie algebra on the underlying complex of a document.
    Free {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maurer–Cartan elements of m_R ⊗ g and their gauge classes.
    Mc {
        lie: PathBuf,
        artin: PathBuf,
        #[arg(long, value_enum, default_value = "standard")]
        convention: ConventionArg,
    },
    /// Tangent space of the deformation functor of a dgla, or Zariski tangent space of a presentation.
    Tangent { file: PathBuf },
    /// A chain of elementary quotients down to the field.
    Small { file: PathBuf },
    /// Augmented maps from a presented algebra into an artinian algebra.
    Spec { presentation: PathBuf, artin: PathBuf },
    /// Whether a morphism is a weak equivalence, and what it induces on CE homology.
    Qiso {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
    },
}

fn run(cli: &Cli, cfg: &Config) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate { file } => commands::validate(file, cfg),
        Command::Homology { file, degree, all: _, ce, cutoff, witnesses } => {
            let which = degree.map_or(Degrees::All, Degrees::One);
            commands::homology(file, which, ce.then_some(*cutoff), *witnesses, cfg)
        }
        Command::Cone { file, out } => commands::cone_cmd(file, out.as_deref(), cfg),
        Command::Env { file, cutoff } => commands::env(file, *cutoff, cfg),
        Command::Free { file, cutoff, out } => commands::free(file, *cutoff, out.as_deref(), cfg),
        Command::Mc { lie, artin, convention } => commands::mc(lie, artin, (*convention).into(), cfg),
        Command::Tangent { file } => commands::tangent(file, cfg),
        Command::Small { file } => commands::small(file, cfg),
        Command::Spec { presentation, artin } => commands::spec(presentation, artin, cfg),
        Command::Qiso { file, cutoff } => commands::qiso(file, *cutoff, cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let started = Instant::now();
    let outcome = Config::from_env().and_then(|cfg| run(&cli, &cfg));
    eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    match outcome {
        Ok(outcome) => {
            if cli.json {
                print!("{}", outcome.to_json());
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
