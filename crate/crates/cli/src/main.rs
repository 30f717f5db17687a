use std::path::PathBuf;
use std::process::ExitCode;

use ab_homotopy::verify::{
    check_algebra, mutation, verify_envelope, AlgebraSource, Bounds, Group, Report, SuiteConfig, EXIT_FAIL, EXIT_USAGE,
};
use ab_homotopy::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Checks (a,b)-algebras and the identities of their homotopy envelopes.
#[derive(Parser)]
#[command(name = "ab-verify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of an instance on all retained generators.
    CheckAlgebra(Common),
    /// Run the identity ladder on tensor and symmetric words.
    VerifyEnvelope(Common),
    /// Perturb single structure constants and require a detection for each.
    Mutation {
        #[command(flatten)]
        common: Common,
        /// Number of perturbations.
        #[arg(long, default_value_t = 10)]
        mutants: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Builtin instance name or path to a JSON algebra file.
    #[arg(long)]
    algebra: String,
    /// Instance parameter, `key=value`; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// Longest tensor word.
    #[arg(long, value_name = "L", default_value_t = 3)]
    max_word_len: usize,
    /// Most factors in a symmetric word.
    #[arg(long, value_name = "N", default_value_t = 2)]
    max_sym_factors: usize,
    /// Most letters in a symmetric word.
    #[arg(long, default_value_t = 4)]
    max_letters: usize,
    /// Degree truncation of a builtin instance.
    #[arg(long, value_name = "M", allow_negative_numbers = true)]
    max_degree: Option<i64>,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, value_name = "J", default_value_t = 0)]
    jobs: usize,
    /// Restrict to these suites; repeatable.
    #[arg(long, value_enum)]
    suite: Vec<Suite>,
    /// Also write the JSON report here.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Record wall time per identity (reports are then not reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Shuffle,
    Cobracket,
    Coderivation,
    Bracket,
    BracketPrime,
    BracketDoublePrime,
    Coproduct,
    Codifferential,
    CobracketDoublePrime,
    Specialization,
}

impl From<Suite> for Group {
    fn from(s: Suite) -> Group {
        match s {
            Suite::Shuffle => Group::Shuffle,
            Suite::Cobracket => Group::Cobracket,
            Suite::Coderivation => Group::Coderivation,
            Suite::Bracket => Group::Bracket,
            Suite::BracketPrime => Group::BracketPrime,
            Suite::BracketDoublePrime => Group::BracketDoublePrime,
            Suite::Coproduct => Group::Coproduct,
            Suite::Codifferential => Group::Codifferential,
            Suite::CobracketDoublePrime => Group::CobracketDoublePrime,
            Suite::Specialization => Group::Specialization,
        }
    }
}

impl Common {
    fn config(&self, mutants: usize) -> SuiteConfig {
        SuiteConfig {
            bounds: Bounds {
                max_word_len: self.max_word_len,
                max_sym_factors: self.max_sym_factors,
                max_letters: self.max_letters,
            },
            seed: self.seed,
            jobs: self.jobs,
            timings: self.timings,
            groups: if self.suite.is_empty() {
                Group::ALL.to_vec()
            } else {
                self.suite.iter().map(|&s| s.into()).collect()
            },
            mutants,
        }
    }
}

fn run(cli: &Cli) -> Result<(Report, &Common), Error> {
    let (common, mutants) = match &cli.command {
        Command::CheckAlgebra(c) | Command::VerifyEnvelope(c) => (c, 0),
        Command::Mutation { common, mutants } => (common, *mutants),
    };
    let cfg = common.config(mutants);
    let inst = AlgebraSource::parse(&common.algebra, &common.params, common.max_degree)?.load()?;
    let report = match &cli.command {
        Command::CheckAlgebra(_) => check_algebra(&inst, &cfg)?,
        Command::VerifyEnvelope(_) => verify_envelope(&inst, &cfg)?,
        Command::Mutation { .. } => mutation(&inst, &cfg)?,
    };
    Ok((report, common))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, common) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("ab-verify: {e}");
            let code = match e {
                Error::Usage(_) | Error::Parse { .. } => EXIT_USAGE,
                _ => EXIT_FAIL,
            };
            return ExitCode::from(code as u8);
        }
    };
    if let Some(path) = &common.report {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("ab-verify: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    match common.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code() as u8)
}
