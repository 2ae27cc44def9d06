use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dowker_core::homology::homology_with;
use dowker_core::verify::{run_verification, Check, VerifyConfig};
use dowker_core::{
    check_fiber_hypothesis, dowker_complex, enumerate_concepts, rectangle_complex_with,
    transpose_dowker_complex, Coefficients, Error, Limits, Relation, Simplex, SimplicialComplex,
};

/// Dowker, transpose-Dowker and rectangle complexes of finite relations.
///
/// Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource
/// guard.
#[derive(Parser)]
#[command(name = "dowker", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complex and write it as JSON.
    Build {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Kind::Dowker)]
        kind: Kind,
        #[command(flatten)]
        guard: Guard,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Homology of a complex as JSON.
    Homology {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Kind::Dowker)]
        kind: Kind,
        /// Augmented chain complex (reduced homology).
        #[arg(long)]
        reduced: bool,
        /// z, q, z2 or zp:<p>.
        #[arg(long, default_value = "z")]
        coeff: String,
        #[command(flatten)]
        guard: Guard,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// All formal concepts, including the top and bottom ones.
    Concepts {
        #[command(flatten)]
        input: Input,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Inspect the fiber of the projection onto the Dowker complex.
    Fiber {
        #[command(flatten)]
        input: Input,
        /// Comma-separated objects forming a simplex of the Dowker complex.
        #[arg(long, value_delimiter = ',', required = true)]
        simplex: Vec<String>,
        #[command(flatten)]
        guard: Guard,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Randomized verification campaign.
    Verify(VerifyArgs),
    /// 1-skeleton as a Graphviz graph.
    #[command(alias = "export-dot")]
    Dot {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Kind::Dowker)]
        kind: Kind,
        #[command(flatten)]
        guard: Guard,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Relation file (JSON or CSV); `-` reads standard input.
    input: PathBuf,
    /// Overrides detection by file extension.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct Guard {
    /// Largest facet dimension accepted.
    #[arg(long, default_value_t = Limits::default().max_dimension)]
    max_dim: usize,
    /// Largest number of simplices materialized for one chain complex.
    #[arg(long, default_value_t = Limits::default().max_simplices)]
    max_simplices: usize,
}

impl Guard {
    fn limits(&self) -> Limits {
        Limits {
            max_dimension: self.max_dim,
            max_simplices: self.max_simplices,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    max_x: usize,
    #[arg(long, default_value_t = 5)]
    max_y: usize,
    /// Densities to sample from, comma-separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
    )]
    density_grid: Vec<f64>,
    /// Comma-separated subset of: betti, quasi-iso, fiber, naturality,
    /// functorial, functor-laws, algebra.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Worker threads (default: one per core).
    #[arg(long)]
    threads: Option<usize>,
    /// Fibers are checked over Dowker simplices up to this dimension.
    #[arg(long, default_value_t = 6)]
    fiber_max_dim: usize,
    /// Report failing inputs as found, without shrinking them.
    #[arg(long)]
    no_shrink: bool,
    #[command(flatten)]
    guard: Guard,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Dowker,
    DowkerTranspose,
    Rectangle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Verification,
    Input(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_guard() {
            Failure::Guard(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn load(input: &Input) -> CliResult<Relation> {
    let path = &input.input;
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    let format = input.format.unwrap_or_else(|| {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    });
    let parsed = match format {
        Format::Json => Relation::from_json_str(&text),
        Format::Csv => Relation::from_csv_str(&text),
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn build(relation: &Relation, kind: Kind, limits: &Limits) -> CliResult<SimplicialComplex> {
    let complex = match kind {
        Kind::Dowker => dowker_complex(relation),
        Kind::DowkerTranspose => transpose_dowker_complex(relation),
        Kind::Rectangle => rectangle_complex_with(relation, limits)?,
    };
    complex.check_dimension(limits)?;
    Ok(complex)
}

/// Writes `text` to `output` or standard output.
fn emit(output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Summary lines go to standard error when the payload uses standard output.
fn note(output: Option<&Path>, line: &str) {
    if output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Build {
            input,
            kind,
            guard,
            output,
        } => {
            let complex = build(&load(&input)?, kind, &guard.limits())?;
            emit(output.as_deref(), &json(&complex.to_json()))?;
            note(
                output.as_deref(),
                &format!(
                    "facets: {}, vertices: {}, dimension: {}",
                    complex.num_facets(),
                    complex.vertices().len(),
                    complex.dimension()
                ),
            );
            Ok(())
        }
        Command::Homology {
            input,
            kind,
            reduced,
            coeff,
            guard,
            output,
        } => {
            let coefficients: Coefficients = coeff.parse()?;
            let limits = guard.limits();
            let complex = build(&load(&input)?, kind, &limits)?;
            let result = homology_with(&complex, reduced, coefficients, &limits)?;
            emit(output.as_deref(), &json(&result))
        }
        Command::Concepts { input, output } => {
            let concepts = enumerate_concepts(&load(&input)?);
            emit(output.as_deref(), &json(&concepts))?;
            note(output.as_deref(), &format!("{} concepts", concepts.len()));
            Ok(())
        }
        Command::Fiber {
            input,
            simplex,
            guard,
            output,
        } => {
            let relation = load(&input)?;
            let sigma = Simplex::new(simplex)?;
            let report = check_fiber_hypothesis(&relation, &sigma, &guard.limits())?;
            emit(output.as_deref(), &json(&report))
        }
        Command::Verify(args) => {
            let checks = if args.checks.is_empty() {
                Check::ALL.to_vec()
            } else {
                args.checks
                    .iter()
                    .map(|c| c.parse())
                    .collect::<Result<Vec<Check>, Error>>()?
            };
            let config = VerifyConfig {
                trials: args.trials,
                seed: args.seed,
                max_x: args.max_x,
                max_y: args.max_y,
                densities: args.density_grid,
                checks,
                threads: args.threads,
                fiber_max_dimension: args.fiber_max_dim,
                limits: args.guard.limits(),
                shrink: !args.no_shrink,
                ..VerifyConfig::default()
            };
            let report = run_verification(&config)?;
            emit(args.output.as_deref(), &json(&report))?;
            eprintln!(
                "{} trials, {} failures, {:.2?}",
                report.trials,
                report.failures.len(),
                report.elapsed
            );
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Dot {
            input,
            kind,
            guard,
            output,
        } => {
            let complex = build(&load(&input)?, kind, &guard.limits())?;
            emit(output.as_deref(), &complex.to_dot())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
