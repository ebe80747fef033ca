//! `kn` — exact computations in the Krichever-Novikov superalgebras on the
//! 2- and 3-punctured sphere.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error,
//! 3 domain/config error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kn_core::eval::{eval_to_string, EvalCommandError, EvalError, Format, RunConfig};
use kn_core::liesuper::{table_c1_l, table_c2, StructureTable};
use kn_core::antijordan::{table_c1_j, JordanError};
use kn_core::scalar::parse_rational;
use kn_core::suites::{run_suite, SuiteName};
use kn_core::Config;

#[derive(Parser)]
#[command(name = "kn", version, about, long_about = None)]
struct Cli {
    /// Puncture configuration: 2 (in-point 0) or 3 (in-points +-al).
    #[arg(long, default_value = "3", value_parser = parse_points, global = true)]
    points: Config,

    /// Exact numeric specialization beta = p/q (so al = (p/q)^2).
    #[arg(long, global = true)]
    beta: Option<String>,

    /// Index window for tables and verification suites.
    #[arg(long, default_value_t = 4, global = true)]
    window: i64,

    /// Projective connection as a merofun expression, e.g. "(z^2-al^2)^-1".
    #[arg(long, global = true)]
    connection: Option<String>,

    /// Output format.
    #[arg(long, default_value = "pretty", global = true)]
    format: FormatArg,

    /// Seed for randomized suites (runs are reproducible).
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Pretty,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Pretty => Format::Pretty,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    C2,
    #[value(name = "C1L")]
    C1L,
    #[value(name = "C1J")]
    C1J,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression, e.g. `kn eval "c2(V[2], V[-2])"`.
    Eval { expr: String },
    /// Emit a golden structure table.
    Table { which: TableName },
    /// Run a named verification suite (exit code 1 on any failing check).
    Verify { suite: String },
}

fn parse_points(s: &str) -> Result<Config, String> {
    match s {
        "2" => Ok(Config::TwoPoint),
        "3" => Ok(Config::ThreePoint),
        _ => Err("points must be 2 or 3".to_string()),
    }
}

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_PARSE_ERROR: u8 = 2;
const EXIT_DOMAIN_ERROR: u8 = 3;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(code)
}

fn run_config(cli: &Cli) -> Result<RunConfig, String> {
    let beta = match &cli.beta {
        None => None,
        Some(text) => Some(parse_rational(text).map_err(|e| e.to_string())?),
    };
    Ok(RunConfig {
        points: cli.points,
        beta,
        window: cli.window,
        connection: cli.connection.clone(),
        format: cli.format.into(),
        seed: cli.seed,
    })
}

fn emit_table(table: &StructureTable, rc: &RunConfig) -> Result<String, EvalError> {
    let beta = rc.beta.as_ref();
    let text = match rc.format {
        Format::Json => {
            let v = table.to_json(beta).map_err(EvalError::from)?;
            serde_json::to_string_pretty(&v).expect("valid json")
        }
        Format::Csv => table.to_csv(beta).map_err(EvalError::from)?,
        Format::Pretty => table.to_pretty(beta).map_err(EvalError::from)?,
    };
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rc = match run_config(&cli) {
        Ok(rc) => rc,
        Err(e) => return fail(EXIT_DOMAIN_ERROR, e),
    };
    if let Err(e) = rc.validate() {
        return fail(EXIT_DOMAIN_ERROR, e);
    }
    match &cli.command {
        Command::Eval { expr } => match eval_to_string(expr, &rc) {
            Ok(out) => {
                match rc.format {
                    Format::Pretty => println!("{}", out),
                    Format::Json => println!(
                        "{}",
                        serde_json::json!({ "expr": expr, "value": out })
                    ),
                    Format::Csv => println!("value\n{}", out),
                }
                ExitCode::from(EXIT_OK)
            }
            Err(EvalCommandError::Parse(e)) => fail(EXIT_PARSE_ERROR, e),
            Err(EvalCommandError::Eval(e)) => fail(EXIT_DOMAIN_ERROR, e),
        },
        Command::Table { which } => {
            let table = match which {
                TableName::C2 => table_c2(rc.window, rc.points).map_err(EvalError::from),
                TableName::C1L => table_c1_l(rc.window, rc.points).map_err(EvalError::from),
                TableName::C1J => table_c1_j(rc.window, rc.points).map_err(|e: JordanError| {
                    EvalError::from(e)
                }),
            };
            match table.and_then(|t| emit_table(&t, &rc)) {
                Ok(text) => {
                    print!("{}", text);
                    if !text.ends_with('\n') {
                        println!();
                    }
                    ExitCode::from(EXIT_OK)
                }
                Err(e) => fail(EXIT_DOMAIN_ERROR, e),
            }
        }
        Command::Verify { suite } => {
            let name: SuiteName = match suite.parse() {
                Ok(n) => n,
                Err(e) => return fail(EXIT_DOMAIN_ERROR, e),
            };
            match run_suite(name, &rc) {
                Err(e) => fail(EXIT_DOMAIN_ERROR, e),
                Ok(report) => {
                    let text = match rc.format {
                        Format::Json => serde_json::to_string_pretty(&report.to_json())
                            .expect("valid json"),
                        Format::Csv => report.to_csv(),
                        Format::Pretty => report.to_pretty(),
                    };
                    print!("{}", text);
                    if !text.ends_with('\n') {
                        println!();
                    }
                    if report.passed() {
                        ExitCode::from(EXIT_OK)
                    } else {
                        ExitCode::from(EXIT_VERIFY_FAILED)
                    }
                }
            }
        }
    }
}
