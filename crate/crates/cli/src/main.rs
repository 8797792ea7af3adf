//! `torifactor`: command-line access to fan matrices, coverings, torsion,
//! Picard and Cartier bases, and reconstruction from quotient data.

mod input;
mod jobs;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jobs::{Command, Options};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] torifactor::Error),
}

impl CliError {
    /// 2 for a violated mathematical precondition, 1 for anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_precondition() => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Plain,
}

#[derive(Parser)]
#[command(name = "torifactor", version, about = "Exact toric quotient computations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct InputArg {
    /// Input file, or `-` for standard input.
    #[arg(long, short, default_value = "-")]
    input: String,
}

#[derive(Args)]
struct FanArg {
    /// Restrict to the K-th fan (1-based, in enumeration order).
    #[arg(long, value_name = "K")]
    fan: Option<usize>,
}

#[derive(Subcommand)]
enum Sub {
    /// Row Hermite normal form with its unimodular transform.
    Hnf(InputArg),
    /// Smith normal form with both transforms.
    Snf(InputArg),
    /// Gale dual of a matrix.
    Gale(InputArg),
    /// Report which fan-matrix and weight-matrix conditions hold.
    Classify(InputArg),
    /// Enumerate the simplicial complete fans over a fan matrix.
    Fans {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        fan: FanArg,
        /// Print only the number of fans.
        #[arg(long)]
        count: bool,
    },
    /// Universal 1-covering and the factor β.
    Cover(InputArg),
    /// Torsion invariants and generators of the class group.
    Torsion(InputArg),
    /// A torsion matrix Γ.
    Gamma(InputArg),
    /// Picard lattice basis for each fan.
    Picard {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        fan: FanArg,
    },
    /// Cartier basis C_X for each fan.
    Cartier {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        fan: FanArg,
    },
    /// Rebuild a fan matrix from Q and Γ.
    Reconstruct(InputArg),
    /// Decide whether two fan matrices agree up to GL(n,Z) and column order.
    Equiv(InputArg),
    /// Run every stage on one fan matrix.
    Pipeline {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        fan: FanArg,
        /// Skip the consistency checks on the results.
        #[arg(long)]
        no_verify: bool,
    },
    /// Run job files concurrently; results keep the order of the arguments.
    Batch {
        /// Job files: {"command": ..., "input": ..., "fan": K, "count": bool, "no_verify": bool}.
        #[arg(required = true)]
        jobs: Vec<String>,
    },
}

fn max_perm() -> Result<Option<u64>, CliError> {
    match std::env::var("TORIFACTOR_MAX_PERM") {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Malformed(format!("TORIFACTOR_MAX_PERM={s:?} is not a count"))),
    }
}

fn run_single(cmd: Command, path: &str, opts: &Options) -> Result<Value, CliError> {
    let doc = input::parse_document(&input::read_source(path)?)?;
    jobs::run(cmd, &doc, opts)
}

fn batch_job(path: &str, max_perm: Option<u64>) -> Result<Value, CliError> {
    let doc = input::parse_document(&input::read_source(path)?)?;
    let cmd: Command = doc
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Malformed("job needs a \"command\" string".into()))?
        .parse()?;
    let flag = |key: &str| doc.get(key).and_then(Value::as_bool).unwrap_or(false);
    let fan = match doc.get("fan") {
        None => None,
        Some(k) => Some(
            k.as_u64()
                .ok_or_else(|| CliError::Malformed("\"fan\" must be a positive integer".into()))?
                as usize,
        ),
    };
    let opts = Options {
        fan,
        count: flag("count"),
        verify: !flag("no_verify"),
        max_perm,
    };
    let body = doc
        .get("input")
        .ok_or_else(|| CliError::Malformed("job needs an \"input\"".into()))?;
    jobs::run(cmd, body, &opts)
}

fn run_batch(paths: &[String], max_perm: Option<u64>) -> (Value, u8) {
    let results: Vec<Result<Value, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = paths
            .iter()
            .map(|p| s.spawn(move || batch_job(p, max_perm)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(CliError::Io("job panicked".into())))
            })
            .collect()
    });
    let mut code = 0;
    let entries = paths
        .iter()
        .zip(results)
        .map(|(path, r)| match r {
            Ok(v) => json!({"job": path, "status": "ok", "result": v}),
            Err(e) => {
                code = code.max(e.exit_code());
                json!({"job": path, "status": "error", "exit_code": e.exit_code(), "message": e.to_string()})
            }
        })
        .collect();
    (Value::Array(entries), code)
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => output::json_text(v),
        Format::Plain => output::plain(v),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let max_perm = match max_perm() {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let base = Options {
        max_perm,
        ..Options::default()
    };
    let (cmd, path, opts) = match cli.command {
        Sub::Batch { jobs } => {
            let (value, code) = run_batch(&jobs, max_perm);
            print!("{}", render(&value, cli.format));
            return ExitCode::from(code);
        }
        Sub::Hnf(i) => (Command::Hnf, i.input, base),
        Sub::Snf(i) => (Command::Snf, i.input, base),
        Sub::Gale(i) => (Command::Gale, i.input, base),
        Sub::Classify(i) => (Command::Classify, i.input, base),
        Sub::Fans { input, fan, count } => (
            Command::Fans,
            input.input,
            Options {
                fan: fan.fan,
                count,
                ..base
            },
        ),
        Sub::Cover(i) => (Command::Cover, i.input, base),
        Sub::Torsion(i) => (Command::Torsion, i.input, base),
        Sub::Gamma(i) => (Command::Gamma, i.input, base),
        Sub::Picard { input, fan } => (Command::Picard, input.input, Options { fan: fan.fan, ..base }),
        Sub::Cartier { input, fan } => (Command::Cartier, input.input, Options { fan: fan.fan, ..base }),
        Sub::Reconstruct(i) => (Command::Reconstruct, i.input, base),
        Sub::Equiv(i) => (Command::Equiv, i.input, base),
        Sub::Pipeline {
            input,
            fan,
            no_verify,
        } => (
            Command::Pipeline,
            input.input,
            Options {
                fan: fan.fan,
                verify: !no_verify,
                ..base
            },
        ),
    };
    match run_single(cmd, &path, &opts) {
        Ok(value) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(render(&value, cli.format).as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
