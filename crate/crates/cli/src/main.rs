use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use superharmonic::harmonics::SpaceKind;
use superharmonic::SuperSignature;

mod commands;
mod render;
mod suites;

const SCHEMA_VERSION: &str = "1";

#[derive(Parser, Debug)]
#[command(
    name = "superharmonic",
    version,
    about = "Exact harmonic analysis on the superspace R^{m|2n}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fischer decomposition of P_k
    Fischer(Common),
    /// Branching of H_k (or H~_k with --generalized) to the hyperplane x_m = 0
    Branch {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        generalized: bool,
    },
    /// Gelfand-Tsetlin basis, one "LABEL<TAB>polynomial" line per element
    GtBasis {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Target::H)]
        target: Target,
    },
    /// Run a verification suite
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// number of commuting variables
    #[arg(long, allow_negative_numbers = true)]
    m: i64,
    /// half the number of anticommuting variables
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    /// a single degree
    #[arg(long, allow_negative_numbers = true, conflicts_with = "kmax")]
    k: Option<i64>,
    /// all degrees 0..=kmax
    #[arg(long, allow_negative_numbers = true)]
    kmax: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// refuse degrees above this bound
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    #[value(name = "H")]
    H,
    #[value(name = "Ht", alias = "H~")]
    Ht,
}

impl From<Target> for SpaceKind {
    fn from(t: Target) -> Self {
        match t {
            Target::H => SpaceKind::Harmonic,
            Target::Ht => SpaceKind::Generalized,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Sl2,
    Osp,
    Fischer,
    #[value(name = "theoremA", alias = "theorem-a", alias = "composition")]
    #[serde(rename = "theoremA")]
    TheoremA,
    Ck,
    Branching,
    Gt,
    All,
}

/// Validated run parameters.
pub struct RunConfig {
    pub signature: SuperSignature,
    pub degrees: Vec<usize>,
    format: Format,
    output: Option<PathBuf>,
}

/// What a command produced: both renderings and whether it verified.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub verified: bool,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl Common {
    fn validate(&self, need_single: bool) -> Result<RunConfig, UsageError> {
        let nonneg = |name: &str, v: i64| -> Result<usize, UsageError> {
            usize::try_from(v)
                .map_err(|_| UsageError(format!("--{name} must be non-negative, got {v}")))
        };
        let m = nonneg("m", self.m)?;
        let n = nonneg("n", self.n)?;
        let signature = SuperSignature::new(m, n).map_err(|e| UsageError(e.to_string()))?;
        let degrees: Vec<usize> = match (self.k, self.kmax) {
            (Some(k), None) => vec![nonneg("k", k)?],
            (None, Some(kmax)) if need_single => {
                return Err(UsageError(format!(
                    "this command takes --k, not --kmax {kmax}"
                )))
            }
            (None, Some(kmax)) => (0..=nonneg("kmax", kmax)?).collect(),
            _ => return Err(UsageError("give exactly one of --k or --kmax".into())),
        };
        if let Some(&top) = degrees.iter().max() {
            if top > self.max_degree {
                return Err(UsageError(format!(
                    "degree {top} exceeds the guard {} (raise it with --max-degree)",
                    self.max_degree
                )));
            }
        }
        Ok(RunConfig {
            signature,
            degrees,
            format: self.format,
            output: self.output.clone(),
        })
    }
}

fn envelope(command: &str, cfg: &RunConfig, body: Value) -> Value {
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "signature": { "m": cfg.signature.m(), "n": cfg.signature.n() },
        "superdimension": cfg.signature.superdimension(),
    });
    if let (Value::Object(top), Value::Object(rest)) = (&mut out, body) {
        top.extend(rest);
    }
    out
}

fn emit(cfg: &RunConfig, command: &str, outcome: Outcome) -> std::io::Result<()> {
    let payload = match cfg.format {
        Format::Text => outcome.text,
        Format::Json => {
            let mut body = outcome.json;
            if let Value::Object(map) = &mut body {
                map.insert("verified".into(), Value::Bool(outcome.verified));
            }
            let doc = envelope(command, cfg, body);
            let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
            s.push('\n');
            s
        }
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, payload),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(payload.as_bytes())?;
            out.flush()
        }
    }
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    let (name, cfg, outcome) = match cli.command {
        Command::Fischer(common) => {
            let cfg = common.validate(false)?;
            let outcome = commands::fischer(&cfg);
            ("fischer", cfg, outcome)
        }
        Command::Branch {
            common,
            generalized,
        } => {
            let cfg = common.validate(false)?;
            let outcome = commands::branch(&cfg, generalized)?;
            ("branch", cfg, outcome)
        }
        Command::GtBasis { common, target } => {
            let cfg = common.validate(true)?;
            let outcome = commands::gt_basis(&cfg, target.into());
            ("gt-basis", cfg, outcome)
        }
        Command::Verify { common, suite } => {
            let cfg = common.validate(false)?;
            let outcome = suites::run(&cfg, suite);
            ("verify", cfg, outcome)
        }
    };
    let verified = outcome.verified;
    emit(&cfg, name, outcome).map_err(|e| UsageError(format!("cannot write output: {e}")))?;
    Ok(verified)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
