//! Command-line driver for `mzv-core`.

pub mod expr;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use mzv_core::numeric::{z_num, zeta_num, DEFAULT_CUTOFF};
use mzv_core::relations::rsf_element;
use mzv_core::{decompose, run_suite, Composition, Error, EvalResult, Suite, SuiteConfig, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mzv", version, about = "Word algebra, derivation relations and multiple zeta values")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression and print the resulting polynomial.
    Expand {
        expr: String,
    },
    /// Write a restricted-sum element as a combination of derivation generators.
    Decompose {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long = "max-weight")]
        max_weight: Option<usize>,
        #[arg(long = "M", default_value_t = DEFAULT_CUTOFF)]
        cutoff: u64,
    },
    /// Evaluate a multiple zeta value numerically.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, required_unless_present = "index", conflicts_with = "index")]
    word: Option<String>,
    /// Index such as "(2,1)".
    #[arg(long, required_unless_present = "word")]
    index: Option<String>,
    #[arg(long = "M", default_value_t = DEFAULT_CUTOFF)]
    cutoff: u64,
}

/// Result of running one command: exit code plus what goes to each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Outcome {
        let code = match e {
            Error::NotInSpan { .. } | Error::NoSolution { .. } => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Expand { expr } => expand(expr, cli.json),
        Command::Decompose { a, b, k } => decompose_cmd(*a, *b, *k, cli.json),
        Command::Verify {
            suite,
            cap,
            max_weight,
            cutoff,
        } => verify(suite, *cap, *max_weight, *cutoff, cli.json),
        Command::Eval(args) => eval(args, cli.json),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn expand(text: &str, json: bool) -> mzv_core::Result<Outcome> {
    let p = expr::evaluate(text)?;
    Ok(Outcome::ok(if json {
        to_json(&p)
    } else {
        format!("{p}\n")
    }))
}

fn decompose_cmd(a: usize, b: usize, k: usize, json: bool) -> mzv_core::Result<Outcome> {
    let target = rsf_element(a, b, k)?;
    let cert = decompose(&target, k)?;
    if !cert.verify() {
        return Ok(Outcome {
            code: EXIT_FAILED,
            stdout: format!("{cert}\n"),
            stderr: "error: certificate does not re-expand to the target\n".into(),
        });
    }
    Ok(Outcome::ok(if json {
        to_json(&cert)
    } else {
        format!("{cert}\n")
    }))
}

fn verify(
    suite: &str,
    cap: Option<u32>,
    max_weight: Option<usize>,
    cutoff: u64,
    json: bool,
) -> mzv_core::Result<Outcome> {
    let suite: Suite = suite.parse()?;
    if cutoff < 10 {
        return Err(Error::Usage(format!("--M must be at least 10, got {cutoff}")));
    }
    let config = SuiteConfig {
        cap,
        max_weight,
        cutoff,
    };
    let reports = run_suite(suite, &config)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let stdout = if json {
        to_json(&reports)
    } else {
        let mut s = String::new();
        for r in &reports {
            writeln!(s, "{r}").unwrap();
        }
        writeln!(s, "{} checks, {} passed, {} failed", reports.len(), reports.len() - failed, failed).unwrap();
        s
    };
    Ok(Outcome {
        code: if failed == 0 { EXIT_OK } else { EXIT_FAILED },
        stdout,
        stderr: String::new(),
    })
}

fn eval(args: &EvalArgs, json: bool) -> mzv_core::Result<Outcome> {
    let result: EvalResult = match (&args.word, &args.index) {
        (Some(w), None) => {
            let w: Word = w.parse()?;
            z_num(&mzv_core::NCPoly::word(w), args.cutoff)?
        }
        (None, Some(i)) => {
            let c: Composition = i.parse()?;
            zeta_num(&c, args.cutoff)?
        }
        _ => return Err(Error::Usage("give exactly one of --word, --index".into())),
    };
    Ok(Outcome::ok(if json {
        to_json(&result)
    } else {
        format!(
            "value: {:.15}\ntail_bound: {:e}\nM: {}\n",
            result.value, result.tail_bound, result.cutoff
        )
    }))
}
