//! The command-line surface: parse, check, infer, normalize, measures, and
//! the property suites.
//!
//! Exit codes: 0 on success, 1 for stratification violations /
//! unstratifiable input / property failures, 2 for parse or usage errors.

use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::measures::{atomic, complexity, na_pad, ternary_status, TernaryStatus};
use crate::normalize::{self, NormalizeError, RewriteTrace, Status, Strategy};
use crate::parse;
use crate::print::{render, render_formula, Mode};
use crate::props;
use crate::stratify;
use crate::surface::Syntax;

const DEFAULT_SEED: u64 = 0x5742a7a1;

#[derive(Parser)]
#[command(
    name = "stratal",
    version,
    about = "Toolkit for the language of stratified set comprehensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Levels required, written `name:int`
    Tst,
    /// Levels forbidden (inferred where needed)
    Nf,
    /// Levels optional, nothing checked
    Raw,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Tst => Mode::Tst,
            ModeArg::Nf => Mode::Nf,
            ModeArg::Raw => Mode::Raw,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Bigstep,
    Outermost,
    Innermost,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Sigma,
    Confluence,
    Termination,
    Stratify,
}

impl SuiteArg {
    fn name(self) -> &'static str {
        match self {
            SuiteArg::Sigma => "sigma",
            SuiteArg::Confluence => "confluence",
            SuiteArg::Termination => "termination",
            SuiteArg::Stratify => "stratify",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse input and print its canonical form
    Parse {
        #[arg(long, value_enum, default_value_t = ModeArg::Tst)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
        /// Input file, or `-` for stdin
        #[arg(default_value = "-")]
        file: String,
    },
    /// Check stratification of leveled (tst) input
    Check {
        #[arg(long)]
        json: bool,
        #[arg(default_value = "-")]
        file: String,
    },
    /// Infer levels for unleveled (nf) input
    Infer {
        #[arg(long)]
        json: bool,
        #[arg(default_value = "-")]
        file: String,
    },
    /// Rewrite to normal form
    Normalize {
        #[arg(long, value_enum, default_value_t = ModeArg::Tst)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Bigstep)]
        strategy: StrategyArg,
        /// Seed for the random strategy
        #[arg(long)]
        seed: Option<u64>,
        /// Step budget; required in raw mode
        #[arg(long)]
        fuel: Option<u64>,
        /// Emit the rewrite trace as JSON lines
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
        #[arg(default_value = "-")]
        file: String,
    },
    /// Print size, complexity, atomic, ternary (and minlev when
    /// interpretable)
    Measures {
        #[arg(long, value_enum, default_value_t = ModeArg::Tst)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
        #[arg(default_value = "-")]
        file: String,
    },
    /// Run a property suite
    Prop {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 500)]
        cases: u64,
        #[arg(long, default_value_t = 15)]
        max_size: u64,
        /// Defaults to STRATAL_SEED or a fixed constant
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

pub fn run<I>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = String>,
{
    let argv = std::iter::once("stratal".to_owned()).chain(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn read_input(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("reading {file}: {e}"))
    }
}

fn parse_input(file: &str, mode: Mode) -> Result<Result<Syntax, i32>, String> {
    let src = read_input(file)?;
    match parse::parse(src.trim(), mode) {
        Ok(x) => Ok(Ok(x)),
        Err(e) => {
            eprintln!("parse error: {e}");
            Ok(Err(2))
        }
    }
}

fn default_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| {
            std::env::var("STRATAL_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(DEFAULT_SEED)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    match command {
        Command::Parse { mode, json, file } => {
            let mode = Mode::from(mode);
            let x = match parse_input(&file, mode)? {
                Ok(x) => x,
                Err(code) => return Ok(code),
            };
            let kind = match &x {
                Syntax::Formula(_) => "formula",
                Syntax::Term(_) => "term",
            };
            let text = render(&x, mode);
            if json {
                emit(out, &json!({ "kind": kind, "text": text }))?;
            } else {
                line(out, &text)?;
            }
            Ok(0)
        }

        Command::Check { json, file } => {
            let x = match parse_input(&file, Mode::Tst)? {
                Ok(x) => x,
                Err(code) => return Ok(code),
            };
            let violations = stratify::check(&x);
            if json {
                emit(
                    out,
                    &json!({
                        "ok": violations.is_empty(),
                        "violations": violations.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
                    }),
                )?;
            } else if violations.is_empty() {
                line(out, "stratified")?;
            } else {
                for v in &violations {
                    line(out, &format!("violation: {}", v.to_json()))?;
                }
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }

        Command::Infer { json, file } => {
            let x = match parse_input(&file, Mode::Nf)? {
                Ok(x) => x,
                Err(code) => return Ok(code),
            };
            match stratify::infer(&x) {
                Ok(solution) => {
                    let annotated = stratify::apply_solution(&x, &solution);
                    if json {
                        emit(
                            out,
                            &json!({
                                "ok": true,
                                "solution": solution.to_json(),
                                "annotated": render(&annotated, Mode::Raw),
                            }),
                        )?;
                    } else {
                        line(out, "stratifiable")?;
                        for (site, level) in &solution.assignment {
                            line(out, &format!("  {} = {level}", site.to_json()))?;
                        }
                        line(
                            out,
                            &format!("annotated: {}", render(&annotated, Mode::Raw)),
                        )?;
                    }
                    Ok(0)
                }
                Err(violation) => {
                    if json {
                        emit(
                            out,
                            &json!({ "ok": false, "violation": violation.to_json() }),
                        )?;
                    } else {
                        line(out, &format!("unstratifiable: {}", violation.to_json()))?;
                    }
                    Ok(1)
                }
            }
        }

        Command::Normalize {
            mode,
            strategy,
            seed,
            fuel,
            trace,
            json,
            file,
        } => {
            let mode = Mode::from(mode);
            let x = match parse_input(&file, mode)? {
                Ok(x) => x,
                Err(code) => return Ok(code),
            };
            if mode == Mode::Raw && strategy == StrategyArg::Bigstep {
                return Err("big-step normalization needs levels; use --mode tst or nf".into());
            }
            if mode == Mode::Raw && fuel.is_none() {
                return Err("raw mode requires --fuel".into());
            }
            let x = if mode == Mode::Nf {
                match stratify::infer(&x) {
                    Ok(solution) => stratify::apply_solution(&x, &solution),
                    Err(violation) => {
                        line(out, &format!("unstratifiable: {}", violation.to_json()))?;
                        return Ok(1);
                    }
                }
            } else {
                x
            };
            let strategy = match strategy {
                StrategyArg::Bigstep => Strategy::BigStep,
                StrategyArg::Outermost => Strategy::Outermost,
                StrategyArg::Innermost => Strategy::Innermost,
                StrategyArg::Random => Strategy::Random(default_seed(seed)),
            };
            match normalize::normalize(&x, strategy, fuel) {
                Ok(result) => {
                    write_trace_output(out, &result, mode, trace, json)?;
                    Ok(0)
                }
                Err(NormalizeError::StratificationRequired { violations }) => {
                    for v in &violations {
                        line(out, &format!("violation: {}", v.to_json()))?;
                    }
                    Ok(1)
                }
                Err(e) => Err(e.to_string()),
            }
        }

        Command::Measures { mode, json, file } => {
            let mode = Mode::from(mode);
            let x = match parse_input(&file, mode)? {
                Ok(x) => x,
                Err(code) => return Ok(code),
            };
            // minlev needs an interpretation, hence stratified levels.
            let leveled = match mode {
                Mode::Nf => stratify::infer(&x)
                    .ok()
                    .map(|s| stratify::apply_solution(&x, &s)),
                _ => Some(x.clone()),
            };
            let minlev = leveled.and_then(|l| match l {
                Syntax::Formula(f) => normalize::interpret_formula(&f).ok().map(|i| i.minlev()),
                Syntax::Term(t) => normalize::interpret_term(&t).ok().map(|i| i.minlev()),
            });
            let ternary = ternary_status(&x);
            let padded = na_pad(&x);
            let mut payload = json!({
                "size": x.size(),
                "complexity": complexity(&x),
                "atomic": atomic(&x),
                "ternary": ternary.is_all_ternary(),
                "padded": render(&padded, mode),
            });
            if let TernaryStatus::Offending(positions) = &ternary {
                payload["offending"] = json!(positions
                    .iter()
                    .map(|p| p.as_slice().to_vec())
                    .collect::<Vec<_>>());
            }
            if let Some(m) = minlev {
                payload["minlev"] = json!(m);
            }
            if json {
                emit(out, &payload)?;
            } else {
                let obj = payload.as_object().unwrap();
                for (k, v) in obj {
                    line(out, &format!("{k}: {v}"))?;
                }
            }
            Ok(0)
        }

        Command::Prop {
            suite,
            cases,
            max_size,
            seed,
            json,
        } => {
            let report = props::run_suite(suite.name(), cases, max_size, default_seed(seed))
                .expect("suite names are closed");
            if json {
                emit(out, &report.to_json())?;
            } else {
                write!(out, "{}", report.lines()).map_err(|e| e.to_string())?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn write_trace_output(
    out: &mut dyn Write,
    result: &RewriteTrace,
    mode: Mode,
    trace: bool,
    json: bool,
) -> Result<(), String> {
    let status = match result.status {
        Status::Normal => "normal",
        Status::FuelExhausted => "fuel_exhausted",
    };
    if trace {
        emit(out, &json!({ "source": render(&result.source, mode) }))?;
        for step in &result.steps {
            emit(
                out,
                &json!({
                    "pos": step.position.as_slice(),
                    "redex": render_formula(&step.redex, mode),
                    "contractum": render_formula(&step.contractum, mode),
                }),
            )?;
        }
        emit(
            out,
            &json!({
                "result": render(&result.result, mode),
                "status": status,
                "steps": result.steps.len(),
            }),
        )?;
        return Ok(());
    }
    if json {
        emit(
            out,
            &json!({
                "result": render(&result.result, mode),
                "status": status,
                "steps": result.steps.len(),
            }),
        )?;
        return Ok(());
    }
    line(out, &render(&result.result, mode))?;
    if result.status == Status::FuelExhausted {
        line(
            out,
            &format!("fuel exhausted after {} steps", result.steps.len()),
        )?;
    }
    Ok(())
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), String> {
    writeln!(out, "{value}").map_err(|e| e.to_string())
}

fn line(out: &mut dyn Write, s: &str) -> Result<(), String> {
    writeln!(out, "{s}").map_err(|e| e.to_string())
}
