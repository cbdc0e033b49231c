//! Batch front end for `intdiff-core`.
//!
//! [`run`] parses the command line, dispatches one command and renders a
//! deterministic report. Every report starts with a header carrying the
//! schema version and the session configuration.

pub mod args;
mod commands;
pub mod expr;
pub mod format;

use std::io::Read;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Map, Value};

use intdiff_core::algebra_base::IdealError;
use intdiff_core::classify::ClassifyError;
use intdiff_core::weight_modules::{ModuleError, Window};
use intdiff_core::{Field, OperatorError, Scalar};

use args::{Cli, FieldArg};
use expr::{ExprError, ParseError};

/// Version tag of the report format.
pub const SCHEMA: &str = "intdiff/1";

/// Environment variable holding the default field.
pub const FIELD_ENV: &str = "INTDIFF_FIELD";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// A structured error with its exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    pub details: Map<String, Value>,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            kind: "usage",
            message: msg.into(),
            details: Map::new(),
        }
    }

    pub fn domain(kind: &'static str, msg: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_DOMAIN,
            kind,
            message: msg.into(),
            details: Map::new(),
        }
    }

    pub fn module(e: ModuleError) -> Failure {
        Failure::domain("module", e.to_string())
    }

    pub fn classify(e: ClassifyError) -> Failure {
        Failure::domain("classify", e.to_string())
    }

    pub fn operator(e: OperatorError) -> Failure {
        Failure::domain("operator", e.to_string())
    }

    pub fn ideal(e: IdealError) -> Failure {
        Failure::domain("ideal", e.to_string())
    }

    /// A syntax error; `line_offset` shifts lines of batch input.
    pub fn parse(e: &ParseError, line_offset: usize) -> Failure {
        let mut details = Map::new();
        details.insert("line".into(), json!(e.line + line_offset));
        details.insert("column".into(), json!(e.column));
        details.insert("span".into(), json!([e.span.start, e.span.end]));
        details.insert("expected".into(), json!(e.expected));
        Failure {
            code: EXIT_USAGE,
            kind: "parse",
            message: ParseError {
                line: e.line + line_offset,
                ..e.clone()
            }
            .to_string(),
            details,
        }
    }

    pub fn expr(e: ExprError) -> Failure {
        match e {
            ExprError::Parse(p) => Failure::parse(&p, 0),
            ExprError::Operator(o) => Failure::operator(o),
        }
    }

    fn to_json(&self) -> Value {
        let mut o = self.details.clone();
        o.insert("kind".into(), json!(self.kind));
        o.insert("message".into(), json!(self.message));
        o.insert("exit_code".into(), json!(self.code));
        Value::Object(o)
    }
}

pub(crate) fn check_field(c: &Scalar, field: Field) -> Result<(), Failure> {
    if field.contains(c) {
        Ok(())
    } else {
        Err(Failure::domain(
            "field",
            format!("{} lies outside {} (use --field qi)", c, field.name()),
        ))
    }
}

/// Immutable per-invocation settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub field: Field,
    pub arity: Option<usize>,
    pub window: Option<Window>,
    pub deg: u32,
    pub json: bool,
    pub seed: u64,
}

impl Config {
    pub fn n(&self) -> usize {
        self.arity.unwrap_or(1)
    }

    /// The window for `n` slots; a single interval is repeated.
    pub fn window_for(&self, n: usize, default: (i64, i64)) -> Result<Window, Failure> {
        match &self.window {
            None => Ok(vec![default; n]),
            Some(w) if w.len() == 1 => Ok(vec![w[0]; n]),
            Some(w) if w.len() == n => Ok(w.clone()),
            Some(w) => Err(Failure::usage(format!(
                "window has {} intervals but the module has {} slots",
                w.len(),
                n
            ))),
        }
    }
}

pub fn parse_window(s: &str) -> Result<Window, Failure> {
    s.split(',')
        .map(|part| {
            let bad = || Failure::usage(format!("invalid window interval `{}` (use a..b)", part));
            let (a, b) = part.trim().split_once("..").ok_or_else(bad)?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(Failure::usage(format!("empty window interval `{}`", part)));
            }
            Ok((a, b))
        })
        .collect()
}

pub fn window_text(w: &[(i64, i64)]) -> String {
    let parts: Vec<String> = w.iter().map(|(a, b)| format!("{}..{}", a, b)).collect();
    parts.join(",")
}

/// Result of a command before rendering.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub result: Map<String, Value>,
    pub text: Vec<String>,
    /// Effective arity and window when the command determined them.
    pub arity: Option<usize>,
    pub window: Option<Window>,
    /// Exit code for a completed report whose checks failed.
    pub code: i32,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn set(&mut self, key: &str, v: Value) -> &mut Report {
        self.result.insert(key.into(), v);
        self
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Report {
        self.text.push(s.into());
        self
    }
}

fn config_json(cfg: &Config, arity: Option<usize>, window: Option<&Window>) -> Value {
    json!({
        "field": cfg.field.name(),
        "arity": arity.unwrap_or(cfg.n()),
        "window": window
            .or(cfg.window.as_ref())
            .map(|w| w.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>()),
        "deg": cfg.deg,
        "seed": cfg.seed,
        "output": if cfg.json { "json" } else { "text" },
    })
}

fn header_text(command: &str, cfg: &Config, arity: Option<usize>, window: Option<&Window>) -> String {
    let w = window
        .or(cfg.window.as_ref())
        .map_or_else(|| "-".to_string(), |w| window_text(w));
    format!(
        "# {} {} field={} arity={} window={} deg={} seed={}",
        SCHEMA,
        command,
        cfg.field.name(),
        arity.unwrap_or(cfg.n()),
        w,
        cfg.deg,
        cfg.seed
    )
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn field_from_env(v: &str) -> Result<Field, Failure> {
    match v {
        "q" => Ok(Field::Rational),
        "qi" => Ok(Field::Gaussian),
        _ => Err(Failure::usage(format!(
            "{} must be q or qi, found `{}`",
            FIELD_ENV, v
        ))),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run(args: &[String], stdin: &mut dyn Read, env_field: Option<&str>) -> Output {
    let wants_json = args.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    stdout: e.to_string(),
                    stderr: String::new(),
                    code: EXIT_OK,
                },
                _ => {
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let f = Failure::usage(first.to_string());
                    let stdout = if wants_json {
                        render(&json!({"schema": SCHEMA, "error": f.to_json()}))
                    } else {
                        String::new()
                    };
                    Output {
                        stdout,
                        stderr: msg,
                        code: EXIT_USAGE,
                    }
                }
            };
        }
    };
    let g = &cli.global;
    let command = commands::name(&cli.command);
    let setup = (|| -> Result<Config, Failure> {
        let field = match (g.field, env_field) {
            (Some(FieldArg::Q), _) => Field::Rational,
            (Some(FieldArg::Qi), _) => Field::Gaussian,
            (None, Some(v)) => field_from_env(v)?,
            (None, None) => Field::Rational,
        };
        if g.arity == Some(0) {
            return Err(Failure::usage("arity must be at least 1"));
        }
        Ok(Config {
            field,
            arity: g.arity,
            window: g.window.as_deref().map(parse_window).transpose()?,
            deg: g.deg,
            json: g.json,
            seed: g.seed,
        })
    })();
    let fallback = Config {
        field: Field::Rational,
        arity: None,
        window: None,
        deg: g.deg,
        json: g.json,
        seed: g.seed,
    };
    let (cfg, outcome) = match setup {
        Ok(cfg) => {
            let input = match &g.input {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("cannot read {}: {}", path, e)))
                    .map(Some),
                None => Ok(None),
            };
            let outcome = input.and_then(|input| {
                let mut ctx = commands::Ctx {
                    cfg: &cfg,
                    input: input.as_deref(),
                    stdin,
                };
                commands::dispatch(&cli.command, &mut ctx)
            });
            (cfg, outcome)
        }
        Err(f) => (fallback, Err(f)),
    };
    let (body, stderr, code) = match outcome {
        Ok(rep) => {
            let code = rep.code;
            let body = if cfg.json {
                let mut top = Map::new();
                top.insert("schema".into(), json!(SCHEMA));
                top.insert("command".into(), json!(command));
                top.insert(
                    "config".into(),
                    config_json(&cfg, rep.arity, rep.window.as_ref()),
                );
                top.insert("result".into(), Value::Object(rep.result));
                render(&Value::Object(top))
            } else {
                let mut s = header_text(command, &cfg, rep.arity, rep.window.as_ref());
                s.push('\n');
                for l in &rep.text {
                    s.push_str(l);
                    s.push('\n');
                }
                s
            };
            (body, String::new(), code)
        }
        Err(f) => {
            let body = if cfg.json {
                render(&json!({
                    "schema": SCHEMA,
                    "command": command,
                    "config": config_json(&cfg, None, None),
                    "error": f.to_json(),
                }))
            } else {
                String::new()
            };
            (body, format!("error[{}]: {}\n", f.kind, f.message), f.code)
        }
    };
    match (&g.output, code) {
        (Some(path), EXIT_OK | EXIT_DOMAIN) if !body.is_empty() => match std::fs::write(path, &body) {
            Ok(()) => Output {
                stdout: String::new(),
                stderr,
                code,
            },
            Err(e) => Output {
                stdout: String::new(),
                stderr: format!("error[usage]: cannot write {}: {}\n", path, e),
                code: EXIT_USAGE,
            },
        },
        _ => Output {
            stdout: body,
            stderr,
            code,
        },
    }
}

/// Convenience wrapper taking string slices.
pub fn run_args(args: &[&str], stdin: &str) -> Output {
    let args: Vec<String> = std::iter::once("intdiff")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    run(&args, &mut stdin.as_bytes(), None)
}
