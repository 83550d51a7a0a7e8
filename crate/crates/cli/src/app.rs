//! Argument handling and the four subcommands.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use genfun_core::asymptotics::NegligibilityReport;
use serde::Serialize;

use crate::config::{ConfigError, Overrides, RunConfig, Validated};
use crate::eval::{self, Context, Report};
use crate::expr::{parse_genexpr, ExprError, Kind};
use crate::output::{self, fmt_float};
use crate::{qftcmd, reproduce};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GATE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Region on which `classify` measures sup-norms of function-valued input.
const NEGLIGIBILITY_REGION: (f64, f64) = (-1.0, 1.0);

#[derive(Debug, Parser)]
#[command(name = "genfun", version, about = "Experiments with epsilon-families of smooth functions")]
pub struct Cli {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the random test-function suite.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// eps0,ratio,count
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// kind[:key=value,...]; repeat for several mollifiers.
    #[arg(long = "mollifier", global = true)]
    pub mollifiers: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Product identities across mollifiers and the grid.
    Reproduce,
    /// Evaluate an expression on the grid.
    Eval { expr: String },
    /// Transition probabilities and Dyson partial sums.
    Qft,
    /// Asymptotic class of an expression (sup-norm order for functions).
    Classify { expr: String },
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            grid: self.grid.clone(),
            mollifiers: self.mollifiers.clone(),
            out: self.out.clone(),
        }
    }
}

fn load(cli: &Cli) -> Result<Validated, ConfigError> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    config.apply(&cli.overrides())?;
    config.validate()
}

#[derive(Serialize)]
struct FailureManifest<'a> {
    schema_version: u32,
    command: &'a str,
    failures: &'a [String],
}

fn write_failures(dir: &Path, command: &str, failures: &[String]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    output::write_json(&dir.join("failures.json"), &FailureManifest { schema_version: 1, command, failures })
}

/// Runs the program; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{rendered}") } else { write!(stdout, "{rendered}") };
            return code;
        }
    };
    let v = match load(&cli) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    match &cli.command {
        Command::Reproduce => cmd_reproduce(&v, stdout, stderr),
        Command::Qft => cmd_qft(&v, stdout, stderr),
        Command::Eval { expr } => cmd_eval(&v, expr, cli.out.as_deref(), stdout, stderr),
        Command::Classify { expr } => cmd_classify(&v, expr, stdout, stderr),
    }
}

fn finish(
    dir: &Path,
    command: &str,
    written: std::io::Result<()>,
    failures: &[String],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: writing {}: {e}", dir.display());
        return EXIT_GATE;
    }
    if failures.is_empty() {
        let _ = writeln!(stdout, "{command}: all gates passed; output in {}", dir.display());
        return EXIT_OK;
    }
    for f in failures {
        let _ = writeln!(stderr, "FAIL {f}");
    }
    if let Err(e) = write_failures(dir, command, failures) {
        let _ = writeln!(stderr, "error: writing failure manifest: {e}");
    }
    EXIT_GATE
}

fn cmd_reproduce(v: &Validated, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = reproduce::run(v);
    let dir = &v.config.output.dir;
    let written = reproduce::write(&outcome, dir);
    for (name, ok) in &outcome.summary.gates {
        let _ = writeln!(stdout, "{} {name}", if *ok { "pass" } else { "FAIL" });
    }
    finish(dir, "reproduce", written, &outcome.summary.failures, stdout, stderr)
}

fn cmd_qft(v: &Validated, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = qftcmd::run(v);
    let dir = &v.config.output.dir;
    let written = qftcmd::write(&outcome, dir);
    for (name, ok) in &outcome.summary.gates {
        let _ = writeln!(stdout, "{} {name}", if *ok { "pass" } else { "FAIL" });
    }
    finish(dir, "qft", written, &outcome.summary.failures, stdout, stderr)
}

fn context(v: &Validated) -> Context {
    Context { mollifier: v.mollifier.mollifier.clone(), suite: v.suite.clone(), quad: v.config.tolerances.quad() }
}

fn report_expr_error(src: &str, e: &ExprError, stderr: &mut dyn Write) {
    let _ = writeln!(stderr, "error: {e}");
    let _ = writeln!(stderr, "  {src}");
    let (start, len) = match e {
        ExprError::Syntax(s) => (s.offset, 1),
        ExprError::Type(t) => (t.span.start, (t.span.end - t.span.start).max(1)),
    };
    let pad = src[..start.min(src.len())].chars().count();
    let _ = writeln!(stderr, "  {}{}", " ".repeat(pad), "^".repeat(len));
}

fn cmd_eval(v: &Validated, src: &str, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (e, kind) = match parse_genexpr(src) {
        Ok(p) => p,
        Err(err) => {
            report_expr_error(src, &err, stderr);
            return EXIT_CONFIG;
        }
    };
    let report = match eval::evaluate(&e, kind, &context(v), &v.grid, &v.config.tolerances.thresholds()) {
        Ok(r) => r,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            return EXIT_GATE;
        }
    };
    let (header, lines): (&[&str], Vec<Vec<String>>) = match &report {
        Report::Number { rows, .. } => (
            &["epsilon", "value", "error_estimate"],
            rows.iter().map(|r| vec![fmt_float(r.epsilon), fmt_float(r.value), fmt_float(r.error_estimate)]).collect(),
        ),
        Report::Function { rows, .. } => (
            &["epsilon", "x", "value"],
            rows.iter().map(|r| vec![fmt_float(r.epsilon), fmt_float(r.x), fmt_float(r.value)]).collect(),
        ),
    };
    let _ = writeln!(stdout, "{}", header.join(","));
    for l in &lines {
        let _ = writeln!(stdout, "{}", l.join(","));
    }
    if let Report::Number { class, .. } = &report {
        let _ = writeln!(stdout, "# {}", describe_class(class));
    }
    if let Some(dir) = out {
        let written = std::fs::create_dir_all(dir)
            .and_then(|_| output::write_csv(&dir.join("eval.csv"), header, lines))
            .and_then(|_| output::write_json(&dir.join("eval.json"), &report));
        if let Err(err) = written {
            let _ = writeln!(stderr, "error: writing {}: {err}", dir.display());
            return EXIT_GATE;
        }
    }
    EXIT_OK
}

fn describe_class(class: &genfun_core::asymptotics::AsymptoticClass) -> String {
    use genfun_core::Verdict::*;
    let q = class.fit_quality().map_or("n/a".to_string(), |q| format!("{q:.6}"));
    match &class.verdict {
        FiniteLimit { limit, error } => format!("finite limit {} (error {error:.3e}, fit R^2 {q})", fmt_float(*limit)),
        InfiniteOfOrder { order, coefficient } => {
            format!("infinite of order {order:.6} (coefficient {}, fit R^2 {q})", fmt_float(*coefficient))
        }
        DecaysWithOrder { order, coefficient } => {
            format!("decays with order {order:.6} (coefficient {}, fit R^2 {q})", fmt_float(*coefficient))
        }
        Unclassifiable { reason } => format!("unclassifiable: {reason}"),
    }
}

fn describe_negligibility(r: &NegligibilityReport) -> String {
    match (r.negligible, r.order) {
        (_, None) => "negligible: identically zero on the region".into(),
        (true, Some(o)) => format!("negligible: sup-norm decays with order {o:.6}"),
        (false, Some(o)) => format!("not negligible: sup-norm order {o:.6}"),
    }
}

fn cmd_classify(v: &Validated, src: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (e, kind) = match parse_genexpr(src) {
        Ok(p) => p,
        Err(err) => {
            report_expr_error(src, &err, stderr);
            return EXIT_CONFIG;
        }
    };
    let ctx = context(v);
    let thresholds = v.config.tolerances.thresholds();
    let line = match kind {
        Kind::Function => eval::negligibility(&e, &ctx, NEGLIGIBILITY_REGION, &v.grid, &thresholds).map(|r| {
            let mut s = String::new();
            for (eps, sup) in &r.supnorm_by_eps {
                s.push_str(&format!("{},{}\n", fmt_float(*eps), fmt_float(*sup)));
            }
            format!("epsilon,supnorm\n{s}# {}", describe_negligibility(&r))
        }),
        Kind::Number | Kind::Scalar => eval::evaluate(&e, kind, &ctx, &v.grid, &thresholds).map(|r| match r {
            Report::Number { class, .. } => describe_class(&class),
            Report::Function { .. } => unreachable!("number-valued expression tabulated as a function"),
        }),
    };
    match line {
        Ok(l) => {
            let _ = writeln!(stdout, "{l}");
            EXIT_OK
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            EXIT_GATE
        }
    }
}
