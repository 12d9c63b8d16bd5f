//! Scenario runner for `halfspin-core`: reads a JSON config, runs the
//! selected suites and reports pass, fail or unknown per suite.
//!
//! Exit codes: 0 all pass, 1 any failure, 2 passes with undecided norm
//! questions, 3 configuration error.

pub mod config;
pub mod report;
pub mod serial;
pub mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

use config::{parse_config, ConfigError, Scenario, SuiteSelector};
use report::{exit_code, SuiteReport};

pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "verify", about = "Exact verification suites for half-spin rationality")]
pub struct Cli {
    /// Scenario config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Restrict to these suites; may be repeated.
    #[arg(long = "suite", value_name = "NAME")]
    pub suites: Vec<SuiteSelector>,
    /// One JSON report object per line (default).
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// Human-readable summary.
    #[arg(long)]
    pub text: bool,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config trial count.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Record wall-clock time per suite in the reports.
    #[arg(long)]
    pub timing: bool,
}

/// Loads and validates the config named on the command line.
pub fn load(cli: &Cli) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| ConfigError::new("<file>", format!("cannot read {}: {e}", cli.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    cfg.validate(&cli.suites)
}

/// Runs every selected suite in canonical order.
pub fn run_scenario(sc: &Scenario, timing: bool) -> Vec<SuiteReport> {
    sc.suites
        .iter()
        .map(|&s| {
            let start = Instant::now();
            let mut rep = suites::run_suite(s, sc);
            if timing {
                rep.elapsed = Some(start.elapsed().as_millis() as u64);
            }
            rep
        })
        .collect()
}

pub fn render_json(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}

pub fn render_text(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{:<12} {:<8} {:>7} checks", r.suite, r.status.as_str(), r.checks_run));
        if let Some(ms) = r.elapsed {
            out.push_str(&format!("  {ms} ms"));
        }
        out.push('\n');
        for d in &r.detail {
            out.push_str(&format!("    {d}\n"));
        }
        if let Some(c) = &r.counterexample {
            out.push_str(&format!("    counterexample: {c}\n"));
        }
    }
    out.push_str(&format!("exit {}\n", exit_code(reports)));
    out
}

/// Full command: parse, run, print; returns the process exit code.
pub fn main_with(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let sc = match load(cli) {
        Ok(sc) => sc,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let reports = run_scenario(&sc, cli.timing);
    let body = if cli.text { render_text(&reports) } else { render_json(&reports) };
    let _ = out.write_all(body.as_bytes());
    exit_code(&reports)
}
