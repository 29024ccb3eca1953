use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use capot::model::format_rational as fmt_q;
use capot::runner::{self, approx, load_config, parse_audit_list, parse_mode, RunStatus};
use capot::Arithmetic;

/// Solve a capacity sweep from a JSON config and write plans, saturation
/// images and a report.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out_dir` in the config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Comma-separated audits; overrides the config list.
    #[arg(long)]
    audits: Option<String>,
    /// `exact` or `float64`; overrides the config.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Arithmetic>,
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; 2 is reserved for infeasible runs here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let mut config = load_config(&cli.config)?;
    if let Some(list) = cli.audits {
        config.audits = parse_audit_list(&list).map_err(anyhow::Error::msg)?;
    }
    if let Some(mode) = cli.mode {
        config.mode = mode;
    }
    let out_dir = cli
        .out_dir
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));

    let experiment = runner::run(&config)?;
    let report = experiment
        .write_outputs(&out_dir)
        .with_context(|| format!("writing outputs to {}", out_dir.display()))?;

    for entry in &report.runs {
        let density = fmt_q(&entry.density.0);
        match (&entry.status, &entry.solved) {
            (RunStatus::Optimal, Some(s)) => eprintln!(
                "density {density}: value {} ({}) in {:.2?}",
                fmt_q(&s.value.0),
                approx(&s.value.0),
                entry.elapsed
            ),
            (status, _) => eprintln!("density {density}: {status:?}"),
        }
    }
    for (entry, audit) in report.failed_audits() {
        eprintln!(
            "audit {} failed at density {}",
            audit.audit,
            fmt_q(&entry.density.0)
        );
    }
    Ok(report.exit_code() as u8)
}
