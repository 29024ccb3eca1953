// Drives the runner from an in-memory config: a sweep with audits, written
// as plan CSVs, saturation images and a JSON report.
//
// `cargo run --release --example run_config -- [out_dir]`

use std::path::Path;

use anyhow::Result;
use capot::runner::{parse_config, run, RunReport};

const CONFIG: &str = r#"{
  "d": 1,
  "n": 8,
  "domain": "centered",
  "cost": "neg_dot",
  "hbar": [{"num": 3, "den": 1}, {"num": 3, "den": 2}, {"num": 2, "den": 1}],
  "audits": ["exchange", "conjugate", "negate", "complement", "vertex"]
}"#;

pub fn run_example(out_dir: &Path) -> Result<RunReport> {
    let config = parse_config(CONFIG)?;
    let report = run(&config)?.write_outputs(out_dir)?;
    for entry in &report.runs {
        if let Some(s) = &entry.solved {
            let audits: Vec<String> = s
                .audits
                .iter()
                .map(|a| {
                    format!(
                        "{}={}",
                        a.audit,
                        a.pass
                            .map_or("skipped", |p| if p { "pass" } else { "FAIL" })
                    )
                })
                .collect();
            println!("{} -> {}: {}", s.files.plan, s.value.0, audits.join(" "));
        }
    }
    println!("exit code {}", report.exit_code());
    Ok(report)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "capot-out".into());
    run_example(Path::new(&dir))?;
    Ok(())
}
