//! JSON experiment configs, capacity sweeps with audits, and the plan CSV,
//! saturation PGM and report JSON writers.

mod config;
mod output;
mod report;
mod run;

pub use config::{
    load_config, mode_name, parse_audit_list, parse_config, parse_mode, Audit, ConfigError,
    ExperimentConfig, MarginalSpec, DEFAULT_CELLS_PER_AXIS,
};
pub use output::{
    pixel_value, read_pgm, read_plan_csv, write_plan_csv, write_plan_csv_to, write_saturation_pgm,
    write_saturation_pgm_to, OutputError, PLAN_CSV_HEADER,
};
pub use report::{
    approx, write_report_json, write_report_json_to, AuditRecord, ExactDefect, ExactValue,
    OutputFiles, RunEntry, RunReport, RunStatus, SaturationCounts, SolvedSummary,
};
pub use run::{
    build_problem, density_tag, float_tolerance, plan_file_name, run, saturation_file_name,
    DensityRun, Experiment, RunError, SolvedRun,
};
