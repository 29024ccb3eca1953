#[allow(dead_code)]
mod checkerboard {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/checkerboard.rs"
    ));
}

#[allow(dead_code)]
mod capacity_sweep {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/capacity_sweep.rs"
    ));
}

#[allow(dead_code)]
mod conjugate_symmetry {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/conjugate_symmetry.rs"
    ));
}

#[allow(dead_code)]
mod exchange_certificate {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/exchange_certificate.rs"
    ));
}

#[allow(dead_code)]
mod universal_optimizer {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/universal_optimizer.rs"
    ));
}

#[allow(dead_code)]
mod oracle_crosscheck {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/oracle_crosscheck.rs"
    ));
}

#[allow(dead_code)]
mod cost_shift {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/cost_shift.rs"
    ));
}

#[allow(dead_code)]
mod run_config {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/run_config.rs"
    ));
}

#[test]
fn checkerboard_example_runs() {
    let pattern = checkerboard::run_example(8).unwrap();
    assert_eq!(pattern.partial_count(), 0);
}

#[test]
fn capacity_sweep_example_runs() {
    let values = capacity_sweep::run_example(8).unwrap();
    assert_eq!(values.len(), 7);
}

#[test]
fn conjugate_symmetry_example_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let mirror = conjugate_symmetry::run_example(16, Some(tmp.path())).unwrap();
    assert_eq!(mirror.mismatches, 0);
    assert!(tmp.path().join("saturation_3_2.pgm").exists());
}

#[test]
fn exchange_certificate_example_runs() {
    exchange_certificate::run_example().unwrap();
}

#[test]
fn universal_optimizer_example_runs() {
    assert_eq!(
        universal_optimizer::run_example(2).unwrap(),
        capot::ratio(-1, 16)
    );
}

#[test]
fn oracle_crosscheck_example_runs() {
    assert_eq!(oracle_crosscheck::run_example().unwrap(), 45);
}

#[test]
fn cost_shift_example_runs() {
    cost_shift::run_example().unwrap();
}

#[test]
fn run_config_example_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let report = run_config::run_example(tmp.path()).unwrap();
    assert_eq!(report.exit_code(), 0);
    assert!(tmp.path().join("report.json").exists());
}
