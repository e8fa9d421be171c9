use std::sync::OnceLock;

use xc01::constructions::Operation;
use xc01::pipeline::{emit_report, run_full, verify_against_reference, ReferenceTables, ReportFormat, RunOptions, RunOutput};
use xc01::Error;

fn full_run() -> &'static RunOutput {
    static RUN: OnceLock<RunOutput> = OnceLock::new();
    RUN.get_or_init(|| run_full(4, &RunOptions { skip_certificates: true }).unwrap())
}

#[test]
fn clean_against_the_bundled_tables() {
    let diff = verify_against_reference(full_run(), &ReferenceTables::bundled().unwrap());
    assert!(diff.is_clean(), "{diff}");
}

#[test]
fn perturbed_rc_gives_one_diff_line() {
    let mut run = full_run().clone();
    let r = run.records.iter_mut().find(|r| r.rep_id == 27606).unwrap();
    r.rc += 1;
    let diff = verify_against_reference(&run, &ReferenceTables::bundled().unwrap());
    assert_eq!(diff.errors.len(), 1);
    assert!(diff.errors[0].contains("27606") && diff.errors[0].contains("rc"));
}

#[test]
fn different_predecessor_only_warns() {
    let mut run = full_run().clone();
    let r = run.records.iter_mut().find(|r| r.rep_id == 383).unwrap();
    r.certificate.pred_id = Some(1);
    r.certificate.op = Operation::UnionPoint;
    let diff = verify_against_reference(&run, &ReferenceTables::bundled().unwrap());
    assert!(diff.is_clean());
    assert!(diff.warnings.iter().any(|w| w.starts_with("class 383")));
}

#[test]
fn first_records_and_ordering() {
    let run = full_run();
    let first = run.records_of_dim(4).next().unwrap();
    assert_eq!(
        (first.rep_id, first.n_vertices, first.n_facets, first.omega, first.rc, first.rrc, first.xcs),
        (279, 5, 5, 5, 5, 5, 5)
    );
    let keys: Vec<_> = run.records.iter().map(|r| (r.dim, r.n_vertices, r.n_facets, r.rep_id)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let csv = emit_report(&run.records, ReportFormat::Csv).unwrap();
    assert!(csv.lines().any(|l| l == "65535,4,16,8,8,8,8,8,-,,,"));
    let row = csv.lines().find(|l| l.starts_with("27606,")).unwrap();
    assert!(row.starts_with("27606,4,10,") && row.contains(",8,9,10,10,Δ,"));
}

#[test]
fn reports_are_deterministic() {
    let a = run_full(3, &RunOptions::default()).unwrap();
    let b = run_full(3, &RunOptions::default()).unwrap();
    for format in [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Text] {
        assert_eq!(emit_report(&a.records, format).unwrap(), emit_report(&b.records, format).unwrap());
    }
    assert_eq!(
        emit_report(&full_run().records, ReportFormat::Csv).unwrap(),
        emit_report(&run_full(4, &RunOptions { skip_certificates: true }).unwrap().records, ReportFormat::Csv).unwrap()
    );
}

#[test]
fn reference_tables_round_trip_through_a_directory() {
    let dir = std::env::temp_dir().join(format!("xc01-reference-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for name in ["counts.csv", "low_dim.csv", "dim4_classes.csv"] {
        std::fs::copy(format!("{data}/{name}"), dir.join(name)).unwrap();
    }
    assert_eq!(ReferenceTables::load(&dir).unwrap(), ReferenceTables::bundled().unwrap());
    std::fs::remove_file(dir.join("low_dim.csv")).unwrap();
    assert!(matches!(ReferenceTables::load(&dir), Err(Error::Config(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_dimension_is_rejected() {
    assert!(matches!(run_full(5, &RunOptions::default()), Err(Error::InvalidInput(_))));
}
