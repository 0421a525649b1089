use std::collections::BTreeMap;

use pseudohyp_cli::{
    centralizer_table, conjugation_table, run_suite, sample_csv, SampleObject, REPORT_VERSION,
};

#[test]
fn sample_f_single_point() {
    let csv = sample_csv(SampleObject::F, (0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,f1,f2,f3,f4,f5"));
    assert_eq!(lines.next(), Some("0,1,0,0,1,0,0"));
    assert_eq!(lines.next(), None);
}

#[test]
fn sample_iota_values_at_i() {
    let csv = sample_csv(SampleObject::IotaFuchsian, (0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
    assert_eq!(csv.lines().nth(1), Some("0,1,16"));
    let csv = sample_csv(SampleObject::IotaHitchin, (0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
    let row = csv.lines().nth(1).unwrap();
    let v: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((v - 80.0).abs() < 1e-9);
}

#[test]
fn sample_grid_is_row_major_in_x_then_y() {
    let csv = sample_csv(SampleObject::GIntegrandBlock, (0.0, 1.0, 1.0, 2.0), 2, 2).unwrap();
    let firsts: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(firsts, vec!["0", "0", "1", "1"]);
}

#[test]
fn sample_rejects_nonpositive_y0() {
    assert!(sample_csv(SampleObject::F, (0.0, 1.0, 0.0, 1.0), 2, 2).is_err());
    assert!(sample_csv(SampleObject::F, (0.0, 1.0, -1.0, 1.0), 2, 2).is_err());
}

#[test]
fn conjugation_table_matches_printed_signs() {
    let (text, data) = conjugation_table("conjugation-A", 2).unwrap();
    assert!(text.contains("E5 -> -E5"));
    assert!(text.contains("E10 -> -E10"));
    let signs: Vec<i32> = data.rows.iter().map(|r| r.sign).collect();
    assert_eq!(signs, vec![1, 1, 1, 1, -1, 1, -1, 1, -1, -1]);
    // Q = -A acts by the same conjugation.
    let (_, q) = conjugation_table("conjugation-Q", 2).unwrap();
    let q_signs: Vec<i32> = q.rows.iter().map(|r| r.sign).collect();
    assert_eq!(signs, q_signs);
}

#[test]
fn centralizer_table_counts() {
    let (_, c) = centralizer_table("so22xso1", 2).unwrap();
    assert_eq!(c.elements.len(), 2);
    assert!(c.enumeration_exhaustive);
    let (_, c) = centralizer_table("so23xso1k", 5).unwrap();
    assert_eq!(c.elements.len(), 8);
    assert_eq!(c.quotient_size, 4);
    let (_, c) = centralizer_table("so21xso2", 2).unwrap();
    assert!(!c.enumeration_exhaustive);
}

#[test]
fn report_shape_and_tolerance_override() {
    let tols = BTreeMap::new();
    let report = run_suite("metric", &tols, 7).unwrap();
    assert_eq!(report.version, REPORT_VERSION);
    assert_eq!(report.suite, "metric");
    assert_eq!(report.seed, 7);
    assert!(!report.failed());

    // An impossible tolerance flips the check to fail.
    let mut tols = BTreeMap::new();
    tols.insert("wp_factor_32".to_string(), 0.0f64);
    let report = run_suite("metric", &tols, 7).unwrap();
    let c = report
        .checks
        .iter()
        .find(|c| c.name == "wp_factor_32")
        .unwrap();
    assert_eq!(c.status, "fail");
    assert!(report.failed());
}

#[test]
fn unknown_suite_is_rejected() {
    assert!(run_suite("bogus", &BTreeMap::new(), 0).is_err());
}
