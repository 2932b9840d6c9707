use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use sumprod_core::experiment::{
    parse_config, run, InstanceStatus, MANIFEST_JSON, REPORT_CSV, REPORT_JSON,
};
use sumprod_core::graph::CertificateRecord;

const MATRIX: &str = r#"{
    "rings": ["zpr:3,2", "polyq:3,2,0,1", "zpr:7,1"],
    "theorems": ["T-mult", "T-special"],
    "A": {"kind": "random-units", "size": 4},
    "B": {"kind": "random-units", "size": 3},
    "C": {"kind": "random-units", "size": 3},
    "g": {"func": "monomial", "k": 2},
    "seeds": [1, 2, 3, 4, 5]
}"#;

fn listed_files(dir: &Path) -> BTreeSet<String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect()
}

#[test]
fn matrix_produces_one_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(MATRIX).unwrap();
    let outcome = run(&cfg, dir.path(), 1).unwrap();
    assert!(outcome.manifest.all_chains_ok());
    let csv = fs::read_to_string(dir.path().join(REPORT_CSV)).unwrap();
    assert_eq!(csv.lines().count(), 1 + 30);
    assert!(csv.starts_with("ring,theorem,A_size,B_size,C_size,m,f_size,BC_size,e_ST,S_size,T_size,lambda,chain_ok,explicit_ok,delta_emp\n"));
    assert!(outcome.records.iter().all(|r| r.status == InstanceStatus::Ok));
    let files: BTreeSet<String> = outcome.manifest.files.iter().cloned().collect();
    assert_eq!(files, listed_files(dir.path()));
}

#[test]
fn csv_is_byte_deterministic() {
    let cfg = parse_config(MATRIX).unwrap();
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    run(&cfg, first.path(), 1).unwrap();
    run(&cfg, second.path(), 3).unwrap();
    let read = |d: &Path| fs::read(d.join(REPORT_CSV)).unwrap();
    assert_eq!(read(first.path()), read(second.path()));
}

#[test]
fn empty_set_is_recorded_and_run_continues() {
    let text = MATRIX.replace(
        r#""A": {"kind": "random-units", "size": 4}"#,
        r#""A": {"kind": "explicit", "elements": []}"#,
    );
    let cfg = parse_config(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&cfg, dir.path(), 1).unwrap();
    assert_eq!(outcome.records.len(), 30);
    assert!(outcome.records.iter().all(|r| r.status == InstanceStatus::Error));
    assert!(outcome.records[0].error.as_deref().unwrap().contains("empty"));
    // errors are not chain violations
    assert!(outcome.manifest.all_chains_ok());
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join(REPORT_JSON)).unwrap()).unwrap();
    assert_eq!(json["instances"].as_array().unwrap().len(), 30);
    assert_eq!(fs::read_to_string(dir.path().join(REPORT_CSV)).unwrap().lines().count(), 1);
}

#[test]
fn certify_only_config_writes_one_certificate() {
    let cfg = parse_config(r#"{"ring": "zpr:5,2", "certify": true}"#).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let outcome = run(&cfg, dir.path(), 1).unwrap();
    assert!(outcome.records.is_empty());
    let certs: Vec<&String> = outcome.manifest.files.iter().filter(|f| f.starts_with("certificate")).collect();
    assert_eq!(certs.len(), 1);
    let record: CertificateRecord = serde_json::from_slice(&fs::read(dir.path().join(certs[0])).unwrap()).unwrap();
    assert_eq!((record.n, record.d), (625, 25));
    assert!(record.bound_holds && record.bound_nontrivial && record.connected && record.non_bipartite);
    assert!(record.lambda <= 500f64.sqrt());
    assert_eq!(
        listed_files(dir.path()),
        BTreeSet::from([certs[0].clone(), MANIFEST_JSON.to_string()])
    );
}
