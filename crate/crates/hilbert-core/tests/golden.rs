//! Frozen brute-force values. Set `HILB_REGEN_GOLDEN=1` to rewrite the file
//! from the oracles; otherwise the formula paths are checked against it.

use std::path::PathBuf;

use hilbert_core::chain_enum::{count_h3_brute, count_p2_brute, count_p3_brute, DEFAULT_BUDGET};
use hilbert_core::closed_form::{h3_closed, p2_value};
use hilbert_core::module_analyzer::{GeneratorEvaluator, ModuleParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Entry {
    quantity: String,
    args: Vec<i64>,
    values: Vec<String>,
    provenance: String,
}

fn path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/derived_values.json")
}

const MODULES: [[i64; 5]; 7] = [
    [4, 1, 2, 0, -1],
    [5, 2, 3, -1, -1],
    [5, 2, 2, -1, -1],
    [4, 1, 4, 2, 1],
    [5, 3, 3, -2, 1],
    [5, 4, 4, -3, 3],
    [5, 1, 1, 1, -2],
];

fn module(a: &[i64]) -> ModuleParams {
    ModuleParams::new(a[0], a[1], a[2], a[3], a[4]).unwrap()
}

fn from_oracles() -> Vec<Entry> {
    let mut out = Vec::new();
    out.push(Entry {
        quantity: "h3".into(),
        args: vec![3, 3],
        values: (0..=6).map(|r| count_h3_brute(3, 3, r).unwrap().to_string()).collect(),
        provenance: "oracle: count_h3_brute, r = 0..6".into(),
    });
    out.push(Entry {
        quantity: "p2".into(),
        args: vec![2, 3, 1, 2],
        values: (0..=6).map(|r| count_p2_brute(2, 3, 1, 2, r).unwrap().to_string()).collect(),
        provenance: "oracle: count_p2_brute, r = 0..6".into(),
    });
    for (p, q) in [(3, 2), (4, 2), (4, 3), (5, 3)] {
        out.push(Entry {
            quantity: "p3".into(),
            args: vec![p, q],
            values: (0..=4).map(|r| count_p3_brute(p, q, r).unwrap().to_string()).collect(),
            provenance: "oracle: count_p3_brute, r = 0..4".into(),
        });
    }
    for a in MODULES {
        let p = module(&a);
        let e = GeneratorEvaluator::new(&p, DEFAULT_BUDGET).unwrap();
        out.push(Entry {
            quantity: "generator".into(),
            args: a.to_vec(),
            values: (0..=4)
                .map(|k| e.oracle_value(k, DEFAULT_BUDGET).unwrap().to_string())
                .collect(),
            provenance: format!("oracle: case {} enumeration, k = 0..4", e.case()),
        });
    }
    out
}

fn from_library(e: &Entry) -> Vec<String> {
    let a = &e.args;
    let n = e.values.len() as i64;
    match e.quantity.as_str() {
        "h3" => (0..n).map(|r| h3_closed(a[0], a[1], r).to_string()).collect(),
        "p2" => (0..n).map(|r| p2_value(a[0], a[1], a[2], a[3], r).to_string()).collect(),
        "p3" => (0..n)
            .map(|r| count_p3_brute(a[0], a[1], r as usize).unwrap().to_string())
            .collect(),
        "generator" => {
            let g = GeneratorEvaluator::new(&module(a), DEFAULT_BUDGET).unwrap();
            (0..n).map(|k| g.value(k).to_string()).collect()
        }
        other => panic!("unknown quantity {}", other),
    }
}

#[test]
fn golden_values() {
    if std::env::var("HILB_REGEN_GOLDEN").is_ok() {
        let body = serde_json::to_string_pretty(&from_oracles()).unwrap();
        std::fs::create_dir_all(path().parent().unwrap()).unwrap();
        std::fs::write(path(), body + "\n").unwrap();
    }
    let text = std::fs::read_to_string(path()).expect("golden file present");
    let frozen: Vec<Entry> = serde_json::from_str(&text).unwrap();
    assert_eq!(frozen.len(), from_oracles().len());
    for e in &frozen {
        assert_eq!(from_library(e), e.values, "{} {:?}", e.quantity, e.args);
    }
}

#[test]
fn anchored_values() {
    assert_eq!(h3_closed(3, 3, 3), 164.into());
    assert_eq!(count_p2_brute(2, 3, 1, 2, 1).unwrap(), 5);
    assert_eq!(count_p3_brute(4, 1, 2).unwrap(), 6);
    assert_eq!(count_p3_brute(3, 2, 2).unwrap(), 6);
    assert_eq!(count_p3_brute(5, 3, 2).unwrap(), 40);
}
