#![allow(dead_code)]

use std::path::PathBuf;

use lsnc_core::constraint::{build_constraints, ConstraintPartition};
use lsnc_core::fade_state::{parse_fade_state, FadeState};
use lsnc_core::latin::LatinGrid;
use lsnc_core::signal_set::{parse_signal_set, SignalSet};
use num_complex::Complex64;
use serde_json::Value;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub struct Fixture {
    pub name: String,
    pub role: String,
    pub signal: Option<String>,
    pub fade: Option<String>,
    pub grid: LatinGrid,
}

impl Fixture {
    pub fn signal_set(&self) -> SignalSet {
        signal(self.signal.as_deref().expect("fixture names a signal set"))
    }

    pub fn fade_state(&self) -> FadeState {
        let set = self.signal_set();
        parse_fade_state(self.fade.as_deref().expect("fixture names a fade state"), set.order()).unwrap()
    }

    pub fn partition(&self) -> ConstraintPartition {
        build_constraints(&self.signal_set(), &self.fade_state()).unwrap()
    }
}

pub fn signal(spec: &str) -> SignalSet {
    match spec.strip_prefix("custom:@") {
        Some(file) => SignalSet::custom(points(file)).unwrap(),
        None => parse_signal_set(spec).unwrap(),
    }
}

pub fn points(file: &str) -> Vec<Complex64> {
    let text = std::fs::read_to_string(fixture_dir().join(file)).unwrap();
    let v: Vec<Value> = serde_json::from_str(&text).unwrap();
    v.iter()
        .map(|p| Complex64::new(p["re"].as_f64().unwrap(), p["im"].as_f64().unwrap()))
        .collect()
}

pub fn fixture(name: &str) -> Fixture {
    let text = std::fs::read_to_string(fixture_dir().join(format!("{name}.json"))).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let rows: Vec<Vec<u32>> = serde_json::from_value(v["rows"].clone()).unwrap();
    Fixture {
        name: name.to_string(),
        role: v["role"].as_str().unwrap_or_default().to_string(),
        signal: v["signal"].as_str().map(str::to_string),
        fade: v["fade"].as_str().map(str::to_string),
        grid: LatinGrid::from_rows(&rows).unwrap(),
    }
}

/// Every grid fixture in the corpus.
pub fn all_fixtures() -> Vec<Fixture> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .filter_map(|n| n.strip_suffix(".json").map(str::to_string))
        .filter(|n| n != "qam8_cross")
        .collect();
    names.sort();
    names.iter().map(|n| fixture(n)).collect()
}

/// Cells grouped by symbol, as a set of sets.
pub fn symbol_classes(grid: &LatinGrid) -> std::collections::BTreeSet<Vec<(usize, usize)>> {
    let n = grid.order();
    let mut by: std::collections::BTreeMap<u32, Vec<(usize, usize)>> = Default::default();
    for r in 0..n {
        for c in 0..n {
            if let Some(s) = grid.at(r, c) {
                by.entry(s).or_default().push((r, c));
            }
        }
    }
    by.into_values().collect()
}
