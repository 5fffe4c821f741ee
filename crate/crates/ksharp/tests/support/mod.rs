//! Helpers for driving the `ksharp` binary from tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn ksharp(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksharp"))
        .args(args)
        .current_dir(cwd)
        .env_remove("KSHARP_OUT_DIR")
        .output()
        .expect("binary runs")
}

pub fn ksharp_env(args: &[&str], cwd: &Path, key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksharp"))
        .args(args)
        .current_dir(cwd)
        .env(key, value)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

pub fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name)
}

/// Validation errors of `instance` against a shipped schema.
pub fn schema_errors(schema: &str, instance: &Value) -> Vec<String> {
    let text = std::fs::read_to_string(schema_path(schema)).expect("schema file");
    let schema: Value = serde_json::from_str(&text).expect("schema parses");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator.iter_errors(instance).map(|e| format!("{e} at {}", e.instance_path)).collect()
}

pub fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("file exists")).expect("valid JSON")
}

pub fn csv_header(path: &Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).expect("csv opens");
    r.headers().expect("header").iter().map(str::to_owned).collect()
}

pub fn csv_column(path: &Path, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_path(path).expect("csv opens");
    let idx = r.headers().unwrap().iter().position(|h| h == name).expect("column");
    r.records().map(|rec| rec.unwrap()[idx].parse().unwrap()).collect()
}
