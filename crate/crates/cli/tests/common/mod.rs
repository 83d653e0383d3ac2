#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use quadraform_core::exact::rational::to_text;
use quadraform_core::{BilinearForm, RationalMatrix};
use serde_json::{json, Value};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_quadraform")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", self.stdout))
    }
}

pub fn run(args: &[&str], cwd: &Path) -> Run {
    let out = Command::new(bin())
        .args(args)
        .current_dir(cwd)
        .env_remove("QUADRAFORM_MAX_DIM")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn matrix_json(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|r| json!(to_text(r))).collect()))
            .collect(),
    )
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

pub fn current_form_file(dir: &Path, name: &str, bbar: &BilinearForm) -> PathBuf {
    write_json(dir, name, &json!({"current_form": matrix_json(bbar.matrix())}))
}

/// Reads a certificate matrix back into exact form.
pub fn matrix_from_json(v: &Value) -> RationalMatrix {
    let rows: Vec<Vec<_>> = v
        .as_array()
        .expect("matrix")
        .iter()
        .map(|r| {
            r.as_array()
                .expect("row")
                .iter()
                .map(|x| quadraform_core::exact::rational::parse(x.as_str().expect("string")).expect("rational"))
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(rows)
}
