//! Golden regression over a directory of model files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::golden::{check, reference_differences, Mismatch};
use crate::model::load_model;
use crate::run::{run_model, Selection};

pub const CORPUS_ENV: &str = "SYMPLEX_CORPUS_DIR";

/// `$SYMPLEX_CORPUS_DIR`, else the corpus shipped with the crate.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"),
    }
}

/// `*.model` files in `dir` whose stem matches `filter`, sorted.
pub fn discover(dir: &Path, filter: Option<&glob::Pattern>) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "model") {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            if filter.is_none_or(|p| p.matches(&stem)) {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelStatus {
    Pass { checks: usize },
    Mismatch(Vec<Mismatch>),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelResult {
    pub file: String,
    pub name: String,
    pub status: ModelStatus,
    /// Differences from published reference values (informational).
    pub reference_differences: Vec<Mismatch>,
}

impl ModelResult {
    pub fn passed(&self) -> bool {
        matches!(self.status, ModelStatus::Pass { .. })
    }
}

pub fn run_file(path: &Path) -> ModelResult {
    let file = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let model = match load_model(path) {
        Ok(m) => m,
        Err(e) => {
            return ModelResult {
                name: file.clone(),
                file,
                status: ModelStatus::Error(e.to_string()),
                reference_differences: Vec::new(),
            }
        }
    };
    let mut reference = Vec::new();
    let status = match run_model(&model, &Selection::for_expectations(&model)) {
        Ok(outcome) => {
            reference = reference_differences(&model, &outcome);
            let mismatches = check(&model, &outcome);
            if mismatches.is_empty() {
                let checks = model.expectations.len() + usize::from(model.expect_samples_agree.is_some());
                ModelStatus::Pass { checks }
            } else {
                ModelStatus::Mismatch(mismatches)
            }
        }
        Err(e) => ModelStatus::Error(e.to_string()),
    };
    ModelResult { file, name: model.name, status, reference_differences: reference }
}

/// Runs the files in parallel; results keep the input order.
pub fn run_all(paths: &[PathBuf]) -> Vec<ModelResult> {
    paths.par_iter().map(|p| run_file(p)).collect()
}

pub fn summary(results: &[ModelResult]) -> String {
    let mut out = String::new();
    let width = results.iter().map(|r| r.file.len()).max().unwrap_or(0);
    for r in results {
        let (tag, detail) = match &r.status {
            ModelStatus::Pass { checks } if r.reference_differences.is_empty() => {
                ("PASS", format!("{checks} expectations"))
            }
            ModelStatus::Pass { checks } => {
                ("PASS", format!("{checks} expectations; {} differences from reference", r.reference_differences.len()))
            }
            ModelStatus::Mismatch(m) => ("FAIL", format!("{} mismatches", m.len())),
            ModelStatus::Error(_) => ("ERROR", String::new()),
        };
        let _ = writeln!(out, "{tag:<5}  {:<width$}  {:<24}  {detail}", r.file, r.name);
    }
    for r in results {
        match &r.status {
            ModelStatus::Mismatch(ms) => {
                for m in ms {
                    let _ = writeln!(out, "  {}: {m}", r.file);
                }
            }
            ModelStatus::Error(e) => {
                let _ = writeln!(out, "  {}: {e}", r.file);
            }
            ModelStatus::Pass { .. } => {}
        }
    }
    let with_reference: Vec<&ModelResult> = results.iter().filter(|r| !r.reference_differences.is_empty()).collect();
    if !with_reference.is_empty() {
        let _ = writeln!(out, "reference differences (informational):");
        for r in &with_reference {
            for m in &r.reference_differences {
                let _ = writeln!(out, "  {}: {m}", r.file);
            }
        }
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    let _ = writeln!(out, "{passed}/{} models pass", results.len());
    out
}
