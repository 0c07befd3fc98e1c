#![allow(dead_code)]

pub mod modp;
pub mod random;

use std::path::{Path, PathBuf};

use symplex::ModelFile;

pub fn corpus_file(stem: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{stem}.model"))
}

pub fn corpus_model(stem: &str) -> ModelFile {
    symplex::load_model(&corpus_file(stem)).unwrap_or_else(|e| panic!("{stem}: {e}"))
}

/// Every shipped model, sorted by file name.
pub fn corpus_stems() -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut out: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "model").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    out.sort();
    out
}
