//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use gxcalc::catdata::catalog::build;
use gxcalc::catdata::SkeletalCategory;
use gxcalc::diagrams::{parse_diagram, Diagram};
use gxcalc::numerics::{Mat, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn mat(rows: usize, cols: usize, entries: &[C64]) -> Mat {
    Mat::from_row_slice(rows, cols, entries)
}

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// One confluence corpus entry.
pub struct CorpusEntry {
    pub name: String,
    pub category: SkeletalCategory,
    pub total: Option<usize>,
    pub diagram: Diagram,
}

/// Diagrams under corpus/confluence with their `# cat:` and `# total:` directives.
pub fn confluence_corpus() -> Vec<CorpusEntry> {
    let dir = manifest_dir().join("corpus/confluence");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "dsl"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let directive = |key: &str| {
                text.lines()
                    .find_map(|l| l.strip_prefix(&format!("# {key}:")).map(|v| v.trim().to_string()))
            };
            let category = build(&directive("cat").expect("cat directive")).unwrap();
            let total = directive("total").map(|t| category.lookup(&t).unwrap());
            CorpusEntry {
                name: p.file_name().unwrap().to_string_lossy().into_owned(),
                diagram: parse_diagram(&text).unwrap(),
                category,
                total,
            }
        })
        .collect()
}

/// Printed toric-code defect qubit generators.
pub fn reference_tc_qubit() -> (Mat, Mat) {
    let ph = cis(-std::f64::consts::PI / 8.0);
    let s1 = mat(2, 2, &[ph, c(0.0, 0.0), c(0.0, 0.0), ph * c(0.0, 1.0)]);
    let h = ph / 2.0;
    let s2 = mat(
        2,
        2,
        &[h * c(1.0, 1.0), h * c(-1.0, 1.0), h * c(1.0, -1.0), h * c(1.0, 1.0)],
    );
    (s1, s2)
}

/// Printed Z3 defect qutrit `σ_2` (up to phase).
pub fn reference_ty_sigma2() -> Mat {
    let w = c(-0.5, 3f64.sqrt() / 2.0);
    let one = c(1.0, 0.0);
    mat(3, 3, &[one, w, w, w, one, w, w, w, one])
}
