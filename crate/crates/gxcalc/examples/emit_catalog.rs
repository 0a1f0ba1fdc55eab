//! Regenerate the shipped category files from the built-in constructors.
//!
//! `cargo run --example emit_catalog -- <dir>` (defaults to `catalog/`).

use gxcalc::catdata::catalog::{build, NAMES};
use gxcalc::cli::catfile;

fn main() -> gxcalc::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/catalog").to_string());
    std::fs::create_dir_all(&dir)?;
    for name in NAMES {
        let c = build(name)?;
        let path = format!("{dir}/{name}.cat");
        std::fs::write(&path, catfile::emit(&c))?;
        println!("wrote {path}");
    }
    Ok(())
}
