//! Built-in categories with quantum dimensions, total dimension and the
//! number of anyons fixed by each group element.
//!
//! `cargo run --example catalog_listing`

use gxcalc::catdata::catalog::{catalog_load, NAMES};

fn main() -> gxcalc::Result<()> {
    for name in NAMES {
        let c = catalog_load(name)?;
        println!("{name} (group {})", c.group().elements.join(" "));
        for a in 0..c.len() {
            println!("  {:<12} d = {:.6}", c.label(a), c.dim(a));
        }
        println!("  D^2 = {:.6}", c.dims.total_sq());
        for (g, n) in c.ring.defect_counts() {
            println!("  anyons fixed by {g}: {n}");
        }
    }
    Ok(())
}
