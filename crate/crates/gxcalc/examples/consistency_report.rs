//! Pentagon, hexagon and heptagon residuals for every built-in category.
//!
//! `cargo run --release --example consistency_report`

use gxcalc::catdata::catalog::{build, NAMES};
use gxcalc::consistency::{check_heptagon, check_hexagon, check_pentagon};

fn main() -> gxcalc::Result<()> {
    for name in NAMES {
        let c = build(name)?;
        println!("{name}");
        println!("  pentagon  {}", check_pentagon(&c)?.describe(&c));
        println!("  hexagon   {}", check_hexagon(&c)?.describe(&c));
        println!("  heptagon  {}", check_heptagon(&c)?.describe(&c));
    }
    Ok(())
}
