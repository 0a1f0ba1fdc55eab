//! Recover the defect-defect R-symbols of the Z3 Tambara-Yamagami category
//! by phase fitting against the heptagon residual.
//!
//! `cargo run --release --example fit_defect_r -- [seed]`

use gxcalc::catdata::catalog::ty_z3;
use gxcalc::consistency::{ansatz_residual, solve_defect_r, SolverConfig};
use gxcalc::numerics::fmt_c;

fn main() -> gxcalc::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let c = ty_z3()?;
    let x = c.lookup("X1")?;
    let unknowns: Vec<[usize; 3]> = (0..3).map(|a| [x, x, a]).collect();
    let cfg = SolverConfig { seed, ..SolverConfig::default() };
    let fit = solve_defect_r(&c, &unknowns, &cfg)?;
    // Fix the global phase so the first fitted value matches the catalog.
    let g = c.r(x, x, 0)? / fit.values[0];
    for (k, v) in fit.unknowns.iter().zip(&fit.values) {
        println!("{} = {}   catalog {}", c.r_name(*k), fmt_c(v * g), fmt_c(c.r(k[0], k[1], k[2])?));
    }
    println!("residual {:.3e} (rechecked {:.3e})", fit.residual, ansatz_residual(&c, &fit)?);
    Ok(())
}
