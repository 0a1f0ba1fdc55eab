//! Finiteness probes of projective braid images: the Ising image closes,
//! a generator with a golden-ratio phase does not within the budget.
//!
//! `cargo run --release --example density_probe -- [steps]`

use gxcalc::braids::{build_rep, density_probe, phase_generator, rep_from_generators};
use gxcalc::catdata::catalog::ising1;
use gxcalc::numerics::{Mat, Tolerance, C64};

fn main() -> gxcalc::Result<()> {
    let steps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2_000);
    let tol = Tolerance::default();
    let c = ising1()?;
    let rep = build_rep(&c, c.lookup("sigma")?, 4, c.unit())?;
    println!("ising sigma^4: {}", density_probe(&rep, steps, &tol)?.describe());

    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let a = phase_generator(&[0.0, 2.0 * std::f64::consts::PI * phi]);
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let b = Mat::from_row_slice(2, 2, &[h, h, h, -h]);
    let probe = rep_from_generators(vec![a, b])?;
    println!("golden-ratio phase: {}", density_probe(&probe, steps, &tol)?.describe());
    Ok(())
}
