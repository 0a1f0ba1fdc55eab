//! Braid generators for the toric-code defect qubit and the Z3 defect
//! qutrit, with braid-relation residuals and projective image orders.
//!
//! `cargo run --release --example braid_reps`

use gxcalc::braids::{build_rep, check_braid_relations, projective_closure};
use gxcalc::catdata::catalog::{ising1, tc_z2x_restricted, ty_z3};
use gxcalc::numerics::{fmt_matrix, Tolerance};

fn main() -> gxcalc::Result<()> {
    let tol = Tolerance::default();
    for (c, x) in [(tc_z2x_restricted()?, "sigma+"), (ty_z3()?, "X1"), (ising1()?, "sigma")] {
        let x = c.lookup(x)?;
        let rep = build_rep(&c, x, 4, c.unit())?;
        println!("{}: Hom(1, {}^4), dimension {}", c.name, c.label(x), rep.dim());
        for k in 0..rep.dim() {
            println!("  basis {}", rep.basis.describe(&c, k));
        }
        for (i, g) in rep.generators.iter().enumerate() {
            println!("  sigma_{}:\n{}", i + 1, fmt_matrix(g));
        }
        println!("  braid relation residual {:.3e}", check_braid_relations(&rep));
        println!("  projective image order {:?}", projective_closure(&rep, 100_000, &tol)?.order);
    }
    Ok(())
}
