//! Charge-measurement projectors on four Ising anyons: idempotence,
//! completeness over the channels of one pair, and their action on the
//! braid generators.
//!
//! `cargo run --example measurement`

use gxcalc::braids::build_rep;
use gxcalc::catdata::catalog::ising1;
use gxcalc::diagrams::measurement_projector;
use gxcalc::numerics::{fmt_matrix, max_abs_diff, Mat};

fn main() -> gxcalc::Result<()> {
    let c = ising1()?;
    let s = c.lookup("sigma")?;
    let rep = build_rep(&c, s, 4, c.unit())?;
    let dim = rep.dim();
    for pos in 1..4 {
        let mut sum = Mat::zeros(dim, dim);
        for ch in c.ring.channels(s, s) {
            let p = measurement_projector(&c, s, s, ch, &rep.basis, pos)?;
            println!("P[{pos},{}] =", c.label(ch));
            print!("{}", fmt_matrix(&p));
            println!("  idempotence defect {:.1e}", max_abs_diff(&(&p * &p), &p));
            sum += p;
        }
        println!(
            "pair ({pos},{}) completeness defect {:.1e}",
            pos + 1,
            max_abs_diff(&sum, &Mat::identity(dim, dim))
        );
    }
    // Exchanging the middle pair moves weight between the channels of the first pair.
    let p1 = measurement_projector(&c, s, s, c.unit(), &rep.basis, 1)?;
    let g = &rep.generators[1];
    println!("P[1,1] after sigma_2:");
    print!("{}", fmt_matrix(&(g * &p1 * g.adjoint())));
    Ok(())
}
