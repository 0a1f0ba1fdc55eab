//! The bilayer Ising T-gate: closed formula, closed diagrams and the
//! scripted protocol run on the logical basis.
//!
//! `cargo run --release --example tgate_protocol`

use gxcalc::catdata::catalog::bilayer_ising_z2x_partial;
use gxcalc::diagrams::{parse_diagram, Strategy};
use gxcalc::numerics::{fmt_c, fmt_matrix, Tolerance};
use gxcalc::protocols::{
    cross_method_deviation, run_protocol, tgate_closed_form, tgate_diagrammatic, TGATE_SCRIPT,
};

fn main() -> gxcalc::Result<()> {
    let c = bilayer_ising_z2x_partial()?;
    let tol = Tolerance::default();
    let closed = tgate_closed_form(&c, &tol)?;
    let diagram = tgate_diagrammatic(&c, Strategy::Grouped, &tol)?;
    for r in [&closed, &diagram] {
        println!("{:?}: ratio {}, off-diagonal {:.1e}", r.method, fmt_c(r.ratio), r.offdiag_max);
        print!("{}", fmt_matrix(&r.normalized()));
    }
    println!("cross-method deviation {:.3e}", cross_method_deviation(&closed, &diagram));

    let script = parse_diagram(TGATE_SCRIPT)?;
    let run = run_protocol(&c, &script, Strategy::Grouped)?;
    println!("scripted run ({} ops):", script.len());
    print!("{}", fmt_matrix(&run.normalized));
    println!(
        "leakage before readout {:.6}, after readout {:.1e}",
        run.leakage_before_readout, run.leakage
    );
    Ok(())
}
