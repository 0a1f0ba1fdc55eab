//! Evaluate a diagram with both rewrite strategies and report their
//! agreement.
//!
//! `cargo run --example eval_diagram -- [file.dsl] [category] [total]`
//! (defaults to a loop around a sigma pair in `ising1`).

use gxcalc::catdata::catalog::catalog_load;
use gxcalc::diagrams::{evaluate, parse_diagram, EvalValue, Strategy};
use gxcalc::numerics::{fmt_c, fmt_matrix, Tolerance};

const DEFAULT: &str = "strands 2 : sigma sigma\nloop sigma 1 2\nbraid+ 1\n";

fn main() -> gxcalc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let text = match args.first() {
        Some(p) => std::fs::read_to_string(p)?,
        None => DEFAULT.to_string(),
    };
    let c = catalog_load(args.get(1).map_or("ising1", String::as_str))?;
    let total = args.get(2).map(|t| c.lookup(t)).transpose()?;
    let d = parse_diagram(&text)?;
    let tol = Tolerance::default();
    for strategy in [Strategy::Elementary, Strategy::Grouped, Strategy::Both] {
        let r = evaluate(&d, &c, total, strategy, &tol)?;
        println!("{strategy:?}:");
        match &r.value {
            EvalValue::Scalar(z) => println!("  scalar {}", fmt_c(*z)),
            EvalValue::Matrix { m, .. } => print!("{}", fmt_matrix(m)),
        }
        println!("  symbols used {:?}", r.usage);
        if let Some(dev) = r.confluence {
            println!("  strategy deviation {dev:.3e}");
        }
    }
    Ok(())
}
