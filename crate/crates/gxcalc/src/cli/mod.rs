//! Command-line front end.
//!
//! Every command renders a plain `key: value` text report. Commands are
//! ordinary functions returning the report and an exit code so they can be
//! driven from tests; the `gxcalc` binary only parses arguments and prints.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::braids::{build_rep, check_braid_relations, projective_closure, ClosureOrder};
use crate::catdata::catalog::{self, NAMES};
use crate::catdata::{verify_unitarity, SkeletalCategory};
use crate::consistency::{check_heptagon, check_hexagon, check_pentagon, solve_defect_r, SolverConfig};
use crate::diagrams::{evaluate, parse_diagram, EvalValue, Strategy};
use crate::error::{Error, Result};
use crate::numerics::{fmt_c, fmt_matrix, Tolerance};
use crate::protocols::{cross_method_deviation, tgate_closed_form, tgate_diagrammatic, ProtocolResult};

pub mod catfile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "gxcalc", version, about = "G-crossed braided fusion category calculator")]
pub struct Cli {
    /// Equality and residual tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a category file: fusion rules, unitarity, pentagon, braiding.
    Validate {
        path: PathBuf,
    },
    /// Print braid generators on Hom(total, object^strands).
    Rep(RepArgs),
    /// Order of the projective image of a braid representation.
    Closure {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, default_value_t = 100_000)]
        bound: usize,
    },
    /// Evaluate a diagram file.
    Eval {
        path: PathBuf,
        #[arg(long)]
        cat: String,
        /// Total charge of the boundary trees.
        #[arg(long)]
        total: Option<String>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Both)]
        strategy: StrategyArg,
    },
    /// T-gate matrix of the bilayer Ising protocol.
    Tgate {
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long, default_value = "bilayer_ising_z2x_partial")]
        cat: String,
    },
    /// List the built-in categories.
    Catalog,
    /// Fit the defect self-braiding phases R^{XX}_a of a category.
    FitR {
        #[arg(long)]
        cat: String,
        /// Defect label X.
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Consistency residuals of a category.
    Check {
        #[arg(long)]
        cat: String,
    },
}

#[derive(Debug, Args)]
pub struct RepArgs {
    #[arg(long)]
    pub cat: String,
    #[arg(long)]
    pub object: String,
    #[arg(long)]
    pub strands: usize,
    /// Total charge; defaults to the unit.
    #[arg(long)]
    pub total: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Diagram,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Elementary,
    Grouped,
    Both,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Elementary => Strategy::Elementary,
            StrategyArg::Grouped => Strategy::Grouped,
            StrategyArg::Both => Strategy::Both,
        }
    }
}

/// Report text and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { code: EXIT_OK, text }
    }
}

/// Exit code for an error: 2 for parse errors, 1 otherwise.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        _ => EXIT_FAILED,
    }
}

/// Run a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let tol = match cli.tol {
        Some(t) => Tolerance {
            eq_tol: t,
            residual_tol: t,
            ..Tolerance::default()
        },
        None => Tolerance::default(),
    };
    if let Err(e) = tol.validate() {
        return Outcome {
            code: EXIT_USAGE,
            text: format!("error: {e}\n"),
        };
    }
    let result = match &cli.command {
        Command::Validate { path } => cmd_validate(path, &tol),
        Command::Rep(a) => cmd_rep(a, &tol),
        Command::Closure { rep, bound } => cmd_closure(rep, *bound, &tol),
        Command::Eval {
            path,
            cat,
            total,
            strategy,
        } => cmd_eval(path, cat, total.as_deref(), (*strategy).into(), &tol),
        Command::Tgate { method, cat } => cmd_tgate(*method, cat, &tol),
        Command::Catalog => cmd_catalog(&tol),
        Command::FitR { cat, object, seed } => cmd_fit_r(cat, object, *seed, &tol),
        Command::Check { cat } => cmd_check(cat, &tol),
    };
    result.unwrap_or_else(|e| Outcome {
        code: error_code(&e),
        text: format!("error: {e}\n"),
    })
}

/// Load a category by catalog name or from a `.cat` file path.
pub fn load_category(arg: &str) -> Result<SkeletalCategory> {
    if NAMES.contains(&arg) {
        return catalog::catalog_load(arg);
    }
    let path = Path::new(arg);
    if path.exists() {
        return catfile::parse(&std::fs::read_to_string(path)?);
    }
    Err(Error::UnknownName(format!("category {arg} (not in the catalog and no such file)")))
}

// ----------------------------------------------------------------------
// Commands

/// Residual checks shared by `validate` and `check`; returns whether all passed.
fn consistency_report(c: &SkeletalCategory, tol: &Tolerance, out: &mut String) -> Result<bool> {
    let mut ok = true;
    let ring = c.ring.validate();
    let _ = writeln!(out, "fusion: {}", if ring.is_empty() { "ok" } else { "FAILED" });
    for m in &ring {
        let _ = writeln!(out, "  {m}");
    }
    ok &= ring.is_empty();
    let unit = verify_unitarity(c, tol);
    let _ = writeln!(out, "unitarity: {}", if unit.is_empty() { "ok" } else { "FAILED" });
    for m in &unit {
        let _ = writeln!(out, "  {m}");
    }
    ok &= unit.is_empty();
    for (name, rep) in [
        ("pentagon", check_pentagon(c)?),
        ("hexagon", check_hexagon(c)?),
        ("heptagon", check_heptagon(c)?),
    ] {
        let pass = rep.max_residual < tol.residual_tol;
        ok &= pass;
        let _ = writeln!(
            out,
            "{name}: {} {}",
            if pass { "ok" } else { "FAILED" },
            rep.describe(c)
        );
    }
    if c.partial {
        let _ = writeln!(out, "note: partial data, checks restricted to the declared data labels");
    }
    Ok(ok)
}

pub fn cmd_validate(path: &Path, tol: &Tolerance) -> Result<Outcome> {
    let c = catfile::parse(&std::fs::read_to_string(path)?)?;
    let mut out = format!("category: {}\n", c.name);
    let ok = consistency_report(&c, tol, &mut out)?;
    let _ = writeln!(out, "result: {}", if ok { "valid" } else { "invalid" });
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_FAILED },
        text: out,
    })
}

pub fn cmd_check(cat: &str, tol: &Tolerance) -> Result<Outcome> {
    let c = load_category(cat)?;
    let mut out = format!("category: {}\n", c.name);
    let ok = consistency_report(&c, tol, &mut out)?;
    let _ = writeln!(out, "result: {}", if ok { "consistent" } else { "inconsistent" });
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_FAILED },
        text: out,
    })
}

fn rep_for(a: &RepArgs) -> Result<(SkeletalCategory, crate::braids::BraidRep)> {
    let c = load_category(&a.cat)?;
    let x = c.lookup(&a.object)?;
    let total = match &a.total {
        Some(t) => c.lookup(t)?,
        None => c.unit(),
    };
    let rep = build_rep(&c, x, a.strands, total)?;
    Ok((c, rep))
}

pub fn cmd_rep(a: &RepArgs, _tol: &Tolerance) -> Result<Outcome> {
    let (c, rep) = rep_for(a)?;
    let mut out = String::new();
    let _ = writeln!(out, "category: {}", c.name);
    let _ = writeln!(out, "object: {}", c.label(rep.object));
    let _ = writeln!(out, "strands: {}", rep.n);
    let _ = writeln!(out, "total: {}", c.label(rep.basis.root));
    let _ = writeln!(out, "convention: {}", rep.convention.token());
    let _ = writeln!(out, "dimension: {}", rep.dim());
    for k in 0..rep.basis.dim() {
        let _ = writeln!(out, "basis {}: {}", k + 1, rep.basis.describe(&c, k));
    }
    for (i, g) in rep.generators.iter().enumerate() {
        let _ = writeln!(out, "sigma_{}:", i + 1);
        out.push_str(&fmt_matrix(g));
    }
    let _ = writeln!(out, "braid relation residual: {:.3e}", check_braid_relations(&rep));
    Ok(Outcome::ok(out))
}

pub fn cmd_closure(a: &RepArgs, bound: usize, tol: &Tolerance) -> Result<Outcome> {
    let (c, rep) = rep_for(a)?;
    let res = projective_closure(&rep, bound, tol)?;
    let mut out = String::new();
    let _ = writeln!(out, "category: {}", c.name);
    let _ = writeln!(out, "dimension: {}", rep.dim());
    let _ = writeln!(out, "bound: {bound}");
    match res.order {
        ClosureOrder::Finite(n) => {
            let _ = writeln!(out, "order: {n}");
        }
        ClosureOrder::ExceedsBound => {
            let _ = writeln!(out, "order: exceeds_bound");
        }
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_eval(path: &Path, cat: &str, total: Option<&str>, strategy: Strategy, tol: &Tolerance) -> Result<Outcome> {
    let c = load_category(cat)?;
    let d = parse_diagram(&std::fs::read_to_string(path)?)?;
    let total = total.map(|t| c.lookup(t)).transpose()?;
    let r = evaluate(&d, &c, total, strategy, tol)?;
    let mut out = String::new();
    let _ = writeln!(out, "category: {}", c.name);
    let _ = writeln!(out, "ops: {}", d.len());
    match &r.value {
        EvalValue::Scalar(z) => {
            let _ = writeln!(out, "scalar: {}", fmt_c(*z));
        }
        EvalValue::Matrix { source, target, m } => {
            let _ = writeln!(out, "source dimension: {}", source.dim());
            let _ = writeln!(out, "target dimension: {}", target.dim());
            for k in 0..source.dim() {
                let _ = writeln!(out, "source {}: {}", k + 1, source.describe(&c, k));
            }
            for k in 0..target.dim() {
                let _ = writeln!(out, "target {}: {}", k + 1, target.describe(&c, k));
            }
            let _ = writeln!(out, "matrix:");
            out.push_str(&fmt_matrix(m));
        }
    }
    let u = r.usage;
    let _ = writeln!(out, "symbols used: F {} R {} U {} eta {}", u.f, u.r, u.u, u.eta);
    if let Some(dev) = r.confluence {
        let _ = writeln!(out, "strategy deviation: {dev:.3e}");
    }
    Ok(Outcome::ok(out))
}

fn write_tgate(out: &mut String, r: &ProtocolResult, c: &SkeletalCategory) {
    let _ = writeln!(out, "method: {:?}", r.method);
    let _ = writeln!(out, "<1|T|1>: {}", fmt_c(r.t11));
    let _ = writeln!(out, "<psi|T|psi>: {}", fmt_c(r.tpsipsi));
    let _ = writeln!(out, "off-diagonal max: {:.3e}", r.offdiag_max);
    for t in &r.terms {
        let _ = writeln!(
            out,
            "channel {}: <1|T|1> term {}, <psi|T|psi> term {}",
            c.label(t.c),
            fmt_c(t.t11),
            fmt_c(t.tpsipsi)
        );
    }
    let _ = writeln!(out, "ratio: {}", fmt_c(r.ratio));
}

pub fn cmd_tgate(method: MethodArg, cat: &str, tol: &Tolerance) -> Result<Outcome> {
    let c = load_category(cat)?;
    let mut out = String::new();
    let _ = writeln!(out, "category: {}", c.name);
    let closed = matches!(method, MethodArg::Closed | MethodArg::Both)
        .then(|| tgate_closed_form(&c, tol))
        .transpose()?;
    let diagram = matches!(method, MethodArg::Diagram | MethodArg::Both)
        .then(|| tgate_diagrammatic(&c, Strategy::Grouped, tol))
        .transpose()?;
    for r in closed.iter().chain(diagram.iter()) {
        write_tgate(&mut out, r, &c);
    }
    let mut code = EXIT_OK;
    if let (Some(a), Some(b)) = (&closed, &diagram) {
        let dev = cross_method_deviation(a, b);
        let pass = dev < tol.eq_tol;
        let _ = writeln!(
            out,
            "cross-method deviation {} {:.0e} ({dev:.3e})",
            if pass { "<" } else { ">=" },
            tol.eq_tol
        );
        if !pass {
            code = EXIT_FAILED;
        }
    }
    Ok(Outcome { code, text: out })
}

pub fn cmd_catalog(tol: &Tolerance) -> Result<Outcome> {
    let mut out = String::new();
    for name in NAMES {
        let c = catalog::catalog_load(name)?;
        let _ = writeln!(out, "{name}:");
        let _ = writeln!(out, "  labels: {}", c.ring.labels.join(" "));
        let _ = writeln!(out, "  group: {}", c.group().elements.join(" "));
        let dims: Vec<String> = c.dims.d.iter().map(|d| format!("{d:.8}")).collect();
        let _ = writeln!(out, "  dimensions: {}", dims.join(" "));
        let _ = writeln!(out, "  D^2: {:.8}", c.dims.total_sq());
        for (g, n) in c.ring.defect_counts() {
            let _ = writeln!(out, "  fixed anyons of {g}: {n}");
        }
        let _ = writeln!(out, "  orientation: {}", c.orientation.token());
        if let Ok(ab) = c.ring.abelian_subgroup(&c.dims, tol.eq_tol) {
            let _ = writeln!(out, "  abelian anyons: {}", ab.elements.join(" "));
        }
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_fit_r(cat: &str, object: &str, seed: u64, tol: &Tolerance) -> Result<Outcome> {
    let c = load_category(cat)?;
    let x = c.lookup(object)?;
    let unknowns: Vec<[usize; 3]> = c.ring.channels(x, x).into_iter().map(|a| [x, x, a]).collect();
    let cfg = SolverConfig {
        seed,
        ..SolverConfig::default()
    };
    let fit = solve_defect_r(&c, &unknowns, &cfg)?;
    let mut out = String::new();
    let _ = writeln!(out, "category: {}", c.name);
    let _ = writeln!(out, "seed: {seed}");
    // Report with the global phase fixed by the first unknown's catalog value.
    let g = c
        .r
        .get(&unknowns[0])
        .map(|v| v / fit.values[0])
        .unwrap_or(crate::numerics::ONE);
    for (k, v) in fit.unknowns.iter().zip(&fit.values) {
        let _ = writeln!(out, "{}: {}", c.r_name(*k), fmt_c(v * g));
    }
    let _ = writeln!(out, "residual: {:.3e}", fit.residual);
    let pass = fit.residual < tol.eq_tol.max(1e-6);
    Ok(Outcome {
        code: if pass { EXIT_OK } else { EXIT_FAILED },
        text: out,
    })
}
