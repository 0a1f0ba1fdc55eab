//! Pentagon, hexagon and heptagon checks, fault injection and the R solver.

mod common;

use std::f64::consts::PI;

use common::cis;
use gxcalc::catdata::catalog::{bilayer_ising, ising1, tc_z2x_restricted, toric_code, ty_z3, z3};
use gxcalc::consistency::{
    braiding_residual, check_heptagon, check_hexagon, check_pentagon, solve_defect_r, SolverConfig,
};
use gxcalc::error::Error;
use gxcalc::numerics::C64;

#[test]
fn catalog_passes_all_checks() {
    for c in [ising1(), z3(), toric_code(), tc_z2x_restricted(), ty_z3(), bilayer_ising()].map(Result::unwrap) {
        for (what, r) in [
            ("pentagon", check_pentagon(&c).unwrap()),
            ("hexagon", check_hexagon(&c).unwrap()),
            ("heptagon", check_heptagon(&c).unwrap()),
        ] {
            assert!(r.max_residual < 1e-10, "{} {what}: {}", c.name, r.describe(&c));
            assert!(r.count_checked > 0, "{} {what} checked nothing", c.name);
        }
    }
}

#[test]
fn heptagon_reduces_to_hexagon_without_defects() {
    for c in [ising1(), z3(), bilayer_ising()].map(Result::unwrap) {
        let h = check_hexagon(&c).unwrap();
        let g = check_heptagon(&c).unwrap();
        assert_eq!(h.count_checked, g.count_checked);
        assert!((h.max_residual - g.max_residual).abs() < 1e-15);
    }
}

#[test]
fn injected_f_fault_breaks_pentagon() {
    let mut c = ising1().unwrap();
    let s = c.lookup("sigma").unwrap();
    let psi = c.lookup("psi").unwrap();
    c.f.insert([s, s, s, s, psi, psi], C64::new(1.0 / 2f64.sqrt(), 0.0));
    let r = check_pentagon(&c).unwrap();
    assert!(r.max_residual > 0.1, "{}", r.describe(&c));
}

#[test]
fn injected_r_fault_breaks_hexagon() {
    let mut c = ising1().unwrap();
    let s = c.lookup("sigma").unwrap();
    c.r.insert([s, s, 0], cis(PI / 8.0));
    let r = check_hexagon(&c).unwrap();
    assert!(r.max_residual > 0.1);
    assert!(r.worst_variant.is_some());
}

#[test]
fn injected_defect_fault_breaks_heptagon_only() {
    let mut c = ty_z3().unwrap();
    let x = c.lookup("X1").unwrap();
    let v = c.r(x, x, 1).unwrap();
    c.r.insert([x, x, 1], -v);
    assert!(check_heptagon(&c).unwrap().max_residual > 0.1);
    assert!(check_hexagon(&c).unwrap().max_residual < 1e-10);
    assert!(check_pentagon(&c).unwrap().max_residual < 1e-10);
}

/// The Ising braiding phases among 16th roots of unity: exhaustive search.
#[test]
fn ising_r_sixteenth_root_oracle() {
    let c = ising1().unwrap();
    let s = c.lookup("sigma").unwrap();
    let psi = c.lookup("psi").unwrap();
    let roots: Vec<C64> = (0..16).map(|k| cis(2.0 * PI * k as f64 / 16.0)).collect();
    let mut work = c.clone();
    let mut zeros = Vec::new();
    for &a in &roots {
        for &b in &roots {
            work.r.insert([s, s, 0], a);
            work.r.insert([s, s, psi], b);
            if braiding_residual(&work, &[0, s, psi]).unwrap().max_residual < 1e-9 {
                zeros.push((a, b));
            }
        }
    }
    let want = (c.r(s, s, 0).unwrap(), c.r(s, s, psi).unwrap());
    assert!(zeros
        .iter()
        .any(|(a, b)| (a - want.0).norm() < 1e-12 && (b - want.1).norm() < 1e-12));
    for (a, b) in &zeros {
        // Both channels differ by a factor of ±i.
        let q = b / a;
        assert!((q - C64::new(0.0, 1.0)).norm() < 1e-9 || (q + C64::new(0.0, 1.0)).norm() < 1e-9);
    }
}

#[test]
fn solver_recovers_ty_defect_phases() {
    let c = ty_z3().unwrap();
    let x = c.lookup("X1").unwrap();
    let unknowns: Vec<[usize; 3]> = (0..3).map(|a| [x, x, a]).collect();
    let cfg = SolverConfig { seed: 7, ..SolverConfig::default() };
    let fit = solve_defect_r(&c, &unknowns, &cfg).unwrap();
    assert!(fit.residual < 1e-6);
    assert!(check_heptagon(&fit.apply(&c)).unwrap().max_residual < 1e-6);
    for v in &fit.values {
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn solver_is_deterministic_per_seed() {
    let c = ty_z3().unwrap();
    let x = c.lookup("X1").unwrap();
    let unknowns = vec![[x, x, 0]];
    let cfg = SolverConfig { seed: 3, restarts: 4, ..SolverConfig::default() };
    let a = solve_defect_r(&c, &unknowns, &cfg).unwrap();
    let b = solve_defect_r(&c, &unknowns, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn solver_rejects_inconsistent_f() {
    let mut c = ty_z3().unwrap();
    let x = c.lookup("X1").unwrap();
    let w = c.lookup("omega").unwrap();
    c.f.insert([w, x, w, x, x, x], C64::new(-1.0, 0.0));
    let unknowns: Vec<[usize; 3]> = (0..3).map(|a| [x, x, a]).collect();
    let cfg = SolverConfig { restarts: 4, ..SolverConfig::default() };
    match solve_defect_r(&c, &unknowns, &cfg) {
        Err(Error::NoConvergence { residual }) => assert!(residual > 1e-6),
        other => panic!("expected NoConvergence, got {other:?}"),
    }
}

#[test]
fn solver_argument_errors() {
    let c = ty_z3().unwrap();
    let x = c.lookup("X1").unwrap();
    let w = c.lookup("omega").unwrap();
    let cfg = SolverConfig::default();
    assert!(matches!(solve_defect_r(&c, &[], &cfg), Err(Error::Domain(_))));
    assert!(matches!(solve_defect_r(&c, &[[x, x, x]], &cfg), Err(Error::Admissibility(_))));
    assert!(matches!(solve_defect_r(&c, &[[w, w, 0]], &cfg), Err(Error::Admissibility(_))));
}
