//! T-gate protocol, gauge-filler invariance and block moves with synthetic U.

mod common;

use std::f64::consts::PI;

use common::cis;
use gxcalc::braids::build_rep;
use gxcalc::catdata::catalog::{bilayer_ising_z2x_partial, ising1, tc_z2x_restricted};
use gxcalc::diagrams::{parse_diagram, Strategy};
use gxcalc::error::Error;
use gxcalc::numerics::{max_abs_diff, Mat, Tolerance, C64};
use gxcalc::protocols::{
    cross_method_deviation, run_protocol, tgate_body, tgate_closed_form, tgate_diagrammatic, Labels, TGATE_SCRIPT,
};
use gxcalc::trees::moves::{Engine, State};

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn script_shape() {
    let d = parse_diagram(TGATE_SCRIPT).unwrap();
    assert_eq!(d.len(), 20);
    assert_eq!(tgate_body().unwrap().len(), 16);
}

#[test]
fn closed_form_terms() {
    let c = bilayer_ising_z2x_partial().unwrap();
    let r = tgate_closed_form(&c, &tol()).unwrap();
    assert_eq!(r.terms.len(), 3);
    let t11: C64 = r.terms.iter().map(|t| t.t11).sum();
    let tpp: C64 = r.terms.iter().map(|t| t.tpsipsi).sum();
    let pref = 4.0 * 2f64.sqrt();
    assert!((t11 * pref - r.t11).norm() < 1e-12);
    assert!((tpp * pref - r.tpsipsi).norm() < 1e-12);
    assert!((r.ratio - cis(PI / 4.0)).norm() < 1e-12);
}

/// The ratio is a 16th root of unity, and exactly the second one.
#[test]
fn ratio_root_of_unity_oracle() {
    let c = bilayer_ising_z2x_partial().unwrap();
    let r = tgate_closed_form(&c, &tol()).unwrap().ratio;
    let hits: Vec<usize> = (0..16)
        .filter(|k| (r - cis(2.0 * PI * *k as f64 / 16.0)).norm() < 1e-9)
        .collect();
    assert_eq!(hits, vec![2]);
}

#[test]
fn methods_agree() {
    let c = bilayer_ising_z2x_partial().unwrap();
    let a = tgate_closed_form(&c, &tol()).unwrap();
    let b = tgate_diagrammatic(&c, Strategy::Grouped, &tol()).unwrap();
    assert!(cross_method_deviation(&a, &b) < 1e-9);
    assert!(b.offdiag_max < 1e-12);
    let run = run_protocol(&c, &parse_diagram(TGATE_SCRIPT).unwrap(), Strategy::Grouped).unwrap();
    assert!(max_abs_diff(&run.normalized, &a.normalized()) < 1e-9);
    assert!(run.leakage < 1e-12);
    assert!((run.leakage_before_readout - 1.0).abs() < 1e-9);
}

#[test]
fn gauge_filler_does_not_change_the_gate() {
    let base = bilayer_ising_z2x_partial().unwrap();
    let reference = run_protocol(&base, &parse_diagram(TGATE_SCRIPT).unwrap(), Strategy::Grouped).unwrap();
    let ref_diag = tgate_diagrammatic(&base, Strategy::Grouped, &tol()).unwrap();
    for seed in 1..=4 {
        let mut c = base.clone();
        c.fill_seed = seed;
        let run = run_protocol(&c, &parse_diagram(TGATE_SCRIPT).unwrap(), Strategy::Grouped).unwrap();
        assert!(max_abs_diff(&run.normalized, &reference.normalized) < 1e-9, "seed {seed}");
        let d = tgate_diagrammatic(&c, Strategy::Grouped, &tol()).unwrap();
        assert!(cross_method_deviation(&d, &ref_diag) < 1e-9, "seed {seed}");
    }
}

#[test]
fn empty_script_is_identity() {
    let c = bilayer_ising_z2x_partial().unwrap();
    let run = run_protocol(&c, &parse_diagram("").unwrap(), Strategy::Grouped).unwrap();
    assert!(max_abs_diff(&run.block, &Mat::identity(2, 2)) < 1e-15);
    assert_eq!(run.leakage, 0.0);
}

#[test]
fn genon_exchange_alone_is_diagonal_in_pair_channels() {
    // Step (5) on its own: the double genon exchange on strands 6-7.
    let c = bilayer_ising_z2x_partial().unwrap();
    let text = "strands 8 : sigma.1 sigma.1 sigma.1 sigma.1 X1 X1 X1 X1\nbraid- 6\nbraid- 6\n";
    let run = run_protocol(&c, &parse_diagram(text).unwrap(), Strategy::Grouped).unwrap();
    // Both logical states see the same genon block, so the logical block is scalar.
    assert!((run.normalized[(1, 1)] - C64::new(1.0, 0.0)).norm() < 1e-9);
    let x = c.lookup("X1").unwrap();
    let rep = build_rep(&c, x, 4, c.unit()).unwrap();
    let m = rep.word(&[-2, -2]).unwrap();
    // The genon pair (5,6) stays in 1.1 with amplitude <1.1|sigma_2^-2|1.1>.
    let amp = m[(0, 0)];
    assert!((run.block[(0, 0)] - amp).norm() < 1e-9);
}

#[test]
fn wrong_boundary_is_rejected() {
    let c = bilayer_ising_z2x_partial().unwrap();
    let d = parse_diagram("strands 2 : sigma.1 sigma.1\nbraid+ 1\n").unwrap();
    assert!(matches!(run_protocol(&c, &d, Strategy::Grouped), Err(Error::Domain(_))));
}

#[test]
fn diagrammatic_needs_trivial_u_eta() {
    let mut c = bilayer_ising_z2x_partial().unwrap();
    c.trivial_u_eta = false;
    assert!(matches!(
        tgate_diagrammatic(&c, Strategy::Grouped, &tol()),
        Err(Error::UnsupportedConfiguration(_))
    ));
    assert!(matches!(Labels::lookup(&ising1().unwrap()), Err(Error::UnknownName(_))));
}

/// A defect carried over a block and back is the identity for any U values.
#[test]
fn u_slide_then_inverse_with_synthetic_u() {
    let mut c = tc_z2x_restricted().unwrap();
    c.trivial_u_eta = false;
    let g = c.ring.sector(c.lookup("sigma+").unwrap());
    let anyons = c.ring.trivial_sector();
    let mut k = 0.0;
    for &a in &anyons {
        for &b in &anyons {
            for ch in c.ring.channels(a, b) {
                k += 1.0;
                c.u.insert([g, a, b, ch], cis(0.7 * k));
            }
        }
    }
    let eng = Engine::new(&c);
    let (s, psi) = (c.lookup("sigma+").unwrap(), c.lookup("psi").unwrap());
    let leaves = vec![s, psi, psi];
    let start = State::basis(leaves.clone(), s, vec![s, s, s]);
    for over in [true, false] {
        let moved = eng.cross_block(&start, 1, 2, 3, over).unwrap();
        let back = eng.cross_block(&moved, 3, 1, 2, over).unwrap();
        assert_eq!(back.leaves, leaves);
        let dev = (back.amp(&[s, s, s]) - C64::new(1.0, 0.0)).norm();
        assert!(dev < 1e-12 && (back.norm_sqr() - 1.0).abs() < 1e-12, "over = {over}");
    }
    assert!(eng.usage().u > 0 || eng.usage().eta > 0);
}
