//! Braid representations, projective closure and the conjugation rewrite.

mod common;

use common::{c, cis};
use gxcalc::braids::{
    build_rep, check_braid_relations, density_probe, leakage, logical_block, phase_generator, projective_closure,
    rep_from_generators, ClosureOrder, DensityVerdict,
};
use gxcalc::catdata::catalog::{bilayer_ising_z2x_partial, ising1, tc_z2x_restricted, ty_z3, z3};
use gxcalc::diagrams::{evaluate, parse_diagram, Strategy};
use gxcalc::error::Error;
use gxcalc::numerics::{max_abs_diff, Mat, Tolerance, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

// ----------------------------------------------------------------------
// Burau oracle for the conjugation rewrite

/// Unreduced Burau matrix of a time-ordered signed word at parameter `t`.
fn burau(n: usize, word: &[i32], t: C64) -> Mat {
    let mut m = Mat::identity(n, n);
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        let mut s = Mat::identity(n, n);
        s[(i, i)] = C64::new(1.0, 0.0) - t;
        s[(i, i + 1)] = t;
        s[(i + 1, i)] = C64::new(1.0, 0.0);
        s[(i + 1, i + 1)] = C64::new(0.0, 0.0);
        let step = if g > 0 { s } else { s.try_inverse().unwrap() };
        m = step * m;
    }
    m
}

/// `s_i^e W s_i^-e` with `W` over generators `i+1..=m`, and its rewrite
/// `Y shift(W) Y^-1` with `Y = s_{i+1}^-e .. s_m^-e`.
fn conjugation_pair(i: i32, m: i32, e: i32, w: &[i32]) -> (Vec<i32>, Vec<i32>) {
    let mut lhs = vec![e * i];
    lhs.extend_from_slice(w);
    lhs.push(-e * i);
    let y: Vec<i32> = (i + 1..=m).map(|k| -e * k).collect();
    let y_inv: Vec<i32> = (i + 1..=m).rev().map(|k| e * k).collect();
    let mut rhs = y;
    rhs.extend(w.iter().map(|g| g.signum() * (g.abs() - 1)));
    rhs.extend(y_inv);
    (lhs, rhs)
}

fn random_word(rng: &mut ChaCha8Rng, lo: i32, hi: i32, len: usize) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let g = rng.gen_range(lo..=hi);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

#[test]
fn conjugation_rewrite_holds_in_burau() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t = C64::new(0.37, 0.81);
    for _ in 0..200 {
        let i = rng.gen_range(1..=3);
        let m = rng.gen_range(i + 1..=5);
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        let len = rng.gen_range(1..=5);
        let w = random_word(&mut rng, i + 1, m, len);
        let (lhs, rhs) = conjugation_pair(i, m, e, &w);
        let d = max_abs_diff(&burau(7, &lhs, t), &burau(7, &rhs, t));
        assert!(d < 1e-9, "i={i} m={m} e={e} w={w:?}: {d:e}");
    }
}

fn word_diagram(n: usize, label: &str, word: &[i32]) -> String {
    let mut s = format!("strands {n} :{}\n", format!(" {label}").repeat(n));
    for &g in word {
        s.push_str(&format!("braid{} {}\n", if g > 0 { "+" } else { "-" }, g.abs()));
    }
    s
}

#[test]
fn evaluator_matches_representation_on_conjugated_words() {
    let cat = ising1().unwrap();
    let s = cat.lookup("sigma").unwrap();
    let rep = build_rep(&cat, s, 6, cat.unit()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let i = rng.gen_range(1..=3);
        let m = rng.gen_range(i + 1..=5);
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        let len = rng.gen_range(1..=4);
        let w = random_word(&mut rng, i + 1, m, len);
        let (lhs, rhs) = conjugation_pair(i, m, e, &w);
        let want = rep.word(&lhs).unwrap();
        assert!(max_abs_diff(&want, &rep.word(&rhs).unwrap()) < 1e-9);
        let d = parse_diagram(&word_diagram(6, "sigma", &lhs)).unwrap();
        for strategy in [Strategy::Elementary, Strategy::Grouped] {
            let got = evaluate(&d, &cat, None, strategy, &tol()).unwrap().matrix();
            assert!(max_abs_diff(&got, &want) < 1e-9, "{strategy:?} on {lhs:?}");
        }
    }
}

#[test]
fn conjugated_anyon_over_defects_is_confluent() {
    let cat = tc_z2x_restricted().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for label in ["psi"] {
        let total = cat.lookup(label).unwrap();
        for _ in 0..20 {
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            let len = rng.gen_range(1..=4);
            let w = random_word(&mut rng, 2, 4, len);
            let (lhs, rhs) = conjugation_pair(1, 4, e, &w);
            let header = format!("strands 5 : {label} sigma+ sigma+ sigma+ sigma+\n");
            let text = |word: &[i32]| {
                let body = word_diagram(5, "x", word);
                header.clone() + body.split_once('\n').unwrap().1
            };
            let a = parse_diagram(&text(&lhs)).unwrap();
            let b = parse_diagram(&text(&rhs)).unwrap();
            let ea = evaluate(&a, &cat, Some(total), Strategy::Elementary, &tol()).unwrap().matrix();
            let ga = evaluate(&a, &cat, Some(total), Strategy::Grouped, &tol()).unwrap().matrix();
            let eb = evaluate(&b, &cat, Some(total), Strategy::Elementary, &tol()).unwrap().matrix();
            assert!(ea.nrows() > 0);
            assert!(max_abs_diff(&ea, &ga) < 1e-9, "{label} {lhs:?}");
            assert!(max_abs_diff(&ea, &eb) < 1e-9, "{label} {lhs:?} vs {rhs:?}");
        }
    }
}

// ----------------------------------------------------------------------
// Representations

#[test]
fn toric_code_and_ising_qubits_agree() {
    let tc = tc_z2x_restricted().unwrap();
    let is = ising1().unwrap();
    let a = build_rep(&tc, tc.lookup("sigma+").unwrap(), 4, tc.unit()).unwrap();
    let b = build_rep(&is, is.lookup("sigma").unwrap(), 4, is.unit()).unwrap();
    assert_eq!(a.dim(), 2);
    for (x, y) in a.generators.iter().zip(&b.generators) {
        assert!(max_abs_diff(x, y) < 1e-12);
    }
    assert!(max_abs_diff(&a.generators[0], &a.generators[2]) < 1e-12);
    assert!(max_abs_diff(&a.generators[0], &a.generators[1]) > 0.1);
}

#[test]
fn qutrit_first_generator_is_diagonal() {
    let cat = ty_z3().unwrap();
    let x = cat.lookup("X1").unwrap();
    let rep = build_rep(&cat, x, 4, cat.unit()).unwrap();
    assert_eq!(rep.dim(), 3);
    let g = &rep.generators[0];
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                assert!(g[(i, j)].norm() < 1e-12);
            }
        }
    }
    assert!(check_braid_relations(&rep) < 1e-12);
}

#[test]
fn genon_double_exchange_matches_word() {
    let cat = bilayer_ising_z2x_partial().unwrap();
    let x = cat.lookup("X1").unwrap();
    let rep = build_rep(&cat, x, 4, cat.unit()).unwrap();
    let d = parse_diagram("strands 4 : X1 X1 X1 X1\nbraid- 2\nbraid- 2\n").unwrap();
    let got = evaluate(&d, &cat, None, Strategy::Grouped, &tol()).unwrap().matrix();
    assert!(max_abs_diff(&got, &rep.word(&[-2, -2]).unwrap()) < 1e-12);
}

#[test]
fn inverse_words_cancel() {
    let cat = z3().unwrap();
    let w = cat.lookup("omega").unwrap();
    let rep = build_rep(&cat, w, 3, cat.unit()).unwrap();
    let m = rep.word(&[1, 2, -2, -1]).unwrap();
    assert!(max_abs_diff(&m, &Mat::identity(rep.dim(), rep.dim())) < 1e-12);
    assert!(matches!(rep.word(&[3]), Err(Error::Domain(_))));
    assert!(matches!(rep.word(&[0]), Err(Error::Domain(_))));
}

#[test]
fn empty_sector_gives_empty_generators() {
    let cat = ising1().unwrap();
    let psi = cat.lookup("psi").unwrap();
    let rep = build_rep(&cat, psi, 3, cat.unit()).unwrap();
    assert_eq!(rep.dim(), 0);
    let order = projective_closure(&rep, 10, &tol()).unwrap().order;
    assert_eq!(order, ClosureOrder::Finite(1));
}

// ----------------------------------------------------------------------
// Closure and density

#[test]
fn closure_orders() {
    let is = ising1().unwrap();
    let s = is.lookup("sigma").unwrap();
    let r3 = build_rep(&is, s, 3, s).unwrap();
    let r4 = build_rep(&is, s, 4, is.unit()).unwrap();
    let o3 = projective_closure(&r3, 1000, &tol()).unwrap().order;
    let o4 = projective_closure(&r4, 1000, &tol()).unwrap().order;
    assert_eq!(o4, ClosureOrder::Finite(24));
    assert_eq!(o3, o4);
    let small = projective_closure(&r4, 10, &tol()).unwrap();
    assert_eq!(small.order, ClosureOrder::ExceedsBound);
    assert!(matches!(projective_closure(&r4, 0, &tol()), Err(Error::Domain(_))));
}

#[test]
fn golden_ratio_phase_does_not_close() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let a = phase_generator(&[0.0, 2.0 * std::f64::consts::PI * phi]);
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let b = Mat::from_row_slice(2, 2, &[h, h, h, -h]);
    let rep = rep_from_generators(vec![a, b]).unwrap();
    assert_eq!(density_probe(&rep, 500, &tol()).unwrap(), DensityVerdict::NoClosureWithin(500));
    assert!(DensityVerdict::NoClosureWithin(500).describe().contains("not a proof"));

    let q = phase_generator(&[0.0, std::f64::consts::PI / 2.0]);
    let rep = rep_from_generators(vec![q]).unwrap();
    assert_eq!(density_probe(&rep, 500, &tol()).unwrap(), DensityVerdict::ClosureFound(4));
}

#[test]
fn rep_from_generators_checks_shapes() {
    let a = Mat::identity(2, 2);
    let b = Mat::identity(3, 3);
    assert!(matches!(rep_from_generators(vec![a, b]), Err(Error::Domain(_))));
}

#[test]
fn leakage_and_logical_block() {
    let s = cis(0.3);
    let m = Mat::from_row_slice(3, 3, &[
        s, c(0.0, 0.0), c(0.6, 0.0),
        c(0.0, 0.0), s, c(0.0, 0.0),
        c(0.8, 0.0), c(0.0, 0.0), s,
    ]);
    assert!((leakage(&m, &[0, 1]) - 0.8).abs() < 1e-12);
    let b = logical_block(&m, &[0, 1]);
    assert_eq!(b.shape(), (2, 2));
    assert_eq!(b[(1, 1)], s);
}
