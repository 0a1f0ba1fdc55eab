//! Numerics helpers, fusion rings and fusion-tree bases.

mod common;

use common::{c, cis};
use gxcalc::catdata::catalog::{bilayer_ising, ising1, tc_z2x_restricted, ty_z3};
use gxcalc::error::Error;
use gxcalc::fusion::{FusionRing, GroupSpec};
use gxcalc::numerics::{
    fit_scalar, matrix_from_json, max_abs_diff, matrix_to_json, phase_canonicalize, projectively_equal, scalar_multiple_equal,
    Mat, Tolerance,
};
use gxcalc::trees::{enumerate_basis, power_count, recouple, recouple_reverse};

#[test]
fn tolerance_validation() {
    assert!(Tolerance::default().validate().is_ok());
    assert!(Tolerance::with_eq(0.0).validate().is_err());
    assert!(Tolerance::with_eq(f64::NAN).validate().is_err());
}

#[test]
fn matrix_json_round_trip() {
    let m = Mat::from_row_slice(2, 2, &[c(1.0, 0.5), c(-0.25, 0.0), c(0.0, 3.0), cis(0.4)]);
    let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
    assert_eq!(back, m);
    assert!(matrix_from_json(&serde_json::json!([[1.0]])).is_err());
}

#[test]
fn scalar_fits() {
    let m = Mat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.0), c(0.0, 0.0)]);
    let s = c(0.3, -0.4);
    let scaled = m.map(|z| z * s);
    assert!((fit_scalar(&scaled, &m).unwrap() - s).norm() < 1e-15);
    assert!(scalar_multiple_equal(&scaled, &m, &Tolerance::default()).unwrap().0);
    // Not unit modulus, so not projectively equal.
    assert!(!projectively_equal(&scaled, &m, &Tolerance::default()).unwrap().0);
    assert!(fit_scalar(&m, &Mat::zeros(2, 2)).is_none());
    let wrong = Mat::zeros(3, 3);
    assert!(matches!(
        projectively_equal(&m, &wrong, &Tolerance::default()),
        Err(Error::ShapeMismatch { .. })
    ));
}

#[test]
fn zero_matrix_has_no_canonical_phase() {
    assert!(matches!(
        phase_canonicalize(&Mat::zeros(2, 2), &Tolerance::default()),
        Err(Error::AllZeroMatrix)
    ));
}

#[test]
fn groups() {
    let z3 = GroupSpec::cyclic(3);
    assert_eq!(z3.order(), 3);
    assert!(z3.validate().is_empty());
    for a in 0..3 {
        assert_eq!(z3.mul(a, z3.inv(a)), z3.identity);
    }
    assert_eq!(GroupSpec::trivial().order(), 1);
}

#[test]
fn broken_fusion_ring_is_reported() {
    let labels = vec!["1".to_string(), "a".into()];
    // a x a = 1 + a without the matching dual structure is fine; a x a = a alone is not.
    let ring = FusionRing::ungraded(labels, 0, vec![0, 1], |a, b, c| match (a, b) {
        (0, x) | (x, 0) => u32::from(x == c),
        _ => u32::from(c == 1),
    });
    assert!(!ring.validate().is_empty());
}

#[test]
fn basis_sizes_match_path_counts() {
    for (cat, x) in [(ising1(), "sigma"), (ty_z3(), "X1"), (tc_z2x_restricted(), "sigma+"), (bilayer_ising(), "sigma.sigma")] {
        let cat = cat.unwrap();
        let x = cat.lookup(x).unwrap();
        for n in 1..=6 {
            for root in cat.ring.trivial_sector() {
                let b = enumerate_basis(&cat, &vec![x; n], root);
                assert_eq!(b.dim() as u64, power_count(&cat, x, n, root));
                assert_eq!(b.dim() as u64, cat.ring.hom_dimension(&vec![x; n], root));
            }
        }
    }
}

#[test]
fn recoupling_routes_are_inverse() {
    for (cat, x) in [(ising1(), "sigma"), (ty_z3(), "X1"), (bilayer_ising(), "sigma.sigma")] {
        let cat = cat.unwrap();
        let x = cat.lookup(x).unwrap();
        let b = enumerate_basis(&cat, &[x; 5], x);
        for pos in 1..5 {
            let to = recouple(&cat, &b, pos).unwrap();
            let back = recouple_reverse(&cat, &b, pos).unwrap();
            let id = &back * &to;
            let dev = max_abs_diff(&id, &Mat::identity(b.dim(), b.dim()));
            assert!(dev < 1e-12, "{} pos {pos}: {dev:e}", cat.name);
        }
    }
}
