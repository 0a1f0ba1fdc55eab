//! Complex scalars, small dense matrices, tolerances and phase handling.
//!
//! Every symbol value in the crate is a [`C64`]; matrices are
//! `nalgebra` dense matrices over [`C64`]. Comparison "up to phase" is the
//! workhorse of the braid module, so it lives here.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `exp(i pi p / q)`.
pub fn exp_ipi(p: f64, q: f64) -> C64 {
    C64::from_polar(1.0, std::f64::consts::PI * p / q)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Tolerance policy shared by all modules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eq_tol: f64,
    pub residual_tol: f64,
    pub dedup_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq_tol: 1e-9,
            residual_tol: 1e-10,
            dedup_tol: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn with_eq(eq_tol: f64) -> Self {
        Tolerance {
            eq_tol,
            ..Tolerance::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eq_tol", self.eq_tol),
            ("residual_tol", self.residual_tol),
            ("dedup_tol", self.dedup_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &Mat) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Deviation of `m m^dagger` from the identity.
pub fn unitarity_defect(m: &Mat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let p = m * m.adjoint();
    max_abs_diff(&p, &Mat::identity(m.nrows(), m.ncols()))
}

pub fn is_unitary(m: &Mat, tol: f64) -> bool {
    unitarity_defect(m) <= tol
}

pub fn diag(entries: &[C64]) -> Mat {
    Mat::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

/// Build a matrix from row-major entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[C64]) -> Mat {
    Mat::from_row_slice(rows, cols, entries)
}

/// Row-major phase of the first entry whose modulus exceeds `dedup_tol`.
pub fn leading_phase(m: &Mat, tol: &Tolerance) -> Option<C64> {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            if z.norm() > tol.dedup_tol {
                return Some(z / z.norm());
            }
        }
    }
    None
}

/// Multiply `m` by the phase that makes its first large entry real positive.
pub fn phase_canonicalize(m: &Mat, tol: &Tolerance) -> Result<Mat> {
    let ph = leading_phase(m, tol).ok_or(Error::AllZeroMatrix)?;
    Ok(m.map(|z| z * ph.conj()))
}

/// Decide whether `a = e^{i phi} b` entrywise; returns the fitted phase.
///
/// The phase is the normalized overlap `<b, a> / |<b, a>|`, which is the
/// least-squares optimum over unit scalars. Non-unit multiples fail the
/// entrywise check afterwards.
pub fn projectively_equal(a: &Mat, b: &Mat, tol: &Tolerance) -> Result<(bool, Option<C64>)> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let overlap: C64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    if overlap.norm() <= tol.dedup_tol * tol.dedup_tol {
        let both_zero = max_abs(a) <= tol.eq_tol && max_abs(b) <= tol.eq_tol;
        return Ok((both_zero, both_zero.then_some(ONE)));
    }
    let phase = overlap / overlap.norm();
    let dev = max_abs_diff(a, &b.map(|z| z * phase));
    if dev <= tol.eq_tol {
        Ok((true, Some(phase)))
    } else {
        Ok((false, None))
    }
}

/// Min over unit phases of the entrywise max deviation, using the overlap phase.
pub fn projective_distance(a: &Mat, b: &Mat) -> f64 {
    let overlap: C64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    max_abs_diff(a, &b.map(|z| z * phase))
}

/// Least-squares complex scalar `s` with `a ~ s b`; `None` if `b` vanishes.
pub fn fit_scalar(a: &Mat, b: &Mat) -> Option<C64> {
    let num: C64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (den > 0.0).then(|| num / den)
}

/// Decide whether `a = s b` for some complex scalar `s` (fitted by least
/// squares); returns the scalar. Used against reference matrices that are
/// shown without normalization.
pub fn scalar_multiple_equal(a: &Mat, b: &Mat, tol: &Tolerance) -> Result<(bool, Option<C64>)> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let Some(s) = fit_scalar(a, b) else {
        return Ok((max_abs(a) <= tol.eq_tol, None));
    };
    let dev = max_abs_diff(a, &b.map(|z| z * s));
    Ok((dev <= tol.eq_tol && s.norm() > tol.eq_tol, Some(s)))
}

/// Nested `[[ [re, im], ... ], ...]` JSON form of a matrix.
pub fn matrix_to_json(m: &Mat) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = (0..m.nrows())
        .map(|r| {
            serde_json::Value::Array(
                (0..m.ncols())
                    .map(|c| serde_json::json!([m[(r, c)].re, m[(r, c)].im]))
                    .collect(),
            )
        })
        .collect();
    serde_json::Value::Array(rows)
}

pub fn matrix_from_json(v: &serde_json::Value) -> Result<Mat> {
    let bad = || Error::Parse {
        line: 0,
        col: 0,
        msg: "matrix JSON must be an array of rows of [re, im] pairs".into(),
    };
    let rows = v.as_array().ok_or_else(bad)?;
    let nrows = rows.len();
    let ncols = rows.first().and_then(|r| r.as_array()).map_or(0, |r| r.len());
    let mut entries = Vec::with_capacity(nrows * ncols);
    for row in rows {
        let row = row.as_array().ok_or_else(bad)?;
        if row.len() != ncols {
            return Err(bad());
        }
        for pair in row {
            let p = pair.as_array().ok_or_else(bad)?;
            if p.len() != 2 {
                return Err(bad());
            }
            let x = p[0].as_f64().ok_or_else(bad)?;
            let y = p[1].as_f64().ok_or_else(bad)?;
            entries.push(C64::new(x, y));
        }
    }
    Ok(from_rows(nrows, ncols, &entries))
}

/// Fixed-width rendering used in CLI reports, e.g. `0.70710678+0.70710678i`.
pub fn fmt_c(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-9 { 0.0 } else { x };
    let (x, y) = (clean(z.re), clean(z.im));
    if y < 0.0 {
        format!("{x:.8}-{:.8}i", -y)
    } else {
        format!("{x:.8}+{y:.8}i")
    }
}

pub fn fmt_matrix(m: &Mat) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| fmt_c(m[(r, c)])).collect();
        out.push_str("  [");
        out.push_str(&row.join(", "));
        out.push_str("]\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_divides_by_first_phase() {
        let tol = Tolerance::default();
        let m = diag(&[I, -ONE]);
        let c = phase_canonicalize(&m, &tol).unwrap();
        assert!(max_abs_diff(&c, &diag(&[ONE, I])) < 1e-15);
    }

    #[test]
    fn canonicalize_strips_prefactor() {
        let tol = Tolerance::default();
        let m = diag(&[ONE, I]).map(|z| z * exp_ipi(-1.0, 8.0));
        let c = phase_canonicalize(&m, &tol).unwrap();
        assert!(max_abs_diff(&c, &diag(&[ONE, I])) < 1e-15);
    }

    #[test]
    fn canonicalize_rejects_zero() {
        let tol = Tolerance::default();
        assert!(matches!(
            phase_canonicalize(&Mat::zeros(2, 2), &tol),
            Err(Error::AllZeroMatrix)
        ));
    }

    #[test]
    fn projective_equality_examples() {
        let tol = Tolerance::default();
        let a = diag(&[ONE, I]);
        let b = a.map(|z| z * exp_ipi(1.0, 7.0));
        let (eq, ph) = projectively_equal(&b, &a, &tol).unwrap();
        assert!(eq);
        assert!((ph.unwrap() - exp_ipi(1.0, 7.0)).norm() < 1e-12);

        let given = diag(&[ONE, I]).map(|z| z * exp_ipi(-1.0, 8.0));
        let direct = diag(&[exp_ipi(-1.0, 8.0), exp_ipi(3.0, 8.0)]);
        let (eq, ph) = projectively_equal(&given, &direct, &tol).unwrap();
        assert!(eq);
        assert!((ph.unwrap() - ONE).norm() < 1e-12);

        let (eq, ph) = projectively_equal(&diag(&[ONE, I]), &diag(&[ONE, -I]), &tol).unwrap();
        assert!(!eq && ph.is_none());
    }

    #[test]
    fn projective_equality_rejects_scaling_and_shape() {
        let tol = Tolerance::default();
        let a = diag(&[ONE, I]);
        let (eq, _) = projectively_equal(&a.map(|z| z * 2.0), &a, &tol).unwrap();
        assert!(!eq);
        assert!(projectively_equal(&a, &Mat::zeros(3, 3), &tol).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = from_rows(2, 2, &[ONE, I, -I, re(0.25)]);
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_c(exp_ipi(1.0, 4.0)), "0.70710678+0.70710678i");
        assert_eq!(fmt_c(C64::new(-0.5, -1e-12)), "-0.50000000+0.00000000i");
    }
}
