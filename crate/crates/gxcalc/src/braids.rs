//! Projective braid-group representations on fusion-tree bases.
//!
//! The generator `σ_i` exchanges leaves `i` and `i + 1` of `Hom(t, x^{⊗n})`.
//! It is diagonal in the basis where that pair fuses first, with the
//! R-symbol of the pair channel (or its inverse, per the category's
//! orientation flag), and is carried back to the left-combed basis by the
//! recoupling matrix.

use std::collections::HashMap;

use crate::catdata::{Orientation, SkeletalCategory};
use crate::error::{Error, Result};
use crate::numerics::{self, max_abs_diff, phase_canonicalize, projective_distance, Mat, Tolerance, C64};
use crate::trees::{enumerate_basis, recouple, recouple_reverse, recoupled_combs, TreeBasis};

/// Generators `σ_1 .. σ_{n-1}` over a tree basis.
#[derive(Debug, Clone)]
pub struct BraidRep {
    pub n: usize,
    pub object: usize,
    pub basis: TreeBasis,
    pub generators: Vec<Mat>,
    pub convention: Orientation,
}

impl BraidRep {
    pub fn dim(&self) -> usize {
        self.generators.first().map_or(self.basis.dim(), |g| g.nrows())
    }

    /// Matrix of a braid word; entries are signed 1-based generator indices
    /// applied left to right in time.
    pub fn word(&self, word: &[i32]) -> Result<Mat> {
        let mut m = Mat::identity(self.dim(), self.dim());
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i > self.generators.len() {
                return Err(Error::Domain(format!(
                    "generator {g} outside ±1..±{}",
                    self.generators.len()
                )));
            }
            let s = &self.generators[i - 1];
            let step = if g > 0 { s.clone() } else { s.adjoint() };
            m = step * m;
        }
        Ok(m)
    }

    /// Largest deviation of a generator from unitarity.
    pub fn unitarity_defect(&self) -> f64 {
        self.generators
            .iter()
            .map(numerics::unitarity_defect)
            .fold(0.0, f64::max)
    }
}

/// Representation of `B_n` on `Hom(total, x^{⊗n})`.
pub fn build_rep(c: &SkeletalCategory, x: usize, n: usize, total: usize) -> Result<BraidRep> {
    if x >= c.len() || total >= c.len() {
        return Err(Error::UnknownName(format!("label index out of range in {}", c.name)));
    }
    let g = c.ring.sector(x);
    if c.ring.act(g, x) != x {
        return Err(Error::NotFixedPoint(format!(
            "{} is moved by its own sector: ^{{{}}}{} = {}",
            c.label(x),
            c.group().elements[g],
            c.label(x),
            c.label(c.ring.act(g, x))
        )));
    }
    if n == 0 {
        return Err(Error::Domain("a braid needs at least one strand".into()));
    }
    let basis = enumerate_basis(c, &vec![x; n], total);
    let positive_is_r = c.orientation.is_r_move(true);
    let mut generators = Vec::with_capacity(n.saturating_sub(1));
    for pos in 1..n {
        if basis.dim() == 0 {
            generators.push(Mat::zeros(0, 0));
            continue;
        }
        let to = recouple(c, &basis, pos)?;
        let back = recouple_reverse(c, &basis, pos)?;
        let targets = recoupled_combs(c, &basis, pos)?;
        let mut d = Mat::zeros(targets.len(), targets.len());
        for (k, t) in targets.iter().enumerate() {
            let r = c.r(x, x, t[pos - 1])?;
            d[(k, k)] = if positive_is_r { r } else { r.inv() };
        }
        generators.push(back * d * to);
    }
    Ok(BraidRep {
        n,
        object: x,
        basis,
        generators,
        convention: c.orientation,
    })
}

/// Largest projective distance over the braid and far-commutation relations.
pub fn check_braid_relations(r: &BraidRep) -> f64 {
    let s = &r.generators;
    let mut worst: f64 = 0.0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let (a, b) = if j == i + 1 {
                (&s[i] * &s[j] * &s[i], &s[j] * &s[i] * &s[j])
            } else {
                (&s[i] * &s[j], &s[j] * &s[i])
            };
            worst = worst.max(projective_distance(&a, &b));
        }
    }
    worst
}

/// Order of a projective image, or the bound it exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureOrder {
    Finite(usize),
    ExceedsBound,
}

#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub order: ClosureOrder,
    /// Phase-canonical representatives, in discovery order.
    pub elements: Vec<Mat>,
    pub bound: usize,
}

/// Breadth-first closure of the generators modulo phase.
///
/// Elements are phase-canonicalized and bucketed by their entries rounded
/// to the `dedup_tol` grid; a bucket hit is confirmed by entrywise distance.
pub fn projective_closure(r: &BraidRep, bound: usize, tol: &Tolerance) -> Result<ClosureResult> {
    if bound == 0 {
        return Err(Error::Domain("closure bound must be at least 1".into()));
    }
    let dim = r.dim();
    if dim == 0 {
        return Ok(ClosureResult {
            order: ClosureOrder::Finite(1),
            elements: vec![Mat::zeros(0, 0)],
            bound,
        });
    }
    let gens: Vec<Mat> = r
        .generators
        .iter()
        .map(|g| phase_canonicalize(g, tol))
        .collect::<Result<_>>()?;
    let mut store = Store::new(tol);
    let id = Mat::identity(dim, dim);
    store.insert(id);
    let mut frontier = 0;
    while frontier < store.elements.len() {
        let cur = store.elements[frontier].clone();
        frontier += 1;
        for g in &gens {
            let next = phase_canonicalize(&(g * &cur), tol)?;
            if store.insert(next) && store.elements.len() > bound {
                return Ok(ClosureResult {
                    order: ClosureOrder::ExceedsBound,
                    elements: store.elements,
                    bound,
                });
            }
        }
    }
    Ok(ClosureResult {
        order: ClosureOrder::Finite(store.elements.len()),
        elements: store.elements,
        bound,
    })
}

struct Store<'a> {
    tol: &'a Tolerance,
    elements: Vec<Mat>,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl<'a> Store<'a> {
    fn new(tol: &'a Tolerance) -> Self {
        Store {
            tol,
            elements: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    fn key(&self, m: &Mat) -> Vec<i64> {
        let q = self.tol.dedup_tol;
        m.iter()
            .flat_map(|z| [(z.re / q).round() as i64, (z.im / q).round() as i64])
            .collect()
    }

    /// Insert unless already present; returns whether it was new.
    fn insert(&mut self, m: Mat) -> bool {
        let key = self.key(&m);
        let bucket = self.buckets.entry(key).or_default();
        if bucket
            .iter()
            .any(|&k| max_abs_diff(&self.elements[k], &m) <= self.tol.dedup_tol)
        {
            return false;
        }
        bucket.push(self.elements.len());
        self.elements.push(m);
        true
    }
}

/// Outcome of a finiteness probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityVerdict {
    ClosureFound(usize),
    /// The image did not close within the step budget. This is not a proof
    /// of density.
    NoClosureWithin(usize),
}

impl DensityVerdict {
    pub fn describe(&self) -> String {
        match self {
            DensityVerdict::ClosureFound(n) => format!("closure found: finite projective image of order {n}"),
            DensityVerdict::NoClosureWithin(s) => format!(
                "no closure within {s} elements (not a proof of density)"
            ),
        }
    }
}

/// Run [`projective_closure`] with `steps` as the bound.
pub fn density_probe(r: &BraidRep, steps: usize, tol: &Tolerance) -> Result<DensityVerdict> {
    Ok(match projective_closure(r, steps, tol)?.order {
        ClosureOrder::Finite(n) => DensityVerdict::ClosureFound(n),
        ClosureOrder::ExceedsBound => DensityVerdict::NoClosureWithin(steps),
    })
}

/// Mass that `m` moves out of the span of the `logical` basis vectors:
/// Frobenius norm of the block with rows outside and columns inside.
pub fn leakage(m: &Mat, logical: &[usize]) -> f64 {
    let mut sum = 0.0;
    for &j in logical {
        for i in 0..m.nrows() {
            if !logical.contains(&i) {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Restriction of `m` to the `logical` basis vectors.
pub fn logical_block(m: &Mat, logical: &[usize]) -> Mat {
    Mat::from_fn(logical.len(), logical.len(), |i, j| m[(logical[i], logical[j])])
}

/// A representation given directly by generator matrices, for probing.
pub fn rep_from_generators(generators: Vec<Mat>) -> Result<BraidRep> {
    let dim = generators.first().map_or(0, |g| g.nrows());
    if generators.iter().any(|g| g.shape() != (dim, dim)) {
        return Err(Error::Domain("generators must be square and of equal size".into()));
    }
    Ok(BraidRep {
        n: generators.len() + 1,
        object: 0,
        basis: TreeBasis {
            leaves: Vec::new(),
            root: 0,
            trees: Vec::new(),
        },
        generators,
        convention: Orientation::PositiveIsR,
    })
}

/// Diagonal phase matrix, convenient for probes.
pub fn phase_generator(angles: &[f64]) -> Mat {
    let d: Vec<C64> = angles.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    numerics::diag(&d)
}
