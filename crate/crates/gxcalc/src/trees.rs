//! Fusion-tree bases of Hom spaces and recoupling matrices.
//!
//! A left-combed tree on leaves `x_1 .. x_n` with root `t` is the label
//! sequence `y_1 .. y_n` where `y_1 = x_1`, `y_k ∈ y_{k-1} ⊗ x_k` and
//! `y_n = t`. Trees are unit vectors under the Markov-trace inner product.

use crate::catdata::SkeletalCategory;
use crate::error::{Error, Result};
use crate::numerics::{Mat, C64, ZERO};

pub mod moves;

/// One left-combed basis tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FusionTree {
    pub leaves: Vec<usize>,
    /// `y_2 .. y_{n-1}`.
    pub internal: Vec<usize>,
    pub root: usize,
}

impl FusionTree {
    /// The full comb `y_1 .. y_n`; empty for zero leaves.
    pub fn comb(&self) -> Vec<usize> {
        match self.leaves.len() {
            0 => Vec::new(),
            1 => vec![self.root],
            _ => {
                let mut ys = Vec::with_capacity(self.leaves.len());
                ys.push(self.leaves[0]);
                ys.extend_from_slice(&self.internal);
                ys.push(self.root);
                ys
            }
        }
    }
}

/// Ordered basis of `Hom(root, x_1 ⊗ .. ⊗ x_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeBasis {
    pub leaves: Vec<usize>,
    pub root: usize,
    pub trees: Vec<FusionTree>,
}

impl TreeBasis {
    pub fn dim(&self) -> usize {
        self.trees.len()
    }

    /// Combs of all trees, in basis order.
    pub fn combs(&self) -> Vec<Vec<usize>> {
        self.trees.iter().map(FusionTree::comb).collect()
    }

    /// Position of the tree with comb `ys`.
    pub fn index_of(&self, ys: &[usize]) -> Option<usize> {
        self.trees.iter().position(|t| t.comb() == ys)
    }

    /// Render a tree as `(y_1, .., y_n)` with label names.
    pub fn describe(&self, c: &SkeletalCategory, k: usize) -> String {
        let ys: Vec<&str> = self.trees[k].comb().iter().map(|&y| c.label(y)).collect();
        format!("({})", ys.join(", "))
    }
}

/// All left-combed combs `y_1 .. y_n` for `leaves` ending at `root`, in
/// lexicographic order of the label indices.
pub fn combs(c: &SkeletalCategory, leaves: &[usize], root: usize) -> Vec<Vec<usize>> {
    let n = leaves.len();
    if n == 0 {
        return if root == c.unit() { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut ys = vec![leaves[0]];
    extend_combs(c, leaves, root, &mut ys, &mut out);
    out
}

fn extend_combs(
    c: &SkeletalCategory,
    leaves: &[usize],
    root: usize,
    ys: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let k = ys.len();
    if k == leaves.len() {
        if ys[k - 1] == root {
            out.push(ys.clone());
        }
        return;
    }
    let prev = ys[k - 1];
    for y in 0..c.len() {
        if c.ring.admissible(prev, leaves[k], y) {
            ys.push(y);
            extend_combs(c, leaves, root, ys, out);
            ys.pop();
        }
    }
}

/// Left-combed basis of `Hom(root, leaves)`; empty when nothing is admissible.
pub fn enumerate_basis(c: &SkeletalCategory, leaves: &[usize], root: usize) -> TreeBasis {
    let trees = combs(c, leaves, root)
        .into_iter()
        .map(|ys| {
            let n = ys.len();
            FusionTree {
                leaves: leaves.to_vec(),
                internal: if n >= 2 { ys[1..n - 1].to_vec() } else { Vec::new() },
                root,
            }
        })
        .collect();
    TreeBasis {
        leaves: leaves.to_vec(),
        root,
        trees,
    }
}

/// Trees in which leaves `pos` and `pos + 1` (1-based) fuse first, listed
/// as combs with `y_pos` replaced by that pair's channel, in lexicographic order.
pub fn recoupled_combs(c: &SkeletalCategory, basis: &TreeBasis, pos: usize) -> Result<Vec<Vec<usize>>> {
    check_pos(basis, pos)?;
    let x = &basis.leaves;
    let mut out: Vec<Vec<usize>> = Vec::new();
    for ys in basis.combs() {
        let yl = y_at(c, &ys, pos - 1);
        let d = ys[pos];
        for w in c.ring.channels(x[pos - 1], x[pos]) {
            if c.ring.admissible(yl, w, d) {
                let mut t = ys.clone();
                t[pos - 1] = w;
                out.push(t);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn check_pos(basis: &TreeBasis, pos: usize) -> Result<()> {
    if pos == 0 || pos >= basis.leaves.len() {
        return Err(Error::Domain(format!(
            "recoupling position {pos} outside 1..{}",
            basis.leaves.len().saturating_sub(1)
        )));
    }
    Ok(())
}

/// `y_k` of a comb with `y_0` the unit.
pub(crate) fn y_at(c: &SkeletalCategory, ys: &[usize], k: usize) -> usize {
    if k == 0 {
        c.unit()
    } else {
        ys[k - 1]
    }
}

/// Coordinate change from the left-combed basis to the basis where leaves
/// `pos`, `pos + 1` fuse first: rows index [`recoupled_combs`], columns the
/// left-combed basis, entries `[F^{y_{pos-1} x_pos x_{pos+1}}_{y_{pos+1}}]_{y_pos, w}`.
pub fn recouple(c: &SkeletalCategory, basis: &TreeBasis, pos: usize) -> Result<Mat> {
    let targets = recoupled_combs(c, basis, pos)?;
    let x = &basis.leaves;
    let mut m = Mat::zeros(targets.len(), basis.dim());
    for (col, ys) in basis.combs().iter().enumerate() {
        for (row, t) in targets.iter().enumerate() {
            let same_elsewhere = (0..ys.len()).all(|k| k == pos - 1 || ys[k] == t[k]);
            if !same_elsewhere {
                continue;
            }
            let yl = y_at(c, ys, pos - 1);
            m[(row, col)] = c.f(yl, x[pos - 1], x[pos], ys[pos], ys[pos - 1], t[pos - 1])?;
        }
    }
    Ok(m)
}

/// Coordinate change back to the left-combed basis, assembled from the
/// inverses of the individual F-blocks.
pub fn recouple_reverse(c: &SkeletalCategory, basis: &TreeBasis, pos: usize) -> Result<Mat> {
    let targets = recoupled_combs(c, basis, pos)?;
    let x = &basis.leaves;
    let combs = basis.combs();
    let mut m = Mat::zeros(basis.dim(), targets.len());
    for (col, t) in targets.iter().enumerate() {
        let yl = y_at(c, t, pos - 1);
        let (es, fs, block) = c.fmat(yl, x[pos - 1], x[pos], t[pos])?;
        let inv = block
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Domain("singular F-block".into()))?;
        let j = fs.iter().position(|&f| f == t[pos - 1]).expect("channel in block");
        for (i, &e) in es.iter().enumerate() {
            let mut ys = t.clone();
            ys[pos - 1] = e;
            if let Some(row) = combs.iter().position(|y| *y == ys) {
                m[(row, col)] += inv[(j, i)];
            }
        }
    }
    Ok(m)
}

/// Integer count of `Hom(root, x^{⊗n})` from powers of the fusion matrix of `x`.
pub fn power_count(c: &SkeletalCategory, x: usize, n: usize, root: usize) -> u64 {
    let l = c.len();
    let mut v = vec![0u64; l];
    v[c.unit()] = 1;
    for _ in 0..n {
        let mut w = vec![0u64; l];
        for (a, &va) in v.iter().enumerate() {
            if va == 0 {
                continue;
            }
            for (b, wb) in w.iter_mut().enumerate() {
                *wb += va * u64::from(c.ring.n(a, x, b));
            }
        }
        v = w;
    }
    v[root]
}

/// Inner product of two coordinate vectors.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catdata::catalog;

    #[test]
    fn ising_three_sigma_basis() {
        let c = catalog::ising1().unwrap();
        let b = enumerate_basis(&c, &[1, 1, 1], 1);
        assert_eq!(b.dim(), 2);
        assert_eq!(b.trees[0].internal, vec![0]);
        assert_eq!(b.trees[1].internal, vec![2]);
    }

    #[test]
    fn empty_hom() {
        let c = catalog::ising1().unwrap();
        assert_eq!(enumerate_basis(&c, &[1], 2).dim(), 0);
        assert_eq!(enumerate_basis(&c, &[], 0).dim(), 1);
    }
}
