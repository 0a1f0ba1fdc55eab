//! Fusion rings with a G-grading and a G-action on labels.
//!
//! A ring stores integer multiplicities `N^{ab}_c` in a dense cube, the
//! grading `∂: label -> G`, and for each group element the permutation of
//! labels it induces. Validation is exhaustive integer arithmetic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite group given extensionally by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub elements: Vec<String>,
    /// `table[a][b] = a·b`
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

pub const MAX_GROUP_ORDER: usize = 16;

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec::cyclic(1)
    }

    /// Z_n with elements named "0", "1", ...
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        GroupSpec {
            elements,
            table,
            identity: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == self.identity)
            .expect("validated group has inverses")
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// Group axioms; empty when valid.
    pub fn validate(&self) -> Vec<String> {
        let n = self.order();
        let mut out = Vec::new();
        if n == 0 {
            out.push("group has no elements".into());
            return out;
        }
        if n > MAX_GROUP_ORDER {
            out.push(format!("group order {n} exceeds supported {MAX_GROUP_ORDER}"));
        }
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            out.push("multiplication table is not n x n".into());
            return out;
        }
        if self.table.iter().flatten().any(|&x| x >= n) {
            out.push("multiplication table entry out of range".into());
            return out;
        }
        for a in 0..n {
            if self.table[self.identity][a] != a || self.table[a][self.identity] != a {
                out.push(format!("identity fails on {}", self.elements[a]));
            }
            if !(0..n).any(|b| self.table[a][b] == self.identity && self.table[b][a] == self.identity) {
                out.push(format!("{} has no inverse", self.elements[a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]] {
                        out.push(format!(
                            "associativity fails on ({}, {}, {})",
                            self.elements[a], self.elements[b], self.elements[c]
                        ));
                        return out;
                    }
                }
            }
        }
        out
    }
}

/// Fusion ring with grading and label action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionRing {
    pub labels: Vec<String>,
    /// Flattened `N[a][b][c]`.
    pub n: Vec<u32>,
    pub unit: usize,
    pub dual: Vec<usize>,
    pub group: GroupSpec,
    /// Sector of each label.
    pub grading: Vec<usize>,
    /// `action[g][a] = ^g a`.
    pub action: Vec<Vec<usize>>,
}

/// Quantum dimensions together with the total dimension `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dims {
    pub d: Vec<f64>,
    pub total: f64,
}

impl Dims {
    pub fn total_sq(&self) -> f64 {
        self.total * self.total
    }
}

impl FusionRing {
    /// Trivially graded ring from a fusion rule closure.
    pub fn ungraded(
        labels: Vec<String>,
        unit: usize,
        dual: Vec<usize>,
        rule: impl Fn(usize, usize, usize) -> u32,
    ) -> Self {
        let l = labels.len();
        let mut n = vec![0; l * l * l];
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    n[(a * l + b) * l + c] = rule(a, b, c);
                }
            }
        }
        FusionRing {
            action: vec![(0..l).collect()],
            grading: vec![0; l],
            group: GroupSpec::trivial(),
            labels,
            n,
            unit,
            dual,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        let l = self.len();
        self.n[(a * l + b) * l + c]
    }

    pub fn set_n(&mut self, a: usize, b: usize, c: usize, v: u32) {
        let l = self.len();
        self.n[(a * l + b) * l + c] = v;
    }

    pub fn admissible(&self, a: usize, b: usize, c: usize) -> bool {
        self.n(a, b, c) > 0
    }

    /// Channels of `a ⊗ b` in label order.
    pub fn channels(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.n(a, b, c) > 0).collect()
    }

    pub fn act(&self, g: usize, a: usize) -> usize {
        self.action[g][a]
    }

    pub fn sector(&self, a: usize) -> usize {
        self.grading[a]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownName(format!("label {name}")))
    }

    pub fn trivial_sector(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| self.grading[a] == self.group.identity)
            .collect()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.n.iter().all(|&x| x <= 1)
    }

    /// Every violated invariant, as a human-readable line. Empty iff valid.
    pub fn validate(&self) -> Vec<String> {
        let l = self.len();
        let mut out = Vec::new();
        if l == 0 {
            out.push("ring has no labels".into());
            return out;
        }
        out.extend(self.group.validate().into_iter().map(|m| format!("group: {m}")));
        if !out.is_empty() {
            return out;
        }
        if self.n.len() != l * l * l || self.dual.len() != l || self.grading.len() != l {
            out.push("table sizes do not match the label count".into());
            return out;
        }
        if self.action.len() != self.group.order() || self.action.iter().any(|p| p.len() != l) {
            out.push("action must give one permutation per group element".into());
            return out;
        }
        let g = &self.group;
        let u = self.unit;
        for a in 0..l {
            for b in 0..l {
                let delta = u32::from(a == b);
                if self.n(u, a, b) != delta || self.n(a, u, b) != delta {
                    out.push(format!("unit law fails on ({}, {})", self.labels[a], self.labels[b]));
                }
            }
            let ad = self.dual[a];
            if ad >= l || self.dual[ad] != a {
                out.push(format!("dual of {} is not an involution", self.labels[a]));
            } else if self.n(a, ad, u) < 1 {
                out.push(format!("N^{{{} {}}}_1 = 0", self.labels[a], self.labels[ad]));
            }
        }
        'assoc: for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    for d in 0..l {
                        let lhs: u32 = (0..l).map(|e| self.n(a, b, e) * self.n(e, c, d)).sum();
                        let rhs: u32 = (0..l).map(|f| self.n(b, c, f) * self.n(a, f, d)).sum();
                        if lhs != rhs {
                            out.push(format!(
                                "associativity fails on ({}, {}, {}; {}): {lhs} != {rhs}",
                                self.labels[a], self.labels[b], self.labels[c], self.labels[d]
                            ));
                            break 'assoc;
                        }
                    }
                }
            }
        }
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    if self.n(a, b, c) > 0
                        && self.grading[c] != g.mul(self.grading[a], self.grading[b])
                    {
                        out.push(format!(
                            "grading not respected by {} x {} -> {}",
                            self.labels[a], self.labels[b], self.labels[c]
                        ));
                    }
                }
            }
        }
        for (h, perm) in self.action.iter().enumerate() {
            let mut seen = vec![false; l];
            for &x in perm {
                if x < l {
                    seen[x] = true;
                }
            }
            if seen.iter().any(|s| !s) {
                out.push(format!("action of {} is not a permutation", g.elements[h]));
                continue;
            }
            if perm[u] != u {
                out.push(format!("action of {} moves the unit", g.elements[h]));
            }
            for a in 0..l {
                let want = g.mul(g.mul(h, self.grading[a]), g.inv(h));
                if self.grading[perm[a]] != want {
                    out.push(format!(
                        "action of {} on {} breaks grading compatibility",
                        g.elements[h], self.labels[a]
                    ));
                }
                if perm[self.dual[a]] != self.dual[perm[a]] {
                    out.push(format!(
                        "action of {} does not commute with the dual of {}",
                        g.elements[h], self.labels[a]
                    ));
                }
                for b in 0..l {
                    for c in 0..l {
                        if self.n(perm[a], perm[b], perm[c]) != self.n(a, b, c) {
                            out.push(format!(
                                "action of {} does not preserve {} x {} -> {}",
                                g.elements[h], self.labels[a], self.labels[b], self.labels[c]
                            ));
                        }
                    }
                }
            }
        }
        if self.action[g.identity].iter().enumerate().any(|(a, &x)| a != x) {
            out.push("identity element acts nontrivially".into());
        }
        for h in 0..g.order() {
            for k in 0..g.order() {
                let hk = g.mul(h, k);
                if (0..l).any(|a| self.act(h, self.act(k, a)) != self.act(hk, a)) {
                    out.push(format!(
                        "action is not a homomorphism at ({}, {})",
                        g.elements[h], g.elements[k]
                    ));
                }
            }
        }
        out
    }

    /// Perron-Frobenius dimensions by power iteration.
    ///
    /// The dimension vector is the positive eigenvector of `M = Σ_a N_a`,
    /// whose entries are all positive for a ring with duals, so the
    /// iteration converges without deflation.
    pub fn quantum_dimensions(&self) -> Result<Dims> {
        let l = self.len();
        let mut m = vec![0.0f64; l * l];
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    m[b * l + c] += f64::from(self.n(a, b, c));
                }
            }
        }
        let mut v = vec![1.0f64; l];
        let mut converged = false;
        for _ in 0..100_000 {
            let mut w = vec![0.0f64; l];
            for b in 0..l {
                for c in 0..l {
                    w[b] += (m[b * l + c] + if b == c { 1.0 } else { 0.0 }) * v[c];
                }
            }
            let norm = w.iter().fold(0.0f64, |x, y| x.max(y.abs()));
            if norm == 0.0 || !norm.is_finite() {
                break;
            }
            w.iter_mut().for_each(|x| *x /= norm);
            let delta = w.iter().zip(&v).fold(0.0f64, |x, (p, q)| x.max((p - q).abs()));
            v = w;
            if delta < 1e-13 {
                converged = true;
                break;
            }
        }
        if !converged || v[self.unit] <= 0.0 {
            return Err(Error::NonConvergent(self.labels[self.unit].clone()));
        }
        let d: Vec<f64> = v.iter().map(|x| x / v[self.unit]).collect();
        if let Some(a) = (0..l).find(|&a| d[a] < 1.0 - 1e-9) {
            return Err(Error::NonConvergent(self.labels[a].clone()));
        }
        let total = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(Dims { d, total })
    }

    /// Group formed by the dimension-one labels.
    pub fn abelian_subgroup(&self, dims: &Dims, eq_tol: f64) -> Result<GroupSpec> {
        let inv: Vec<usize> = (0..self.len())
            .filter(|&a| (dims.d[a] - 1.0).abs() < eq_tol)
            .collect();
        let mut table = Vec::with_capacity(inv.len());
        for &a in &inv {
            let mut row = Vec::with_capacity(inv.len());
            for &b in &inv {
                let ch = self.channels(a, b);
                if ch.len() != 1 || self.n(a, b, ch[0]) != 1 {
                    return Err(Error::NotClosed(format!(
                        "{} x {} has {} channels",
                        self.labels[a],
                        self.labels[b],
                        ch.len()
                    )));
                }
                let pos = inv.iter().position(|&x| x == ch[0]).ok_or_else(|| {
                    Error::NotClosed(format!(
                        "{} x {} = {} leaves the invertibles",
                        self.labels[a], self.labels[b], self.labels[ch[0]]
                    ))
                })?;
                row.push(pos);
            }
            table.push(row);
        }
        let identity = inv
            .iter()
            .position(|&x| x == self.unit)
            .ok_or_else(|| Error::NotClosed("unit is not invertible".into()))?;
        Ok(GroupSpec {
            elements: inv.iter().map(|&a| self.labels[a].clone()).collect(),
            table,
            identity,
        })
    }

    /// Number of fixed points of each nontrivial group element on the
    /// trivial sector; this counts the defect types in that sector.
    pub fn defect_counts(&self) -> BTreeMap<String, usize> {
        let triv = self.trivial_sector();
        (0..self.group.order())
            .filter(|&g| g != self.group.identity)
            .map(|g| {
                let count = triv.iter().filter(|&&a| self.act(g, a) == a).count();
                (self.group.elements[g].clone(), count)
            })
            .collect()
    }

    /// Number of labels in each sector.
    pub fn sector_sizes(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for g in 0..self.group.order() {
            let n = self.grading.iter().filter(|&&s| s == g).count();
            out.insert(self.group.elements[g].clone(), n);
        }
        out
    }

    /// Dimension of `Hom(total, x^{⊗n})` by repeated fusion.
    pub fn hom_dimension(&self, leaves: &[usize], total: usize) -> u64 {
        let l = self.len();
        let Some((&first, rest)) = leaves.split_first() else {
            return u64::from(total == self.unit);
        };
        let mut v = vec![0u64; l];
        v[first] = 1;
        for &x in rest {
            let mut w = vec![0u64; l];
            for (y, &cnt) in v.iter().enumerate() {
                if cnt == 0 {
                    continue;
                }
                for (c, wc) in w.iter_mut().enumerate() {
                    *wc += cnt * u64::from(self.n(y, x, c));
                }
            }
            v = w;
        }
        v[total]
    }
}
