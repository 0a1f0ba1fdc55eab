//! Local moves on sparse superpositions of left-combed trees.
//!
//! A [`State`] holds the current leaves and a map from combs to amplitudes.
//! Every move is linear and is applied term by term. Strand positions are
//! 1-based. Crossings follow two conventions:
//!
//! * R-move (left strand over): `(a, b) -> (^{∂a} b, a)` with factor
//!   `R^{^{∂a} b, a}_w`, indexed by the labels above the crossing.
//! * inverse move (right strand over): `(a, b) -> (b, ^{∂b⁻¹} a)` with
//!   factor `1 / R^{a b}_w`, indexed by the labels below the crossing.
//!
//! Block moves carry one strand across a group of neighbours that is first
//! fused to a single charge. A strand passing over a block acts on its
//! labels and picks up `U` factors at each block vertex; a strand passing
//! under picks up `η` factors.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, BTreeSet};

use crate::catdata::{RKey, SkeletalCategory};
use crate::error::{Error, Result};
use crate::numerics::{C64, ONE, ZERO};

use super::y_at;

/// Amplitudes below this modulus are dropped.
const PRUNE: f64 = 1e-15;

/// Superposition of combs over fixed leaves and root.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub leaves: Vec<usize>,
    pub root: usize,
    pub amps: BTreeMap<Vec<usize>, C64>,
}

impl State {
    /// The basis tree `ys` with amplitude 1.
    pub fn basis(leaves: Vec<usize>, root: usize, ys: Vec<usize>) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(ys, ONE);
        State { leaves, root, amps }
    }

    pub fn n(&self) -> usize {
        self.leaves.len()
    }

    pub fn amp(&self, ys: &[usize]) -> C64 {
        self.amps.get(ys).copied().unwrap_or(ZERO)
    }

    /// `<self | other>`; zero when the leaves differ.
    pub fn inner(&self, other: &State) -> C64 {
        if self.leaves != other.leaves || self.root != other.root {
            return ZERO;
        }
        self.amps
            .iter()
            .map(|(k, a)| a.conj() * other.amp(k))
            .fold(ZERO, |x, y| x + y)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, s: C64) {
        for a in self.amps.values_mut() {
            *a *= s;
        }
    }
}

/// Which elementary crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cross {
    /// Left strand over.
    R,
    /// Right strand over.
    RInv,
}

impl Cross {
    pub fn inverse(self) -> Self {
        match self {
            Cross::R => Cross::RInv,
            Cross::RInv => Cross::R,
        }
    }
}

/// Symbol lookups consumed by an evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Usage {
    pub f: usize,
    pub r: usize,
    pub u: usize,
    pub eta: usize,
}

/// Move engine over one category.
pub struct Engine<'a> {
    pub c: &'a SkeletalCategory,
    usage: Cell<Usage>,
    touched: RefCell<BTreeSet<RKey>>,
}

type Terms = Vec<(Vec<usize>, C64)>;

impl<'a> Engine<'a> {
    pub fn new(c: &'a SkeletalCategory) -> Self {
        Engine {
            c,
            usage: Cell::new(Usage::default()),
            touched: RefCell::new(BTreeSet::new()),
        }
    }

    /// R-symbol keys read so far; clears the record.
    pub fn take_touched(&self) -> BTreeSet<RKey> {
        std::mem::take(&mut *self.touched.borrow_mut())
    }

    pub fn usage(&self) -> Usage {
        self.usage.get()
    }

    fn bump(&self, f: impl FnOnce(&mut Usage)) {
        let mut u = self.usage.get();
        f(&mut u);
        self.usage.set(u);
    }

    fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Result<C64> {
        self.bump(|u| u.f += 1);
        self.c.f(a, b, c, d, e, f)
    }

    fn r(&self, a: usize, b: usize, c: usize) -> Result<C64> {
        self.bump(|u| u.r += 1);
        self.touched.borrow_mut().insert([a, b, c]);
        self.c.r(a, b, c)
    }

    fn u(&self, k: usize, a: usize, b: usize, c: usize) -> Result<C64> {
        self.bump(|u| u.u += 1);
        self.c.u_sym(k, a, b, c)
    }

    fn eta(&self, x: usize, g: usize, h: usize) -> Result<C64> {
        self.bump(|u| u.eta += 1);
        self.c.eta_sym(x, g, h)
    }

    fn adm(&self, a: usize, b: usize, c: usize) -> bool {
        self.c.ring.admissible(a, b, c)
    }

    fn act(&self, g: usize, a: usize) -> usize {
        self.c.ring.act(g, a)
    }

    fn sector(&self, a: usize) -> usize {
        self.c.ring.sector(a)
    }

    fn ginv(&self, g: usize) -> usize {
        self.c.group().inv(g)
    }

    /// Apply a term-wise linear map producing states on `leaves`.
    fn map(&self, s: &State, leaves: Vec<usize>, mut f: impl FnMut(&[usize]) -> Result<Terms>) -> Result<State> {
        let mut amps: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
        for (ys, a) in &s.amps {
            for (t, v) in f(ys)? {
                *amps.entry(t).or_insert(ZERO) += a * v;
            }
        }
        amps.retain(|_, v| v.norm() > PRUNE);
        Ok(State {
            leaves,
            root: s.root,
            amps,
        })
    }

    fn check_pair(&self, s: &State, i: usize) -> Result<()> {
        if i == 0 || i + 1 > s.n() {
            return Err(Error::Domain(format!("no strand pair at {i} of {}", s.n())));
        }
        Ok(())
    }

    /// Labels after a crossing of `(a, b)`.
    pub fn crossed(&self, kind: Cross, a: usize, b: usize) -> (usize, usize) {
        match kind {
            Cross::R => (self.act(self.sector(a), b), a),
            Cross::RInv => (b, self.act(self.ginv(self.sector(b)), a)),
        }
    }

    fn cross_factor(&self, kind: Cross, a: usize, b: usize, w: usize) -> Result<C64> {
        match kind {
            Cross::R => {
                let (a2, b2) = self.crossed(kind, a, b);
                self.r(a2, b2, w)
            }
            Cross::RInv => Ok(ONE / self.r(a, b, w)?),
        }
    }

    /// Crossing of the pair `(a, b)` sitting between `yl` (before) and `d`
    /// (after) with left-comb label `e`; returns `(e', coefficient)` terms.
    #[allow(clippy::too_many_arguments)]
    fn cross_local(
        &self,
        kind: Cross,
        yl: usize,
        a: usize,
        b: usize,
        e: usize,
        d: usize,
        extra: impl Fn(usize) -> Result<C64>,
    ) -> Result<Vec<(usize, C64)>> {
        let (a2, b2) = self.crossed(kind, a, b);
        let mut out: BTreeMap<usize, C64> = BTreeMap::new();
        for w in self.c.ring.channels(a, b) {
            if !self.adm(yl, w, d) {
                continue;
            }
            let f1 = self.f(yl, a, b, d, e, w)?;
            if f1 == ZERO {
                continue;
            }
            let phi = self.cross_factor(kind, a, b, w)? * extra(w)?;
            for e2 in self.c.ring.channels(yl, a2) {
                if !self.adm(e2, b2, d) {
                    continue;
                }
                let f2 = self.f(yl, a2, b2, d, e2, w)?.conj();
                *out.entry(e2).or_insert(ZERO) += f1 * phi * f2;
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Elementary crossing of strands `i`, `i + 1`.
    pub fn cross(&self, s: &State, i: usize, kind: Cross) -> Result<State> {
        self.check_pair(s, i)?;
        let (a, b) = (s.leaves[i - 1], s.leaves[i]);
        let (a2, b2) = self.crossed(kind, a, b);
        let mut leaves = s.leaves.clone();
        leaves[i - 1] = a2;
        leaves[i] = b2;
        self.map(s, leaves, |ys| {
            let yl = y_at(self.c, ys, i - 1);
            let terms = self.cross_local(kind, yl, a, b, ys[i - 1], ys[i], |_| Ok(ONE))?;
            Ok(terms
                .into_iter()
                .map(|(e2, v)| {
                    let mut t = ys.to_vec();
                    t[i - 1] = e2;
                    (t, v)
                })
                .collect())
        })
    }

    /// Rewrite the comb labels `y_i .. y_{j-1}` as the internal labels
    /// `z_i = x_i, z_{i+1} .. z_j` of the block `[i, j]` fused on its own.
    fn to_block(&self, leaves: &[usize], ys: &[usize], i: usize, j: usize) -> Result<Vec<(Vec<usize>, C64)>> {
        let yb = y_at(self.c, ys, i - 1);
        let mut out = vec![(vec![leaves[i - 1]], ONE)];
        for k in i + 1..=j {
            let mut next = Vec::new();
            for (zs, v) in out {
                let zp = *zs.last().expect("nonempty");
                for z in self.c.ring.channels(zp, leaves[k - 1]) {
                    if !self.adm(yb, z, ys[k - 1]) {
                        continue;
                    }
                    let f = self.f(yb, zp, leaves[k - 1], ys[k - 1], ys[k - 2], z)?;
                    if f != ZERO {
                        let mut t = zs.clone();
                        t.push(z);
                        next.push((t, v * f));
                    }
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Inverse of [`Self::to_block`]: enumerate `y_i .. y_{j-1}` for block
    /// labels `zs` between `yb = y_{i-1}` and `yj = y_j`.
    fn expand_block(
        &self,
        leaves: &[usize],
        i: usize,
        j: usize,
        yb: usize,
        zs: &[usize],
        yj: usize,
    ) -> Result<Vec<(Vec<usize>, C64)>> {
        // Partial combs y_i .. y_k with their accumulated coefficient.
        let mut out: Vec<(Vec<usize>, C64)> = vec![(Vec::new(), ONE)];
        for k in i..=j {
            let mut next = Vec::new();
            for (part, v) in out {
                let prev = part.last().copied().unwrap_or(yb);
                let cands: Vec<usize> = if k == j {
                    if self.adm(prev, leaves[k - 1], yj) {
                        vec![yj]
                    } else {
                        Vec::new()
                    }
                } else {
                    self.c.ring.channels(prev, leaves[k - 1])
                };
                for y in cands {
                    let coef = if k == i {
                        ONE
                    } else {
                        self.f(yb, zs[k - i - 1], leaves[k - 1], y, prev, zs[k - i])?.conj()
                    };
                    if coef != ZERO {
                        let mut t = part.clone();
                        t.push(y);
                        next.push((t, v * coef));
                    }
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Strand `p` crosses the adjacent block `[i, j]`. With `p = i - 1` it
    /// moves right and the block shifts left; with `p = j + 1` it moves left.
    pub fn cross_block(&self, s: &State, p: usize, i: usize, j: usize, over: bool) -> Result<State> {
        let n = s.n();
        if i == 0 || j < i || j > n || !(p + 1 == i || p == j + 1) {
            return Err(Error::Domain(format!("strand {p} is not adjacent to block [{i}, {j}]")));
        }
        let right = p + 1 == i;
        let x = s.leaves[p - 1];
        let block: Vec<usize> = s.leaves[i - 1..j].to_vec();
        // Group element acting on the block and the crossing type on the
        // compressed pair.
        let k = self.sector(x);
        let kind = match (right, over) {
            (true, true) | (false, false) => Cross::R,
            (true, false) | (false, true) => Cross::RInv,
        };
        let g_block = if over {
            if right {
                k
            } else {
                self.ginv(k)
            }
        } else {
            self.c.group().identity
        };
        let new_block: Vec<usize> = block.iter().map(|&b| self.act(g_block, b)).collect();
        let block_sector = block
            .iter()
            .fold(self.c.group().identity, |g, &b| self.c.group().mul(g, self.sector(b)));
        let x2 = if over {
            x
        } else if right {
            self.act(self.ginv(block_sector), x)
        } else {
            self.act(block_sector, x)
        };
        let mut leaves = s.leaves.clone();
        let (ni, nj, np) = if right { (i - 1, j - 1, j) } else { (i + 1, j + 1, i) };
        leaves[np - 1] = x2;
        leaves[ni - 1..nj].copy_from_slice(&new_block);

        self.map(s, leaves.clone(), |ys| {
            let mut out: Terms = Vec::new();
            for (zs, v1) in self.to_block(&s.leaves, ys, i, j)? {
                let cz = *zs.last().expect("nonempty");
                let zs2: Vec<usize> = zs.iter().map(|&z| self.act(g_block, z)).collect();
                let vertex = self.vertex_factor(over, right, k, x, x2, &block, &new_block, &zs, &zs2)?;
                if right {
                    // Compressed pair (x, c) between y_{i-2} and y_j.
                    let yl = y_at(self.c, ys, i - 2);
                    let e = ys[i - 2];
                    let d = ys[j - 1];
                    for (e2, v2) in self.cross_local(kind, yl, x, cz, e, d, |_| Ok(ONE))? {
                        for (part, v3) in self.expand_block(&leaves, ni, nj, yl, &zs2, e2)? {
                            let mut t = ys.to_vec();
                            t[ni - 1..nj].copy_from_slice(&part);
                            out.push((t, v1 * vertex * v2 * v3));
                        }
                    }
                } else {
                    // Compressed pair (c, x) between y_{i-1} and y_{j+1}.
                    let yl = y_at(self.c, ys, i - 1);
                    let e = ys[j - 1];
                    let d = ys[j];
                    for (e2, v2) in self.cross_local(kind, yl, cz, x, e, d, |_| Ok(ONE))? {
                        for (part, v3) in self.expand_block(&leaves, ni, nj, e2, &zs2, d)? {
                            let mut t = ys.to_vec();
                            t[np - 1] = e2;
                            t[ni - 1..nj].copy_from_slice(&part);
                            out.push((t, v1 * vertex * v2 * v3));
                        }
                    }
                }
            }
            Ok(out)
        })
    }

    /// U or η factors from sliding strand `x` across every block vertex.
    #[allow(clippy::too_many_arguments)]
    fn vertex_factor(
        &self,
        over: bool,
        right: bool,
        k: usize,
        x: usize,
        x2: usize,
        block: &[usize],
        new_block: &[usize],
        zs: &[usize],
        zs2: &[usize],
    ) -> Result<C64> {
        let mut acc = ONE;
        for m in 1..block.len() {
            let v = if over {
                // U is evaluated on the labels on the far side of `x`'s
                // rightward path: after moving right, before moving left.
                let u = if right {
                    self.u(k, zs2[m - 1], new_block[m], zs2[m])?
                } else {
                    self.u(k, zs[m - 1], block[m], zs[m])?
                };
                if right {
                    u
                } else {
                    ONE / u
                }
            } else {
                let (g, h) = (self.sector(zs[m - 1]), self.sector(block[m]));
                if right {
                    self.eta(x, g, h)?
                } else {
                    ONE / self.eta(x2, g, h)?
                }
            };
            acc *= v;
        }
        Ok(acc)
    }

    /// Create the pair `(a, ā)` at strands `i`, `i + 1`.
    pub fn cup(&self, s: &State, i: usize, a: usize) -> Result<State> {
        if i == 0 || i > s.n() + 1 {
            return Err(Error::Domain(format!("cup position {i} outside 1..{}", s.n() + 1)));
        }
        let ab = self.c.ring.dual[a];
        let mut leaves = s.leaves.clone();
        leaves.splice(i - 1..i - 1, [a, ab]);
        let norm = self.c.dim(a).sqrt();
        let unit = self.c.unit();
        self.map(s, leaves, |ys| {
            let yl = if s.n() == 0 { s.root } else { y_at(self.c, ys, i - 1) };
            let mut out = Vec::new();
            for w in self.c.ring.channels(yl, a) {
                if !self.adm(w, ab, yl) {
                    continue;
                }
                let f = self.f(yl, a, ab, yl, w, unit)?.conj();
                let mut t = ys.to_vec();
                t.splice(i - 1..i - 1, [w, yl]);
                out.push((t, norm * f));
            }
            Ok(out)
        })
    }

    /// Annihilate strands `i`, `i + 1`, which must read `(a, ā)`.
    pub fn cap(&self, s: &State, i: usize, a: usize) -> Result<State> {
        self.check_pair(s, i)?;
        let ab = self.c.ring.dual[a];
        if s.leaves[i - 1] != a || s.leaves[i] != ab {
            return Err(Error::Admissibility(format!(
                "cap of {} needs strands ({}, {})",
                self.c.label(a),
                self.c.label(a),
                self.c.label(ab)
            )));
        }
        let mut leaves = s.leaves.clone();
        leaves.drain(i - 1..=i);
        let norm = self.c.dim(a).sqrt();
        let unit = self.c.unit();
        self.map(s, leaves, |ys| {
            let yl = y_at(self.c, ys, i - 1);
            if ys[i] != yl {
                return Ok(Vec::new());
            }
            let f = self.f(yl, a, ab, yl, ys[i - 1], unit)?;
            let mut t = ys.to_vec();
            t.drain(i - 1..=i);
            Ok(vec![(t, norm * f)])
        })
    }

    /// Split strand `i` carrying `c` into `(a, b)`.
    pub fn split(&self, s: &State, i: usize, a: usize, b: usize, c: usize) -> Result<State> {
        if i == 0 || i > s.n() || s.leaves[i - 1] != c {
            return Err(Error::Admissibility(format!("split needs strand {i} to carry {}", self.c.label(c))));
        }
        self.vertex_check(a, b, c)?;
        let mut leaves = s.leaves.clone();
        leaves.splice(i - 1..i, [a, b]);
        let norm = self.vertex_norm(a, b, c);
        self.map(s, leaves, |ys| {
            let yl = y_at(self.c, ys, i - 1);
            let d = ys[i - 1];
            let mut out = Vec::new();
            for w in self.c.ring.channels(yl, a) {
                if !self.adm(w, b, d) {
                    continue;
                }
                let f = self.f(yl, a, b, d, w, c)?.conj();
                let mut t = ys.to_vec();
                t.insert(i - 1, w);
                out.push((t, norm * f));
            }
            Ok(out)
        })
    }

    /// Fuse strands `i`, `i + 1` carrying `(a, b)` into `c`.
    pub fn fuse(&self, s: &State, i: usize, a: usize, b: usize, c: usize) -> Result<State> {
        self.check_pair(s, i)?;
        if s.leaves[i - 1] != a || s.leaves[i] != b {
            return Err(Error::Admissibility(format!(
                "fuse needs strands {i}, {} to carry ({}, {})",
                i + 1,
                self.c.label(a),
                self.c.label(b)
            )));
        }
        self.vertex_check(a, b, c)?;
        let mut leaves = s.leaves.clone();
        leaves.splice(i - 1..=i, [c]);
        let norm = self.vertex_norm(a, b, c);
        self.map(s, leaves, |ys| {
            let yl = y_at(self.c, ys, i - 1);
            let d = ys[i];
            if !self.adm(yl, c, d) {
                return Ok(Vec::new());
            }
            let f = self.f(yl, a, b, d, ys[i - 1], c)?;
            let mut t = ys.to_vec();
            t.remove(i - 1);
            Ok(vec![(t, norm * f)])
        })
    }

    /// Orthogonal projector onto channel `c` of strands `i`, `i + 1`.
    pub fn project(&self, s: &State, i: usize, c: usize) -> Result<State> {
        self.check_pair(s, i)?;
        let (a, b) = (s.leaves[i - 1], s.leaves[i]);
        self.vertex_check(a, b, c)?;
        self.map(s, s.leaves.clone(), |ys| {
            let yl = y_at(self.c, ys, i - 1);
            let d = ys[i];
            if !self.adm(yl, c, d) {
                return Ok(Vec::new());
            }
            let f1 = self.f(yl, a, b, d, ys[i - 1], c)?;
            let mut out = Vec::new();
            for e2 in self.c.ring.channels(yl, a) {
                if !self.adm(e2, b, d) {
                    continue;
                }
                let f2 = self.f(yl, a, b, d, e2, c)?.conj();
                let mut t = ys.to_vec();
                t[i - 1] = e2;
                out.push((t, f1 * f2));
            }
            Ok(out)
        })
    }

    /// Ribbon twist of strand `i`.
    pub fn twist(&self, s: &State, i: usize) -> Result<State> {
        if i == 0 || i > s.n() {
            return Err(Error::Domain(format!("no strand {i}")));
        }
        let mut out = s.clone();
        out.scale(self.c.twist(s.leaves[i - 1])?);
        Ok(out)
    }

    /// Loop labelled `a` around strands `i ..= j` (nothing when `j < i`),
    /// removed with the factor `S_{a c} / S_{1 c}` on the block charge `c`.
    pub fn loop_s(&self, s: &State, a: usize, i: usize, j: usize) -> Result<State> {
        let triv = self.c.group().identity;
        if self.sector(a) != triv {
            return Err(Error::Sector(format!("loop label {} is a defect", self.c.label(a))));
        }
        if j < i {
            let mut out = s.clone();
            out.scale(self.c.loop_ratio(a, self.c.unit())?);
            return Ok(out);
        }
        if j > s.n() || i == 0 {
            return Err(Error::Domain(format!("loop block [{i}, {j}] outside 1..{}", s.n())));
        }
        let has_defect = s.leaves[i - 1..j].iter().any(|&x| self.sector(x) != triv);
        if has_defect && !self.c.trivial_u_eta {
            return Err(Error::UnsupportedConfiguration(
                "loop around defect strands needs U ≡ η ≡ 1".into(),
            ));
        }
        self.map(s, s.leaves.clone(), |ys| {
            let mut out: Terms = Vec::new();
            for (zs, v1) in self.to_block(&s.leaves, ys, i, j)? {
                let cz = *zs.last().expect("nonempty");
                let ratio = self.c.loop_ratio(a, cz)?;
                let yb = y_at(self.c, ys, i - 1);
                for (part, v2) in self.expand_block(&s.leaves, i, j, yb, &zs, ys[j - 1])? {
                    let mut t = ys.to_vec();
                    t[i - 1..j].copy_from_slice(&part);
                    out.push((t, v1 * ratio * v2));
                }
            }
            Ok(out)
        })
    }

    fn vertex_check(&self, a: usize, b: usize, c: usize) -> Result<()> {
        if self.adm(a, b, c) {
            Ok(())
        } else {
            Err(Error::Admissibility(format!(
                "vertex {} ⊗ {} -> {} has N = 0",
                self.c.label(a),
                self.c.label(b),
                self.c.label(c)
            )))
        }
    }

    fn vertex_norm(&self, a: usize, b: usize, c: usize) -> C64 {
        let d = |x: usize| self.c.dim(x);
        C64::new((d(a) * d(b) / d(c)).powf(0.25), 0.0)
    }
}
