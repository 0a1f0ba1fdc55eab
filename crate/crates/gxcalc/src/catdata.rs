//! Skeletal category data: F, R, U, η symbols, twists and S-matrix.
//!
//! Symbols are stored sparsely in ordered maps so that emission and
//! iteration are deterministic. Lookups apply the skeletal defaults:
//! F and R entries with a unit argument are 1, U and η are 1 when their
//! group arguments are trivial, and categories flagged `trivial_u_eta`
//! answer 1 for every U and η.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{Dims, FusionRing, GroupSpec};
use crate::numerics::{self, Mat, Tolerance, C64, ONE, ZERO};

pub mod catalog;

/// Which crossing the positive braid generator denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `braid+` is the R-move (left strand over).
    PositiveIsR,
    /// `braid+` is the inverse R-move (right strand over).
    NegativeIsR,
}

impl Orientation {
    pub fn token(self) -> &'static str {
        match self {
            Orientation::PositiveIsR => "positive-is-R",
            Orientation::NegativeIsR => "negative-is-R",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "positive-is-R" => Some(Orientation::PositiveIsR),
            "negative-is-R" => Some(Orientation::NegativeIsR),
            _ => None,
        }
    }

    /// Whether a generator of the given sign is the R-move.
    pub fn is_r_move(self, positive: bool) -> bool {
        match self {
            Orientation::PositiveIsR => positive,
            Orientation::NegativeIsR => !positive,
        }
    }
}

/// F-symbol key `(a, b, c, d, e, f)` for `[F^{abc}_d]_{e,f}`.
pub type FKey = [usize; 6];
/// R-symbol key `(a, b, c)` for `R^{ab}_c`.
pub type RKey = [usize; 3];
/// U-symbol key `(k, a, b, c)` for `U_k(a, b; c)`.
pub type UKey = [usize; 4];
/// η-symbol key `(x, g, h)` for `η_x(g, h)`.
pub type EtaKey = [usize; 3];

#[derive(Debug, Clone)]
pub struct SkeletalCategory {
    pub name: String,
    pub ring: FusionRing,
    pub dims: Dims,
    pub f: BTreeMap<FKey, C64>,
    pub r: BTreeMap<RKey, C64>,
    pub u: BTreeMap<UKey, C64>,
    pub eta: BTreeMap<EtaKey, C64>,
    pub twists: BTreeMap<usize, C64>,
    /// Unitary S-matrix over `ring.trivial_sector()` in that order.
    pub s: Option<Mat>,
    pub orientation: Orientation,
    /// U ≡ η ≡ 1 for every argument.
    pub trivial_u_eta: bool,
    /// Only part of the data is known; checks restrict to `data_labels`.
    pub partial: bool,
    /// Labels on which the symbol tables are complete.
    pub data_labels: Option<Vec<usize>>,
    /// Absent F entries whose block is 1x1 answer 1 (a vertex gauge choice).
    pub gauge_fill: bool,
    /// Nonzero seeds replace the filled value 1 by a seeded unit phase.
    pub fill_seed: u64,
    /// Alternative names, `(alias, label)`.
    pub aliases: Vec<(String, String)>,
}

impl SkeletalCategory {
    pub fn new(name: impl Into<String>, ring: FusionRing) -> Result<Self> {
        let dims = ring.quantum_dimensions()?;
        Ok(SkeletalCategory {
            name: name.into(),
            ring,
            dims,
            f: BTreeMap::new(),
            r: BTreeMap::new(),
            u: BTreeMap::new(),
            eta: BTreeMap::new(),
            twists: BTreeMap::new(),
            s: None,
            orientation: Orientation::PositiveIsR,
            trivial_u_eta: false,
            partial: false,
            data_labels: None,
            gauge_fill: false,
            fill_seed: 0,
            aliases: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn unit(&self) -> usize {
        self.ring.unit
    }

    pub fn label(&self, a: usize) -> &str {
        self.ring.label(a)
    }

    pub fn dim(&self, a: usize) -> f64 {
        self.dims.d[a]
    }

    pub fn group(&self) -> &GroupSpec {
        &self.ring.group
    }

    /// Resolve a label name or one of its aliases.
    pub fn lookup(&self, name: &str) -> Result<usize> {
        if let Some(a) = self.ring.index(name) {
            return Ok(a);
        }
        for (alias, target) in &self.aliases {
            if alias == name {
                return self.ring.lookup(target);
            }
        }
        Err(Error::UnknownName(format!("label {name} in {}", self.name)))
    }

    /// Labels the consistency checks range over.
    pub fn check_labels(&self) -> Vec<usize> {
        match &self.data_labels {
            Some(v) => v.clone(),
            None => (0..self.len()).collect(),
        }
    }

    fn n(&self, a: usize, b: usize, c: usize) -> bool {
        self.ring.admissible(a, b, c)
    }

    /// Both fusion paths of the F-move are admissible.
    pub fn f_admissible(&self, k: FKey) -> bool {
        let [a, b, c, d, e, f] = k;
        self.n(a, b, e) && self.n(e, c, d) && self.n(b, c, f) && self.n(a, f, d)
    }

    /// Left and right channels of the block `[F^{abc}_d]`.
    pub fn f_channels(&self, a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>) {
        let l = self.len();
        let es = (0..l).filter(|&e| self.n(a, b, e) && self.n(e, c, d)).collect();
        let fs = (0..l).filter(|&f| self.n(b, c, f) && self.n(a, f, d)).collect();
        (es, fs)
    }

    pub fn f_name(&self, k: FKey) -> String {
        let l = |x: usize| self.label(x).to_string();
        format!(
            "F^{{{} {} {}}}_{{{}}}[{}, {}]",
            l(k[0]),
            l(k[1]),
            l(k[2]),
            l(k[3]),
            l(k[4]),
            l(k[5])
        )
    }

    /// `[F^{abc}_d]_{e,f}`; zero for inadmissible channels.
    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Result<C64> {
        let k = [a, b, c, d, e, f];
        if !self.f_admissible(k) {
            return Ok(ZERO);
        }
        if let Some(v) = self.f.get(&k) {
            return Ok(*v);
        }
        let u = self.unit();
        if a == u || b == u || c == u {
            return Ok(ONE);
        }
        if self.gauge_fill {
            let (es, fs) = self.f_channels(a, b, c, d);
            if es.len() == 1 && fs.len() == 1 {
                return Ok(self.filler(k));
            }
        }
        Err(Error::MissingSymbol(self.f_name(k)))
    }

    fn filler(&self, k: FKey) -> C64 {
        if self.fill_seed == 0 {
            return ONE;
        }
        let mut h = self.fill_seed;
        for x in k {
            h = splitmix(h ^ (x as u64));
        }
        C64::from_polar(1.0, (h >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU)
    }

    /// The block `[F^{abc}_d]` with its row (e) and column (f) channels.
    pub fn fmat(&self, a: usize, b: usize, c: usize, d: usize) -> Result<(Vec<usize>, Vec<usize>, Mat)> {
        let (es, fs) = self.f_channels(a, b, c, d);
        let mut m = Mat::zeros(es.len(), fs.len());
        for (i, &e) in es.iter().enumerate() {
            for (j, &f) in fs.iter().enumerate() {
                m[(i, j)] = self.f(a, b, c, d, e, f)?;
            }
        }
        Ok((es, fs, m))
    }

    pub fn r_name(&self, k: RKey) -> String {
        format!(
            "R^{{{} {}}}_{{{}}}",
            self.label(k[0]),
            self.label(k[1]),
            self.label(k[2])
        )
    }

    /// `R^{ab}_c`, indexed by the labels above the crossing.
    pub fn r(&self, a: usize, b: usize, c: usize) -> Result<C64> {
        if !self.n(a, b, c) {
            return Err(Error::Admissibility(format!(
                "{} is not admissible",
                self.r_name([a, b, c])
            )));
        }
        if let Some(v) = self.r.get(&[a, b, c]) {
            return Ok(*v);
        }
        if a == self.unit() || b == self.unit() {
            return Ok(ONE);
        }
        Err(Error::MissingSymbol(self.r_name([a, b, c])))
    }

    /// `U_k(a, b; c)`.
    pub fn u_sym(&self, k: usize, a: usize, b: usize, c: usize) -> Result<C64> {
        if let Some(v) = self.u.get(&[k, a, b, c]) {
            return Ok(*v);
        }
        if k == self.group().identity
            || a == self.unit()
            || b == self.unit()
            || self.trivial_u_eta
        {
            return Ok(ONE);
        }
        Err(Error::MissingSymbol(format!(
            "U_{}({}, {}; {})",
            self.group().elements[k],
            self.label(a),
            self.label(b),
            self.label(c)
        )))
    }

    /// `η_x(g, h)`.
    pub fn eta_sym(&self, x: usize, g: usize, h: usize) -> Result<C64> {
        if let Some(v) = self.eta.get(&[x, g, h]) {
            return Ok(*v);
        }
        let id = self.group().identity;
        if g == id || h == id || self.trivial_u_eta {
            return Ok(ONE);
        }
        Err(Error::MissingSymbol(format!(
            "eta_{}({}, {})",
            self.label(x),
            self.group().elements[g],
            self.group().elements[h]
        )))
    }

    pub fn twist(&self, a: usize) -> Result<C64> {
        if a == self.unit() {
            return Ok(ONE);
        }
        self.twists
            .get(&a)
            .copied()
            .ok_or_else(|| Error::MissingSymbol(format!("theta_{}", self.label(a))))
    }

    /// Position of a trivial-sector label in the S-matrix index order.
    pub fn s_index(&self, a: usize) -> Result<usize> {
        self.ring
            .trivial_sector()
            .iter()
            .position(|&x| x == a)
            .ok_or_else(|| Error::Sector(format!("{} is not in the trivial sector", self.label(a))))
    }

    pub fn s_entry(&self, a: usize, b: usize) -> Result<C64> {
        let s = self
            .s
            .as_ref()
            .ok_or_else(|| Error::MissingSymbol(format!("S-matrix of {}", self.name)))?;
        Ok(s[(self.s_index(a)?, self.s_index(b)?)])
    }

    /// Loop of `a` around charge `c`: `S_{a c} / S_{1 c}`.
    pub fn loop_ratio(&self, a: usize, c: usize) -> Result<C64> {
        let den = self.s_entry(self.unit(), c)?;
        if den.norm() < 1e-14 {
            return Err(Error::Domain(format!("S_(1, {}) vanishes", self.label(c))));
        }
        Ok(self.s_entry(a, c)? / den)
    }

    /// Drop every R-symbol whose indices touch a nontrivial sector.
    pub fn without_defect_r(&self) -> Self {
        let mut c = self.clone();
        let triv = |x: usize| self.ring.sector(x) == self.group().identity;
        c.r.retain(|k, _| k.iter().all(|&x| triv(x)));
        c
    }

    /// Fill every admissible F entry with no unit argument by `value`.
    pub(crate) fn fill_f(&mut self, mut value: impl FnMut(FKey) -> C64) {
        let l = self.len();
        let u = self.unit();
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    if a == u || b == u || c == u {
                        continue;
                    }
                    for d in 0..l {
                        let (es, fs) = self.f_channels(a, b, c, d);
                        for &e in &es {
                            for &f in &fs {
                                let k = [a, b, c, d, e, f];
                                self.f.insert(k, value(k));
                            }
                        }
                    }
                }
            }
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

// ----------------------------------------------------------------------
// Unitarity

/// Every F-block or R-entry that fails unitarity within `tol.eq_tol`.
pub fn verify_unitarity(c: &SkeletalCategory, tol: &Tolerance) -> Vec<String> {
    let labels = c.check_labels();
    let mut out = Vec::new();
    for &a in &labels {
        for &b in &labels {
            for &cc in &labels {
                for &d in &labels {
                    let (es, fs) = c.f_channels(a, b, cc, d);
                    if es.is_empty() {
                        continue;
                    }
                    if !es.iter().chain(&fs).all(|x| labels.contains(x)) {
                        continue;
                    }
                    match c.fmat(a, b, cc, d) {
                        Ok((_, _, m)) => {
                            let defect = numerics::unitarity_defect(&m);
                            if defect > tol.eq_tol {
                                out.push(format!(
                                    "F^{{{} {} {}}}_{{{}}} not unitary (defect {defect:.3e})",
                                    c.label(a),
                                    c.label(b),
                                    c.label(cc),
                                    c.label(d)
                                ));
                            }
                        }
                        Err(e) => out.push(e.to_string()),
                    }
                }
            }
        }
    }
    for (k, v) in &c.r {
        if (v.norm() - 1.0).abs() > tol.eq_tol {
            out.push(format!("{} has modulus {:.12}", c.r_name(*k), v.norm()));
        }
    }
    for (a, t) in &c.twists {
        if (t.norm() - 1.0).abs() > tol.eq_tol {
            out.push(format!("theta_{} has modulus {:.12}", c.label(*a), t.norm()));
        }
    }
    if let Some(s) = &c.s {
        let defect = numerics::unitarity_defect(s);
        if defect > tol.eq_tol {
            out.push(format!("S-matrix not unitary (defect {defect:.3e})"));
        }
    }
    out
}

/// Unitary S-matrix from twists and fusion:
/// `S_{ab} = (1/D) Σ_c N^{a* b}_c θ_c / (θ_a θ_b) d_c` over the trivial sector.
pub fn s_from_twists(c: &SkeletalCategory) -> Result<Mat> {
    let triv = c.ring.trivial_sector();
    let d_total = triv.iter().map(|&a| c.dim(a).powi(2)).sum::<f64>().sqrt();
    let mut s = Mat::zeros(triv.len(), triv.len());
    for (i, &a) in triv.iter().enumerate() {
        for (j, &b) in triv.iter().enumerate() {
            let mut acc = ZERO;
            for &x in &triv {
                if c.ring.admissible(c.ring.dual[a], b, x) {
                    acc += c.twist(x)? / (c.twist(a)? * c.twist(b)?) * c.dim(x);
                }
            }
            s[(i, j)] = acc / d_total;
        }
    }
    Ok(s)
}

// ----------------------------------------------------------------------
// Tambara-Yamagami

/// Symmetric bicharacter on a finite abelian group with a chosen root `τ`.
#[derive(Debug, Clone)]
pub struct Bicharacter {
    pub group: GroupSpec,
    /// `chi[a][b] = χ(a, b)`
    pub chi: Vec<Vec<C64>>,
    pub tau: C64,
}

impl Bicharacter {
    /// `χ(j, k) = exp(2πi q j k / n)` on `Z_n`, with `τ = 1/√n`.
    pub fn cyclic(n: usize, q: usize) -> Self {
        let chi = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| numerics::exp_ipi((2 * q * j * k) as f64, n as f64))
                    .collect()
            })
            .collect();
        Bicharacter {
            group: GroupSpec::cyclic(n),
            chi,
            tau: numerics::re(1.0 / (n as f64).sqrt()),
        }
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let g = &self.group;
        let n = g.order();
        let bad = |m: String| Err(Error::DegenerateBicharacter(m));
        if !g.validate().is_empty() {
            return bad("group table is invalid".into());
        }
        if g.table.iter().enumerate().any(|(a, row)| row.iter().enumerate().any(|(b, &x)| g.table[b][a] != x)) {
            return bad("group is not abelian".into());
        }
        for a in 0..n {
            for b in 0..n {
                if (self.chi[a][b] - self.chi[b][a]).norm() > tol {
                    return bad(format!("not symmetric at ({a}, {b})"));
                }
                for c in 0..n {
                    let lhs = self.chi[g.mul(a, b)][c];
                    if (lhs - self.chi[a][c] * self.chi[b][c]).norm() > tol {
                        return bad(format!("not multiplicative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if (0..n).all(|c| (self.chi[a][c] - self.chi[b][c]).norm() <= tol) {
                    return bad(format!("elements {a} and {b} have the same character"));
                }
            }
        }
        if (self.tau * self.tau - numerics::re(1.0 / n as f64)).norm() > tol {
            return bad("tau^2 must equal 1/|A|".into());
        }
        Ok(())
    }
}

/// Tambara-Yamagami category over `χ`: objects `A ⊔ {m}`, graded by Z2.
///
/// The Z2 generator acts on `A` by inversion and fixes `m`.
pub fn make_tambara_yamagami(name: &str, chi: &Bicharacter, labels: &[&str]) -> Result<SkeletalCategory> {
    chi.validate(1e-12)?;
    let g = &chi.group;
    let n = g.order();
    if labels.len() != n + 1 {
        return Err(Error::Domain(format!("expected {} labels, got {}", n + 1, labels.len())));
    }
    let m = n;
    let l = n + 1;
    let mut ring = FusionRing {
        labels: labels.iter().map(|s| s.to_string()).collect(),
        n: vec![0; l * l * l],
        unit: g.identity,
        dual: (0..n).map(|a| g.inv(a)).chain([m]).collect(),
        group: GroupSpec::cyclic(2),
        grading: (0..n).map(|_| 0).chain([1]).collect(),
        action: vec![(0..l).collect(), (0..n).map(|a| g.inv(a)).chain([m]).collect()],
    };
    for a in 0..n {
        for b in 0..n {
            ring.set_n(a, b, g.mul(a, b), 1);
        }
        ring.set_n(a, m, m, 1);
        ring.set_n(m, a, m, 1);
        ring.set_n(m, m, a, 1);
    }
    let mut c = SkeletalCategory::new(name, ring)?;
    let tau = chi.tau;
    let chi_v = chi.chi.clone();
    c.fill_f(|[a, b, cc, d, e, f]| match (a == m, b == m, cc == m) {
        (false, true, false) => chi_v[a][cc],
        (true, false, true) => chi_v[b][d],
        (true, true, true) => tau * chi_v[e][f].conj(),
        _ => ONE,
    });
    Ok(c)
}

// ----------------------------------------------------------------------
// Deligne product

/// `c1 ⊠ c2` on trivially graded inputs; labels are `a.b`.
pub fn deligne_product(name: &str, c1: &SkeletalCategory, c2: &SkeletalCategory) -> Result<SkeletalCategory> {
    for c in [c1, c2] {
        if c.group().order() != 1 {
            return Err(Error::Domain(format!("{} is graded; product needs plain data", c.name)));
        }
    }
    let (l1, l2) = (c1.len(), c2.len());
    let l = l1 * l2;
    let pair = |a: usize, b: usize| a * l2 + b;
    let split = |x: usize| (x / l2, x % l2);
    let labels: Vec<String> = (0..l)
        .map(|x| {
            let (a, b) = split(x);
            format!("{}.{}", c1.label(a), c2.label(b))
        })
        .collect();
    let ring = FusionRing::ungraded(
        labels,
        pair(c1.unit(), c2.unit()),
        (0..l)
            .map(|x| {
                let (a, b) = split(x);
                pair(c1.ring.dual[a], c2.ring.dual[b])
            })
            .collect(),
        |x, y, z| {
            let ((a1, a2), (b1, b2), (d1, d2)) = (split(x), split(y), split(z));
            c1.ring.n(a1, b1, d1) * c2.ring.n(a2, b2, d2)
        },
    );
    let mut c = SkeletalCategory::new(name, ring)?;
    let mut err = None;
    c.fill_f(|k| {
        let p: Vec<(usize, usize)> = k.iter().map(|&x| split(x)).collect();
        let v1 = c1.f(p[0].0, p[1].0, p[2].0, p[3].0, p[4].0, p[5].0);
        let v2 = c2.f(p[0].1, p[1].1, p[2].1, p[3].1, p[4].1, p[5].1);
        match (v1, v2) {
            (Ok(x), Ok(y)) => x * y,
            (Err(e), _) | (_, Err(e)) => {
                err.get_or_insert(e);
                ZERO
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    for x in 0..l {
        for y in 0..l {
            for z in c.ring.channels(x, y) {
                let ((a1, a2), (b1, b2), (d1, d2)) = (split(x), split(y), split(z));
                let v = c1.r(a1, b1, d1)? * c2.r(a2, b2, d2)?;
                if x != c.unit() && y != c.unit() {
                    c.r.insert([x, y, z], v);
                }
            }
        }
        let (a1, a2) = split(x);
        if x != c.unit() {
            c.twists.insert(x, c1.twist(a1)? * c2.twist(a2)?);
        }
    }
    if let (Some(s1), Some(s2)) = (&c1.s, &c2.s) {
        c.s = Some(s1.kronecker(s2));
    }
    c.orientation = c1.orientation;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tambara_yamagami_trivial_group() {
        let chi = Bicharacter::cyclic(1, 0);
        let c = make_tambara_yamagami("ty1", &chi, &["1", "m"]).unwrap();
        assert!(c.ring.validate().is_empty());
        assert!((c.f(1, 1, 1, 1, 0, 0).unwrap() - ONE).norm() < 1e-15);
    }

    #[test]
    fn degenerate_bicharacter_rejected() {
        let chi = Bicharacter::cyclic(4, 2);
        assert!(matches!(
            make_tambara_yamagami("bad", &chi, &["0", "1", "2", "3", "m"]),
            Err(Error::DegenerateBicharacter(_))
        ));
    }

    #[test]
    fn ty_z3_defect_block_modulus() {
        let chi = Bicharacter::cyclic(3, 1);
        let c = make_tambara_yamagami("ty", &chi, &["1", "w", "w*", "X"]).unwrap();
        let (_, _, m) = c.fmat(3, 3, 3, 3).unwrap();
        for z in m.iter() {
            assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }
}
