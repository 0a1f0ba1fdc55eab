//! Pentagon, hexagon and heptagon residuals, and phase fitting of unknown
//! R-symbols.
//!
//! The braiding identities are checked operationally: one strand is carried
//! across a fused pair of neighbours either one crossing at a time or as a
//! single block move, and the two resulting states must agree. On
//! trivial-sector labels this is the pair of hexagon identities; with
//! defects it is the heptagon system including the U and η factors.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catdata::{RKey, SkeletalCategory};
use crate::error::{Error, Result};
use crate::numerics::{C64, ZERO};
use crate::trees::combs;
use crate::trees::moves::{Cross, Engine, State};

/// Per-tree (max, summed squared) deviations and the R keys read.
type Deviations = (Vec<(f64, f64)>, BTreeSet<RKey>);

/// Worst deviation over a family of identities.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_residual: f64,
    /// Label indices of the worst instance.
    pub worst_instance: Vec<usize>,
    /// Index into [`VARIANTS`] of the worst instance, for braiding checks.
    pub worst_variant: Option<usize>,
    pub count_checked: usize,
    /// Sum of squared deviations, used as the fitting objective.
    pub sum_sq: f64,
}

impl ResidualReport {
    fn new() -> Self {
        ResidualReport {
            max_residual: 0.0,
            worst_instance: Vec::new(),
            worst_variant: None,
            count_checked: 0,
            sum_sq: 0.0,
        }
    }

    fn record(&mut self, dev: f64, sq: f64, instance: &[usize], variant: Option<usize>) {
        self.count_checked += 1;
        self.sum_sq += sq;
        if dev > self.max_residual || self.worst_instance.is_empty() {
            self.max_residual = self.max_residual.max(dev);
            self.worst_instance = instance.to_vec();
            self.worst_variant = variant;
        }
    }

    /// Render the worst instance with label names.
    pub fn describe(&self, c: &SkeletalCategory) -> String {
        let names: Vec<&str> = self.worst_instance.iter().map(|&x| c.label(x)).collect();
        let variant = self
            .worst_variant
            .map(|v| format!(" {:?}", VARIANTS[v]))
            .unwrap_or_default();
        format!(
            "max residual {:.3e} over {} checks (worst at {}{variant})",
            self.max_residual,
            self.count_checked,
            names.join(" ")
        )
    }
}

// ----------------------------------------------------------------------
// Pentagon

/// Pentagon residual over all admissible tuples of `c.check_labels()`.
pub fn check_pentagon(c: &SkeletalCategory) -> Result<ResidualReport> {
    let labels = c.check_labels();
    let inside: BTreeSet<usize> = labels.iter().copied().collect();
    let adm = |a: usize, b: usize, d: usize| c.ring.admissible(a, b, d);
    let chans = |a: usize, b: usize| -> Vec<usize> {
        c.ring
            .channels(a, b)
            .into_iter()
            .filter(|x| inside.contains(x))
            .collect()
    };
    let mut rep = ResidualReport::new();
    for &a in &labels {
        for &b in &labels {
            for &cc in &labels {
                for &d in &labels {
                    for &e in &labels {
                        for f in chans(a, b) {
                            for g in chans(f, cc) {
                                if !adm(g, d, e) {
                                    continue;
                                }
                                for l in chans(cc, d) {
                                    if !adm(f, l, e) {
                                        continue;
                                    }
                                    for k in chans(b, l) {
                                        if !adm(a, k, e) {
                                            continue;
                                        }
                                        let lhs = c.f(f, cc, d, e, g, l)? * c.f(a, b, l, e, f, k)?;
                                        let mut rhs = ZERO;
                                        for h in chans(b, cc) {
                                            rhs += c.f(a, b, cc, g, f, h)?
                                                * c.f(a, h, d, e, g, k)?
                                                * c.f(b, cc, d, k, h, l)?;
                                        }
                                        let dev = (lhs - rhs).norm();
                                        rep.record(dev, dev * dev, &[a, b, cc, d, e, f, g, l, k], None);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

// ----------------------------------------------------------------------
// Hexagon and heptagon

/// The four ways of carrying one strand across a fused pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidingVariant {
    /// Strand 1 passes over strands 2, 3.
    OverRight,
    /// Strand 1 passes under strands 2, 3.
    UnderRight,
    /// Strand 3 passes over strands 1, 2.
    OverLeft,
    /// Strand 3 passes under strands 1, 2.
    UnderLeft,
}

pub const VARIANTS: [BraidingVariant; 4] = [
    BraidingVariant::OverRight,
    BraidingVariant::UnderRight,
    BraidingVariant::OverLeft,
    BraidingVariant::UnderLeft,
];

impl BraidingVariant {
    /// Both resolutions of the variant applied to `s`.
    pub fn paths(self, eng: &Engine, s: &State) -> Result<(State, State)> {
        Ok(match self {
            BraidingVariant::OverRight => (
                eng.cross(&eng.cross(s, 1, Cross::R)?, 2, Cross::R)?,
                eng.cross_block(s, 1, 2, 3, true)?,
            ),
            BraidingVariant::UnderRight => (
                eng.cross(&eng.cross(s, 1, Cross::RInv)?, 2, Cross::RInv)?,
                eng.cross_block(s, 1, 2, 3, false)?,
            ),
            BraidingVariant::OverLeft => (
                eng.cross(&eng.cross(s, 2, Cross::RInv)?, 1, Cross::RInv)?,
                eng.cross_block(s, 3, 1, 2, true)?,
            ),
            BraidingVariant::UnderLeft => (
                eng.cross(&eng.cross(s, 2, Cross::R)?, 1, Cross::R)?,
                eng.cross_block(s, 3, 1, 2, false)?,
            ),
        })
    }
}

/// One braiding identity instance: variant, leaves and root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instance {
    pub variant: usize,
    pub leaves: [usize; 3],
    pub root: usize,
}

fn instances(c: &SkeletalCategory, labels: &[usize]) -> Vec<Instance> {
    let mut out = Vec::new();
    for &x in labels {
        for &y in labels {
            for &z in labels {
                for &d in labels {
                    if combs(c, &[x, y, z], d).is_empty() {
                        continue;
                    }
                    for v in 0..VARIANTS.len() {
                        out.push(Instance {
                            variant: v,
                            leaves: [x, y, z],
                            root: d,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Per basis tree, the largest and the summed squared amplitude deviation
/// of one instance; also the R keys read.
fn instance_deviations(
    c: &SkeletalCategory,
    inst: &Instance,
) -> Result<Deviations> {
    let eng = Engine::new(c);
    let mut devs = Vec::new();
    for ys in combs(c, &inst.leaves, inst.root) {
        let s = State::basis(inst.leaves.to_vec(), inst.root, ys);
        let (a, b) = VARIANTS[inst.variant].paths(&eng, &s)?;
        let keys: BTreeSet<&Vec<usize>> = a.amps.keys().chain(b.amps.keys()).collect();
        let diffs: Vec<f64> = keys.into_iter().map(|k| (a.amp(k) - b.amp(k)).norm()).collect();
        let max = diffs.iter().copied().fold(0.0, f64::max);
        devs.push((max, diffs.iter().map(|d| d * d).sum()));
    }
    Ok((devs, eng.take_touched()))
}

fn braiding_report(c: &SkeletalCategory, insts: &[Instance]) -> Result<ResidualReport> {
    let mut rep = ResidualReport::new();
    for inst in insts {
        let (devs, _) = instance_deviations(c, inst)?;
        let tag = [inst.leaves[0], inst.leaves[1], inst.leaves[2], inst.root];
        for (dev, sq) in devs {
            rep.record(dev, sq, &tag, Some(inst.variant));
        }
    }
    Ok(rep)
}

/// Braiding residual over tuples drawn from `labels`.
pub fn braiding_residual(c: &SkeletalCategory, labels: &[usize]) -> Result<ResidualReport> {
    braiding_report(c, &instances(c, labels))
}

/// Hexagon residual: the braiding identities on trivial-sector labels.
pub fn check_hexagon(c: &SkeletalCategory) -> Result<ResidualReport> {
    let id = c.group().identity;
    let labels: Vec<usize> = c
        .check_labels()
        .into_iter()
        .filter(|&a| c.ring.sector(a) == id)
        .collect();
    braiding_residual(c, &labels)
}

/// Heptagon residual: the braiding identities on every checked label.
pub fn check_heptagon(c: &SkeletalCategory) -> Result<ResidualReport> {
    braiding_residual(c, &c.check_labels())
}

// ----------------------------------------------------------------------
// Fitting

/// Values for a list of R-symbols, with the residual they achieve.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAnsatz {
    pub unknowns: Vec<RKey>,
    pub values: Vec<C64>,
    pub residual: f64,
}

impl PhaseAnsatz {
    /// Copy of `c` with the ansatz values installed.
    pub fn apply(&self, c: &SkeletalCategory) -> SkeletalCategory {
        let mut out = c.clone();
        for (k, v) in self.unknowns.iter().zip(&self.values) {
            out.r.insert(*k, *v);
        }
        out
    }
}

/// Settings for [`solve_defect_r`].
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Cap on single-coordinate updates per restart.
    pub max_iterations: usize,
    /// Residual above which the fit is reported as failed.
    pub accept: f64,
    /// Residual at which a restart stops early.
    pub target: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            restarts: 64,
            max_iterations: 10_000,
            accept: 1e-6,
            target: 1e-13,
        }
    }
}

/// Objective restricted to the identities that read an unknown.
struct Objective {
    insts: Vec<Instance>,
}

impl Objective {
    fn new(c: &SkeletalCategory, labels: &[usize], unknowns: &[RKey]) -> Result<Self> {
        let wanted: BTreeSet<RKey> = unknowns.iter().copied().collect();
        let mut insts = Vec::new();
        for inst in instances(c, labels) {
            let (_, touched) = instance_deviations(c, &inst)?;
            if touched.iter().any(|k| wanted.contains(k)) {
                insts.push(inst);
            }
        }
        Ok(Objective { insts })
    }

    fn eval(&self, c: &SkeletalCategory) -> Result<(f64, f64)> {
        let rep = braiding_report(c, &self.insts)?;
        Ok((rep.sum_sq, rep.max_residual))
    }
}

/// Fit unit-modulus values for `unknowns` minimizing the braiding residual
/// over `c.check_labels()`, by coordinate descent on the angles from
/// seeded random starts. The reported residual also covers the pentagon,
/// so inconsistent F-symbols cannot pass.
pub fn solve_defect_r(c: &SkeletalCategory, unknowns: &[RKey], cfg: &SolverConfig) -> Result<PhaseAnsatz> {
    if unknowns.is_empty() {
        return Err(Error::Domain("no unknowns to fit".into()));
    }
    for k in unknowns {
        if !c.ring.admissible(k[0], k[1], k[2]) {
            return Err(Error::Admissibility(format!("{} is not admissible", c.r_name(*k))));
        }
    }
    let obj = Objective::new(&seeded(c, unknowns, &vec![0.0; unknowns.len()]), &c.check_labels(), unknowns)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..cfg.restarts {
        let mut th: Vec<f64> = (0..unknowns.len())
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        let mut work = seeded(c, unknowns, &th);
        let (mut cur, mut cur_max) = obj.eval(&work)?;
        let mut iters = 0;
        'sweeps: while iters < cfg.max_iterations {
            let before = cur;
            for j in 0..unknowns.len() {
                if iters >= cfg.max_iterations || cur_max < cfg.target {
                    break 'sweeps;
                }
                iters += 1;
                let cand = line_minimum(&obj, &mut work, unknowns[j], th[j])?;
                set_phase(&mut work, unknowns[j], cand);
                let (v, m) = obj.eval(&work)?;
                if v < cur {
                    th[j] = cand;
                    cur = v;
                    cur_max = m;
                } else {
                    set_phase(&mut work, unknowns[j], th[j]);
                }
            }
            if before - cur <= 1e-6 * before {
                break;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| cur_max < *b) {
            best = Some((cur_max, th));
        }
        if best.as_ref().is_some_and(|(b, _)| *b < cfg.target) {
            break;
        }
    }
    let (mut residual, th) = best.expect("at least one restart");
    residual = residual.max(check_pentagon(c)?.max_residual);
    if residual > cfg.accept {
        return Err(Error::NoConvergence { residual });
    }
    Ok(PhaseAnsatz {
        unknowns: unknowns.to_vec(),
        values: th.iter().map(|&t| C64::from_polar(1.0, t)).collect(),
        residual,
    })
}

/// Residual achieved by an ansatz on `c`: the larger of the pentagon and
/// braiding residuals.
pub fn ansatz_residual(c: &SkeletalCategory, ansatz: &PhaseAnsatz) -> Result<f64> {
    let applied = ansatz.apply(c);
    Ok(check_heptagon(&applied)?.max_residual.max(check_pentagon(&applied)?.max_residual))
}

fn seeded(c: &SkeletalCategory, unknowns: &[RKey], th: &[f64]) -> SkeletalCategory {
    let mut out = c.clone();
    for (k, &t) in unknowns.iter().zip(th) {
        out.r.insert(*k, C64::from_polar(1.0, t));
    }
    out
}

fn set_phase(c: &mut SkeletalCategory, k: RKey, t: f64) {
    c.r.insert(k, C64::from_polar(1.0, t));
}

/// Number of samples fixing a trigonometric polynomial of degree 4.
const SAMPLES: usize = 9;

/// Minimize the objective along one angle. Each residual is a Laurent
/// polynomial of degree at most 2 in the phase, so the objective is a
/// trigonometric polynomial of degree at most 4; it is recovered from
/// equispaced samples and minimized on a fine grid with Newton polishing.
fn line_minimum(obj: &Objective, work: &mut SkeletalCategory, k: RKey, current: f64) -> Result<f64> {
    let tau = std::f64::consts::TAU;
    let mut vals = [0.0; SAMPLES];
    for (s, v) in vals.iter_mut().enumerate() {
        let t = current + tau * s as f64 / SAMPLES as f64;
        set_phase(work, k, t);
        *v = obj.eval(work)?.0;
    }
    // Real Fourier coefficients relative to `current`.
    let n = SAMPLES as f64;
    let a0 = vals.iter().sum::<f64>() / n;
    let mut a = [0.0; 5];
    let mut b = [0.0; 5];
    for m in 1..5 {
        for (s, v) in vals.iter().enumerate() {
            let ang = tau * (m * s) as f64 / n;
            a[m] += 2.0 / n * v * ang.cos();
            b[m] += 2.0 / n * v * ang.sin();
        }
    }
    let f = |u: f64| {
        (1..5).fold(a0, |acc, m| acc + a[m] * (m as f64 * u).cos() + b[m] * (m as f64 * u).sin())
    };
    let df = |u: f64| {
        (1..5).fold(0.0, |acc, m| {
            let mf = m as f64;
            acc - a[m] * mf * (mf * u).sin() + b[m] * mf * (mf * u).cos()
        })
    };
    let d2f = |u: f64| {
        (1..5).fold(0.0, |acc, m| {
            let mf = m as f64;
            acc - mf * mf * (a[m] * (mf * u).cos() + b[m] * (mf * u).sin())
        })
    };
    let grid = 720;
    let mut best_u = 0.0;
    let mut best_v = f64::INFINITY;
    for g in 0..grid {
        let u = tau * g as f64 / grid as f64;
        let v = f(u);
        if v < best_v {
            best_v = v;
            best_u = u;
        }
    }
    let mut u = best_u;
    for _ in 0..20 {
        let h = d2f(u);
        if h <= 0.0 {
            break;
        }
        let step = df(u) / h;
        u -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    if f(u) > best_v {
        u = best_u;
    }
    Ok(current + u)
}
