//! The bilayer Ising T-gate protocol.
//!
//! Four monolayer anyons `σ1` and four genons `X1` are created from the
//! vacuum. The logical qubit is the channel `y ∈ {1.1, psi.1}` of the first
//! anyon pair with both genon pairs in the trivial channel. One anyon is
//! carried around the middle genons, its pair is measured, the middle
//! genons are fully exchanged and the anyon is carried back. The resulting
//! logical matrix is computed three ways: from a closed formula in the
//! category data, from closed diagrams through the evaluator, and by
//! running the protocol script on the logical basis states.

use crate::catdata::SkeletalCategory;
use crate::diagrams::{apply, evaluate, parse_diagram, typecheck, Diagram, Strategy, TOp};
use crate::error::{Error, Result};
use crate::numerics::{max_abs, Mat, Tolerance, C64, ONE, ZERO};
use crate::trees::moves::{Engine, State};

/// Shipped protocol script: four creation cups followed by steps (3)-(6).
pub const TGATE_SCRIPT: &str = include_str!("../corpus/tgate_protocol.dsl");

/// How a [`ProtocolResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Diagrammatic,
}

/// One summand of the closed formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelTerm {
    /// Genon pair channel.
    pub c: usize,
    /// Contribution to `<1|T|1>`, divided by `d_{σ1} d_X²`.
    pub t11: C64,
    /// Contribution to `<ψ|T|ψ>`, divided by `d_{σ1} d_X²`.
    pub tpsipsi: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub t11: C64,
    pub tpsipsi: C64,
    /// `<1|T|ψ>` and `<ψ|T|1>`.
    pub t1psi: C64,
    pub tpsi1: C64,
    pub offdiag_max: f64,
    pub ratio: C64,
    pub method: Method,
    /// Per-channel summands (closed form only).
    pub terms: Vec<ChannelTerm>,
}

impl ProtocolResult {
    /// `[[t11, t1psi], [tpsi1, tpsipsi]] / t11`.
    pub fn normalized(&self) -> Mat {
        let m = Mat::from_row_slice(2, 2, &[self.t11, self.t1psi, self.tpsi1, self.tpsipsi]);
        if self.t11.norm() > 0.0 {
            m / self.t11
        } else {
            m
        }
    }
}

/// Labels used by the protocol.
#[derive(Debug, Clone, Copy)]
pub struct Labels {
    pub one: usize,
    pub sigma: usize,
    pub psi: usize,
    pub x: usize,
}

impl Labels {
    pub fn lookup(c: &SkeletalCategory) -> Result<Self> {
        Ok(Labels {
            one: c.lookup("1.1")?,
            sigma: c.lookup("sigma.1")?,
            psi: c.lookup("psi.1")?,
            x: c.lookup("X1")?,
        })
    }

    /// Leaves `σ1^4 X1^4`.
    pub fn leaves(&self) -> Vec<usize> {
        vec![
            self.sigma, self.sigma, self.sigma, self.sigma, self.x, self.x, self.x, self.x,
        ]
    }

    /// Combs of `|1>` and `|ψ>`.
    pub fn logical(&self) -> [Vec<usize>; 2] {
        let comb = |y: usize| {
            vec![
                self.sigma, y, self.sigma, self.one, self.x, self.one, self.x, self.one,
            ]
        };
        [comb(self.one), comb(self.psi)]
    }
}

fn ratio_of(t11: C64, tpp: C64, tol: &Tolerance) -> C64 {
    if t11.norm() > tol.eq_tol {
        tpp / t11
    } else {
        ZERO
    }
}

// ----------------------------------------------------------------------
// Closed form

/// Matrix entries from the closed sums over the genon pair channel `c`:
///
/// `<1|T|1> = d_{σ1} d_X² Σ_c (R^{XX}_c)² |F_{c,11}|² (S_{σ1,c} / S_{11,c})²`
/// `<ψ|T|ψ> = d_{σ1} d_X² Σ_c (R^{XX}_c)² |F_{c,11}|² (1 - S_{ψ1,c} / S_{11,c})`
///
/// with `F = F^{XXX}_X`. Off-diagonal entries vanish identically.
pub fn tgate_closed_form(c: &SkeletalCategory, tol: &Tolerance) -> Result<ProtocolResult> {
    let l = Labels::lookup(c)?;
    let pref = c.dim(l.sigma) * c.dim(l.x) * c.dim(l.x);
    let mut terms = Vec::new();
    let (mut t11, mut tpp) = (ZERO, ZERO);
    for ch in c.ring.channels(l.x, l.x) {
        let r = c.r(l.x, l.x, ch)?;
        let f = c.f(l.x, l.x, l.x, l.x, ch, l.one)?.norm_sqr();
        let loop_s = c.loop_ratio(l.sigma, ch)?;
        let loop_p = c.loop_ratio(l.psi, ch)?;
        let a = r * r * f * loop_s * loop_s;
        let b = r * r * f * (ONE - loop_p);
        terms.push(ChannelTerm {
            c: ch,
            t11: a,
            tpsipsi: b,
        });
        t11 += a;
        tpp += b;
    }
    let (t11, tpp) = (t11 * pref, tpp * pref);
    Ok(ProtocolResult {
        t11,
        tpsipsi: tpp,
        t1psi: ZERO,
        tpsi1: ZERO,
        offdiag_max: 0.0,
        ratio: ratio_of(t11, tpp, tol),
        method: Method::ClosedForm,
        terms,
    })
}

// ----------------------------------------------------------------------
// Diagrammatic

/// Preparation of `|1>` from the vacuum.
pub const PREP_ONE: &str = "strands 0 :\ncup 1 sigma.1\ncup 3 sigma.1\ncup 5 X1\ncup 7 X1\n";
/// Preparation of `|ψ>` from the vacuum.
pub const PREP_PSI: &str = "strands 0 :\ncup 1 psi.1\nsplit 1 sigma.1 sigma.1 psi.1\n\
split 3 sigma.1 sigma.1 psi.1\ncup 5 X1\ncup 7 X1\n";

/// Steps (3)-(6) of the shipped script, without the creation cups.
pub fn tgate_body() -> Result<Diagram> {
    let mut d = parse_diagram(TGATE_SCRIPT)?;
    let skip = d
        .ops
        .iter()
        .take_while(|l| matches!(l.op, crate::diagrams::Op::Cup { .. }))
        .count();
    d.ops.drain(..skip);
    Ok(d)
}

/// Matrix entries as closed diagrams `prep_j · T · prep_i^†`, each divided
/// by `sqrt(<i|i> <j|j>)`.
pub fn tgate_diagrammatic(c: &SkeletalCategory, strategy: Strategy, tol: &Tolerance) -> Result<ProtocolResult> {
    if !c.trivial_u_eta {
        return Err(Error::UnsupportedConfiguration(
            "the diagrammatic T-gate evaluation assumes U ≡ η ≡ 1".into(),
        ));
    }
    let preps = [parse_diagram(PREP_ONE)?, parse_diagram(PREP_PSI)?];
    let body = tgate_body()?;
    let closed = |d: &Diagram| -> Result<C64> {
        evaluate(d, c, None, strategy, tol)?
            .scalar()
            .ok_or_else(|| Error::Domain("diagram is not closed".into()))
    };
    let mut norms = [ZERO; 2];
    for (k, p) in preps.iter().enumerate() {
        norms[k] = closed(&p.then(&p.adjoint(c)?))?;
    }
    let mut t = [[ZERO; 2]; 2];
    for (i, pi) in preps.iter().enumerate() {
        let out = pi.adjoint(c)?;
        for (j, pj) in preps.iter().enumerate() {
            let raw = closed(&pj.then(&body).then(&out))?;
            t[i][j] = raw / (norms[i] * norms[j]).sqrt();
        }
    }
    let offdiag_max = t[0][1].norm().max(t[1][0].norm());
    Ok(ProtocolResult {
        t11: t[0][0],
        tpsipsi: t[1][1],
        t1psi: t[0][1],
        tpsi1: t[1][0],
        offdiag_max,
        ratio: ratio_of(t[0][0], t[1][1], tol),
        method: Method::Diagrammatic,
        terms: Vec::new(),
    })
}

// ----------------------------------------------------------------------
// Scripted run

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRun {
    /// Logical 2x2 block after readout, columns indexed by the input state.
    pub block: Mat,
    /// `block` divided by its `(1, 1)` entry.
    pub normalized: Mat,
    /// Off-block mass after the readout projections.
    pub leakage: f64,
    /// Off-block mass right after the script, before readout.
    pub leakage_before_readout: f64,
}

/// Run a protocol script on `|1>` and `|ψ>`.
///
/// Leading creation cups select the space `σ1^4 X1^4`; a script without
/// them must start on that boundary, and an empty script is the identity.
/// Readout (step (7)) projects both genon pairs onto the trivial channel
/// before the logical block is read off.
pub fn run_protocol(c: &SkeletalCategory, script: &Diagram, strategy: Strategy) -> Result<ProtocolRun> {
    let l = Labels::lookup(c)?;
    let leaves = l.leaves();
    let (ops, source, target): (Vec<TOp>, Vec<usize>, Vec<usize>) = if script.is_empty() {
        (Vec::new(), leaves.clone(), leaves.clone())
    } else {
        let typed = typecheck(script, c)?;
        let skip = typed
            .ops
            .iter()
            .take_while(|op| matches!(op, TOp::Cup { .. }))
            .count();
        let skip = if typed.source.is_empty() { skip } else { 0 };
        (
            typed.ops[skip..].to_vec(),
            typed.slices[skip].clone(),
            typed.target.clone(),
        )
    };
    if source != leaves || target != leaves {
        return Err(Error::Domain(
            "protocol script must act on sigma.1^4 X1^4 (after its creation cups)".into(),
        ));
    }
    let eng = Engine::new(c);
    let logical = l.logical();
    let mut block = Mat::zeros(2, 2);
    let (mut leak_before, mut leak_after) = (0.0, 0.0);
    for (col, ys) in logical.iter().enumerate() {
        let s = State::basis(leaves.clone(), l.one, ys.clone());
        let out = apply(&eng, &s, &ops, strategy)?;
        leak_before += off_block(&out, &logical);
        let read = eng.project(&eng.project(&out, 5, l.one)?, 7, l.one)?;
        leak_after += off_block(&read, &logical);
        for (row, t) in logical.iter().enumerate() {
            block[(row, col)] = read.amp(t);
        }
    }
    let normalized = if block[(0, 0)].norm() > 0.0 {
        &block / block[(0, 0)]
    } else {
        block.clone()
    };
    Ok(ProtocolRun {
        block,
        normalized,
        leakage: leak_after.sqrt(),
        leakage_before_readout: leak_before.sqrt(),
    })
}

fn off_block(s: &State, logical: &[Vec<usize>]) -> f64 {
    s.amps
        .iter()
        .filter(|(k, _)| !logical.contains(k))
        .map(|(_, v)| v.norm_sqr())
        .sum()
}

/// Largest entrywise deviation between two results after dividing each by
/// its `<1|T|1>`.
pub fn cross_method_deviation(a: &ProtocolResult, b: &ProtocolResult) -> f64 {
    max_abs(&(a.normalized() - b.normalized()))
}
