//! String-diagram language, type checking and evaluation.
//!
//! A diagram file starts with `strands <n> : <label> ...` naming the
//! bottom boundary, then lists one primitive per statement (newline or `;`
//! separated), read bottom to top:
//!
//! ```text
//! braid+ i | braid- i | cup i a | cap i a | loop a i j | twist i | twist- i
//! split i a b c | fuse i a b c | project i a b c
//! ```
//!
//! Indices are 1-based and `#` starts a comment. Evaluation acts on
//! left-combed tree bases with the move engine. Two rewrite strategies are
//! available: [`Strategy::Elementary`] resolves every primitive locally,
//! [`Strategy::Grouped`] first rewrites conjugated braids, merges
//! same-sign runs into block crossings and removes loops by S-matrix ratios.

use crate::catdata::SkeletalCategory;
use crate::error::{Error, Result};
use crate::numerics::{Mat, Tolerance, C64, ZERO};
use crate::trees::moves::{Cross, Engine, State, Usage};
use crate::trees::{combs, enumerate_basis, TreeBasis};

// ----------------------------------------------------------------------
// Syntax

/// Bottom boundary declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub labels: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Braid { i: usize, positive: bool },
    Cup { i: usize, a: String },
    Cap { i: usize, a: String },
    Loop { a: String, i: usize, j: usize },
    Twist { i: usize, inverse: bool },
    Split { i: usize, a: String, b: String, c: String },
    Fuse { i: usize, a: String, b: String, c: String },
    Project { i: usize, a: String, b: String, c: String },
}

/// A primitive with its source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub op: Op,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub header: Option<Header>,
    pub ops: Vec<Located>,
}

impl Diagram {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Same primitives on a new bottom boundary.
    pub fn with_header(mut self, labels: &[&str]) -> Self {
        self.header = Some(Header {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            line: 0,
        });
        self
    }

    /// Render in the diagram language.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(h) = &self.header {
            out.push_str(&format!("strands {} :", h.labels.len()));
            for l in &h.labels {
                out.push(' ');
                out.push_str(l);
            }
            out.push('\n');
        }
        for l in &self.ops {
            out.push_str(&op_text(&l.op));
            out.push('\n');
        }
        out
    }

    /// Mirror image in time: the diagram of the adjoint map. Needs the
    /// category to dualize loop labels and to find the top boundary.
    pub fn adjoint(&self, c: &SkeletalCategory) -> Result<Diagram> {
        let typed = typecheck(self, c)?;
        let mut ops = Vec::with_capacity(self.ops.len());
        for l in self.ops.iter().rev() {
            let op = match &l.op {
                Op::Braid { i, positive } => Op::Braid {
                    i: *i,
                    positive: !positive,
                },
                Op::Cup { i, a } => Op::Cap { i: *i, a: a.clone() },
                Op::Cap { i, a } => Op::Cup { i: *i, a: a.clone() },
                Op::Loop { a, i, j } => Op::Loop {
                    a: c.label(c.ring.dual[c.lookup(a)?]).to_string(),
                    i: *i,
                    j: *j,
                },
                Op::Twist { i, inverse } => Op::Twist {
                    i: *i,
                    inverse: !inverse,
                },
                Op::Split { i, a, b, c } => Op::Fuse {
                    i: *i,
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone(),
                },
                Op::Fuse { i, a, b, c } => Op::Split {
                    i: *i,
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone(),
                },
                Op::Project { .. } => l.op.clone(),
            };
            ops.push(Located { op, ..*l });
        }
        Ok(Diagram {
            header: Some(Header {
                labels: typed.target.iter().map(|&x| c.label(x).to_string()).collect(),
                line: 0,
            }),
            ops,
        })
    }

    /// `self` followed by `other`; the header of `self` is kept.
    pub fn then(&self, other: &Diagram) -> Diagram {
        let mut ops = self.ops.clone();
        ops.extend(other.ops.iter().cloned());
        Diagram {
            header: self.header.clone(),
            ops,
        }
    }
}

fn op_text(op: &Op) -> String {
    match op {
        Op::Braid { i, positive } => format!("braid{} {i}", if *positive { "+" } else { "-" }),
        Op::Cup { i, a } => format!("cup {i} {a}"),
        Op::Cap { i, a } => format!("cap {i} {a}"),
        Op::Loop { a, i, j } => format!("loop {a} {i} {j}"),
        Op::Twist { i, inverse } => format!("twist{} {i}", if *inverse { "-" } else { "" }),
        Op::Split { i, a, b, c } => format!("split {i} {a} {b} {c}"),
        Op::Fuse { i, a, b, c } => format!("fuse {i} {a} {b} {c}"),
        Op::Project { i, a, b, c } => format!("project {i} {a} {b} {c}"),
    }
}

/// Whitespace-separated token with its 1-based column.
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(s: &str, offset: usize) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push(Tok {
                    text: &s[b..k],
                    col: offset + s[..b].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(k);
        }
    }
    if let Some(b) = start {
        out.push(Tok {
            text: &s[b..],
            col: offset + s[..b].chars().count() + 1,
        });
    }
    out
}

/// Parse diagram text. No category lookups happen here.
pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let mut header: Option<Header> = None;
    let mut ops = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for stmt in body.split(';') {
            let toks = tokens(stmt, offset);
            let end_col = offset + stmt.chars().count() + 1;
            offset += stmt.chars().count() + 1;
            if toks.is_empty() {
                continue;
            }
            if toks[0].text == "strands" {
                if header.is_some() || !ops.is_empty() {
                    return Err(Error::parse(line, toks[0].col, "strands header must come first and only once"));
                }
                header = Some(parse_header(&toks, line, end_col)?);
                continue;
            }
            ops.push(parse_op(&toks, line, end_col)?);
        }
    }
    Ok(Diagram { header, ops })
}

fn parse_header(toks: &[Tok], line: usize, end_col: usize) -> Result<Header> {
    let n_tok = toks
        .get(1)
        .ok_or_else(|| Error::parse(line, end_col, "expected strand count"))?;
    let n = parse_index(n_tok, line)?;
    let colon = toks
        .get(2)
        .ok_or_else(|| Error::parse(line, end_col, "expected ':'"))?;
    if colon.text != ":" {
        return Err(Error::parse(line, colon.col, "expected ':'"));
    }
    let labels: Vec<String> = toks[3..].iter().map(|t| t.text.to_string()).collect();
    if labels.len() != n {
        let col = toks.get(3 + n).map_or(end_col, |t| t.col);
        return Err(Error::parse(
            line,
            col,
            format!("expected {n} labels, found {}", labels.len()),
        ));
    }
    Ok(Header { labels, line })
}

fn parse_index(t: &Tok, line: usize) -> Result<usize> {
    t.text
        .parse::<usize>()
        .map_err(|_| Error::parse(line, t.col, format!("expected a non-negative integer, found '{}'", t.text)))
}

fn parse_op(toks: &[Tok], line: usize, end_col: usize) -> Result<Located> {
    let head = &toks[0];
    let arity = match head.text {
        "braid+" | "braid-" | "twist" | "twist-" => 1,
        "cup" | "cap" => 2,
        "loop" => 3,
        "split" | "fuse" | "project" => 4,
        other => {
            return Err(Error::parse(
                line,
                head.col,
                format!("expected a primitive (braid+, braid-, cup, cap, loop, twist, split, fuse, project), found '{other}'"),
            ))
        }
    };
    if toks.len() < arity + 1 {
        return Err(Error::parse(
            line,
            end_col,
            format!("'{}' expects {arity} argument(s)", head.text),
        ));
    }
    if toks.len() > arity + 1 {
        return Err(Error::parse(line, toks[arity + 1].col, "unexpected extra argument"));
    }
    let s = |k: usize| toks[k].text.to_string();
    let op = match head.text {
        "braid+" | "braid-" => Op::Braid {
            i: parse_index(&toks[1], line)?,
            positive: head.text == "braid+",
        },
        "twist" | "twist-" => Op::Twist {
            i: parse_index(&toks[1], line)?,
            inverse: head.text == "twist-",
        },
        "cup" => Op::Cup {
            i: parse_index(&toks[1], line)?,
            a: s(2),
        },
        "cap" => Op::Cap {
            i: parse_index(&toks[1], line)?,
            a: s(2),
        },
        "loop" => Op::Loop {
            a: s(1),
            i: parse_index(&toks[2], line)?,
            j: parse_index(&toks[3], line)?,
        },
        "split" => Op::Split {
            i: parse_index(&toks[1], line)?,
            a: s(2),
            b: s(3),
            c: s(4),
        },
        "fuse" => Op::Fuse {
            i: parse_index(&toks[1], line)?,
            a: s(2),
            b: s(3),
            c: s(4),
        },
        _ => Op::Project {
            i: parse_index(&toks[1], line)?,
            a: s(2),
            b: s(3),
            c: s(4),
        },
    };
    Ok(Located {
        op,
        line,
        col: head.col,
    })
}

// ----------------------------------------------------------------------
// Type checking

/// A primitive with resolved labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TOp {
    Cross { i: usize, kind: Cross },
    Cup { i: usize, a: usize },
    Cap { i: usize, a: usize },
    Loop { a: usize, i: usize, j: usize },
    Twist { i: usize, inverse: bool },
    Split { i: usize, a: usize, b: usize, c: usize },
    Fuse { i: usize, a: usize, b: usize, c: usize },
    Project { i: usize, c: usize },
}

/// Diagram with labels and sectors resolved on every slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedDiagram {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub ops: Vec<TOp>,
    /// Labels before each op, followed by the top boundary.
    pub slices: Vec<Vec<usize>>,
}

impl TypedDiagram {
    pub fn is_closed(&self) -> bool {
        self.source.is_empty() && self.target.is_empty()
    }
}

/// Resolve labels, check admissibility and grading on every slice.
pub fn typecheck(d: &Diagram, c: &SkeletalCategory) -> Result<TypedDiagram> {
    let header = d
        .header
        .as_ref()
        .ok_or_else(|| Error::parse(1, 1, "expected a 'strands <n> : <labels>' header"))?;
    let source: Vec<usize> = header
        .labels
        .iter()
        .map(|l| c.lookup(l))
        .collect::<Result<_>>()?;
    let eng = Engine::new(c);
    let mut cur = source.clone();
    let mut slices = Vec::with_capacity(d.ops.len() + 1);
    let mut ops = Vec::with_capacity(d.ops.len());
    for l in &d.ops {
        slices.push(cur.clone());
        let n = cur.len();
        let pos_err = |msg: String| Error::parse(l.line, l.col, msg);
        let pair = |i: usize| -> Result<()> {
            if i == 0 || i + 1 > n {
                Err(pos_err(format!("strand pair {i}, {} outside 1..{n}", i + 1)))
            } else {
                Ok(())
            }
        };
        let vertex = |a: usize, b: usize, cc: usize| -> Result<()> {
            if c.ring.admissible(a, b, cc) {
                Ok(())
            } else {
                Err(Error::Admissibility(format!(
                    "line {}: vertex {} ⊗ {} -> {} has N = 0",
                    l.line,
                    c.label(a),
                    c.label(b),
                    c.label(cc)
                )))
            }
        };
        let carries = |i: usize, want: usize| -> Result<()> {
            if cur[i - 1] == want {
                Ok(())
            } else {
                Err(Error::Sector(format!(
                    "line {}: strand {i} carries {}, not {}",
                    l.line,
                    c.label(cur[i - 1]),
                    c.label(want)
                )))
            }
        };
        let t = match &l.op {
            Op::Braid { i, positive } => {
                pair(*i)?;
                let kind = if c.orientation.is_r_move(*positive) {
                    Cross::R
                } else {
                    Cross::RInv
                };
                let (a, b) = (cur[i - 1], cur[*i]);
                let (a2, b2) = eng.crossed(kind, a, b);
                if a == b && (a2 != a || b2 != b) {
                    return Err(Error::Sector(format!(
                        "line {}: {} is not fixed by its own sector, so it cannot braid with itself",
                        l.line,
                        c.label(a)
                    )));
                }
                cur[i - 1] = a2;
                cur[*i] = b2;
                TOp::Cross { i: *i, kind }
            }
            Op::Cup { i, a } => {
                let a = c.lookup(a)?;
                if *i == 0 || *i > n + 1 {
                    return Err(pos_err(format!("cup position {i} outside 1..{}", n + 1)));
                }
                cur.splice(i - 1..i - 1, [a, c.ring.dual[a]]);
                TOp::Cup { i: *i, a }
            }
            Op::Cap { i, a } => {
                let a = c.lookup(a)?;
                pair(*i)?;
                carries(*i, a)?;
                carries(i + 1, c.ring.dual[a])?;
                cur.drain(i - 1..=*i);
                TOp::Cap { i: *i, a }
            }
            Op::Loop { a, i, j } => {
                let a = c.lookup(a)?;
                if c.ring.sector(a) != c.group().identity {
                    return Err(Error::Sector(format!(
                        "line {}: loop label {} is a defect",
                        l.line,
                        c.label(a)
                    )));
                }
                if *j >= *i && (*i == 0 || *j > n) {
                    return Err(pos_err(format!("loop block [{i}, {j}] outside 1..{n}")));
                }
                TOp::Loop { a, i: *i, j: *j }
            }
            Op::Twist { i, inverse } => {
                if *i == 0 || *i > n {
                    return Err(pos_err(format!("twist strand {i} outside 1..{n}")));
                }
                TOp::Twist {
                    i: *i,
                    inverse: *inverse,
                }
            }
            Op::Split { i, a, b, c: cc } => {
                let (a, b, cc) = (c.lookup(a)?, c.lookup(b)?, c.lookup(cc)?);
                if *i == 0 || *i > n {
                    return Err(pos_err(format!("split strand {i} outside 1..{n}")));
                }
                carries(*i, cc)?;
                vertex(a, b, cc)?;
                cur.splice(i - 1..*i, [a, b]);
                TOp::Split { i: *i, a, b, c: cc }
            }
            Op::Fuse { i, a, b, c: cc } => {
                let (a, b, cc) = (c.lookup(a)?, c.lookup(b)?, c.lookup(cc)?);
                pair(*i)?;
                carries(*i, a)?;
                carries(i + 1, b)?;
                vertex(a, b, cc)?;
                cur.splice(i - 1..=*i, [cc]);
                TOp::Fuse { i: *i, a, b, c: cc }
            }
            Op::Project { i, a, b, c: cc } => {
                let (a, b, cc) = (c.lookup(a)?, c.lookup(b)?, c.lookup(cc)?);
                pair(*i)?;
                carries(*i, a)?;
                carries(i + 1, b)?;
                vertex(a, b, cc)?;
                TOp::Project { i: *i, c: cc }
            }
        };
        ops.push(t);
    }
    slices.push(cur.clone());
    Ok(TypedDiagram {
        source,
        target: cur,
        ops,
        slices,
    })
}

// ----------------------------------------------------------------------
// Evaluation

/// Rewrite strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Every crossing and loop is resolved locally, left to right.
    Elementary,
    /// Conjugated braids are rewritten, runs become block crossings and
    /// loops are removed by S-matrix ratios.
    Grouped,
    /// Run both and require agreement.
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalValue {
    Scalar(C64),
    /// Rows index `target`, columns index `source`.
    Matrix { source: TreeBasis, target: TreeBasis, m: Mat },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: EvalValue,
    pub usage: Usage,
    /// Largest entrywise disagreement between strategies, when both ran.
    pub confluence: Option<f64>,
}

impl EvalResult {
    pub fn scalar(&self) -> Option<C64> {
        match self.value {
            EvalValue::Scalar(z) => Some(z),
            EvalValue::Matrix { .. } => None,
        }
    }

    /// The value as a matrix; a scalar is 1x1.
    pub fn matrix(&self) -> Mat {
        match &self.value {
            EvalValue::Scalar(z) => Mat::from_element(1, 1, *z),
            EvalValue::Matrix { m, .. } => m.clone(),
        }
    }
}

/// Apply typed ops to a state.
pub fn apply(eng: &Engine, s: &State, ops: &[TOp], strategy: Strategy) -> Result<State> {
    match strategy {
        Strategy::Grouped => run_grouped(eng, s.clone(), ops),
        _ => run_elementary(eng, s.clone(), ops),
    }
}

fn run_elementary(eng: &Engine, mut s: State, ops: &[TOp]) -> Result<State> {
    for op in ops {
        s = match *op {
            TOp::Loop { a, i, j } => elementary_loop(eng, &s, a, i, j)?,
            _ => local(eng, &s, op)?,
        };
    }
    Ok(s)
}

fn local(eng: &Engine, s: &State, op: &TOp) -> Result<State> {
    match *op {
        TOp::Cross { i, kind } => eng.cross(s, i, kind),
        TOp::Cup { i, a } => eng.cup(s, i, a),
        TOp::Cap { i, a } => eng.cap(s, i, a),
        TOp::Loop { a, i, j } => eng.loop_s(s, a, i, j),
        TOp::Twist { i, inverse: false } => eng.twist(s, i),
        TOp::Twist { i, inverse: true } => {
            let mut out = s.clone();
            out.scale(eng.c.twist(s.leaves[i - 1])?.inv());
            Ok(out)
        }
        TOp::Split { i, a, b, c } => eng.split(s, i, a, b, c),
        TOp::Fuse { i, a, b, c } => eng.fuse(s, i, a, b, c),
        TOp::Project { i, c } => eng.project(s, i, c),
    }
}

/// Loop of `a` around strands `i ..= j` drawn out: a cup `(a, ā)` left of
/// the block, `ā` carried right over the block and back under it, then a cap.
fn elementary_loop(eng: &Engine, s: &State, a: usize, i: usize, j: usize) -> Result<State> {
    let mut t = eng.cup(s, i.max(1), a)?;
    if j >= i {
        for k in i + 1..=j + 1 {
            t = eng.cross(&t, k, Cross::R)?;
        }
        for k in (i + 1..=j + 1).rev() {
            t = eng.cross(&t, k, Cross::R)?;
        }
    }
    eng.cap(&t, i.max(1), a)
}

fn run_grouped(eng: &Engine, mut s: State, ops: &[TOp]) -> Result<State> {
    let id = eng.c.group().identity;
    let sector = |x: usize| eng.c.ring.sector(x);
    let trivial = |x: usize| sector(x) == id;
    let mut k = 0;
    while k < ops.len() {
        let TOp::Cross { i, kind } = ops[k] else {
            s = local(eng, &s, &ops[k])?;
            k += 1;
            continue;
        };
        // s_i W s_i^{-1} with W on strands right of i, strand i an anyon and
        // strand i + 1 a defect: move the defect out of the way instead.
        if trivial(s.leaves[i - 1]) && !trivial(s.leaves[i]) {
            if let Some(e) = conjugation_end(ops, k) {
                let w = &ops[k + 1..e];
                let m = w
                    .iter()
                    .map(|op| match op {
                        TOp::Cross { i, .. } => *i,
                        _ => unreachable!("conjugation body holds crossings only"),
                    })
                    .max()
                    .expect("nonempty body");
                let mut rewritten: Vec<TOp> = (i + 1..=m)
                    .map(|q| TOp::Cross {
                        i: q,
                        kind: kind.inverse(),
                    })
                    .collect();
                rewritten.extend(w.iter().map(|op| match *op {
                    TOp::Cross { i, kind } => TOp::Cross { i: i - 1, kind },
                    _ => unreachable!("conjugation body holds crossings only"),
                }));
                rewritten.extend((i + 1..=m).rev().map(|q| TOp::Cross { i: q, kind }));
                s = run_grouped(eng, s, &rewritten)?;
                k = e + 1;
                continue;
            }
        }
        let run_len = |step: isize| {
            let mut len = 1;
            while let Some(TOp::Cross { i: q, kind: kq }) = ops.get(k + len) {
                if *kq != kind || *q as isize != i as isize + step * len as isize {
                    break;
                }
                len += 1;
            }
            len
        };
        let block_ok = |lo: usize, hi: usize, mover: usize| {
            trivial(s.leaves[mover - 1])
                && eng.c.group().identity
                    == s.leaves[lo - 1..hi]
                        .iter()
                        .fold(id, |g, &x| eng.c.group().mul(g, sector(x)))
        };
        // Ascending run: strand i moves right across [i + 1, i + len].
        let up = run_len(1);
        if let Some(len) = (2..=up).rev().find(|&len| block_ok(i + 1, i + len, i)) {
            s = eng.cross_block(&s, i, i + 1, i + len, kind == Cross::R)?;
            k += len;
            continue;
        }
        // Descending run: strand i + 1 moves left across [i + 1 - len, i].
        let down = if i > 1 { run_len(-1).min(i) } else { 1 };
        if let Some(len) = (2..=down).rev().find(|&len| block_ok(i + 1 - len, i, i + 1)) {
            s = eng.cross_block(&s, i + 1, i + 1 - len, i, kind == Cross::RInv)?;
            k += len;
            continue;
        }
        s = eng.cross(&s, i, kind)?;
        k += 1;
    }
    Ok(s)
}

/// Index of the closing `s_i^{-ε}` of a conjugation `s_i^ε W s_i^{-ε}`
/// starting at `k`, where `W` is a nonempty run of crossings right of `i`.
fn conjugation_end(ops: &[TOp], k: usize) -> Option<usize> {
    let TOp::Cross { i, kind } = ops[k] else {
        return None;
    };
    let mut e = k + 1;
    while let Some(TOp::Cross { i: q, .. }) = ops.get(e) {
        if *q <= i {
            break;
        }
        e += 1;
    }
    match ops.get(e) {
        Some(TOp::Cross { i: q, kind: kq }) if e > k + 1 && *q == i && *kq == kind.inverse() => Some(e),
        _ => None,
    }
}

/// Evaluate on the sector with total charge `total` (the unit if `None`).
pub fn evaluate(
    d: &Diagram,
    c: &SkeletalCategory,
    total: Option<usize>,
    strategy: Strategy,
    tol: &Tolerance,
) -> Result<EvalResult> {
    let typed = typecheck(d, c)?;
    evaluate_typed(&typed, c, total, strategy, tol)
}

pub fn evaluate_typed(
    typed: &TypedDiagram,
    c: &SkeletalCategory,
    total: Option<usize>,
    strategy: Strategy,
    tol: &Tolerance,
) -> Result<EvalResult> {
    let root = total.unwrap_or_else(|| c.unit());
    let source = enumerate_basis(c, &typed.source, root);
    let target = enumerate_basis(c, &typed.target, root);
    let run = |st: Strategy| -> Result<(Mat, Usage)> {
        let eng = Engine::new(c);
        let mut m = Mat::zeros(target.dim(), source.dim());
        for (col, ys) in combs(c, &typed.source, root).into_iter().enumerate() {
            let s = State::basis(typed.source.clone(), root, ys);
            let out = apply(&eng, &s, &typed.ops, st)?;
            for (row, t) in target.combs().iter().enumerate() {
                m[(row, col)] = out.amp(t);
            }
        }
        Ok((m, eng.usage()))
    };
    let (m, usage, confluence) = match strategy {
        Strategy::Both => {
            let (ma, ua) = run(Strategy::Elementary)?;
            let (mb, _) = run(Strategy::Grouped)?;
            let dev = ma
                .iter()
                .zip(mb.iter())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            if dev > tol.eq_tol {
                return Err(Error::NonConfluent(dev));
            }
            (ma, ua, Some(dev))
        }
        st => {
            let (m, u) = run(st)?;
            (m, u, None)
        }
    };
    let value = if typed.is_closed() {
        EvalValue::Scalar(if m.nrows() == 1 && m.ncols() == 1 { m[(0, 0)] } else { ZERO })
    } else {
        EvalValue::Matrix { source, target, m }
    };
    Ok(EvalResult {
        value,
        usage,
        confluence,
    })
}

// ----------------------------------------------------------------------
// Measurement

/// Projector onto channel `ch` of strands `pos`, `pos + 1` (carrying `a`,
/// `b`) over `basis`, built as a fuse followed by a split and rescaled to
/// be idempotent.
pub fn measurement_projector(
    c: &SkeletalCategory,
    a: usize,
    b: usize,
    ch: usize,
    basis: &TreeBasis,
    pos: usize,
) -> Result<Mat> {
    if !c.ring.admissible(a, b, ch) {
        return Err(Error::Admissibility(format!(
            "{} ⊗ {} has no channel {}",
            c.label(a),
            c.label(b),
            c.label(ch)
        )));
    }
    if pos == 0 || pos + 1 > basis.leaves.len() || basis.leaves[pos - 1] != a || basis.leaves[pos] != b {
        return Err(Error::Sector(format!(
            "strands {pos}, {} do not carry ({}, {})",
            pos + 1,
            c.label(a),
            c.label(b)
        )));
    }
    let eng = Engine::new(c);
    let scale = C64::new((c.dim(ch) / (c.dim(a) * c.dim(b))).sqrt(), 0.0);
    let combs = basis.combs();
    let mut m = Mat::zeros(basis.dim(), basis.dim());
    for (col, ys) in combs.iter().enumerate() {
        let s = State::basis(basis.leaves.clone(), basis.root, ys.clone());
        let fused = eng.fuse(&s, pos, a, b, ch)?;
        let out = eng.split(&fused, pos, a, b, ch)?;
        for (row, t) in combs.iter().enumerate() {
            m[(row, col)] = out.amp(t) * scale;
        }
    }
    Ok(m)
}
