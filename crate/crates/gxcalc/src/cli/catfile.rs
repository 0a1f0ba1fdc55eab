//! Category file format.
//!
//! A line-oriented text format with `[section]` headers:
//!
//! ```text
//! [category]
//! name = ising1
//! group = 0
//! mul = 0
//! orientation = positive-is-R
//!
//! [objects]
//! 1 0 1
//! sigma 0 sigma
//! psi 0 psi
//!
//! [fusion]
//! sigma sigma -> 1 psi
//!
//! [F]
//! sigma sigma sigma sigma 1 1 = 1/sqrt(2)
//!
//! [R]
//! sigma sigma 1 = exp(ipi -1/8)
//! ```
//!
//! Objects list `label sector dual`. Fusion lines give channels, with
//! `2*c` for multiplicity two; unlisted products of the unit are implied.
//! `[action]` lines read `g : images...` in object order. `[U]` keys are
//! `k a b c`, `[eta]` keys `x g h`, `[twist]` keys a single label and `[S]`
//! holds one row per line over the trivial sector. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::catdata::{Orientation, SkeletalCategory};
use crate::error::{Error, Result};
use crate::fusion::{FusionRing, GroupSpec};
use crate::numerics::{exp_ipi, Mat, C64, ONE, ZERO};

// ----------------------------------------------------------------------
// Numeric tokens

/// Evaluate a numeric token: decimal complex `a+bi`, or a `*`-product of
/// `exp(ipi p/q)`, `sqrt(n)`, `1/sqrt(n)`, `i`, integers and fractions,
/// each optionally negated.
pub fn parse_number(tok: &str) -> std::result::Result<C64, String> {
    let t = tok.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Some(z) = parse_decimal_complex(t) {
        return Ok(z);
    }
    let mut acc = ONE;
    for factor in t.split('*') {
        acc *= parse_factor(factor.trim())?;
    }
    Ok(acc)
}

fn parse_factor(f: &str) -> std::result::Result<C64, String> {
    let (neg, body) = match f.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, f),
    };
    let v = if body == "i" {
        C64::new(0.0, 1.0)
    } else if let Some(inner) = body.strip_prefix("exp(ipi ").and_then(|s| s.strip_suffix(')')) {
        let (p, q) = parse_ratio(inner)?;
        exp_ipi(p, q)
    } else if let Some(inner) = body.strip_prefix("1/sqrt(").and_then(|s| s.strip_suffix(')')) {
        C64::new(1.0 / parse_nonneg(inner)?.sqrt(), 0.0)
    } else if let Some(inner) = body.strip_prefix("sqrt(").and_then(|s| s.strip_suffix(')')) {
        C64::new(parse_nonneg(inner)?.sqrt(), 0.0)
    } else if body.contains('/') {
        let (p, q) = parse_ratio(body)?;
        C64::new(p / q, 0.0)
    } else {
        C64::new(body.parse::<f64>().map_err(|_| format!("bad number factor `{f}`"))?, 0.0)
    };
    Ok(if neg { -v } else { v })
}

fn parse_nonneg(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("bad radicand `{s}`"))?;
    if v < 0.0 {
        return Err(format!("negative radicand `{s}`"));
    }
    Ok(v)
}

fn parse_ratio(s: &str) -> std::result::Result<(f64, f64), String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("expected p/q, got `{s}`"))?;
    let p: f64 = p.trim().parse().map_err(|_| format!("bad numerator `{p}`"))?;
    let q: f64 = q.trim().parse().map_err(|_| format!("bad denominator `{q}`"))?;
    if q == 0.0 {
        return Err("zero denominator".into());
    }
    Ok((p, q))
}

/// `a`, `a+bi`, `a-bi`, `bi` with decimal `a`, `b`.
fn parse_decimal_complex(t: &str) -> Option<C64> {
    if let Ok(x) = t.parse::<f64>() {
        return Some(C64::new(x, 0.0));
    }
    let body = t.strip_suffix('i')?;
    if body.is_empty() || body.contains('*') || body.contains('(') {
        return None;
    }
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().ok()?;
            let im_s = &body[k..];
            let im: f64 = match im_s {
                "+" => 1.0,
                "-" => -1.0,
                _ => im_s.parse().ok()?,
            };
            Some(C64::new(re, im))
        }
        None => {
            let im: f64 = match body {
                "+" => 1.0,
                "-" => -1.0,
                _ => body.parse().ok()?,
            };
            Some(C64::new(0.0, im))
        }
    }
}

/// Exact token for `z` when it is `r·sqrt(n)·exp(iπ p/q)` with small
/// integers, else a decimal complex with 17 significant digits.
pub fn format_number(z: C64) -> String {
    exact_token(z).unwrap_or_else(|| format!("{:e}{:+e}i", z.re, z.im))
}

fn exact_token(z: C64) -> Option<String> {
    const TOL: f64 = 1e-13;
    let m = z.norm();
    if m < TOL {
        return Some("0".into());
    }
    let theta = z.arg() / std::f64::consts::PI;
    let (mut p, q) = (1..=48i64).find_map(|q| {
        let p = (theta * q as f64).round();
        ((theta * q as f64 - p).abs() < TOL * q as f64).then_some((p as i64, q))
    })?;
    if p <= -q {
        p += 2 * q;
    }
    let m2 = m * m;
    let (a, b) = (1..=64i64).find_map(|b| {
        let a = (m2 * b as f64).round();
        ((m2 * b as f64 - a).abs() < TOL * b as f64 && a >= 1.0).then_some((a as i64, b))
    })?;
    let g = gcd(a, b);
    let (a, b) = (a / g, b / g);
    let mut factors: Vec<String> = Vec::new();
    let (sa, ra) = square_split(a);
    let (sb, rb) = square_split(b);
    match (sa, sb) {
        (1, 1) => {}
        (x, 1) => factors.push(x.to_string()),
        (x, y) => factors.push(format!("{x}/{y}")),
    }
    if ra > 1 {
        factors.push(format!("sqrt({ra})"));
    }
    if rb > 1 {
        factors.push(format!("1/sqrt({rb})"));
    }
    let mut neg = false;
    if p == q {
        neg = true;
    } else if p != 0 {
        let g = gcd(p.abs(), q);
        factors.push(format!("exp(ipi {}/{})", p / g, q / g));
    }
    if factors.is_empty() {
        factors.push("1".into());
    }
    let body = factors.join("*");
    Some(if neg { format!("-{body}") } else { body })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `n = s² r` with `r` square-free.
fn square_split(n: i64) -> (i64, i64) {
    let mut s = 1;
    let mut r = n;
    let mut k = 2;
    while k * k <= r {
        while r % (k * k) == 0 {
            r /= k * k;
            s *= k;
        }
        k += 1;
    }
    (s, r)
}

// ----------------------------------------------------------------------
// Parsing

struct Line<'a> {
    no: usize,
    text: &'a str,
    /// Column of `text` in the original line, 1-based.
    col: usize,
}

fn perr(line: &Line, col_off: usize, msg: impl Into<String>) -> Error {
    Error::parse(line.no, line.col + col_off, msg)
}

/// Parse a category file.
pub fn parse(src: &str) -> Result<SkeletalCategory> {
    let mut sections: Vec<(String, Line, Vec<Line>)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = content.len() - content.trim_start().len() + 1;
        let line = Line { no, text: trimmed, col };
        if trimmed.starts_with('[') {
            let name = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .filter(|s| !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
                .ok_or_else(|| perr(&line, 0, "malformed section header"))?;
            const KNOWN: [&str; 10] =
                ["category", "objects", "fusion", "action", "F", "R", "U", "eta", "twist", "S"];
            if !KNOWN.contains(&name) {
                return Err(perr(&line, 1, format!("unknown section `{name}`")));
            }
            if sections.iter().any(|(n, _, _)| n == name) {
                return Err(perr(&line, 1, format!("duplicate section `{name}`")));
            }
            sections.push((name.to_string(), line, Vec::new()));
        } else {
            match sections.last_mut() {
                Some((_, _, body)) => body.push(line),
                None => return Err(perr(&line, 0, "content before the first section header")),
            }
        }
    }
    let get = |name: &str| sections.iter().find(|(n, _, _)| n == name).map(|(_, _, b)| b);
    let cat = get("category").ok_or_else(|| Error::parse(1, 1, "missing [category] section"))?;
    let objects = get("objects").ok_or_else(|| Error::parse(1, 1, "missing [objects] section"))?;

    // [category]
    let mut kv: BTreeMap<&str, (&Line, &str)> = BTreeMap::new();
    for line in cat {
        let (k, v) = line
            .text
            .split_once('=')
            .ok_or_else(|| perr(line, 0, "expected `key = value`"))?;
        kv.insert(k.trim(), (line, v.trim()));
    }
    let need = |k: &str| kv.get(k).copied().ok_or_else(|| Error::parse(1, 1, format!("[category] lacks `{k}`")));
    let name = need("name")?.1.to_string();
    let (gline, gval) = need("group")?;
    let elements: Vec<String> = gval.split_whitespace().map(str::to_string).collect();
    if elements.is_empty() {
        return Err(perr(gline, 0, "group needs at least one element"));
    }
    let (mline, mval) = need("mul")?;
    let rows: Vec<&str> = mval.split(';').collect();
    if rows.len() != elements.len() {
        return Err(perr(mline, 0, "mul needs one row per group element"));
    }
    let mut table = Vec::new();
    for row in rows {
        let mut r = Vec::new();
        for e in row.split_whitespace() {
            r.push(
                elements
                    .iter()
                    .position(|x| x == e)
                    .ok_or_else(|| perr(mline, 0, format!("unknown group element `{e}`")))?,
            );
        }
        if r.len() != elements.len() {
            return Err(perr(mline, 0, "mul rows must have one entry per element"));
        }
        table.push(r);
    }
    let group = GroupSpec { elements, table, identity: 0 };
    let orientation = match kv.get("orientation") {
        Some((line, v)) => Orientation::from_token(v)
            .ok_or_else(|| perr(line, 0, format!("unknown orientation `{v}`")))?,
        None => Orientation::PositiveIsR,
    };
    let mut flags = Vec::new();
    if let Some((_, v)) = kv.get("flags") {
        flags = v.split_whitespace().collect();
    }
    for (k, (line, _)) in &kv {
        if !["name", "group", "mul", "orientation", "flags", "data-labels", "aliases"].contains(k) {
            return Err(perr(line, 0, format!("unknown key `{k}`")));
        }
    }

    // [objects]
    let mut labels = Vec::new();
    let mut sector_names = Vec::new();
    let mut dual_names = Vec::new();
    for line in objects {
        let parts: Vec<&str> = line.text.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(perr(line, 0, "object lines read `label sector dual`"));
        }
        if labels.iter().any(|l| l == parts[0]) {
            return Err(perr(line, 0, format!("duplicate label `{}`", parts[0])));
        }
        labels.push(parts[0].to_string());
        sector_names.push((line, parts[1]));
        dual_names.push((line, parts[2]));
    }
    if labels.is_empty() {
        return Err(Error::parse(1, 1, "no objects"));
    }
    let l = labels.len();
    let idx = |line: &Line, s: &str| -> Result<usize> {
        labels
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| perr(line, 0, format!("unknown label `{s}`")))
    };
    let grading = sector_names
        .iter()
        .map(|(line, s)| group.index(s).ok_or_else(|| perr(line, 0, format!("unknown group element `{s}`"))))
        .collect::<Result<Vec<_>>>()?;
    let dual = dual_names.iter().map(|(line, s)| idx(line, s)).collect::<Result<Vec<_>>>()?;
    let unit = 0;
    let mut ring = FusionRing {
        labels: labels.clone(),
        n: vec![0; l * l * l],
        unit,
        dual,
        group: group.clone(),
        grading,
        action: (0..group.order()).map(|_| (0..l).collect()).collect(),
    };
    for a in 0..l {
        ring.set_n(unit, a, a, 1);
        ring.set_n(a, unit, a, 1);
    }
    if let Some(body) = get("fusion") {
        for line in body {
            let (lhs, rhs) = line
                .text
                .split_once("->")
                .ok_or_else(|| perr(line, 0, "fusion lines read `a b -> c ...`"))?;
            let ab: Vec<&str> = lhs.split_whitespace().collect();
            if ab.len() != 2 {
                return Err(perr(line, 0, "fusion lines need exactly two inputs"));
            }
            let (a, b) = (idx(line, ab[0])?, idx(line, ab[1])?);
            for ch in rhs.split_whitespace() {
                let (mult, c) = match ch.split_once('*') {
                    Some((m, c)) if !m.is_empty() && m.bytes().all(|b| b.is_ascii_digit()) => (
                        m.parse::<u32>().map_err(|_| perr(line, 0, format!("bad multiplicity `{m}`")))?,
                        c,
                    ),
                    _ => (1, ch),
                };
                ring.set_n(a, b, idx(line, c)?, mult);
            }
        }
    }
    if let Some(body) = get("action") {
        for line in body {
            let (g, imgs) = line
                .text
                .split_once(':')
                .ok_or_else(|| perr(line, 0, "action lines read `g : images...`"))?;
            let g = group
                .index(g.trim())
                .ok_or_else(|| perr(line, 0, format!("unknown group element `{}`", g.trim())))?;
            let perm = imgs
                .split_whitespace()
                .map(|s| idx(line, s))
                .collect::<Result<Vec<_>>>()?;
            if perm.len() != l {
                return Err(perr(line, 0, "action needs one image per object"));
            }
            ring.action[g] = perm;
        }
    }

    let mut c = SkeletalCategory::new(name, ring)?;
    c.orientation = orientation;
    for f in flags {
        match f {
            "trivial-u-eta" => c.trivial_u_eta = true,
            "partial" => c.partial = true,
            "gauge-fill" => c.gauge_fill = true,
            other => {
                let (line, _) = kv["flags"];
                return Err(perr(line, 0, format!("unknown flag `{other}`")));
            }
        }
    }
    if let Some((line, v)) = kv.get("data-labels") {
        c.data_labels = Some(v.split_whitespace().map(|s| idx(line, s)).collect::<Result<Vec<_>>>()?);
    }
    if let Some((line, v)) = kv.get("aliases") {
        for pair in v.split_whitespace() {
            let (alias, target) = pair
                .split_once('=')
                .ok_or_else(|| perr(line, 0, "aliases read `alias=label`"))?;
            idx(line, target)?;
            c.aliases.push((alias.to_string(), target.to_string()));
        }
    }

    let keyed = |line: &Line, n_keys: usize| -> Result<(Vec<String>, C64)> {
        let (lhs, rhs) = line
            .text
            .split_once('=')
            .ok_or_else(|| perr(line, 0, "symbol lines read `keys = value`"))?;
        let keys: Vec<String> = lhs.split_whitespace().map(str::to_string).collect();
        if keys.len() != n_keys {
            return Err(perr(line, 0, format!("expected {n_keys} indices, got {}", keys.len())));
        }
        let col = lhs.len() + 1;
        let v = parse_number(rhs).map_err(|m| perr(line, col, m))?;
        if !crate::numerics::is_finite(v) {
            return Err(perr(line, col, "non-finite value"));
        }
        Ok((keys, v))
    };
    let gidx = |line: &Line, s: &str| {
        group
            .index(s)
            .ok_or_else(|| perr(line, 0, format!("unknown group element `{s}`")))
    };
    if let Some(body) = get("F") {
        for line in body {
            let (k, v) = keyed(line, 6)?;
            let mut key = [0; 6];
            for (slot, name) in key.iter_mut().zip(&k) {
                *slot = idx(line, name)?;
            }
            c.f.insert(key, v);
        }
    }
    if let Some(body) = get("R") {
        for line in body {
            let (k, v) = keyed(line, 3)?;
            c.r.insert([idx(line, &k[0])?, idx(line, &k[1])?, idx(line, &k[2])?], v);
        }
    }
    if let Some(body) = get("U") {
        for line in body {
            let (k, v) = keyed(line, 4)?;
            c.u.insert(
                [gidx(line, &k[0])?, idx(line, &k[1])?, idx(line, &k[2])?, idx(line, &k[3])?],
                v,
            );
        }
    }
    if let Some(body) = get("eta") {
        for line in body {
            let (k, v) = keyed(line, 3)?;
            c.eta.insert([idx(line, &k[0])?, gidx(line, &k[1])?, gidx(line, &k[2])?], v);
        }
    }
    if let Some(body) = get("twist") {
        for line in body {
            let (k, v) = keyed(line, 1)?;
            c.twists.insert(idx(line, &k[0])?, v);
        }
    }
    if let Some(body) = get("S") {
        let n = c.ring.trivial_sector().len();
        if body.len() != n {
            let line = body.first().map_or(1, |l| l.no);
            return Err(Error::parse(line, 1, format!("S needs {n} rows")));
        }
        let mut s = Mat::zeros(n, n);
        for (i, line) in body.iter().enumerate() {
            let toks = split_numbers(line.text);
            if toks.len() != n {
                return Err(perr(line, 0, format!("S rows need {n} entries")));
            }
            for (j, t) in toks.iter().enumerate() {
                s[(i, j)] = parse_number(t).map_err(|m| perr(line, 0, m))?;
            }
        }
        c.s = Some(s);
    }
    Ok(c)
}

// ----------------------------------------------------------------------
// Emission

/// Render a category in the file format; `parse(emit(c))` reproduces `c`.
/// Split a row of number tokens on whitespace outside parentheses.
fn split_numbers(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, None);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c.is_whitespace() && depth == 0 => {
                if let Some(s) = start.take() {
                    out.push(&text[s..i]);
                }
                continue;
            }
            _ => {}
        }
        start.get_or_insert(i);
    }
    if let Some(s) = start {
        out.push(&text[s..]);
    }
    out
}

pub fn emit(c: &SkeletalCategory) -> String {
    let g = c.group();
    let lab = |a: usize| c.label(a).to_string();
    let mut out = String::new();
    let _ = writeln!(out, "[category]");
    let _ = writeln!(out, "name = {}", c.name);
    let _ = writeln!(out, "group = {}", g.elements.join(" "));
    let rows: Vec<String> = g
        .table
        .iter()
        .map(|r| r.iter().map(|&x| g.elements[x].clone()).collect::<Vec<_>>().join(" "))
        .collect();
    let _ = writeln!(out, "mul = {}", rows.join(" ; "));
    let _ = writeln!(out, "orientation = {}", c.orientation.token());
    let mut flags = Vec::new();
    if c.trivial_u_eta {
        flags.push("trivial-u-eta");
    }
    if c.partial {
        flags.push("partial");
    }
    if c.gauge_fill {
        flags.push("gauge-fill");
    }
    if !flags.is_empty() {
        let _ = writeln!(out, "flags = {}", flags.join(" "));
    }
    if let Some(dl) = &c.data_labels {
        let v: Vec<String> = dl.iter().map(|&a| lab(a)).collect();
        let _ = writeln!(out, "data-labels = {}", v.join(" "));
    }
    if !c.aliases.is_empty() {
        let v: Vec<String> = c.aliases.iter().map(|(a, t)| format!("{a}={t}")).collect();
        let _ = writeln!(out, "aliases = {}", v.join(" "));
    }
    let _ = writeln!(out, "\n[objects]");
    for a in 0..c.len() {
        let _ = writeln!(
            out,
            "{} {} {}",
            lab(a),
            g.elements[c.ring.sector(a)],
            lab(c.ring.dual[a])
        );
    }
    let _ = writeln!(out, "\n[fusion]");
    let u = c.unit();
    for a in 0..c.len() {
        for b in 0..c.len() {
            if a == u || b == u {
                continue;
            }
            let chans: Vec<String> = c
                .ring
                .channels(a, b)
                .into_iter()
                .map(|x| match c.ring.n(a, b, x) {
                    1 => lab(x),
                    m => format!("{m}*{}", lab(x)),
                })
                .collect();
            if !chans.is_empty() {
                let _ = writeln!(out, "{} {} -> {}", lab(a), lab(b), chans.join(" "));
            }
        }
    }
    if g.order() > 1 {
        let _ = writeln!(out, "\n[action]");
        for (h, perm) in c.ring.action.iter().enumerate() {
            let v: Vec<String> = perm.iter().map(|&x| lab(x)).collect();
            let _ = writeln!(out, "{} : {}", g.elements[h], v.join(" "));
        }
    }
    if !c.f.is_empty() {
        let _ = writeln!(out, "\n[F]");
        for (k, v) in &c.f {
            let keys: Vec<String> = k.iter().map(|&x| lab(x)).collect();
            let _ = writeln!(out, "{} = {}", keys.join(" "), format_number(*v));
        }
    }
    if !c.r.is_empty() {
        let _ = writeln!(out, "\n[R]");
        for (k, v) in &c.r {
            let keys: Vec<String> = k.iter().map(|&x| lab(x)).collect();
            let _ = writeln!(out, "{} = {}", keys.join(" "), format_number(*v));
        }
    }
    if !c.u.is_empty() {
        let _ = writeln!(out, "\n[U]");
        for (k, v) in &c.u {
            let _ = writeln!(
                out,
                "{} {} {} {} = {}",
                g.elements[k[0]],
                lab(k[1]),
                lab(k[2]),
                lab(k[3]),
                format_number(*v)
            );
        }
    }
    if !c.eta.is_empty() {
        let _ = writeln!(out, "\n[eta]");
        for (k, v) in &c.eta {
            let _ = writeln!(
                out,
                "{} {} {} = {}",
                lab(k[0]),
                g.elements[k[1]],
                g.elements[k[2]],
                format_number(*v)
            );
        }
    }
    if !c.twists.is_empty() {
        let _ = writeln!(out, "\n[twist]");
        for (a, v) in &c.twists {
            let _ = writeln!(out, "{} = {}", lab(*a), format_number(*v));
        }
    }
    if let Some(s) = &c.s {
        let _ = writeln!(out, "\n[S]");
        for i in 0..s.nrows() {
            let row: Vec<String> = (0..s.ncols()).map(|j| format_number(s[(i, j)])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

/// Largest difference between two categories' stored data; `None` when
/// their structure (labels, fusion, flags, key sets) differs.
pub fn data_distance(a: &SkeletalCategory, b: &SkeletalCategory) -> Option<f64> {
    if a.ring != b.ring
        || a.orientation != b.orientation
        || a.trivial_u_eta != b.trivial_u_eta
        || a.partial != b.partial
        || a.gauge_fill != b.gauge_fill
        || a.data_labels != b.data_labels
        || a.aliases != b.aliases
    {
        return None;
    }
    fn maps<K: Ord>(x: &BTreeMap<K, C64>, y: &BTreeMap<K, C64>) -> Option<f64> {
        if x.len() != y.len() || x.keys().zip(y.keys()).any(|(p, q)| p != q) {
            return None;
        }
        Some(x.values().zip(y.values()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max))
    }
    let mut d = 0.0f64;
    d = d.max(maps(&a.f, &b.f)?);
    d = d.max(maps(&a.r, &b.r)?);
    d = d.max(maps(&a.u, &b.u)?);
    d = d.max(maps(&a.eta, &b.eta)?);
    d = d.max(maps(&a.twists, &b.twists)?);
    match (&a.s, &b.s) {
        (Some(x), Some(y)) if x.shape() == y.shape() => d = d.max(crate::numerics::max_abs_diff(x, y)),
        (None, None) => {}
        _ => return None,
    }
    let _ = ZERO;
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_tokens() {
        let cases = [
            ("1/sqrt(2)", C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)),
            ("-1", C64::new(-1.0, 0.0)),
            ("0.5-0.25i", C64::new(0.5, -0.25)),
            ("-i", C64::new(0.0, -1.0)),
            ("2i", C64::new(0.0, 2.0)),
            ("1e-3+1e-3i", C64::new(1e-3, 1e-3)),
            ("1/2*sqrt(3)", C64::new(3f64.sqrt() / 2.0, 0.0)),
        ];
        for (t, want) in cases {
            let got = parse_number(t).unwrap();
            assert!((got - want).norm() < 1e-15, "{t}: {got}");
        }
        assert!(parse_number("exp(ipi 1/0)").is_err());
        assert!(parse_number("sqrt(x)").is_err());
    }

    #[test]
    fn exact_round_trip() {
        for z in [
            exp_ipi(-1.0, 8.0),
            exp_ipi(2.0, 3.0) / 3f64.sqrt(),
            C64::new(0.5, 0.0),
            C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.123456789, 0.3),
        ] {
            let t = format_number(z);
            let back = parse_number(&t).unwrap();
            assert!((back - z).norm() < 1e-15, "{z} -> {t} -> {back}");
        }
        assert_eq!(format_number(exp_ipi(3.0, 8.0)), "exp(ipi 3/8)");
        assert_eq!(format_number(C64::new(-1.0, 0.0)), "-1");
    }

    #[test]
    fn malformed_header_reports_line() {
        let err = parse("[category\nname = x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }
}
