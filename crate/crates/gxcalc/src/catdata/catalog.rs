//! Built-in categories.
//!
//! The constructors here are the reference definitions. The shipped
//! `catalog/*.cat` files are emitted from them, and [`catalog_load`] reads
//! those files (or the ones under `GXCALC_CATALOG_DIR`).

use std::path::PathBuf;

use crate::catdata::{
    deligne_product, make_tambara_yamagami, s_from_twists, Bicharacter, Orientation,
    SkeletalCategory,
};
use crate::cli::catfile;
use crate::error::{Error, Result};
use crate::fusion::{FusionRing, GroupSpec};
use crate::numerics::{exp_ipi, re, C64, I, ONE};

pub const NAMES: [&str; 7] = [
    "ising1",
    "z3",
    "toric_code",
    "tc_z2x_restricted",
    "ty_z3",
    "bilayer_ising",
    "bilayer_ising_z2x_partial",
];

pub const CATALOG_ENV: &str = "GXCALC_CATALOG_DIR";

fn shipped(name: &str) -> Option<&'static str> {
    Some(match name {
        "ising1" => include_str!("../../catalog/ising1.cat"),
        "z3" => include_str!("../../catalog/z3.cat"),
        "toric_code" => include_str!("../../catalog/toric_code.cat"),
        "tc_z2x_restricted" => include_str!("../../catalog/tc_z2x_restricted.cat"),
        "ty_z3" => include_str!("../../catalog/ty_z3.cat"),
        "bilayer_ising" => include_str!("../../catalog/bilayer_ising.cat"),
        "bilayer_ising_z2x_partial" => include_str!("../../catalog/bilayer_ising_z2x_partial.cat"),
        _ => return None,
    })
}

/// Text of a catalog entry, honoring `GXCALC_CATALOG_DIR`.
pub fn catalog_text(name: &str) -> Result<String> {
    if !NAMES.contains(&name) {
        return Err(Error::UnknownName(format!("category {name}")));
    }
    if let Some(dir) = std::env::var_os(CATALOG_ENV) {
        let path = PathBuf::from(dir).join(format!("{name}.cat"));
        return Ok(std::fs::read_to_string(path)?);
    }
    Ok(shipped(name).expect("every catalog name is shipped").to_string())
}

/// Load a catalog entry from its category file.
pub fn catalog_load(name: &str) -> Result<SkeletalCategory> {
    catfile::parse(&catalog_text(name)?)
}

/// Build a catalog entry from its constructor.
pub fn build(name: &str) -> Result<SkeletalCategory> {
    match name {
        "ising1" => ising1(),
        "z3" => z3(),
        "toric_code" => toric_code(),
        "tc_z2x_restricted" => tc_z2x_restricted(),
        "ty_z3" => ty_z3(),
        "bilayer_ising" => bilayer_ising(),
        "bilayer_ising_z2x_partial" => bilayer_ising_z2x_partial(),
        _ => Err(Error::UnknownName(format!("category {name}"))),
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

// ----------------------------------------------------------------------
// Ising

fn ising_rule(a: usize, b: usize, c: usize) -> u32 {
    let ch: &[usize] = match (a, b) {
        (0, x) | (x, 0) => return u32::from(x == c),
        (1, 1) => &[0, 2],
        (2, 2) => &[0],
        _ => &[1],
    };
    u32::from(ch.contains(&c))
}

fn ising_s() -> crate::numerics::Mat {
    let h = re(0.5);
    let r = re(std::f64::consts::FRAC_1_SQRT_2);
    crate::numerics::from_rows(3, 3, &[h, r, h, r, re(0.0), -r, h, -r, h])
}

/// Ising data on labels `(one, sigma, psi)` of an existing category.
fn put_ising(c: &mut SkeletalCategory, one: usize, sigma: usize, psi: usize) {
    let r2 = re(std::f64::consts::FRAC_1_SQRT_2);
    let sub = [one, sigma, psi];
    for &a in &sub[1..] {
        for &b in &sub[1..] {
            for &cc in &sub[1..] {
                for &d in &sub {
                    let (es, fs) = c.f_channels(a, b, cc, d);
                    for &e in &es {
                        for &f in &fs {
                            c.f.insert([a, b, cc, d, e, f], ONE);
                        }
                    }
                }
            }
        }
    }
    let f = &mut c.f;
    f.insert([sigma, sigma, sigma, sigma, one, one], r2);
    f.insert([sigma, sigma, sigma, sigma, one, psi], r2);
    f.insert([sigma, sigma, sigma, sigma, psi, one], r2);
    f.insert([sigma, sigma, sigma, sigma, psi, psi], -r2);
    f.insert([sigma, psi, sigma, psi, sigma, sigma], -ONE);
    f.insert([psi, sigma, psi, sigma, sigma, sigma], -ONE);
    let r = &mut c.r;
    r.insert([sigma, sigma, one], exp_ipi(-1.0, 8.0));
    r.insert([sigma, sigma, psi], exp_ipi(3.0, 8.0));
    r.insert([sigma, psi, sigma], -I);
    r.insert([psi, sigma, sigma], -I);
    r.insert([psi, psi, one], -ONE);
}

pub fn ising1() -> Result<SkeletalCategory> {
    let ring = FusionRing::ungraded(names(&["1", "sigma", "psi"]), 0, vec![0, 1, 2], ising_rule);
    let mut c = SkeletalCategory::new("ising1", ring)?;
    put_ising(&mut c, 0, 1, 2);
    c.twists.insert(1, exp_ipi(1.0, 8.0));
    c.twists.insert(2, -ONE);
    c.s = Some(ising_s());
    Ok(c)
}

// ----------------------------------------------------------------------
// Abelian theories

fn abelian(
    name: &str,
    labels: &[&str],
    group: &GroupSpec,
    r: impl Fn(usize, usize) -> C64,
) -> Result<SkeletalCategory> {
    let ring = FusionRing::ungraded(
        names(labels),
        group.identity,
        (0..group.order()).map(|a| group.inv(a)).collect(),
        |a, b, c| u32::from(group.mul(a, b) == c),
    );
    let mut c = SkeletalCategory::new(name, ring)?;
    c.fill_f(|_| ONE);
    for a in 0..group.order() {
        for b in 0..group.order() {
            if a != group.identity && b != group.identity {
                c.r.insert([a, b, group.mul(a, b)], r(a, b));
            }
        }
        if a != group.identity {
            c.twists.insert(a, r(a, a));
        }
    }
    c.s = Some(s_from_twists(&c)?);
    Ok(c)
}

fn xi_pow(k: usize) -> C64 {
    exp_ipi((2 * (k % 3)) as f64, 3.0)
}

pub fn z3() -> Result<SkeletalCategory> {
    abelian("z3", &["1", "omega", "omega*"], &GroupSpec::cyclic(3), |a, b| xi_pow(a * b))
}

fn z2xz2() -> GroupSpec {
    GroupSpec {
        elements: names(&["1", "e", "m", "psi"]),
        table: (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
        identity: 0,
    }
}

/// `R^{ab} = (-1)^{a_m b_e}` with `e = (1,0)`, `m = (0,1)`.
fn toric_r(a: usize, b: usize) -> C64 {
    if (a >> 1) & 1 == 1 && b & 1 == 1 {
        -ONE
    } else {
        ONE
    }
}

pub fn toric_code() -> Result<SkeletalCategory> {
    let mut c = abelian("toric_code", &["1", "e", "m", "psi"], &z2xz2(), toric_r)?;
    c.ring.group = GroupSpec::cyclic(2);
    c.ring.grading = vec![0; 4];
    c.ring.action = vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]];
    Ok(c)
}

/// Toric-code Z2 extension fusion ring with Ising data on `{1, psi, sigma+}`.
pub fn tc_z2x_restricted() -> Result<SkeletalCategory> {
    let labels = names(&["1", "e", "m", "psi", "sigma+", "sigma-"]);
    let l = labels.len();
    let mut ring = FusionRing {
        labels,
        n: vec![0; l * l * l],
        unit: 0,
        dual: vec![0, 1, 2, 3, 4, 5],
        group: GroupSpec::cyclic(2),
        grading: vec![0, 0, 0, 0, 1, 1],
        action: vec![(0..l).collect(), vec![0, 2, 1, 3, 4, 5]],
    };
    for a in 0..4 {
        for b in 0..4 {
            ring.set_n(a, b, a ^ b, 1);
        }
        // e and m exchange the two defects; 1 and psi fix them.
        let flips = a == 1 || a == 2;
        for s in [4, 5] {
            let t = if flips { 9 - s } else { s };
            ring.set_n(a, s, t, 1);
            ring.set_n(s, a, t, 1);
        }
    }
    for s in [4, 5] {
        for t in [4, 5] {
            let chans: [usize; 2] = if s == t { [0, 3] } else { [1, 2] };
            for ch in chans {
                ring.set_n(s, t, ch, 1);
            }
        }
    }
    let mut c = SkeletalCategory::new("tc_z2x_restricted", ring)?;
    let tc = toric_code()?;
    for (k, v) in &tc.f {
        c.f.insert(*k, *v);
    }
    for (k, v) in &tc.r {
        c.r.insert(*k, *v);
    }
    put_ising(&mut c, 0, 4, 3);
    c.twists = tc.twists.clone();
    c.twists.insert(4, exp_ipi(1.0, 8.0));
    c.s = tc.s.clone();
    c.trivial_u_eta = true;
    c.partial = true;
    c.data_labels = Some(vec![0, 3, 4]);
    Ok(c)
}

// ----------------------------------------------------------------------
// Z3 Tambara-Yamagami with defect braiding

/// Defect R-symbols `(R^{aX}_X, R^{Xa}_X, R^{XX}_a)` indexed by `a`.
pub fn ty_z3_defect_r() -> ([C64; 3], [C64; 3], [C64; 3]) {
    let q = |a: usize| xi_pow(a * a);
    let nu = exp_ipi(1.0, 4.0);
    let ax = [q(0), q(1), q(2)];
    let xa = ax;
    let xx = [nu, nu * q(1).conj(), nu * q(2).conj()];
    (ax, xa, xx)
}

pub fn ty_z3() -> Result<SkeletalCategory> {
    let chi = Bicharacter::cyclic(3, 1);
    let mut c = make_tambara_yamagami("ty_z3", &chi, &["1", "omega", "omega*", "X1"])?;
    let x = 3;
    for a in 1..3 {
        for b in 1..3 {
            c.r.insert([a, b, (a + b) % 3], xi_pow(a * b));
        }
        c.twists.insert(a, xi_pow(a * a));
    }
    let (ax, xa, xx) = ty_z3_defect_r();
    for a in 0..3 {
        if a != 0 {
            c.r.insert([a, x, x], ax[a]);
            c.r.insert([x, a, x], xa[a]);
        }
        c.r.insert([x, x, a], xx[a]);
    }
    c.s = Some(s_from_twists(&c)?);
    c.trivial_u_eta = true;
    c.orientation = Orientation::PositiveIsR;
    c.aliases.push(("X_omega".into(), "X1".into()));
    Ok(c)
}

// ----------------------------------------------------------------------
// Bilayer Ising

pub fn bilayer_ising() -> Result<SkeletalCategory> {
    let i = ising1()?;
    let mut c = deligne_product("bilayer_ising", &i, &i)?;
    c.name = "bilayer_ising".into();
    Ok(c)
}

/// Bilayer Ising with layer exchange: 9 anyons and defects `X1, Xsigma, Xpsi`.
///
/// Only the trivial-sector data and the defect data `[F^{X1 X1 X1}_{X1}]`
/// and `R^{X1 X1}_{a.a}` are known.
pub fn bilayer_ising_z2x_partial() -> Result<SkeletalCategory> {
    let base = bilayer_ising()?;
    let l0 = base.len();
    let l = l0 + 3;
    let mut labels = base.ring.labels.clone();
    labels.extend(names(&["X1", "Xsigma", "Xpsi"]));
    let swap = |x: usize| (x % 3) * 3 + x / 3;
    let mut ring = FusionRing {
        labels,
        n: vec![0; l * l * l],
        unit: 0,
        dual: (0..l).collect(),
        group: GroupSpec::cyclic(2),
        grading: (0..l).map(|x| usize::from(x >= l0)).collect(),
        action: vec![(0..l).collect(), (0..l).map(|x| if x < l0 { swap(x) } else { x }).collect()],
    };
    for a in 0..l0 {
        for b in 0..l0 {
            for d in 0..l0 {
                ring.set_n(a, b, d, base.ring.n(a, b, d));
            }
        }
    }
    // X_a ⊗ (p.q) contains X_b with the multiplicity of b in a ⊗ p ⊗ q;
    // X_a ⊗ X_b contains p.q with multiplicity Σ_x N^{ab}_x N^{pq}_x.
    for a in 0..3 {
        for b in 0..3 {
            for p in 0..3 {
                for q in 0..3 {
                    let anyon = p * 3 + q;
                    let through: u32 = (0..3).map(|x| ising_rule(a, p, x) * ising_rule(x, q, b)).sum();
                    ring.set_n(l0 + a, anyon, l0 + b, through);
                    ring.set_n(anyon, l0 + a, l0 + b, through);
                    let pair: u32 = (0..3).map(|x| ising_rule(a, b, x) * ising_rule(p, q, x)).sum();
                    ring.set_n(l0 + a, l0 + b, anyon, pair);
                }
            }
        }
    }
    let mut c = SkeletalCategory::new("bilayer_ising_z2x_partial", ring)?;
    c.f = base.f.clone();
    c.r = base.r.clone();
    c.twists = base.twists.clone();
    c.s = base.s.clone();
    let x = l0;
    let diag = |a: usize| a * 3 + a;
    let s = ising_s();
    let theta = [ONE, exp_ipi(1.0, 8.0), -ONE];
    for a in 0..3 {
        for b in 0..3 {
            c.f.insert([x, x, x, x, diag(a), diag(b)], s[(a, b)]);
        }
        c.r.insert([x, x, diag(a)], theta[a]);
    }
    c.orientation = Orientation::NegativeIsR;
    c.trivial_u_eta = true;
    c.partial = true;
    c.gauge_fill = true;
    c.data_labels = Some((0..l0).collect());
    c.aliases.push(("X".into(), "X1".into()));
    Ok(c)
}
