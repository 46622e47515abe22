//! Realizing a symmetric signature of ℳ − 𝒜 from a permutable matchgate
//! outside 𝒜, as a planar left-side gadget over
//! `{F} | {[1,0], [1,0,1], [1,0,1,0]}`.

use super::mating::{mate_into, MatingRole, MatingSpec};
use super::{contract, GadgetBuilder, GadgetError, GadgetGraph};
use crate::classification::{
    classify_mp_type, is_affine, is_permutable_matchgate, m_minus_a_form, MaForm, MpType,
};
use crate::exactnum::{Mode, Scalar};
use crate::holant::Side;
use crate::matchgate::{mgi_check, normalize, Normalized};
use crate::signature::{bit, Signature, SymmetricSignature};

#[derive(Clone, Debug)]
pub struct SymmetricRealization {
    pub gadget: GadgetGraph,
    /// Equals the contraction of `gadget` exactly.
    pub g: SymmetricSignature,
    pub form: MaForm,
    /// Which branch of the construction produced `g`.
    pub case: String,
}

/// Contracts a candidate and keeps it when the result is a symmetric
/// matchgate signature outside 𝒜.
fn accept(gadget: GadgetGraph, case: &str) -> Result<Option<SymmetricRealization>, GadgetError> {
    let g = contract(&gadget)?;
    let Some(sym) = g.detect_symmetric() else { return Ok(None) };
    if !mgi_check(&g).passed() || is_affine(&g).is_some() {
        return Ok(None);
    }
    let Some(form) = m_minus_a_form(&sym) else { return Ok(None) };
    debug_assert!(gadget.is_left_side());
    Ok(Some(SymmetricRealization { gadget, g: sym, form, case: case.to_string() }))
}

struct Setup<'a> {
    f: &'a Signature,
    mode: Mode,
    /// 1-based variables carrying a `[1,0]` or `[0,1]` factor, with the value.
    unary: Vec<(usize, bool)>,
    /// 1-based variables of the non-unary part `F'`.
    core: Vec<usize>,
}

impl Setup<'_> {
    fn fixed(&self, v: usize) -> Option<bool> {
        self.unary.iter().find(|u| u.0 == v).map(|u| u.1)
    }
}

pub fn realize_symmetric_from_mp(f: &Signature) -> Result<SymmetricRealization, GadgetError> {
    if !is_permutable_matchgate(f).holds {
        return Err(GadgetError::PreconditionViolated("signature is not in M_P".into()));
    }
    if is_affine(f).is_some() {
        return Err(GadgetError::PreconditionViolated("signature is affine".into()));
    }
    let Normalized::Normal { f: norm, cert } = normalize(f) else {
        return Err(GadgetError::PreconditionViolated("signature is zero".into()));
    };
    let n = f.arity();
    let beta = |a: usize| bit(cert.shift, a, n);
    let mode = f.mode();
    match classify_mp_type(&norm)? {
        MpType::Parity { g } => {
            let unary: Vec<(usize, bool)> = (1..=n).filter(|&a| g[a - 1].is_zero()).map(|a| (a, beta(a))).collect();
            let core = (1..=n).filter(|&a| !g[a - 1].is_zero()).collect();
            parity_machine(&Setup { f, mode, unary, core })
        }
        MpType::Matching { hub, weights } => {
            let is_unary = |a: usize| a != hub && weights[a - 1].is_zero();
            let unary: Vec<(usize, bool)> = (1..=n).filter(|&a| is_unary(a)).map(|a| (a, beta(a))).collect();
            let core: Vec<usize> = (1..=n).filter(|&a| !is_unary(a)).collect();
            let setup = Setup { f, mode, unary, core };
            if setup.core.len() <= 2 {
                // two non-unary variables make F' of Parity type as well
                return parity_machine(&setup);
            }
            let reversed: Vec<bool> = (1..=n).map(|a| beta(a) ^ (a == hub)).collect();
            matching_machine(&setup, &reversed)
        }
        other => Err(GadgetError::CaseExhaustion(format!("{} type outside A", other.name()))),
    }
}

/// Table offset of `f` with the unary variables at their value and the core
/// variables at zero.
fn unary_base(s: &Setup) -> usize {
    let n = s.f.arity();
    s.unary.iter().filter(|u| u.1).fold(0, |acc, u| acc | 1 << (n - u.0))
}

/// Gadget for `c · F'` on the core variables: `[1,0]` variables are pinned;
/// `[0,1]` variables are matched with a second copy of `F` whose other
/// variables are pinned to 0 (which needs `F'(0) ≠ 0`).
fn core_gadget(s: &Setup) -> Result<Option<GadgetGraph>, GadgetError> {
    let mut b = GadgetBuilder::new(s.mode);
    let main = b.vertex(s.f.clone(), Some(Side::Left), false);
    let ones: Vec<usize> = s.unary.iter().filter(|u| u.1).map(|u| u.0).collect();
    for u in s.unary.iter().filter(|u| !u.1) {
        b.pin(main[u.0 - 1], 1, 0);
    }
    if !ones.is_empty() {
        if s.f.at(unary_base(s)).is_zero() {
            return Ok(None);
        }
        let other = b.vertex(s.f.clone(), Some(Side::Left), true);
        for v in 1..=s.f.arity() {
            if s.fixed(v) == Some(true) {
                b.join(main[v - 1], other[v - 1]);
            } else {
                b.pin(other[v - 1], 1, 0);
            }
        }
    }
    for &v in &s.core {
        b.dangle(main[v - 1]);
    }
    Ok(Some(b.build()?))
}

fn parity_machine(s: &Setup) -> Result<SymmetricRealization, GadgetError> {
    let Some(core) = core_gadget(s)? else {
        return fallback_mating(s, "parity-2 with [0,1] factors");
    };
    let t = contract(&core)?;
    let k = t.arity();
    if k < 2 {
        return Err(GadgetError::CaseExhaustion("F' has arity below 2".into()));
    }
    if !t.at(0).is_zero() {
        return case_even(&core, &t, "parity-1")?
            .ok_or_else(|| GadgetError::CaseExhaustion("parity case 1 found F in A".into()));
    }
    case_odd(s.mode, &core, &t)
}

/// Pins every core variable except `keep` (0-based slots) to 0.
fn pinned_pair(c: &GadgetGraph, keep: &[usize], mode: Mode) -> Result<GadgetGraph, GadgetError> {
    let mut b = GadgetBuilder::new(mode);
    let ports = b.embed(c, false);
    for (j, &p) in ports.iter().enumerate() {
        if !keep.contains(&j) {
            b.pin(p, 1, 0);
        }
    }
    for &j in keep {
        b.dangle(ports[j]);
    }
    b.build()
}

/// Parity case 1 on a core gadget `c` with table `t = c·[1,0,1,0,…]·Π y^x`.
/// Returns `None` when every `y_a⁴ = 1` (then the core is affine).
fn case_even(c: &GadgetGraph, t: &Signature, label: &str) -> Result<Option<SymmetricRealization>, GadgetError> {
    let k = t.arity();
    let mode = t.mode();
    if k == 2 {
        return accept(c.clone(), label);
    }
    for a in 0..k {
        for b in a + 1..k {
            if let Some(r) = accept(pinned_pair(c, &[a, b], mode)?, &format!("{label}/pin"))? {
                return Ok(Some(r));
            }
        }
    }
    // every (y_a y_b)⁴ = 1: either all y⁴ = 1 or all y⁴ = -1
    let e = |vars: &[usize]| vars.iter().fold(0usize, |acc, &v| acc | 1 << (k - 1 - v));
    let t0 = t.at(0);
    let p = |a: usize, b: usize| t.at(e(&[a, b])) / t0;
    if p(1, 2).is_zero() {
        return Ok(None);
    }
    let y0 = (&(&p(0, 1) * &p(0, 2)) / &p(1, 2)).sqrt_in_field().ok_or(GadgetError::SqrtNotInField)?;
    let y: Vec<Scalar> = (0..k).map(|a| if a == 0 { y0.clone() } else { &p(0, a) / &y0 }).collect();
    let minus_one = Scalar::from_int(-1, mode);
    if y.iter().any(|ya| ya.pow(4) != minus_one) {
        return Ok(None);
    }
    // α-alignment: chains of [1,0,±i] turn every edge into [1,0,α]
    let i = Scalar::i(mode);
    let neg_i = -&i;
    let alpha = Scalar::root_of_unity(1, mode);
    let (a, b) = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .find(|&(a, b)| {
            let prod = &y[a] * &y[b];
            prod == i || prod == neg_i
        })
        .ok_or_else(|| GadgetError::CaseExhaustion("no pair with y_a y_b = ±i".into()))?;
    let unit = pinned_pair(c, &[a, b], mode)?;
    let unit_is_i = &y[a] * &y[b] == i;
    let (copies_i, copies_neg_i) = if unit_is_i { (1, 3) } else { (3, 1) };
    let mut builder = GadgetBuilder::new(mode);
    let ports = builder.embed(c, false);
    let mut ends = Vec::with_capacity(k);
    for (j, &port) in ports.iter().enumerate() {
        let steps = (0..4)
            .find(|&s| &y[j] * &i.pow(s) == alpha)
            .ok_or_else(|| GadgetError::CaseExhaustion("y_a is not an odd power of ζ8".into()))?;
        let copies = match steps {
            0 => 0,
            1 => copies_i,
            2 => 2 * copies_i,
            _ => copies_neg_i,
        };
        let mut prev = port;
        for _ in 0..copies {
            let q = builder.embed(&unit, false);
            builder.join(prev, q[0]);
            prev = q[1];
        }
        ends.push(prev);
    }
    for p in ends {
        builder.dangle(p);
    }
    accept(builder.build()?, &format!("{label}/align"))
}

/// Parity case 2: the central signature is `[0,1,0,1,…]`.
fn case_odd(mode: Mode, c: &GadgetGraph, t: &Signature) -> Result<SymmetricRealization, GadgetError> {
    let k = t.arity();
    if k == 2 {
        // first variables of two copies joined: [y_1², 0, y_2²]
        let mut b = GadgetBuilder::new(mode);
        let p = b.embed(c, false);
        let q = b.embed(c, true);
        b.join(p[0], q[0]);
        b.dangle(p[1]);
        b.dangle(q[1]);
        if let Some(r) = accept(b.build()?, "parity-2/n2")? {
            return Ok(r);
        }
        // three copies on a [1,0,1,0] vertex: [0, y², 0, 1] up to scale
        let mut b = GadgetBuilder::new(mode);
        let w = b.vertex(Signature::symmetric_ints(&[1, 0, 1, 0], mode)?, Some(Side::Right), false);
        let mut firsts = Vec::new();
        for j in 0..3 {
            let p = b.embed(c, false);
            b.link(p[1], w[j]);
            firsts.push(p[0]);
        }
        for p in firsts {
            b.dangle(p);
        }
        return accept(b.build()?, "parity-2/mod3")?
            .ok_or_else(|| GadgetError::CaseExhaustion("parity case 2 with n = 2".into()));
    }
    // ≠₂^{y_a,y_b} from pinning, then attached to variable a (or b) of F
    let (a, bb) = (0, 1);
    let neq = pinned_pair(c, &[a, bb], mode)?;
    for (target, attach, free, label) in [(a, 1, 0, "parity-2/F_a"), (bb, 0, 1, "parity-2/F_b")] {
        let mut b = GadgetBuilder::new(mode);
        let p = b.embed(c, false);
        let q = b.embed(&neq, false);
        b.join(q[attach], p[target]);
        for (j, &port) in p.iter().enumerate() {
            b.dangle(if j == target { q[free] } else { port });
        }
        let fa = b.build()?;
        let ta = contract(&fa)?;
        if let Some(r) = case_even(&fa, &ta, label)? {
            return Ok(r);
        }
    }
    Err(GadgetError::CaseExhaustion("parity case 2 found F in A".into()))
}

/// Generalized mating gadgets for the Matching type (`l` reversed core
/// variables). Roles: `d` dangles, `sums` and every unary variable are
/// Sum-up, other upright variables Fix-to-0, other reversed ones Fix-to-1.
fn matching_machine(s: &Setup, reversed: &[bool]) -> Result<SymmetricRealization, GadgetError> {
    let up: Vec<usize> = s.core.iter().copied().filter(|&v| !reversed[v - 1]).collect();
    let rev: Vec<usize> = s.core.iter().copied().filter(|&v| reversed[v - 1]).collect();
    let l = rev.len();
    let (a, b, c) = match l {
        0 => (up[0], up[1], up[2]),
        1 => (rev[0], up[0], up[1]),
        2 => (up[0], rev[0], rev[1]),
        _ => (rev[0], rev[1], rev[2]),
    };
    let fix1 = match l {
        0 | 1 => None,
        2 => Some(point_001(s, reversed, b)?),
        _ => Some(point_001(s, reversed, c)?),
    };
    let label = format!("matching-l{}", l.min(3));
    let n = s.f.arity();
    let spec = |d: usize, sums: &[usize]| {
        let roles = (1..=n)
            .map(|v| {
                if v == d {
                    MatingRole::Dangling
                } else if sums.contains(&v) || s.fixed(v).is_some() {
                    MatingRole::SumUp
                } else if reversed[v - 1] {
                    MatingRole::Fix1
                } else {
                    MatingRole::Fix0
                }
            })
            .collect();
        MatingSpec::new(roles)
    };
    let candidates = [
        (a, vec![b], "gadget1"),
        (a, vec![c], "gadget1"),
        (a, vec![b, c], "gadget2"),
        (b, vec![a, c], "gadget2"),
        (c, vec![a, b], "gadget2"),
    ];
    let single = GadgetGraph::single(s.f);
    for (d, sums, name) in candidates {
        let mut builder = GadgetBuilder::new(s.mode);
        let (x, y) = mate_into(&mut builder, &single, &spec(d, &sums)?, fix1.as_ref())?;
        builder.dangle(x);
        builder.dangle(y);
        if let Some(r) = accept(builder.build()?, &format!("{label}/{name}"))? {
            return Ok(r);
        }
    }
    Err(GadgetError::CaseExhaustion(format!("{label}: no mating gadget left A")))
}

/// `[0,0,1]` from `F` and `[1,0]`: pin the `[1,0]` variables, the upright
/// core variables and `off` (a reversed variable) to 0, which leaves
/// `[0,1]^{⊗m}`; close `⌊(m-1)/2⌋` self-loops, and if a single `[0,1]`
/// remains take two copies side by side.
fn point_001(s: &Setup, reversed: &[bool], off: usize) -> Result<GadgetGraph, GadgetError> {
    let n = s.f.arity();
    let mut b = GadgetBuilder::new(s.mode);
    let build_one = |b: &mut GadgetBuilder| {
        let ports = b.vertex(s.f.clone(), Some(Side::Left), false);
        let mut free = Vec::new();
        for v in 1..=n {
            let pinned = match s.fixed(v) {
                Some(value) => !value,
                None => !reversed[v - 1] || v == off,
            };
            if pinned {
                b.pin(ports[v - 1], 1, 0);
            } else {
                free.push(ports[v - 1]);
            }
        }
        let loops = free.len().saturating_sub(1) / 2;
        for j in 0..loops {
            b.join(free[2 * j], free[2 * j + 1]);
        }
        free.split_off(2 * loops)
    };
    let rest = build_one(&mut b);
    match rest.len() {
        2 => {
            b.dangle(rest[0]);
            b.dangle(rest[1]);
        }
        1 => {
            let second = build_one(&mut b);
            b.dangle(rest[0]);
            b.dangle(second[0]);
        }
        m => return Err(GadgetError::CaseExhaustion(format!("[0,1]^{m} left after self-loops"))),
    }
    b.build()
}

/// Used when `F = F' ⊗ [0,1]^{⊗q}` with `F'` odd: search mating gadgets with
/// Sum-up/Fix-to-0 roles in a fixed order.
fn fallback_mating(s: &Setup, why: &str) -> Result<SymmetricRealization, GadgetError> {
    let n = s.f.arity();
    let single = GadgetGraph::single(s.f);
    for &d in &s.core {
        let others: Vec<usize> = s.core.iter().copied().filter(|&v| v != d).collect();
        for mask in (0..1usize << others.len()).rev() {
            let roles = (1..=n)
                .map(|v| {
                    if v == d {
                        MatingRole::Dangling
                    } else if s.fixed(v).is_some() {
                        MatingRole::SumUp
                    } else {
                        let j = others.iter().position(|&o| o == v).expect("core variable");
                        if mask >> j & 1 == 1 { MatingRole::SumUp } else { MatingRole::Fix0 }
                    }
                })
                .collect();
            let mut b = GadgetBuilder::new(s.mode);
            let (x, y) = mate_into(&mut b, &single, &MatingSpec::new(roles)?, None)?;
            b.dangle(x);
            b.dangle(y);
            if let Some(r) = accept(b.build()?, "fallback/mating")? {
                return Ok(r);
            }
        }
    }
    Err(GadgetError::CaseExhaustion(why.to_string()))
}
