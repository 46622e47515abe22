//! Binary signatures from a non-degenerate signature, for the planar
//! bounded-degree #CSP dichotomy.

use super::mating::{mate_into, mating_gadget, MatingRole, MatingSpec};
use super::{contract, GadgetBuilder, GadgetError, GadgetGraph};
use crate::exactnum::Scalar;
use crate::signature::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryKind {
    /// A rank-2 binary signature.
    NondegBinary,
    /// `[0,0,1]` up to a nonzero scalar.
    Point001,
}

impl BinaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BinaryKind::NondegBinary => "nondeg_binary",
            BinaryKind::Point001 => "point_001",
        }
    }
}

fn is_nondegenerate(f: &Signature) -> bool {
    f.arity() >= 2 && f.is_degenerate().is_none()
}

/// Mating roles over `f`: arity 2 mates directly; a non-degenerate pin
/// `f^{x_i=c}` recurses and marks `x_i` Fix-to-c; otherwise `x_1` dangles
/// and everything else is summed, giving `[f²(0α), 0, f²(1ᾱ)]`.
fn nondeg_roles(f: &Signature) -> Result<Vec<MatingRole>, GadgetError> {
    let k = f.arity();
    if k == 2 {
        return Ok(vec![MatingRole::Dangling, MatingRole::SumUp]);
    }
    for i in 1..=k {
        for (c, role) in [(false, MatingRole::Fix0), (true, MatingRole::Fix1)] {
            let p = f.pin(&[(i, c)])?;
            if is_nondegenerate(&p) {
                let mut roles = nondeg_roles(&p)?;
                roles.insert(i - 1, role);
                return Ok(roles);
            }
        }
    }
    let mut roles = vec![MatingRole::SumUp; k];
    roles[0] = MatingRole::Dangling;
    Ok(roles)
}

/// A generalized mating gadget over `{f} | {[1,0], [0,0,1], [1,0,1]}` whose
/// contraction is a non-degenerate binary signature.
pub fn realize_nondeg_binary(f: &Signature) -> Result<GadgetGraph, GadgetError> {
    if !is_nondegenerate(f) {
        return Err(GadgetError::DegenerateInput);
    }
    let gadget = mating_gadget(f, &MatingSpec::new(nondeg_roles(f)?)?)?;
    if !is_nondegenerate(&contract(&gadget)?) {
        return Err(GadgetError::CaseExhaustion("mating gadget contracted to a degenerate binary".into()));
    }
    Ok(gadget)
}

/// Pins slots of `base` to 0 and leaves the others dangling in order.
fn pin_slots(base: &GadgetGraph, zero: &[usize]) -> Result<GadgetGraph, GadgetError> {
    let mut b = GadgetBuilder::new(base.mode());
    let ports = b.embed(base, false);
    for (j, &p) in ports.iter().enumerate() {
        if zero.contains(&j) {
            b.pin(p, 1, 0);
        } else {
            b.dangle(p);
        }
    }
    b.build()
}

/// Two copies of `h ∝ [0,1]^{⊗m}` mated with one dangling variable: `[0,0,1]`.
fn mate_all_sum(h: &GadgetGraph) -> Result<GadgetGraph, GadgetError> {
    let m = h.dangling().len();
    let mut roles = vec![MatingRole::SumUp; m];
    roles[0] = MatingRole::Dangling;
    let mut b = GadgetBuilder::new(h.mode());
    let (x, y) = mate_into(&mut b, h, &MatingSpec::new(roles)?, None)?;
    b.dangle(x);
    b.dangle(y);
    b.build()
}

/// Either a non-degenerate binary or `[0,0,1]`, over `{f} | {[1,0], [1,0,1]}`.
pub fn realize_binary_or_001(f: &Signature) -> Result<(GadgetGraph, BinaryKind), GadgetError> {
    if !is_nondegenerate(f) {
        return Err(GadgetError::DegenerateInput);
    }
    let (gadget, kind) = binary_or_001(GadgetGraph::single(f), f)?;
    let g = contract(&gadget)?;
    let ok = match kind {
        BinaryKind::NondegBinary => is_nondegenerate(&g),
        BinaryKind::Point001 => (0..3).all(|x| g.at(x).is_zero()) && !g.at(3).is_zero(),
    };
    if !ok {
        return Err(GadgetError::CaseExhaustion(format!("{} construction did not verify", kind.name())));
    }
    Ok((gadget, kind))
}

/// `base` realizes `s` (same variable order).
fn binary_or_001(base: GadgetGraph, s: &Signature) -> Result<(GadgetGraph, BinaryKind), GadgetError> {
    let k = s.arity();
    if k == 2 {
        return Ok((base, BinaryKind::NondegBinary));
    }
    for i in 1..=k {
        let p = s.pin(&[(i, false)])?;
        if is_nondegenerate(&p) {
            return binary_or_001(pin_slots(&base, &[i - 1])?, &p);
        }
    }
    // every f^{x_i=0} is degenerate; take one that is not identically zero
    let (i, factors) = (1..=k)
        .find_map(|i| {
            let p = s.pin(&[(i, false)]).ok()?;
            if p.is_zero() {
                return None;
            }
            p.is_degenerate().map(|fs| (i, fs))
        })
        .ok_or_else(|| GadgetError::CaseExhaustion("all zero-pins vanish".into()))?;
    let others: Vec<usize> = (1..=k).filter(|&j| j != i).collect();
    let in_l: Vec<bool> = factors.iter().map(|u| !u.at(0).is_zero()).collect();
    if in_l.iter().any(|&x| !x) {
        // pinning x_i and the L variables leaves c·[0,1]^{⊗m}
        let mut zero = vec![i - 1];
        zero.extend(others.iter().zip(&in_l).filter(|(_, &l)| l).map(|(&j, _)| j - 1));
        let h = pin_slots(&base, &zero)?;
        return Ok((mate_all_sum(&h)?, BinaryKind::Point001));
    }
    // f = ⊗[1, b_j] + d·[0,1]^{⊗k} up to scale
    let f0 = s.at(0);
    let b: Vec<Scalar> = (1..=k).map(|j| s.at(1 << (k - j)) / f0).collect();
    let mode = s.mode();
    let (pi, mi) = (Scalar::i(mode), -&Scalar::i(mode));
    let unary = |j: usize| pin_slots(&base, &(0..k).filter(|&x| x != j).collect::<Vec<_>>());
    if let Some(j) = b.iter().position(|bj| bj == &pi || bj == &mi) {
        // [1, b_j] on x_j kills the product part: h ∝ [0,1]^{⊗k-1}
        let mut builder = GadgetBuilder::new(mode);
        let ports = builder.embed(&base, false);
        let p = builder.embed(&unary(j)?, false);
        builder.join(ports[j], p[0]);
        for (x, &port) in ports.iter().enumerate() {
            if x != j {
                builder.dangle(port);
            }
        }
        let h = builder.build()?;
        return Ok((mate_all_sum(&h)?, BinaryKind::Point001));
    }
    // attach p_j = [1, b_j] to every variable outside a kept pair
    for u in 0..k {
        for v in u + 1..k {
            let mut builder = GadgetBuilder::new(mode);
            let ports = builder.embed(&base, false);
            for j in (0..k).filter(|&j| j != u && j != v) {
                let p = builder.embed(&unary(j)?, false);
                builder.join(ports[j], p[0]);
            }
            builder.dangle(ports[u]);
            builder.dangle(ports[v]);
            let g = builder.build()?;
            if is_nondegenerate(&contract(&g)?) {
                return Ok((g, BinaryKind::NondegBinary));
            }
        }
    }
    // some b_j = 0 kills d'; mate two copies instead
    for d in 0..k {
        let mut roles = vec![MatingRole::SumUp; k];
        roles[d] = MatingRole::Dangling;
        let mut builder = GadgetBuilder::new(mode);
        let (x, y) = mate_into(&mut builder, &base, &MatingSpec::new(roles)?, None)?;
        builder.dangle(x);
        builder.dangle(y);
        let g = builder.build()?;
        if is_nondegenerate(&contract(&g)?) {
            return Ok((g, BinaryKind::NondegBinary));
        }
    }
    Err(GadgetError::CaseExhaustion("no rank-2 binary found".into()))
}
