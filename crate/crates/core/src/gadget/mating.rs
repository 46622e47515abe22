//! Generalized mating gadgets and star gadgets.

use std::fmt;

use super::{contract, GadgetBuilder, GadgetError, GadgetGraph, Port};
use crate::classification::{classify_mp_type, is_permutable_matchgate, MpType};
use crate::exactnum::Scalar;
use crate::holant::Side;
use crate::matchgate::{normalize, Normalized};
use crate::signature::{bit, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatingRole {
    Dangling,
    SumUp,
    Fix0,
    Fix1,
}

impl MatingRole {
    pub fn letter(self) -> char {
        match self {
            MatingRole::Dangling => 'D',
            MatingRole::SumUp => 'S',
            MatingRole::Fix0 => '0',
            MatingRole::Fix1 => '1',
        }
    }
}

/// One role per variable of the mated signature, exactly one `Dangling`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatingSpec {
    roles: Vec<MatingRole>,
}

impl MatingSpec {
    pub fn new(roles: Vec<MatingRole>) -> Result<Self, GadgetError> {
        match roles.iter().filter(|&&r| r == MatingRole::Dangling).count() {
            0 => Err(GadgetError::NoDangling),
            1 => Ok(MatingSpec { roles }),
            _ => Err(GadgetError::MultipleDangling),
        }
    }

    pub fn roles(&self) -> &[MatingRole] {
        &self.roles
    }

    /// 0-based slot of the dangling variable.
    pub fn dangling(&self) -> usize {
        self.roles.iter().position(|&r| r == MatingRole::Dangling).expect("validated")
    }
}

impl fmt::Display for MatingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.roles.iter().map(|r| r.letter()).collect();
        f.write_str(&s)
    }
}

impl GadgetGraph {
    /// One left vertex carrying `f`, every variable dangling.
    pub fn single(f: &Signature) -> GadgetGraph {
        let mut b = GadgetBuilder::new(f.mode());
        for p in b.vertex(f.clone(), Some(Side::Left), false) {
            b.dangle(p);
        }
        b.build().expect("single vertex gadget is well formed")
    }
}

/// Mates two copies of the left-side gadget `sub` (the second one mirrored so
/// the parallel connections stay planar). Sum-up variables meet through
/// `[1,0,1]`, Fix-to-0 variables are pinned by `[1,0]` on both copies, and
/// Fix-to-1 variables meet through `fix1` (a binary left-side gadget) or,
/// when it is absent, a right vertex `[0,0,1]`. The dangling variable of the
/// first copy is output variable 1.
pub(crate) fn mate_into(
    b: &mut GadgetBuilder,
    sub: &GadgetGraph,
    spec: &MatingSpec,
    fix1: Option<&GadgetGraph>,
) -> Result<(Port, Port), GadgetError> {
    let n = sub.dangling().len();
    if spec.roles.len() != n {
        return Err(GadgetError::SpecLength { expected: n, got: spec.roles.len() });
    }
    let mode = sub.mode();
    let pa = b.embed(sub, false);
    let pb = b.embed(sub, true);
    for (a, role) in spec.roles.iter().enumerate() {
        match role {
            MatingRole::Dangling => {}
            MatingRole::SumUp => b.join(pa[a], pb[a]),
            MatingRole::Fix0 => {
                b.pin(pa[a], 1, 0);
                b.pin(pb[a], 1, 0);
            }
            MatingRole::Fix1 => match fix1 {
                Some(g) => {
                    let q = b.embed(g, false);
                    b.join(pa[a], q[0]);
                    b.join(q[1], pb[a]);
                }
                None => {
                    let w = b.vertex(Signature::symmetric_ints(&[0, 0, 1], mode)?, Some(Side::Right), false);
                    b.link(pa[a], w[0]);
                    b.link(w[1], pb[a]);
                }
            },
        }
    }
    let d = spec.dangling();
    Ok((pa[d], pb[d]))
}

/// Generalized mating gadget of `f`: contraction is
/// `g(x, y) = Σ_z f(x, z) f(y, z)` over the Sum-up variables, with Fix
/// variables held at their value. `[1,0,0]` is realized as two `[1,0]` pins.
pub fn mating_gadget(f: &Signature, spec: &MatingSpec) -> Result<GadgetGraph, GadgetError> {
    if spec.roles.len() != f.arity() {
        return Err(GadgetError::SpecLength { expected: f.arity(), got: spec.roles.len() });
    }
    let mut b = GadgetBuilder::new(f.mode());
    let (x, y) = mate_into(&mut b, &GadgetGraph::single(f), spec, None)?;
    b.dangle(x);
    b.dangle(y);
    b.build()
}

/// Central symmetric signature with a chain of binary edge signatures per
/// variable (listed from the center outward). `target = scale · contract`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarGadget {
    pub center: Signature,
    pub chains: Vec<Vec<Signature>>,
    pub scale: Scalar,
    pub mp_type: MpType,
}

impl StarGadget {
    pub fn to_gadget(&self) -> Result<GadgetGraph, GadgetError> {
        let mut b = GadgetBuilder::new(self.center.mode());
        let center = b.vertex(self.center.clone(), None, false);
        let mut ends = Vec::with_capacity(center.len());
        for (a, chain) in self.chains.iter().enumerate() {
            let mut prev = center[a];
            for link in chain {
                let v = b.vertex(link.clone(), None, false);
                b.link(prev, v[0]);
                prev = v[1];
            }
            ends.push(prev);
        }
        for p in ends {
            b.dangle(p);
        }
        b.build()
    }

    /// `scale · contract(star)`.
    pub fn evaluate(&self) -> Result<Signature, GadgetError> {
        Ok(contract(&self.to_gadget()?)?.scale(&self.scale))
    }
}

impl fmt::Display for StarGadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "type:   {}", self.mp_type)?;
        writeln!(f, "center: {}", self.center)?;
        for (a, chain) in self.chains.iter().enumerate() {
            let links: Vec<String> = chain.iter().map(|s| s.to_string()).collect();
            let body = if links.is_empty() { "-".to_string() } else { links.join(" - ") };
            writeln!(f, "x{}:     {}", a + 1, body)?;
        }
        write!(f, "scale:  {}", self.scale)
    }
}

fn binary(v: [Scalar; 3]) -> Signature {
    Signature::symmetric(&v).expect("binary")
}

/// Star gadget realizing a permutable matchgate `F'` from its normalization
/// `F'(α) = scale · F(α ⊕ β)`: Pinning uses `[1,0,…,0]`, Parity uses the
/// parity signature matching `|β|` with edges `[1,0,G(a)]` (or `[G(a),0,1]`
/// on shifted variables), Matching uses `[0,1,0,…,0]` with `[0,1,0]` at the
/// hub and `[1,0,G(a)]` elsewhere; every shifted variable gets one more
/// `[0,1,0]` (two of them at the hub cancel).
pub fn synthesize_star(f: &Signature) -> Result<StarGadget, GadgetError> {
    if !is_permutable_matchgate(f).holds {
        return Err(GadgetError::NotPermutableMatchgate);
    }
    let Normalized::Normal { f: norm, cert } = normalize(f) else {
        return Err(GadgetError::PreconditionViolated("the zero signature has no star gadget".into()));
    };
    let n = f.arity();
    let mode = f.mode();
    let (zero, one) = (Scalar::zero(mode), Scalar::one(mode));
    let flip = || binary([zero.clone(), one.clone(), zero.clone()]);
    let shifted = |a: usize| bit(cert.shift, a, n);
    let mp_type = classify_mp_type(&norm)?;
    let ints = |v: Vec<i64>| Signature::symmetric_ints(&v, mode).expect("symmetric");
    let (center, chains) = match &mp_type {
        MpType::Pinning => {
            let chains = (1..=n).map(|a| if shifted(a) { vec![flip()] } else { vec![] }).collect();
            (ints((0..=n).map(|w| i64::from(w == 0)).collect()), chains)
        }
        MpType::Parity { g } => {
            let parity = cert.shift.count_ones() as usize % 2;
            let chains = (1..=n)
                .map(|a| {
                    let y = g[a - 1].clone();
                    if shifted(a) {
                        vec![binary([y, zero.clone(), one.clone()])]
                    } else {
                        vec![binary([one.clone(), zero.clone(), y])]
                    }
                })
                .collect();
            (ints((0..=n).map(|w| i64::from(w % 2 == parity)).collect()), chains)
        }
        MpType::Matching { hub, weights } => {
            let chains = (1..=n)
                .map(|a| {
                    if a == *hub {
                        if shifted(a) { vec![] } else { vec![flip()] }
                    } else {
                        let mut c = vec![binary([one.clone(), zero.clone(), weights[a - 1].clone()])];
                        if shifted(a) {
                            c.push(flip());
                        }
                        c
                    }
                })
                .collect();
            (ints((0..=n).map(|w| i64::from(w == 1)).collect()), chains)
        }
        MpType::SmallArity => {
            return Err(GadgetError::CaseExhaustion("permutable matchgate of no known type".into()));
        }
    };
    let star = StarGadget { center, chains, scale: cert.scale.clone(), mp_type };
    if &star.evaluate()? != f {
        return Err(GadgetError::CaseExhaustion("star contraction differs from the target".into()));
    }
    Ok(star)
}
