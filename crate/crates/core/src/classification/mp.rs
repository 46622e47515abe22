//! Permutable matchgate signatures (ℳ_P) and their Pinning / Parity /
//! Matching typing.

use std::fmt;

use crate::exactnum::Scalar;
use crate::matchgate::{mgi_check, normalize, IndexExpression, MgiVerdict, Normalized};
use crate::signature::Signature;

use super::ClassError;

#[derive(Clone, Debug, PartialEq)]
pub enum MpWitness {
    /// The signature is identically zero.
    Trivial,
    NotMatchgate { beta: usize, gamma: usize },
    /// Arity below 4: every matchgate is permutable.
    SmallArity,
    /// All quadruple product equalities hold.
    QuadruplesHold,
    /// `F(ab)F(cd)`, `F(ac)F(bd)`, `F(ad)F(bc)` are not all equal.
    QuadrupleFails { quad: [usize; 4] },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpVerdict {
    pub holds: bool,
    pub witness: MpWitness,
}

impl fmt::Display for MpVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            MpWitness::Trivial => write!(f, "yes (zero signature)"),
            MpWitness::NotMatchgate { .. } => write!(f, "no (not a matchgate)"),
            MpWitness::SmallArity => write!(f, "yes (arity < 4)"),
            MpWitness::QuadruplesHold => write!(f, "yes (all quadruple products agree)"),
            MpWitness::QuadrupleFails { quad: [a, b, c, d] } => {
                write!(f, "no (products differ on quadruple {a}{b}{c}{d})")
            }
        }
    }
}

/// First quadruple `a<b<c<d` where the three pair products are not all equal.
pub fn product_violation(norm: &Signature) -> Option<[usize; 4]> {
    let fx = IndexExpression::new(norm);
    let n = norm.arity();
    let p = |a, b| fx.pair(a, b);
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    let x = p(a, b) * p(c, d);
                    let y = p(a, c) * p(b, d);
                    let z = p(a, d) * p(b, c);
                    if x != y || y != z {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Decides `f ∈ ℳ_P` by the quadruple product equalities on the normalized
/// form of a matchgate.
pub fn is_permutable_matchgate(f: &Signature) -> MpVerdict {
    let Normalized::Normal { f: norm, .. } = normalize(f) else {
        return MpVerdict { holds: true, witness: MpWitness::Trivial };
    };
    if let MgiVerdict::Fail { beta, gamma } = mgi_check(f) {
        return MpVerdict { holds: false, witness: MpWitness::NotMatchgate { beta, gamma } };
    }
    if norm.arity() < 4 {
        return MpVerdict { holds: true, witness: MpWitness::SmallArity };
    }
    match product_violation(&norm) {
        None => MpVerdict { holds: true, witness: MpWitness::QuadruplesHold },
        Some(quad) => MpVerdict { holds: false, witness: MpWitness::QuadrupleFails { quad } },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MpType {
    /// All `F(ab) = 0`.
    Pinning,
    /// `F(ab) = G(a)G(b)` for all `a ≠ b`; `g[a-1] = G(a)`.
    Parity { g: Vec<Scalar> },
    /// `F(st) = 0` unless one of `s, t` is the hub; `weights[a-1] = F(hub a)`
    /// (zero at the hub itself).
    Matching { hub: usize, weights: Vec<Scalar> },
    /// Arity below 4 with none of the predicates holding.
    SmallArity,
}

impl MpType {
    pub fn name(&self) -> &'static str {
        match self {
            MpType::Pinning => "pinning",
            MpType::Parity { .. } => "parity",
            MpType::Matching { .. } => "matching",
            MpType::SmallArity => "small-arity",
        }
    }
}

impl fmt::Display for MpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Scalar]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            MpType::Pinning => write!(f, "Pinning"),
            MpType::Parity { g } => write!(f, "Parity G=({})", list(g)),
            MpType::Matching { hub, weights } => write!(f, "Matching hub={hub} weights=({})", list(weights)),
            MpType::SmallArity => write!(f, "SmallArity"),
        }
    }
}

fn first_triangle(fx: &IndexExpression) -> Option<(usize, usize, usize)> {
    let n = fx.arity();
    for a in 1..=n {
        for b in a + 1..=n {
            if fx.pair(a, b).is_zero() {
                continue;
            }
            for c in b + 1..=n {
                if !fx.pair(a, c).is_zero() && !fx.pair(b, c).is_zero() {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Types a normalized permutable matchgate. Parity wins whenever its
/// predicate holds.
pub fn classify_mp_type(norm: &Signature) -> Result<MpType, ClassError> {
    if !norm.at(0).is_one() {
        return Err(ClassError::PreconditionViolated("signature is not normalized".into()));
    }
    if !is_permutable_matchgate(norm).holds {
        return Err(ClassError::PreconditionViolated("not a permutable matchgate signature".into()));
    }
    let fx = IndexExpression::new(norm);
    let n = norm.arity();
    let all_zero = (1..=n).all(|a| (a + 1..=n).all(|b| fx.pair(a, b).is_zero()));
    if all_zero {
        return Ok(MpType::Pinning);
    }
    if first_triangle(&fx).is_some() {
        return Ok(MpType::Parity { g: parity_witness(norm)? });
    }
    match matching_hub(norm) {
        Ok((hub, weights)) => Ok(MpType::Matching { hub, weights }),
        Err(ClassError::NoHub) if n < 4 => Ok(MpType::SmallArity),
        Err(e) => Err(e),
    }
}

/// `G` with `F(ab) = G(a)G(b)`, built from the first triangle `(a,b,c)`:
/// `G(a) = √(F(ab)F(ac)/F(bc))` and `G(d) = F(ad)/G(a)` otherwise. The global
/// sign makes the first nonzero `G` a principal square root.
pub fn parity_witness(norm: &Signature) -> Result<Vec<Scalar>, ClassError> {
    let fx = IndexExpression::new(norm);
    let n = norm.arity();
    let (a, b, c) = first_triangle(&fx)
        .ok_or_else(|| ClassError::PreconditionViolated("no a,b,c with F(ab)F(ac)F(bc) ≠ 0".into()))?;
    let ratio = &(fx.pair(a, b) * fx.pair(a, c)) / fx.pair(b, c);
    let ga = ratio.sqrt_in_field().ok_or(ClassError::SqrtNotInField)?;
    let mut g: Vec<Scalar> = (1..=n)
        .map(|d| if d == a { ga.clone() } else { fx.pair(a, d) / &ga })
        .collect();
    if let Some(first) = g.iter().find(|s| !s.is_zero()) {
        if !first.is_canonical_sign() {
            g = g.iter().map(|s| -s).collect();
        }
    }
    for s in 1..=n {
        for t in s + 1..=n {
            if fx.pair(s, t) != &(&g[s - 1] * &g[t - 1]) {
                return Err(ClassError::PreconditionViolated(format!(
                    "F({s}{t}) is not G({s})G({t}); not of parity type"
                )));
            }
        }
    }
    Ok(g)
}

/// Smallest `x` with `F(st) = 0` for all `s, t ≠ x`, after checking that
/// `F(B) = 0` for every even `|B| ≥ 4`. Returns the hub and `F(x a)`.
pub fn matching_hub(norm: &Signature) -> Result<(usize, Vec<Scalar>), ClassError> {
    let fx = IndexExpression::new(norm);
    let n = norm.arity();
    let mode = norm.mode();
    let hub = (1..=n)
        .find(|&x| {
            (1..=n).all(|s| s == x || (s + 1..=n).all(|t| t == x || fx.pair(s, t).is_zero()))
        })
        .ok_or(ClassError::NoHub)?;
    let big_nonzero = (0..norm.len()).any(|x| x.count_ones() >= 4 && !norm.at(x).is_zero());
    if big_nonzero {
        return Err(ClassError::NoHub);
    }
    let weights = (1..=n)
        .map(|a| if a == hub { Scalar::zero(mode) } else { fx.pair(hub, a).clone() })
        .collect();
    Ok((hub, weights))
}
