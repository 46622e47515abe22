//! Matchgate identities, normalization, pairing expansions and the
//! permutation-preservation test.

mod normalize;
mod pairing;
mod pfaffian;

use std::collections::HashMap;

use thiserror::Error;

use crate::exactnum::Scalar;
use crate::signature::{bits_string, SigError, Signature};

pub use normalize::{denormalize, normalize, xor_shift, NormalizationCertificate, Normalized};
pub use pairing::{
    cross_parity, crossing_count, crossings_between, enumerate_pairings, Pairing, Pairings,
};
pub use pfaffian::{
    generate_from_pairs, pfaffian_expand, pfaffian_recurrence, IndexExpression, MAX_ENUMERATED,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchgateError {
    #[error("index set has odd size {0}")]
    OddSize(usize),
    #[error("index sets are not disjoint")]
    NotDisjoint,
    #[error("index set of size {0} is too large to enumerate exactly")]
    TooLarge(usize),
    #[error("no value given for pair ({0}, {1})")]
    MissingPair(usize, usize),
    #[error("signature is not a matchgate signature")]
    NotAMatchgate,
    #[error(transparent)]
    Signature(#[from] SigError),
}

/// Outcome of the MGI scan. Offsets use the signature's index convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MgiVerdict {
    Pass,
    Fail { beta: usize, gamma: usize },
}

impl MgiVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, MgiVerdict::Pass)
    }
}

fn reverse_bits(x: usize, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    x.reverse_bits() >> (usize::BITS as usize - n)
}

/// Checks `Σ_j (-1)^j f(β ⊕ e_pj) f(γ ⊕ e_pj) = 0` for all β, γ, where
/// `p1 < … < pl` are the positions where β and γ differ.
///
/// Only pairs of support points contribute: a term with `x = β ⊕ e_p`,
/// `y = γ ⊕ e_p` has `x ⊕ y = β ⊕ γ`, so sums are accumulated per `(β, β ⊕ γ)`
/// from the support pairs. On failure the witness is the least violating
/// `(β, γ)` comparing the strings `βn…β1` then `γn…γ1` (colexicographic).
pub fn mgi_check(f: &Signature) -> MgiVerdict {
    let n = f.arity();
    let support = f.support();
    let mut sums: HashMap<(usize, usize), Scalar> = HashMap::new();
    for &x in &support {
        for &y in &support {
            let d = x ^ y;
            if d == 0 {
                continue;
            }
            let prod = f.at(x) * f.at(y);
            // walk positions of d from variable 1 (highest bit) downwards
            let mut rank = 0;
            let mut bits = d;
            while bits != 0 {
                let top = usize::BITS as usize - 1 - bits.leading_zeros() as usize;
                bits &= !(1 << top);
                rank += 1;
                let beta = x ^ (1 << top);
                let entry = sums.entry((beta, d)).or_insert_with(|| Scalar::zero(f.mode()));
                *entry = if rank % 2 == 0 { &*entry + &prod } else { &*entry - &prod };
            }
        }
    }
    sums.into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((beta, d), _)| (beta, beta ^ d))
        .min_by_key(|&(b, g)| (reverse_bits(b, n), reverse_bits(g, n)))
        .map_or(MgiVerdict::Pass, |(beta, gamma)| MgiVerdict::Fail { beta, gamma })
}

/// Formats an MGI witness as `β=… γ=…`.
pub fn describe_witness(verdict: &MgiVerdict, arity: usize) -> Option<String> {
    match verdict {
        MgiVerdict::Pass => None,
        MgiVerdict::Fail { beta, gamma } => Some(format!(
            "β={} γ={}",
            bits_string(*beta, arity),
            bits_string(*gamma, arity)
        )),
    }
}

/// Matchgate membership by the full identity scan.
pub fn is_matchgate(f: &Signature) -> MgiVerdict {
    mgi_check(f)
}

/// Membership through the pairing expansion: all odd-weight entries of the
/// normalized form vanish and `F(B) = Σ_M (-1)^c(M) Π F(ab)` for every even
/// `|B| ≥ 4`. `None` outside the expansion's domain (zero signatures and
/// normalized forms with odd-weight support).
pub fn is_matchgate_by_expansion(f: &Signature) -> Option<bool> {
    let Normalized::Normal { f: norm, .. } = normalize(f) else {
        return None;
    };
    let odd_support = norm
        .entries()
        .iter()
        .enumerate()
        .any(|(x, e)| x.count_ones() % 2 == 1 && !e.is_zero());
    if odd_support {
        return None;
    }
    let n = norm.arity();
    let fx = IndexExpression::new(&norm);
    for x in 0..norm.len() {
        if x.count_ones() < 4 || x.count_ones() % 2 == 1 {
            continue;
        }
        let set: Vec<usize> = (1..=n).filter(|&v| x & (1 << (n - v)) != 0).collect();
        let value = if set.len() <= MAX_ENUMERATED {
            pfaffian_expand(&fx, &set)
        } else {
            pfaffian_recurrence(&fx, &set)
        }
        .expect("even set");
        if &value != norm.at(x) {
            return Some(false);
        }
    }
    Some(true)
}

/// First quadruple `a < b < c < d` (lexicographic) where
/// `F(abcd) ≠ F(ab)F(cd) - F(ac)F(bd) + F(ad)F(bc)`.
pub fn quadruple_violation(norm: &Signature) -> Option<[usize; 4]> {
    let fx = IndexExpression::new(norm);
    let n = norm.arity();
    let p = |a, b| fx.pair(a, b);
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    let rhs = &(&(p(a, b) * p(c, d)) - &(p(a, c) * p(b, d))) + &(p(a, d) * p(b, c));
                    if fx.get(&[a, b, c, d]) != &rhs {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Whether `f_π` is still a matchgate signature, decided by the quadruple
/// expansion on the permuted normalized form. `f` must itself be a matchgate.
pub fn permutation_preserves_matchgate(f: &Signature, pi: &[usize]) -> Result<bool, MatchgateError> {
    if !mgi_check(f).passed() {
        return Err(MatchgateError::NotAMatchgate);
    }
    let Normalized::Normal { f: norm, .. } = normalize(f) else {
        return Ok(true);
    };
    let permuted = norm.permute(pi)?;
    if permuted.arity() < 4 {
        return Ok(true);
    }
    Ok(quadruple_violation(&permuted).is_none())
}
