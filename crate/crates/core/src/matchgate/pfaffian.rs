//! Pairing expansions of normalized even-parity matchgate signatures.

use std::collections::{BTreeMap, HashMap};

use super::pairing::enumerate_pairings;
use super::MatchgateError;
use crate::exactnum::{Mode, Scalar};
use crate::signature::{check_arity, index_of, Signature};

/// Largest index set `pfaffian_expand` enumerates in exact mode.
pub const MAX_ENUMERATED: usize = 12;

/// Reads a normalized signature by sets of 1-positions: `F(b1…bk)`.
#[derive(Clone, Copy, Debug)]
pub struct IndexExpression<'a> {
    f: &'a Signature,
}

impl<'a> IndexExpression<'a> {
    pub fn new(f: &'a Signature) -> Self {
        IndexExpression { f }
    }

    pub fn signature(&self) -> &'a Signature {
        self.f
    }

    pub fn arity(&self) -> usize {
        self.f.arity()
    }

    /// `F(B)` for a set of 1-based indices (any order).
    pub fn get(&self, set: &[usize]) -> &'a Scalar {
        self.f.at(index_of(set, self.f.arity()))
    }

    pub fn pair(&self, a: usize, b: usize) -> &'a Scalar {
        self.get(&[a, b])
    }
}

/// Signed sum over all pairings `M` of `B` of `(-1)^c(M) Π F(ab)`.
///
/// Exact mode enumerates pairings and refuses `|B| > 12`; float mode uses the
/// row-expansion recurrence.
pub fn pfaffian_expand(f: &IndexExpression, set: &[usize]) -> Result<Scalar, MatchgateError> {
    if !set.len().is_multiple_of(2) {
        return Err(MatchgateError::OddSize(set.len()));
    }
    let mode = f.signature().mode();
    if mode == Mode::Float {
        return pfaffian_recurrence(f, set);
    }
    if set.len() > MAX_ENUMERATED {
        return Err(MatchgateError::TooLarge(set.len()));
    }
    let mut total = Scalar::zero(mode);
    for m in enumerate_pairings(set)? {
        let mut term = Scalar::one(mode);
        for &(a, b) in &m.pairs {
            term = &term * f.pair(a, b);
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        total = if m.crossing_count() % 2 == 0 { &total + &term } else { &total - &term };
    }
    Ok(total)
}

/// Expansion on the smallest index: `Pf(B) = Σ_j (-1)^j F(b1 bj) Pf(B - b1 - bj)`,
/// memoized on sub-multisets of `B`.
pub fn pfaffian_recurrence(f: &IndexExpression, set: &[usize]) -> Result<Scalar, MatchgateError> {
    if !set.len().is_multiple_of(2) {
        return Err(MatchgateError::OddSize(set.len()));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let mut memo = HashMap::new();
    Ok(pf_rec(f, &sorted, (1u64 << sorted.len()) - 1, &mut memo))
}

fn pf_rec(
    f: &IndexExpression,
    set: &[usize],
    mask: u64,
    memo: &mut HashMap<u64, Scalar>,
) -> Scalar {
    let mode = f.signature().mode();
    if mask == 0 {
        return Scalar::one(mode);
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << first);
    let mut total = Scalar::zero(mode);
    let mut position = 1; // 1-based position of the partner among the members
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        position += 1;
        let w = f.pair(set[first], set[j]);
        if w.is_zero() {
            continue;
        }
        let sub = pf_rec(f, set, rest & !(1 << j), memo);
        let term = w * &sub;
        total = if position % 2 == 0 { &total + &term } else { &total - &term };
    }
    memo.insert(mask, total.clone());
    total
}

/// Builds the normalized even-parity matchgate with the given pair values:
/// `F(∅) = 1`, `F(ab)` as given, `F(B)` the pairing expansion for `|B| ≥ 4`,
/// odd-weight entries 0.
pub fn generate_from_pairs(
    n: usize,
    pair_values: &BTreeMap<(usize, usize), Scalar>,
    mode: Mode,
) -> Result<Signature, MatchgateError> {
    check_arity(n)?;
    let mut pair = vec![vec![Scalar::zero(mode); n + 1]; n + 1];
    for a in 1..=n {
        for b in a + 1..=n {
            let v = pair_values
                .get(&(a, b))
                .or_else(|| pair_values.get(&(b, a)))
                .ok_or(MatchgateError::MissingPair(a, b))?;
            pair[a][b] = v.clone();
            pair[b][a] = v.clone();
        }
    }
    // table indexed by offset; variable v is bit n - v
    let size = 1usize << n;
    let mut table = vec![Scalar::zero(mode); size];
    table[0] = Scalar::one(mode);
    for x in 1..size {
        if x.count_ones() % 2 == 1 {
            continue;
        }
        // smallest variable = highest set bit
        let top = usize::BITS as usize - 1 - x.leading_zeros() as usize;
        let first = n - top;
        let rest = x & !(1 << top);
        let mut total = Scalar::zero(mode);
        let mut position = 1;
        for v in first + 1..=n {
            let b = 1usize << (n - v);
            if rest & b == 0 {
                continue;
            }
            position += 1;
            let w = &pair[first][v];
            if w.is_zero() {
                continue;
            }
            let term = w * &table[rest & !b];
            total = if position % 2 == 0 { &total + &term } else { &total - &term };
        }
        table[x] = total;
    }
    Ok(Signature::from_entries(table)?)
}
