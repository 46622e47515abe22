//! Pairings of index sets and their crossings.

use super::MatchgateError;

/// A partition of a sorted even-size index set into 2-element blocks.
/// Each block is stored as `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub base: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn crossing_count(&self) -> usize {
        crossing_count(&self.pairs)
    }
}

/// Number of crossing chord pairs `(ac, bd)` with `a < b < c < d`.
pub fn crossing_count(pairs: &[(usize, usize)]) -> usize {
    let mut count = 0;
    for (i, p) in pairs.iter().enumerate() {
        for q in &pairs[i + 1..] {
            if chords_cross(*p, *q) {
                count += 1;
            }
        }
    }
    count
}

/// Crossings with one chord from each side.
pub fn crossings_between(m1: &[(usize, usize)], m2: &[(usize, usize)]) -> usize {
    m1.iter()
        .map(|&p| m2.iter().filter(|&&q| chords_cross(p, q)).count())
        .sum()
}

fn chords_cross(p: (usize, usize), q: (usize, usize)) -> bool {
    let (a, c) = (p.0.min(p.1), p.0.max(p.1));
    let (b, d) = (q.0.min(q.1), q.0.max(q.1));
    (a < b && b < c && c < d) || (b < a && a < d && d < c)
}

/// Iterator over all `(|S|-1)!!` pairings of `S`.
///
/// State is a mixed-radix counter: digit `k` picks the partner of the
/// smallest element still unpaired after `k` rounds.
pub struct Pairings {
    base: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

pub fn enumerate_pairings(set: &[usize]) -> Result<Pairings, MatchgateError> {
    if !set.len().is_multiple_of(2) {
        return Err(MatchgateError::OddSize(set.len()));
    }
    let mut base = set.to_vec();
    base.sort_unstable();
    Ok(Pairings { digits: vec![0; base.len() / 2], base, done: false })
}

impl Iterator for Pairings {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        if self.done {
            return None;
        }
        let mut rest = self.base.clone();
        let mut pairs = Vec::with_capacity(self.digits.len());
        for &d in &self.digits {
            let a = rest.remove(0);
            let b = rest.remove(d);
            pairs.push((a, b));
        }
        // advance: digit k has radix |S| - 2k - 1
        let m = self.base.len();
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            let radix = m - 2 * k - 1;
            self.digits[k] += 1;
            if self.digits[k] < radix {
                break;
            }
            self.digits[k] = 0;
        }
        Some(Pairing { base: self.base.clone(), pairs })
    }
}

/// Parity of the crossings between any pairing of `s1` and any pairing of
/// `s2`. After relabelling `s1 ∪ s2` by rank, this is `q + Σ rank(s)` over
/// `s ∈ s1`, where `|s1| = 2q`.
pub fn cross_parity(s1: &[usize], s2: &[usize]) -> Result<u8, MatchgateError> {
    if !s1.len().is_multiple_of(2) {
        return Err(MatchgateError::OddSize(s1.len()));
    }
    if !s2.len().is_multiple_of(2) {
        return Err(MatchgateError::OddSize(s2.len()));
    }
    if s1.iter().any(|x| s2.contains(x)) {
        return Err(MatchgateError::NotDisjoint);
    }
    let mut union: Vec<usize> = s1.iter().chain(s2).copied().collect();
    union.sort_unstable();
    let rank_sum: usize = s1
        .iter()
        .map(|x| union.binary_search(x).expect("member of union") + 1)
        .sum();
    Ok(((s1.len() / 2 + rank_sum) % 2) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_counts() {
        let count = |n: usize| enumerate_pairings(&(1..=n).collect::<Vec<_>>()).unwrap().count();
        assert_eq!(count(0), 1);
        assert_eq!(count(2), 1);
        assert_eq!(count(4), 3);
        assert_eq!(count(6), 15);
        assert_eq!(count(8), 105);
        assert!(matches!(enumerate_pairings(&[1, 2, 3]), Err(MatchgateError::OddSize(3))));
    }

    #[test]
    fn pairings_are_distinct_partitions() {
        let all: Vec<Pairing> = enumerate_pairings(&[2, 3, 5, 7, 8, 9]).unwrap().collect();
        for (i, p) in all.iter().enumerate() {
            let mut flat: Vec<usize> = p.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            flat.sort_unstable();
            assert_eq!(flat, vec![2, 3, 5, 7, 8, 9]);
            assert!(p.pairs.iter().all(|(a, b)| a < b));
            assert!(all[i + 1..].iter().all(|q| q.pairs != p.pairs));
        }
    }

    #[test]
    fn crossing_examples() {
        assert_eq!(crossing_count(&[(1, 6), (3, 9), (4, 7)]), 2);
        assert_eq!(crossing_count(&[(1, 2), (3, 4)]), 0);
        assert_eq!(crossing_count(&[(1, 3), (2, 4)]), 1);
    }

    #[test]
    fn cross_parity_examples() {
        assert_eq!(cross_parity(&[2, 3], &[1, 4]).unwrap(), 0);
        assert_eq!(cross_parity(&[1, 3], &[2, 4]).unwrap(), 1);
        assert_eq!(cross_parity(&[], &[1, 2]).unwrap(), 0);
        assert!(matches!(cross_parity(&[1, 2], &[2, 3]), Err(MatchgateError::NotDisjoint)));
        assert!(matches!(cross_parity(&[1], &[2, 3, 4]), Err(MatchgateError::OddSize(1))));
    }
}
