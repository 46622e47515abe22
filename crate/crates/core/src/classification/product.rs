//! Recognition of 𝒫: tensor products of ℰ-signatures (support inside a
//! complementary pair `{σ, σ̄}`).

use std::fmt;

use crate::exactnum::Scalar;
use crate::signature::{bit, Signature};

/// One block of a product decomposition: the variables it covers (1-based, in
/// order) and the factor signature on them.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductBlock {
    pub vars: Vec<usize>,
    pub factor: Signature,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductWitness {
    pub arity: usize,
    pub blocks: Vec<ProductBlock>,
}

impl ProductWitness {
    /// Rebuilds the table by multiplying block factors.
    pub fn evaluate(&self, x: usize) -> Scalar {
        let mut acc = Scalar::one(self.blocks[0].factor.mode());
        for b in &self.blocks {
            let m = b.vars.len();
            let y = b.vars.iter().enumerate().fold(0usize, |acc, (j, &v)| {
                if bit(x, v, self.arity) {
                    acc | 1 << (m - 1 - j)
                } else {
                    acc
                }
            });
            acc = &acc * b.factor.at(y);
        }
        acc
    }

    pub fn verify(&self, f: &Signature) -> bool {
        let mut seen = vec![false; self.arity + 1];
        for b in &self.blocks {
            for &v in &b.vars {
                if v == 0 || v > self.arity || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            if !is_e_signature(&b.factor) {
                return false;
            }
        }
        seen[1..].iter().all(|&s| s) && (0..f.len()).all(|x| &self.evaluate(x) == f.at(x))
    }
}

impl fmt::Display for ProductWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let vars: Vec<String> = b.vars.iter().map(|v| format!("x{v}")).collect();
                format!("({}): {}", vars.join(","), b.factor)
            })
            .collect();
        f.write_str(&parts.join(" ⊗ "))
    }
}

/// Support contained in `{σ, σ̄}` for some σ.
pub fn is_e_signature(f: &Signature) -> bool {
    let support = f.support();
    match support.len() {
        0 | 1 => true,
        2 => support[0] ^ support[1] == f.len() - 1,
        _ => false,
    }
}

/// Decides `f ∈ 𝒫`. Finds the finest tensor decomposition (the smallest
/// variable set containing the first remaining variable across which the
/// table has rank 1, repeatedly) and checks each block is an ℰ-signature.
/// The zero signature is accepted as a single block.
pub fn is_product(f: &Signature) -> Option<ProductWitness> {
    let n = f.arity();
    if n == 0 {
        return Some(ProductWitness { arity: 0, blocks: vec![ProductBlock { vars: vec![], factor: f.clone() }] });
    }
    if f.is_zero() {
        let w = ProductWitness { arity: n, blocks: vec![ProductBlock { vars: (1..=n).collect(), factor: f.clone() }] };
        return Some(w);
    }
    let mut blocks = Vec::new();
    let mut rest_vars: Vec<usize> = (1..=n).collect();
    let mut rest = f.clone();
    while !rest_vars.is_empty() {
        let (local, factor, remainder) = split_finest(&rest);
        if !is_e_signature(&factor) {
            return None;
        }
        let vars: Vec<usize> = local.iter().map(|&j| rest_vars[j - 1]).collect();
        rest_vars = (1..=rest.arity()).filter(|j| !local.contains(j)).map(|j| rest_vars[j - 1]).collect();
        blocks.push(ProductBlock { vars, factor });
        rest = remainder;
    }
    // the remaining arity-0 scalar is folded into the first block
    let s = rest.at(0).clone();
    blocks[0].factor = blocks[0].factor.scale(&s);
    let w = ProductWitness { arity: n, blocks };
    debug_assert!(w.verify(f));
    Some(w)
}

/// Smallest subset `S ∋ 1` (local 1-based indices) with a rank-1 split
/// `f = g(x_S) · h(x_rest)`; returns `(S, g, h)`. `f` must be nonzero.
fn split_finest(f: &Signature) -> (Vec<usize>, Signature, Signature) {
    let n = f.arity();
    for size in 1..=n {
        for combo in combinations(n - 1, size - 1) {
            let mut subset = vec![1];
            subset.extend(combo.iter().map(|c| c + 2));
            if let Some((g, h)) = rank_one_split(f, &subset) {
                return (subset, g, h);
            }
        }
    }
    unreachable!("the full variable set always splits")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn rank_one_split(f: &Signature, subset: &[usize]) -> Option<(Signature, Signature)> {
    let n = f.arity();
    let others: Vec<usize> = (1..=n).filter(|v| !subset.contains(v)).collect();
    let (ms, mo) = (subset.len(), others.len());
    let offset = |a: usize, b: usize| {
        let mut x = 0;
        for (j, &v) in subset.iter().enumerate() {
            if a >> (ms - 1 - j) & 1 == 1 {
                x |= 1 << (n - v);
            }
        }
        for (j, &v) in others.iter().enumerate() {
            if b >> (mo - 1 - j) & 1 == 1 {
                x |= 1 << (n - v);
            }
        }
        x
    };
    let pivot = f.support()[0];
    let (a0, b0) = (0..1usize << ms)
        .flat_map(|a| (0..1usize << mo).map(move |b| (a, b)))
        .find(|&(a, b)| offset(a, b) == pivot)?;
    let p = f.at(pivot);
    for a in 0..1usize << ms {
        for b in 0..1usize << mo {
            let lhs = f.at(offset(a, b)) * p;
            let rhs = f.at(offset(a, b0)) * f.at(offset(a0, b));
            if lhs != rhs {
                return None;
            }
        }
    }
    let inv = p.inverse()?;
    let g = Signature::from_fn(ms, |a| f.at(offset(a, b0)).clone()).ok()?;
    let h = Signature::from_fn(mo, |b| f.at(offset(a0, b)) * &inv).ok()?;
    Some((g, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Mode;

    const E: Mode = Mode::Exact;

    fn sym(v: &[i64]) -> Signature {
        Signature::symmetric_ints(v, E).unwrap()
    }

    #[test]
    fn examples() {
        let eq3 = Signature::equality(3, E);
        let w = is_product(&eq3).unwrap();
        assert_eq!(w.blocks.len(), 1);
        assert!(w.verify(&eq3));

        assert!(is_product(&sym(&[0, 1, 1, 0])).is_none());

        let f = sym(&[1, 1]).tensor(&sym(&[1, 0, 1])).unwrap();
        let w = is_product(&f).unwrap();
        assert_eq!(w.blocks.len(), 2);
        assert_eq!(w.blocks[0].vars, vec![1]);
        assert_eq!(w.blocks[1].vars, vec![2, 3]);
        assert!(w.verify(&f));
    }

    #[test]
    fn interleaved_blocks() {
        // =2 on (x1, x3) times [1, 2] on x2
        let f = Signature::from_fn(3, |x| {
            let (x1, x2, x3) = (bit(x, 1, 3), bit(x, 2, 3), bit(x, 3, 3));
            let v = if x1 == x3 { if x2 { 2 } else { 1 } } else { 0 };
            Scalar::from_int(v, E)
        })
        .unwrap();
        let w = is_product(&f).unwrap();
        assert_eq!(w.blocks.iter().map(|b| b.vars.clone()).collect::<Vec<_>>(), vec![vec![1, 3], vec![2]]);
        assert!(w.verify(&f));
    }

    #[test]
    fn non_members() {
        assert!(is_product(&sym(&[1, 1, 0])).is_none());
        assert!(is_product(&sym(&[1, 0, 1, 0])).is_none());
        assert!(is_product(&sym(&[1, 0, 2])).is_some());
        assert!(is_product(&Signature::zero(2, E).unwrap()).is_some());
    }
}
