//! Recognition of affine-type signatures `λ·χ_{AX=b}·i^{q(X)}`.

use std::fmt;

use crate::exactnum::Scalar;
use crate::signature::{bits_string, Signature};

/// Certificate for `f ∈ 𝒜`.
///
/// The support is `base ⊕ span(basis)`. A support point has coordinates
/// `y_k` = its bit at `pivots[k]` after XOR with `base`, and
/// `f = lambda · i^(Σ linear[k]·y_k + 2 Σ_{(k,l) ∈ quadratic} y_k y_l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineWitness {
    pub arity: usize,
    pub lambda: Scalar,
    pub base: usize,
    /// Reduced row echelon basis of the support direction space (offsets).
    pub basis: Vec<usize>,
    /// Pivot variable (1-based) of each basis vector; these are the free variables.
    pub pivots: Vec<usize>,
    /// Linear exponents in Z4, one per basis vector.
    pub linear: Vec<u8>,
    /// Pairs `(k, l)`, `k < l`, of basis coordinates carrying `2·y_k·y_l`.
    pub quadratic: Vec<(usize, usize)>,
}

impl AffineWitness {
    /// Value the witness predicts at table offset `x`.
    pub fn evaluate(&self, x: usize) -> Scalar {
        let mode = self.lambda.mode();
        if self.lambda.is_zero() {
            return Scalar::zero(mode);
        }
        let mut v = x ^ self.base;
        let mut coords = vec![false; self.basis.len()];
        for (k, (&row, &p)) in self.basis.iter().zip(&self.pivots).enumerate() {
            if v & pivot_mask(p, self.arity) != 0 {
                coords[k] = true;
                v ^= row;
            }
        }
        if v != 0 {
            return Scalar::zero(mode);
        }
        let mut e: u32 = 0;
        for (k, &l) in self.linear.iter().enumerate() {
            if coords[k] {
                e += l as u32;
            }
        }
        for &(k, l) in &self.quadratic {
            if coords[k] && coords[l] {
                e += 2;
            }
        }
        &self.lambda * &Scalar::i(mode).pow(e % 4)
    }

    /// Re-checks the witness against every entry of `f`.
    pub fn verify(&self, f: &Signature) -> bool {
        f.arity() == self.arity && (0..f.len()).all(|x| &self.evaluate(x) == f.at(x))
    }

    /// Affine constraints `x_j = c ⊕ x_p ⊕ …` for the dependent variables.
    pub fn constraints(&self) -> Vec<String> {
        let n = self.arity;
        let mut out = Vec::new();
        for j in 1..=n {
            if self.pivots.contains(&j) {
                continue;
            }
            let mask = pivot_mask(j, n);
            // x_j = base_j ⊕ Σ_k row_k[j]·(x_{p_k} ⊕ base_{p_k})
            let mut constant = self.base & mask != 0;
            let mut terms = Vec::new();
            for (&row, &p) in self.basis.iter().zip(&self.pivots) {
                if row & mask != 0 {
                    terms.push(format!("x{p}"));
                    constant ^= self.base & pivot_mask(p, n) != 0;
                }
            }
            if constant || terms.is_empty() {
                terms.insert(0, if constant { "1".into() } else { "0".into() });
            }
            out.push(format!("x{j} = {}", terms.join(" ⊕ ")));
        }
        out
    }
}

impl fmt::Display for AffineWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ={} base={}", self.lambda, bits_string(self.base, self.arity))?;
        let cons = self.constraints();
        if !cons.is_empty() {
            write!(f, " constraints[{}]", cons.join("; "))?;
        }
        let lin: Vec<String> = self
            .linear
            .iter()
            .zip(&self.pivots)
            .filter(|(l, _)| **l != 0)
            .map(|(l, p)| format!("{l}·x{p}"))
            .collect();
        let quad: Vec<String> = self
            .quadratic
            .iter()
            .map(|&(k, l)| format!("2·x{}x{}", self.pivots[k], self.pivots[l]))
            .collect();
        let exps: Vec<String> = lin.into_iter().chain(quad).collect();
        if !exps.is_empty() {
            write!(f, " exponent {}", exps.join(" + "))?;
        }
        Ok(())
    }
}

fn pivot_mask(var: usize, arity: usize) -> usize {
    1 << (arity - var)
}

/// Power `e ∈ Z4` with `r = i^e`, if any.
fn power_of_i(r: &Scalar) -> Option<u8> {
    let mode = r.mode();
    let i = Scalar::i(mode);
    let mut p = Scalar::one(mode);
    for e in 0..4 {
        if &p == r {
            return Some(e);
        }
        p = &p * &i;
    }
    None
}

/// Decides `f ∈ 𝒜` and returns a witness. The zero signature is accepted
/// with `λ = 0`.
///
/// The support must be an affine subspace over GF(2); on it every value is
/// `λ` times a power of `i`, and the Z4 exponent, written over the free
/// coordinates, must have vanishing Möbius coefficients in degree ≥ 3 and
/// even degree-2 coefficients.
pub fn is_affine(f: &Signature) -> Option<AffineWitness> {
    let n = f.arity();
    let mode = f.mode();
    let support = f.support();
    let Some(&base) = support.first() else {
        return Some(AffineWitness {
            arity: n,
            lambda: Scalar::zero(mode),
            base: 0,
            basis: vec![],
            pivots: vec![],
            linear: vec![],
            quadratic: vec![],
        });
    };
    let (basis, pivots) = rref_basis(support.iter().map(|&s| s ^ base), n);
    if support.len() != 1usize << basis.len() {
        return None;
    }
    let lambda = f.at(base).clone();
    let inv = lambda.inverse()?;
    let r = basis.len();
    // exponent table over the free coordinates y ∈ {0,1}^r (bit k of y = y_k)
    let mut eps = vec![0i64; 1 << r];
    for (y, slot) in eps.iter_mut().enumerate() {
        let x = (0..r).filter(|k| y >> k & 1 == 1).fold(base, |acc, k| acc ^ basis[k]);
        *slot = power_of_i(&(f.at(x) * &inv))? as i64;
    }
    // Möbius transform over Z4
    for k in 0..r {
        for y in 0..eps.len() {
            if y >> k & 1 == 1 {
                eps[y] = (eps[y] - eps[y ^ (1 << k)]).rem_euclid(4);
            }
        }
    }
    let mut linear = vec![0u8; r];
    let mut quadratic = Vec::new();
    for (t, &c) in eps.iter().enumerate() {
        match t.count_ones() {
            0 => debug_assert_eq!(c, 0),
            1 => linear[t.trailing_zeros() as usize] = c as u8,
            2 => {
                if c % 2 != 0 {
                    return None;
                }
                if c == 2 {
                    let k = t.trailing_zeros() as usize;
                    let l = (usize::BITS - 1 - t.leading_zeros()) as usize;
                    quadratic.push((k, l));
                }
            }
            _ => {
                if c != 0 {
                    return None;
                }
            }
        }
    }
    quadratic.sort_unstable();
    let witness = AffineWitness { arity: n, lambda, base, basis, pivots, linear, quadratic };
    debug_assert!(witness.verify(f));
    Some(witness)
}

/// Reduced row echelon basis over GF(2), rows ordered by pivot variable.
fn rref_basis(vectors: impl Iterator<Item = usize>, n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut rows: Vec<(usize, usize)> = Vec::new(); // (pivot variable, row)
    for mut v in vectors {
        for &(p, row) in &rows {
            if v & pivot_mask(p, n) != 0 {
                v ^= row;
            }
        }
        if v == 0 {
            continue;
        }
        // leading variable = highest set bit
        let top = (usize::BITS - 1 - v.leading_zeros()) as usize;
        let p = n - top;
        for (_, row) in rows.iter_mut() {
            if *row & pivot_mask(p, n) != 0 {
                *row ^= v;
            }
        }
        rows.push((p, v));
    }
    rows.sort_unstable();
    (rows.iter().map(|r| r.1).collect(), rows.iter().map(|r| r.0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{parse_scalar, Mode};

    const E: Mode = Mode::Exact;

    fn table(v: &[&str]) -> Signature {
        Signature::from_entries(v.iter().map(|s| parse_scalar(s, E).unwrap()).collect()).unwrap()
    }

    #[test]
    fn examples() {
        let f = table(&["1", "0", "0", "i"]);
        let w = is_affine(&f).unwrap();
        assert_eq!(w.lambda, Scalar::one(E));
        assert_eq!(w.constraints(), vec!["x2 = x1"]);
        assert_eq!(w.linear, vec![1]);
        assert!(w.verify(&f));

        assert!(is_affine(&Signature::symmetric_ints(&[1, 0, 2], E).unwrap()).is_none());
        let ones = Signature::symmetric_ints(&[1, 1, 1, 1], E).unwrap();
        let w = is_affine(&ones).unwrap();
        assert!(w.constraints().is_empty());
        assert!(w.linear.iter().all(|&l| l == 0) && w.quadratic.is_empty());
    }

    #[test]
    fn zero_signature_is_affine() {
        let z = Signature::zero(3, E).unwrap();
        let w = is_affine(&z).unwrap();
        assert!(w.lambda.is_zero());
        assert!(w.verify(&z));
    }

    #[test]
    fn known_members_and_non_members() {
        let sym = |v: &[&str]| {
            Signature::symmetric(&v.iter().map(|s| parse_scalar(s, E).unwrap()).collect::<Vec<_>>()).unwrap()
        };
        for f in [
            sym(&["1", "0", "1", "0"]),
            sym(&["1", "0", "0", "1"]),
            sym(&["1", "-1"]),
            sym(&["1", "0", "-i"]),
            sym(&["1", "i", "1", "i"]),
            sym(&["0", "1", "0"]),
            // (-1)^{x1 x2}: Hadamard
            table(&["1", "1", "1", "-1"]),
        ] {
            let w = is_affine(&f).unwrap_or_else(|| panic!("{f} should be affine"));
            assert!(w.verify(&f));
        }
        for f in [
            sym(&["0", "1", "1", "0"]),
            sym(&["0", "1", "0", "0"]),
            sym(&["1", "0", "i", "0", "-1"]),
            sym(&["1", "w"]),
            // support not an affine subspace
            table(&["1", "1", "1", "0"]),
            // cubic exponent: (-1)^{x1 x2 x3}
            table(&["1", "1", "1", "1", "1", "1", "1", "-1"]),
        ] {
            assert!(is_affine(&f).is_none(), "{f} should not be affine");
        }
    }
}
