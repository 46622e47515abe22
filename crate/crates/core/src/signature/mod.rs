//! Dense Boolean-domain signatures.
//!
//! An assignment `α1…αn` lives at offset `Σ αi·2^(n-i)`, so variable 1 is the
//! most significant bit of the table index.

mod file;
mod matrix;

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use thiserror::Error;

use crate::exactnum::{Mode, Scalar};

pub use file::{load_signature, parse_signature_json, signature_to_json, SignatureFileError};
pub use matrix::BinaryMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigError {
    #[error("expected arity {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("variable index {0} given twice")]
    DuplicateIndex(usize),
    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),
    #[error("operands use different numeric modes")]
    MixedModes,
    #[error("arity {arity} exceeds the cap of {cap}")]
    ArityCapExceeded { arity: usize, cap: usize },
    #[error("table has {len} entries, which is not a power of two")]
    BadTableLength { len: usize },
}

const DEFAULT_ARITY_CAP: usize = 16;
static ARITY_CAP: AtomicUsize = AtomicUsize::new(0);

/// Largest arity a dense table may have (`MATCHKIT_ARITY_CAP`, default 16).
pub fn arity_cap() -> usize {
    let cap = ARITY_CAP.load(AtomicOrdering::Relaxed);
    if cap != 0 {
        return cap;
    }
    let cap = std::env::var("MATCHKIT_ARITY_CAP")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&c| c > 0 && c < usize::BITS as usize)
        .unwrap_or(DEFAULT_ARITY_CAP);
    ARITY_CAP.store(cap, AtomicOrdering::Relaxed);
    cap
}

pub fn set_arity_cap(cap: usize) {
    ARITY_CAP.store(cap.max(1), AtomicOrdering::Relaxed);
}

pub(crate) fn check_arity(arity: usize) -> Result<(), SigError> {
    let cap = arity_cap();
    if arity > cap {
        return Err(SigError::ArityCapExceeded { arity, cap });
    }
    Ok(())
}

/// Value of variable `var` (1-based) in the assignment at `index`.
#[inline]
pub fn bit(index: usize, var: usize, arity: usize) -> bool {
    (index >> (arity - var)) & 1 == 1
}

/// Offset of the assignment with exactly the variables in `vars` set.
pub fn index_of(vars: &[usize], arity: usize) -> usize {
    vars.iter().fold(0, |acc, &v| acc | 1 << (arity - v))
}

/// Renders the assignment at `index` as a bit string `α1…αn`.
pub fn bits_string(index: usize, arity: usize) -> String {
    (1..=arity).map(|v| if bit(index, v, arity) { '1' } else { '0' }).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    arity: usize,
    entries: Vec<Scalar>,
}

impl Signature {
    pub fn from_entries(entries: Vec<Scalar>) -> Result<Signature, SigError> {
        let len = entries.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(SigError::BadTableLength { len });
        }
        let arity = len.trailing_zeros() as usize;
        check_arity(arity)?;
        let mode = entries[0].mode();
        if entries.iter().any(|e| e.mode() != mode) {
            return Err(SigError::MixedModes);
        }
        Ok(Signature { arity, entries })
    }

    pub fn from_ints(values: &[i64], mode: Mode) -> Result<Signature, SigError> {
        Signature::from_entries(values.iter().map(|&v| Scalar::from_int(v, mode)).collect())
    }

    pub fn from_fn(
        arity: usize,
        mut value: impl FnMut(usize) -> Scalar,
    ) -> Result<Signature, SigError> {
        check_arity(arity)?;
        Signature::from_entries((0..1usize << arity).map(&mut value).collect())
    }

    /// Expands the weight profile `[f0, …, fn]`.
    pub fn symmetric(values: &[Scalar]) -> Result<Signature, SigError> {
        if values.is_empty() {
            return Err(SigError::BadTableLength { len: 0 });
        }
        let arity = values.len() - 1;
        Signature::from_fn(arity, |x| values[x.count_ones() as usize].clone())
    }

    pub fn symmetric_ints(values: &[i64], mode: Mode) -> Result<Signature, SigError> {
        let v: Vec<Scalar> = values.iter().map(|&x| Scalar::from_int(x, mode)).collect();
        Signature::symmetric(&v)
    }

    /// The equality signature `=k`.
    pub fn equality(k: usize, mode: Mode) -> Signature {
        let mut values = vec![0; k + 1];
        values[0] = 1;
        values[k] = 1;
        Signature::symmetric_ints(&values, mode).expect("equality arity within cap")
    }

    pub fn unary(a: Scalar, b: Scalar) -> Signature {
        Signature::from_entries(vec![a, b]).expect("unary signature")
    }

    pub fn scalar(value: Scalar) -> Signature {
        Signature { arity: 0, entries: vec![value] }
    }

    pub fn zero(arity: usize, mode: Mode) -> Result<Signature, SigError> {
        Signature::from_fn(arity, |_| Scalar::zero(mode))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn mode(&self) -> Mode {
        self.entries[0].mode()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry at a raw table offset.
    pub fn at(&self, index: usize) -> &Scalar {
        &self.entries[index]
    }

    pub fn eval(&self, alpha: &[bool]) -> Result<&Scalar, SigError> {
        if alpha.len() != self.arity {
            return Err(SigError::ArityMismatch { expected: self.arity, got: alpha.len() });
        }
        let idx = alpha.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Ok(&self.entries[idx])
    }

    /// Evaluates at a bit string such as `"0110"`.
    pub fn eval_str(&self, alpha: &str) -> Result<&Scalar, SigError> {
        let bits: Vec<bool> = alpha.chars().map(|c| c == '1').collect();
        self.eval(&bits)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Table offsets with nonzero value, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&x| !self.entries[x].is_zero()).collect()
    }

    pub fn scale(&self, factor: &Scalar) -> Signature {
        Signature {
            arity: self.arity,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn into_mode(self, mode: Mode) -> Signature {
        Signature {
            arity: self.arity,
            entries: self.entries.into_iter().map(|e| e.into_mode(mode)).collect(),
        }
    }

    /// Fixes variables to constants; remaining variables keep their order.
    pub fn pin(&self, positions: &[(usize, bool)]) -> Result<Signature, SigError> {
        let n = self.arity;
        let mut fixed = vec![None; n + 1];
        for &(i, c) in positions {
            if i == 0 || i > n {
                return Err(SigError::IndexOutOfRange(i));
            }
            if fixed[i].is_some() {
                return Err(SigError::DuplicateIndex(i));
            }
            fixed[i] = Some(c);
        }
        let free: Vec<usize> = (1..=n).filter(|&i| fixed[i].is_none()).collect();
        let base = (1..=n).fold(0usize, |acc, i| {
            if fixed[i] == Some(true) {
                acc | 1 << (n - i)
            } else {
                acc
            }
        });
        let m = free.len();
        let entries = (0..1usize << m)
            .map(|y| {
                let mut x = base;
                for (j, &v) in free.iter().enumerate() {
                    if bit(y, j + 1, m) {
                        x |= 1 << (n - v);
                    }
                }
                self.entries[x].clone()
            })
            .collect();
        Ok(Signature { arity: m, entries })
    }

    /// `f_π(x1…xn) = f(x_π(1)…x_π(n))`, with `pi` 1-based.
    pub fn permute(&self, pi: &[usize]) -> Result<Signature, SigError> {
        let n = self.arity;
        if pi.len() != n {
            return Err(SigError::NotAPermutation(n));
        }
        let mut seen = vec![false; n + 1];
        for &p in pi {
            if p == 0 || p > n || seen[p] {
                return Err(SigError::NotAPermutation(n));
            }
            seen[p] = true;
        }
        let entries = (0..self.entries.len())
            .map(|alpha| {
                let beta = (1..=n).fold(0usize, |acc, j| {
                    if bit(alpha, pi[j - 1], n) {
                        acc | 1 << (n - j)
                    } else {
                        acc
                    }
                });
                self.entries[beta].clone()
            })
            .collect();
        Ok(Signature { arity: n, entries })
    }

    pub fn tensor(&self, other: &Signature) -> Result<Signature, SigError> {
        if self.mode() != other.mode() {
            return Err(SigError::MixedModes);
        }
        check_arity(self.arity + other.arity)?;
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Ok(Signature { arity: self.arity + other.arity, entries })
    }

    /// `(Tf)(α) = Σ_β Π_i T[αi, βi] f(β)`, applied one axis at a time.
    pub fn transform(&self, t: &BinaryMatrix) -> Signature {
        let n = self.arity;
        let mut cur = self.entries.clone();
        for var in 1..=n {
            let stride = 1usize << (n - var);
            let mut next = cur.clone();
            for x in 0..cur.len() {
                if x & stride != 0 {
                    continue;
                }
                let (v0, v1) = (&cur[x], &cur[x | stride]);
                next[x] = &(t.get(0, 0) * v0) + &(t.get(0, 1) * v1);
                next[x | stride] = &(t.get(1, 0) * v0) + &(t.get(1, 1) * v1);
            }
            cur = next;
        }
        Signature { arity: n, entries: cur }
    }

    /// The H2 transform.
    pub fn hat(&self) -> Signature {
        self.transform(&BinaryMatrix::hadamard(self.mode()))
    }

    /// `λ ≠ 0` with `self = λ·other`. Two all-zero tables are proportional
    /// with λ = 1.
    pub fn proportional(&self, other: &Signature) -> Result<Option<Scalar>, SigError> {
        if self.arity != other.arity {
            return Err(SigError::ArityMismatch { expected: self.arity, got: other.arity });
        }
        if self.mode() != other.mode() {
            return Err(SigError::MixedModes);
        }
        let Some(k) = other.entries.iter().position(|e| !e.is_zero()) else {
            return Ok(self.is_zero().then(|| Scalar::one(self.mode())));
        };
        let lambda = &self.entries[k] / &other.entries[k];
        if lambda.is_zero() {
            return Ok(None);
        }
        let ok = self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| *a == &lambda * b);
        Ok(ok.then_some(lambda))
    }

    /// Unary factors whose tensor product is `self`, if any.
    ///
    /// Peels variable 1 off by a rank-1 test on the 2 × 2^(n-1) reshaping.
    /// The overall scalar is folded into the first factor. Arity-0 input has
    /// no such decomposition and returns `None`.
    pub fn is_degenerate(&self) -> Option<Vec<Signature>> {
        if self.arity == 0 {
            return None;
        }
        let mode = self.mode();
        if self.is_zero() {
            let z = Signature::unary(Scalar::zero(mode), Scalar::zero(mode));
            return Some(vec![z; self.arity]);
        }
        let mut factors = Vec::with_capacity(self.arity);
        let mut rest = self.entries.clone();
        while rest.len() > 1 {
            let half = rest.len() / 2;
            let (r0, r1) = rest.split_at(half);
            let (factor, remaining) = match r0.iter().position(|e| !e.is_zero()) {
                Some(k) => {
                    let c = &r1[k] / &r0[k];
                    if r0.iter().zip(r1).any(|(a, b)| *b != &c * a) {
                        return None;
                    }
                    (Signature::unary(Scalar::one(mode), c), r0.to_vec())
                }
                None => (Signature::unary(Scalar::zero(mode), Scalar::one(mode)), r1.to_vec()),
            };
            factors.push(factor);
            rest = remaining;
        }
        let s = rest.pop().expect("one entry left");
        factors[0] = factors[0].scale(&s);
        Some(factors)
    }

    pub fn detect_symmetric(&self) -> Option<SymmetricSignature> {
        let mut values: Vec<Option<Scalar>> = vec![None; self.arity + 1];
        for (x, e) in self.entries.iter().enumerate() {
            let w = x.count_ones() as usize;
            match &values[w] {
                None => values[w] = Some(e.clone()),
                Some(v) if v == e => {}
                Some(_) => return None,
            }
        }
        Some(SymmetricSignature { values: values.into_iter().map(Option::unwrap).collect() })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(sym) = self.detect_symmetric() {
            return write!(f, "{sym}");
        }
        write!(f, "table(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Weight profile `[f0, …, fn]` of a symmetric signature.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricSignature {
    pub values: Vec<Scalar>,
}

impl SymmetricSignature {
    pub fn new(values: Vec<Scalar>) -> Self {
        SymmetricSignature { values }
    }

    pub fn from_ints(values: &[i64], mode: Mode) -> Self {
        SymmetricSignature { values: values.iter().map(|&v| Scalar::from_int(v, mode)).collect() }
    }

    pub fn arity(&self) -> usize {
        self.values.len() - 1
    }

    pub fn expand(&self) -> Result<Signature, SigError> {
        Signature::symmetric(&self.values)
    }
}

impl fmt::Display for SymmetricSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: Mode = Mode::Exact;

    fn sig(v: &[i64]) -> Signature {
        Signature::from_ints(v, E).unwrap()
    }

    fn sym(v: &[i64]) -> Signature {
        Signature::symmetric_ints(v, E).unwrap()
    }

    #[test]
    fn eval_examples() {
        let eq2 = sym(&[1, 0, 1]);
        assert_eq!(eq2.eval_str("01").unwrap(), &Scalar::zero(E));
        assert_eq!(eq2.eval_str("11").unwrap(), &Scalar::one(E));
        let c = Signature::scalar(Scalar::from_int(7, E));
        assert_eq!(c.eval(&[]).unwrap(), &Scalar::from_int(7, E));
        assert!(matches!(eq2.eval_str("1"), Err(SigError::ArityMismatch { .. })));
    }

    #[test]
    fn pin_examples() {
        assert_eq!(sym(&[1, 0, 1]).pin(&[(1, false)]).unwrap(), sig(&[1, 0]));
        let f = sym(&[1, 0, 1, 0]);
        let p = f.pin(&[(2, true)]).unwrap();
        // oracle: direct evaluation with x2 := 1
        for x1 in [false, true] {
            for x3 in [false, true] {
                assert_eq!(p.eval(&[x1, x3]).unwrap(), f.eval(&[x1, true, x3]).unwrap());
            }
        }
        assert_eq!(p, sig(&[0, 1, 1, 0]));
        let all = f.pin(&[(1, true), (2, true), (3, false)]).unwrap();
        assert_eq!(all.arity(), 0);
        assert_eq!(all.at(0), &Scalar::one(E));
        assert_eq!(f.pin(&[(4, true)]), Err(SigError::IndexOutOfRange(4)));
        assert_eq!(f.pin(&[(1, true), (1, false)]), Err(SigError::DuplicateIndex(1)));
    }

    #[test]
    fn permute_examples() {
        let a = sig(&[1, 0]).tensor(&sig(&[0, 1])).unwrap();
        let b = sig(&[0, 1]).tensor(&sig(&[1, 0])).unwrap();
        assert_eq!(a.permute(&[2, 1]).unwrap(), b);
        assert_eq!(a.permute(&[1, 2]).unwrap(), a);
        assert_eq!(a.permute(&[1, 1]), Err(SigError::NotAPermutation(2)));
        let s = sym(&[1, 2, 3, 4]);
        assert_eq!(s.permute(&[3, 1, 2]).unwrap(), s);
    }

    #[test]
    fn permute_follows_definition() {
        // f(x1,x2,x3) = x1 + 2 x2 + 4 x3; f_π(x) = f(x_π(1), x_π(2), x_π(3))
        let f = Signature::from_fn(3, |x| {
            let v = (0..3).map(|j| ((x >> (2 - j)) & 1) << j).sum::<usize>();
            Scalar::from_int(v as i64, E)
        })
        .unwrap();
        let pi = [2, 3, 1];
        let g = f.permute(&pi).unwrap();
        for alpha in 0..8usize {
            let a = |i: usize| bit(alpha, i, 3);
            let expect = f.eval(&[a(pi[0]), a(pi[1]), a(pi[2])]).unwrap();
            assert_eq!(g.at(alpha), expect);
        }
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(sig(&[1, 0]).tensor(&sig(&[1, 0])).unwrap(), sym(&[1, 0, 0]));
        assert_eq!(sig(&[0, 1]).tensor(&sig(&[0, 1])).unwrap(), sig(&[0, 0, 0, 1]));
        let f = sym(&[1, 2, 3]);
        assert_eq!(f.tensor(&Signature::scalar(Scalar::one(E))).unwrap(), f);
        let fl = Signature::from_ints(&[1, 0], Mode::Float).unwrap();
        assert_eq!(f.tensor(&fl), Err(SigError::MixedModes));
    }

    #[test]
    fn transform_examples() {
        assert_eq!(sym(&[1, 0, 1]).hat(), sig(&[2, 0, 0, 2]));
        let h3 = Signature::equality(3, E).hat();
        assert_eq!(h3.proportional(&sym(&[1, 0, 1, 0])).unwrap(), Some(Scalar::from_int(2, E)));
        let f = sym(&[3, 1, 4, 1]);
        assert_eq!(f.transform(&BinaryMatrix::identity(E)), f);
    }

    #[test]
    fn proportional_examples() {
        let eq2 = sym(&[1, 0, 1]);
        assert_eq!(sig(&[2, 0, 0, 2]).proportional(&eq2).unwrap(), Some(Scalar::from_int(2, E)));
        let z = Signature::zero(2, E).unwrap();
        assert_eq!(z.proportional(&z).unwrap(), Some(Scalar::one(E)));
        assert_eq!(eq2.proportional(&sym(&[1, 0, -1])).unwrap(), None);
        assert_eq!(z.proportional(&eq2).unwrap(), None);
        assert!(eq2.proportional(&sig(&[1, 0])).is_err());
    }

    #[test]
    fn degeneracy_examples() {
        let f = sig(&[1, 2, 2, 4]);
        let factors = f.is_degenerate().unwrap();
        assert_eq!(factors, vec![sig(&[1, 2]), sig(&[1, 2])]);
        assert!(sym(&[1, 0, 1]).is_degenerate().is_none());
        let z = Signature::zero(2, E).unwrap();
        assert_eq!(z.is_degenerate().unwrap(), vec![sig(&[0, 0]), sig(&[0, 0])]);
        // factors tensor back to the input
        let g = sig(&[0, 3]).tensor(&sig(&[2, 5])).unwrap().tensor(&sig(&[1, 0])).unwrap();
        let fs = g.is_degenerate().unwrap();
        let back = fs[1..].iter().fold(fs[0].clone(), |acc, u| acc.tensor(u).unwrap());
        assert_eq!(back, g);
    }

    #[test]
    fn symmetric_detection() {
        assert_eq!(
            sig(&[1, 0, 0, 1]).detect_symmetric(),
            Some(SymmetricSignature::from_ints(&[1, 0, 1], E))
        );
        assert_eq!(sig(&[0, 1, 0, 0]).detect_symmetric(), None);
        let c = Signature::scalar(Scalar::from_int(5, E));
        assert_eq!(c.detect_symmetric(), Some(SymmetricSignature::from_ints(&[5], E)));
    }

    #[test]
    fn table_length_and_cap() {
        assert!(matches!(
            Signature::from_ints(&[1, 2, 3], E),
            Err(SigError::BadTableLength { len: 3 })
        ));
        assert!(matches!(
            Signature::zero(arity_cap() + 1, E),
            Err(SigError::ArityCapExceeded { .. })
        ));
    }
}
