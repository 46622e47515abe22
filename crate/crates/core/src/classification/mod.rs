//! Membership deciders for 𝒜, 𝒫, ℳ, ℳ_P and their H2-transformed variants.

mod affine;
mod mp;
mod product;

use std::fmt;

use thiserror::Error;

use crate::exactnum::{FourthPower, Scalar};
use crate::matchgate::{describe_witness, mgi_check, MgiVerdict};
use crate::signature::{Signature, SymmetricSignature};

pub use affine::{is_affine, AffineWitness};
pub use mp::{
    classify_mp_type, is_permutable_matchgate, matching_hub, parity_witness, product_violation,
    MpType, MpVerdict, MpWitness,
};
pub use product::{is_e_signature, is_product, ProductBlock, ProductWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("square root not in Q(ζ8); retry in float mode")]
    SqrtNotInField,
    #[error("no matching hub found")]
    NoHub,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HatClass {
    M,
    MP,
}

/// `f ∈ Ĉ` iff `H2 f ∈ C`; membership is scale invariant so `H2^{-1} = H2/2`
/// can be replaced by `H2`.
pub fn hat_membership(f: &Signature, class: HatClass) -> bool {
    let h = f.hat();
    match class {
        HatClass::M => mgi_check(&h).passed(),
        HatClass::MP => is_permutable_matchgate(&h).holds,
    }
}

/// Full membership table with witnesses.
#[derive(Clone, Debug)]
pub struct ClassVerdict {
    pub arity: usize,
    pub affine: Option<AffineWitness>,
    pub product: Option<ProductWitness>,
    pub matchgate: MgiVerdict,
    pub matchgate_hat: MgiVerdict,
    pub permutable: MpVerdict,
    pub permutable_hat: MpVerdict,
}

impl ClassVerdict {
    pub fn in_a(&self) -> bool {
        self.affine.is_some()
    }
    pub fn in_p(&self) -> bool {
        self.product.is_some()
    }
    pub fn in_m(&self) -> bool {
        self.matchgate.passed()
    }
    pub fn in_m_hat(&self) -> bool {
        self.matchgate_hat.passed()
    }
    pub fn in_mp(&self) -> bool {
        self.permutable.holds
    }
    pub fn in_mp_hat(&self) -> bool {
        self.permutable_hat.holds
    }
}

pub fn classify(f: &Signature) -> ClassVerdict {
    let h = f.hat();
    ClassVerdict {
        arity: f.arity(),
        affine: is_affine(f),
        product: is_product(f),
        matchgate: mgi_check(f),
        matchgate_hat: mgi_check(&h),
        permutable: is_permutable_matchgate(f),
        permutable_hat: is_permutable_matchgate(&h),
    }
}

impl fmt::Display for ClassVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        match &self.affine {
            Some(w) => writeln!(f, "A:      yes  {w}")?,
            None => writeln!(f, "A:      no")?,
        }
        match &self.product {
            Some(w) => writeln!(f, "P:      yes  {w}")?,
            None => writeln!(f, "P:      no")?,
        }
        let mgi = |v: &MgiVerdict| {
            describe_witness(v, self.arity).map_or(String::new(), |w| format!("  MGI fails at {w}"))
        };
        writeln!(f, "M:      {}{}", yn(self.in_m()), mgi(&self.matchgate))?;
        writeln!(f, "M_hat:  {}{}", yn(self.in_m_hat()), mgi(&self.matchgate_hat))?;
        writeln!(f, "MP:     {}", self.permutable)?;
        write!(f, "MP_hat: {}", self.permutable_hat)
    }
}

/// One of the five symmetric shapes of ℳ − 𝒜, matched up to a nonzero scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct MaForm {
    /// 1: `[0,1,0,…,0]_k`; 2: `[0,…,0,1,0]_k`; 3: `[1,0,r]`;
    /// 4: `[1,0,r,0,r²,…]_k`; 5: `[0,1,0,r,0,r²,…]_k`.
    pub form: u8,
    pub arity: usize,
    pub r: Option<Scalar>,
}

impl fmt::Display for MaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "form {} (k={}", self.form, self.arity)?;
        if let Some(r) = &self.r {
            write!(f, ", r={r}")?;
        }
        write!(f, ")")
    }
}

pub fn m_minus_a_form(g: &SymmetricSignature) -> Option<MaForm> {
    let v = &g.values;
    let k = g.arity();
    let first = v.iter().position(|s| !s.is_zero())?;
    let inv = v[first].inverse()?;
    let norm: Vec<Scalar> = v.iter().map(|s| s * &inv).collect();
    let mode = norm[0].mode();
    let is_zero_except = |idx: usize| norm.iter().enumerate().all(|(j, s)| j == idx || s.is_zero());
    if k >= 3 && first == 1 && is_zero_except(1) {
        return Some(MaForm { form: 1, arity: k, r: None });
    }
    if k >= 3 && first == k - 1 && is_zero_except(k - 1) {
        return Some(MaForm { form: 2, arity: k, r: None });
    }
    if k == 2 && first == 0 && norm[1].is_zero() {
        let r = norm[2].clone();
        let p = r.fourth_power_is_unit();
        if !r.is_zero() && p != FourthPower::One {
            return Some(MaForm { form: 3, arity: 2, r: Some(r) });
        }
        return None;
    }
    if k >= 3 && first <= 1 {
        // geometric progression on one parity class, zeros on the other
        let r = norm.get(first + 2)?.clone();
        let r2 = r.pow(2);
        if r2.is_zero() || r2 == Scalar::one(mode) {
            return None;
        }
        let mut expect = Scalar::one(mode);
        for (j, s) in norm.iter().enumerate() {
            if j < first || (j - first) % 2 == 1 {
                if !s.is_zero() {
                    return None;
                }
                continue;
            }
            if s != &expect {
                return None;
            }
            expect = &expect * &r;
        }
        return Some(MaForm { form: if first == 0 { 4 } else { 5 }, arity: k, r: Some(r) });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{parse_scalar, Mode};

    const E: Mode = Mode::Exact;

    fn sym(v: &[i64]) -> Signature {
        Signature::symmetric_ints(v, E).unwrap()
    }

    fn profile(v: &[&str]) -> SymmetricSignature {
        SymmetricSignature::new(v.iter().map(|s| parse_scalar(s, E).unwrap()).collect())
    }

    #[test]
    fn hat_examples() {
        let f = sym(&[1, 0, 1, 0]);
        // H2 [1,0,1,0] = 4·[1,0,0,1] pattern, which fails MGI
        assert_eq!(f.hat().proportional(&Signature::equality(3, E)).unwrap(), Some(Scalar::from_int(4, E)));
        assert!(!hat_membership(&f, HatClass::M));
        let g = sym(&[0, 1, 1, 0]);
        assert_eq!(g.hat().proportional(&sym(&[3, 0, -1, 0])).unwrap(), Some(Scalar::from_int(2, E)));
        assert!(hat_membership(&g, HatClass::M));
        assert!(hat_membership(&g, HatClass::MP));
        assert!(hat_membership(&Signature::equality(3, E), HatClass::M));
    }

    #[test]
    fn form_examples() {
        assert_eq!(m_minus_a_form(&profile(&["0", "1", "0", "0"])).unwrap().form, 1);
        let f = m_minus_a_form(&profile(&["1", "0", "2"])).unwrap();
        assert_eq!((f.form, f.r), (3, Some(Scalar::from_int(2, E))));
        assert_eq!(m_minus_a_form(&profile(&["1", "0", "1"])), None);
        assert_eq!(m_minus_a_form(&profile(&["1", "0", "i"])), None);
        assert_eq!(m_minus_a_form(&profile(&["0", "0", "1", "0"])).unwrap().form, 2);
        let f = m_minus_a_form(&profile(&["1", "0", "i", "0", "-1", "0", "-i"])).unwrap();
        assert_eq!((f.form, f.r), (4, Some(parse_scalar("i", E).unwrap())));
        let f = m_minus_a_form(&profile(&["0", "i", "0", "1"])).unwrap();
        assert_eq!((f.form, f.r), (5, Some(parse_scalar("-i", E).unwrap())));
        assert_eq!(m_minus_a_form(&profile(&["1", "0", "-1", "0"])), None);
        assert_eq!(m_minus_a_form(&profile(&["0", "1", "0"])), None);
    }

    #[test]
    fn full_verdict() {
        let v = classify(&sym(&[0, 1, 1, 0]));
        assert!(!v.in_a() && !v.in_p() && !v.in_m());
        assert!(v.in_m_hat() && v.in_mp_hat());
        let v = classify(&Signature::equality(3, E));
        assert!(v.in_a() && v.in_p() && !v.in_m() && v.in_m_hat());
        assert!(v.to_string().contains("MGI fails at β=100 γ=011"));
    }
}
