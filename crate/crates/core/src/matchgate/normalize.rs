use crate::exactnum::Scalar;
use crate::signature::{bits_string, Signature};

/// Records how a signature was normalized: `g(α) = scale · F(α ⊕ shift)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationCertificate {
    /// Table offset of the support point β.
    pub shift: usize,
    /// `g(β)`, never zero.
    pub scale: Scalar,
}

impl NormalizationCertificate {
    pub fn shift_bits(&self, arity: usize) -> String {
        bits_string(self.shift, arity)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Normalized {
    /// The input was identically zero.
    Trivial,
    Normal { f: Signature, cert: NormalizationCertificate },
}

impl Normalized {
    pub fn signature(&self) -> Option<&Signature> {
        match self {
            Normalized::Trivial => None,
            Normalized::Normal { f, .. } => Some(f),
        }
    }
}

/// XOR-shifts the support so that the least support point lands at `0…0` and
/// rescales it to 1: `F(α) = g(α ⊕ β) / g(β)`.
pub fn normalize(g: &Signature) -> Normalized {
    let Some(beta) = g.entries().iter().position(|e| !e.is_zero()) else {
        return Normalized::Trivial;
    };
    let scale = g.at(beta).clone();
    let inv = scale.inverse().expect("support value is nonzero");
    let f = xor_shift(g, beta).scale(&inv);
    Normalized::Normal { f, cert: NormalizationCertificate { shift: beta, scale } }
}

pub fn denormalize(f: &Signature, cert: &NormalizationCertificate) -> Signature {
    xor_shift(f, cert.shift).scale(&cert.scale)
}

/// `α ↦ g(α ⊕ β)`.
pub fn xor_shift(g: &Signature, beta: usize) -> Signature {
    Signature::from_fn(g.arity(), |x| g.at(x ^ beta).clone()).expect("same arity as input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Mode;

    const E: Mode = Mode::Exact;

    fn sig(v: &[i64]) -> Signature {
        Signature::from_ints(v, E).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let g = sig(&[0, 1, 1, 0]);
        let Normalized::Normal { f, cert } = normalize(&g) else { panic!("nonzero") };
        assert_eq!(f, sig(&[1, 0, 0, 1]));
        assert_eq!(cert.shift_bits(2), "01");
        assert_eq!(cert.scale, Scalar::one(E));
        assert_eq!(denormalize(&f, &cert), g);

        let g = sig(&[1, 0, 0, 3]);
        let Normalized::Normal { f, cert } = normalize(&g) else { panic!("nonzero") };
        assert_eq!(f, g);
        assert_eq!(cert.shift, 0);

        let g = sig(&[5, 0, 0, 5]);
        let Normalized::Normal { f, cert } = normalize(&g) else { panic!("nonzero") };
        assert_eq!(f, sig(&[1, 0, 0, 1]));
        assert_eq!(cert.scale, Scalar::from_int(5, E));
        assert_eq!(denormalize(&f, &cert), g);

        assert_eq!(normalize(&sig(&[0, 0])), Normalized::Trivial);
    }
}
