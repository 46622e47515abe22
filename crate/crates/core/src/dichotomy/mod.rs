//! Dichotomy deciders for the #CSP variants.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::classification::{hat_membership, is_affine, is_product, HatClass};
use crate::signature::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DichotomyError {
    #[error("degree bound D = {0} is below 3")]
    DBelowThree(usize),
    #[error("variant {0} needs a degree bound (--d)")]
    MissingBound(String),
    #[error("unknown problem variant {0:?}")]
    UnknownVariant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemVariant {
    Csp,
    RdCsp(usize),
    PlCsp,
    PlRdCsp(usize),
    /// `#CSP(F)` restricted to planar instances with permutable signatures.
    CspPl,
    RdCspPl(usize),
}

impl ProblemVariant {
    /// Builds a variant from its command-line name and optional bound.
    pub fn parse(name: &str, d: Option<usize>) -> Result<Self, DichotomyError> {
        let bounded = |make: fn(usize) -> ProblemVariant| match d {
            None => Err(DichotomyError::MissingBound(name.to_string())),
            Some(d) if d < 3 => Err(DichotomyError::DBelowThree(d)),
            Some(d) => Ok(make(d)),
        };
        match name {
            "csp" => Ok(ProblemVariant::Csp),
            "pl-csp" => Ok(ProblemVariant::PlCsp),
            "csp-pl" => Ok(ProblemVariant::CspPl),
            "rd-csp" => bounded(ProblemVariant::RdCsp),
            "pl-rd-csp" => bounded(ProblemVariant::PlRdCsp),
            "rd-csp-pl" => bounded(ProblemVariant::RdCspPl),
            other => Err(DichotomyError::UnknownVariant(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemVariant::Csp => "csp",
            ProblemVariant::RdCsp(_) => "rd-csp",
            ProblemVariant::PlCsp => "pl-csp",
            ProblemVariant::PlRdCsp(_) => "pl-rd-csp",
            ProblemVariant::CspPl => "csp-pl",
            ProblemVariant::RdCspPl(_) => "rd-csp-pl",
        }
    }

    pub fn bound(self) -> Option<usize> {
        match self {
            ProblemVariant::RdCsp(d) | ProblemVariant::PlRdCsp(d) | ProblemVariant::RdCspPl(d) => Some(d),
            _ => None,
        }
    }

    /// Candidate tractable classes, in reporting order.
    pub fn candidates(self) -> &'static [TractableClass] {
        use TractableClass::*;
        match self {
            ProblemVariant::Csp | ProblemVariant::RdCsp(_) => &[A, P],
            ProblemVariant::PlCsp | ProblemVariant::PlRdCsp(_) => &[A, P, MHat],
            ProblemVariant::CspPl | ProblemVariant::RdCspPl(_) => &[A, P, MpHat],
        }
    }

    fn validate(self) -> Result<(), DichotomyError> {
        match self.bound() {
            Some(d) if d < 3 => Err(DichotomyError::DBelowThree(d)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ProblemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bound() {
            Some(d) => write!(f, "{} (D={d})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TractableClass {
    A,
    P,
    MHat,
    MpHat,
}

impl TractableClass {
    pub fn name(self) -> &'static str {
        match self {
            TractableClass::A => "A",
            TractableClass::P => "P",
            TractableClass::MHat => "M_hat",
            TractableClass::MpHat => "MP_hat",
        }
    }

    pub fn contains(self, f: &Signature) -> bool {
        match self {
            TractableClass::A => is_affine(f).is_some_and(|w| w.verify(f)),
            TractableClass::P => is_product(f).is_some_and(|w| w.verify(f)),
            TractableClass::MHat => hat_membership(f, HatClass::M),
            TractableClass::MpHat => hat_membership(f, HatClass::MP),
        }
    }
}

impl FromStr for TractableClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(TractableClass::A),
            "P" => Ok(TractableClass::P),
            "M_hat" => Ok(TractableClass::MHat),
            "MP_hat" => Ok(TractableClass::MpHat),
            other => Err(format!("unknown class {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Poly(TractableClass),
    SharpPHard,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DichotomyVerdict {
    pub variant: ProblemVariant,
    pub outcome: Outcome,
    /// `membership[i][j]`: signature `i` lies in candidate class `j`.
    pub membership: Vec<Vec<bool>>,
    /// For a hard verdict, one signature index outside each candidate class.
    pub counterexamples: Vec<(TractableClass, usize)>,
}

impl DichotomyVerdict {
    pub fn to_json(&self) -> Value {
        match self.outcome {
            Outcome::Poly(c) => json!({"outcome": "poly", "class": c.name()}),
            Outcome::SharpPHard => {
                let ce: Vec<Value> = self
                    .counterexamples
                    .iter()
                    .map(|(c, i)| json!({"class": c.name(), "signature": i}))
                    .collect();
                json!({"outcome": "sharp-p-hard", "counterexamples": ce})
            }
        }
    }
}

impl fmt::Display for DichotomyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes = self.variant.candidates();
        match self.outcome {
            Outcome::Poly(c) => writeln!(f, "{}: polynomial time (every signature in {})", self.variant, c.name())?,
            Outcome::SharpPHard => writeln!(f, "{}: #P-hard", self.variant)?,
        }
        let header: Vec<&str> = classes.iter().map(|c| c.name()).collect();
        write!(f, "       {}", header.join("  "))?;
        for (i, row) in self.membership.iter().enumerate() {
            write!(f, "\n  f{:<3}", i)?;
            for (c, m) in classes.iter().zip(row) {
                write!(f, " {:>width$}", if *m { "yes" } else { "no" }, width = c.name().len() + 1)?;
            }
        }
        for (c, i) in &self.counterexamples {
            write!(f, "\n  f{i} is outside {}", c.name())?;
        }
        Ok(())
    }
}

/// Decides `v` for the finite signature set `fs`. Reports the first class of
/// the candidate list containing every signature.
pub fn decide(fs: &[Signature], v: ProblemVariant) -> Result<DichotomyVerdict, DichotomyError> {
    v.validate()?;
    let classes = v.candidates();
    let membership: Vec<Vec<bool>> = fs.iter().map(|f| classes.iter().map(|c| c.contains(f)).collect()).collect();
    let containing = (0..classes.len()).find(|&j| membership.iter().all(|row| row[j]));
    let (outcome, counterexamples) = match containing {
        Some(j) => (Outcome::Poly(classes[j]), Vec::new()),
        None => {
            let ce = (0..classes.len())
                .map(|j| {
                    let i = membership.iter().position(|row| !row[j]).expect("some signature is outside");
                    (classes[j], i)
                })
                .collect();
            (Outcome::SharpPHard, ce)
        }
    };
    Ok(DichotomyVerdict { variant: v, outcome, membership, counterexamples })
}
