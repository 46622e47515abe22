//! Scalars: exact elements of Q(w), w = e^{2πi/8}, or tolerance-compared
//! complex floats.

mod cyclotomic;
mod parse;
mod rational;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_complex::Complex64;
use thiserror::Error;

pub use cyclotomic::Cyclo8;
pub use parse::{format_scalar, parse_scalar, ParseError};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands use different numeric modes")]
    MixedModes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl Mode {
    /// Mode selected by `MATCHKIT_MODE`, falling back to exact.
    pub fn from_env() -> Mode {
        std::env::var("MATCHKIT_MODE")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_default()
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

const DEFAULT_EPS: f64 = 1e-9;

// Zero bits mean "not yet initialised"; a tolerance of exactly 0.0 is stored
// as the smallest subnormal instead.
static EPS_BITS: AtomicU64 = AtomicU64::new(0);

/// Absolute tolerance used by every float-mode comparison.
pub fn tolerance() -> f64 {
    let bits = EPS_BITS.load(AtomicOrdering::Relaxed);
    if bits != 0 {
        return f64::from_bits(bits);
    }
    let eps = std::env::var("MATCHKIT_EPS")
        .ok()
        .and_then(|v| v.parse::<f64>().ok())
        .filter(|e| e.is_finite() && *e >= 0.0)
        .unwrap_or(DEFAULT_EPS);
    set_tolerance(eps);
    eps
}

pub fn set_tolerance(eps: f64) {
    let eps = if eps <= 0.0 { f64::from_bits(1) } else { eps };
    EPS_BITS.store(eps.to_bits(), AtomicOrdering::Relaxed);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourthPower {
    One,
    MinusOne,
    OtherOrZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Cyclo8),
    Float(Complex64),
}

impl Scalar {
    pub fn zero(mode: Mode) -> Scalar {
        Scalar::from_int(0, mode)
    }

    pub fn one(mode: Mode) -> Scalar {
        Scalar::from_int(1, mode)
    }

    pub fn from_int(v: i64, mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(Cyclo8::from_int(v)),
            Mode::Float => Scalar::Float(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn from_rational(r: Rational, mode: Mode) -> Scalar {
        Scalar::Exact(Cyclo8::from_rational(r)).into_mode(mode)
    }

    /// `w^k`, the k-th power of the primitive 8th root of unity.
    pub fn root_of_unity(k: i64, mode: Mode) -> Scalar {
        Scalar::Exact(Cyclo8::root_of_unity(k)).into_mode(mode)
    }

    pub fn i(mode: Mode) -> Scalar {
        Scalar::root_of_unity(2, mode)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    /// Converts to `mode`. Exact values embed into floats; floats stay floats
    /// when exact mode is requested (there is no faithful way back).
    pub fn into_mode(self, mode: Mode) -> Scalar {
        match (self, mode) {
            (Scalar::Exact(c), Mode::Float) => Scalar::Float(c.to_complex()),
            (s, _) => s,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(c) => c.to_complex(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&Cyclo8> {
        match self {
            Scalar::Exact(c) => Some(c),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Float(z) => z.norm() <= tolerance(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(c) => c == &Cyclo8::one(),
            Scalar::Float(z) => (z - 1.0).norm() <= tolerance(),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Exact(c) => c.inverse().map(Scalar::Exact),
            Scalar::Float(z) => Some(Scalar::Float(z.inv())),
        }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(c.pow(exp)),
            Scalar::Float(z) => Scalar::Float(z.powu(exp)),
        }
    }

    /// A square root inside the active field, if one exists. Exact results
    /// are normalised to the half-plane `re > 0` (or `re = 0, im > 0`).
    pub fn sqrt_in_field(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(c) => c.sqrt().map(Scalar::Exact),
            Scalar::Float(z) => Some(Scalar::Float(z.sqrt())),
        }
    }

    pub fn fourth_power_is_unit(&self) -> FourthPower {
        let p = self.pow(4);
        let mode = self.mode();
        if p == Scalar::one(mode) {
            FourthPower::One
        } else if p == Scalar::from_int(-1, mode) {
            FourthPower::MinusOne
        } else {
            FourthPower::OtherOrZero
        }
    }

    /// Canonical representative test for `±s`; see [`Cyclo8::is_canonical_sign`].
    pub fn is_canonical_sign(&self) -> bool {
        match self {
            Scalar::Exact(c) => c.is_canonical_sign(),
            Scalar::Float(z) => z.re > 0.0 || (z.re == 0.0 && z.im > 0.0),
        }
    }

    /// Checked arithmetic; the operator impls panic where this returns an error.
    pub fn field_op(a: &Scalar, b: &Scalar, op: FieldOp) -> Result<Scalar, NumError> {
        if a.mode() != b.mode() {
            return Err(NumError::MixedModes);
        }
        Ok(match op {
            FieldOp::Add => a + b,
            FieldOp::Sub => a - b,
            FieldOp::Mul => a * b,
            FieldOp::Div => {
                let inv = b.inverse().ok_or(NumError::DivisionByZero)?;
                a * &inv
            }
        })
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => (a - b).norm() <= tolerance(),
            _ => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scalar(self))
    }
}

fn mixed() -> ! {
    panic!("arithmetic on scalars of different modes")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            _ => mixed(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a - b),
            _ => mixed(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            _ => mixed(),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        match Scalar::field_op(self, rhs, FieldOp::Div) {
            Ok(v) => v,
            Err(NumError::MixedModes) => mixed(),
            Err(NumError::DivisionByZero) => panic!("scalar division by zero"),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
