//! Elements of the cyclotomic field Q(w), w = e^{2πi/8}.
//!
//! An element is stored as `c0 + c1 w + c2 w^2 + c3 w^3`. The reduction
//! `w^4 = -1` keeps every product in this basis.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Cyclo8 {
    coeffs: [Rational; 4],
}

impl Cyclo8 {
    pub fn new(coeffs: [Rational; 4]) -> Self {
        Cyclo8 { coeffs }
    }

    pub fn zero() -> Self {
        Cyclo8::default()
    }

    pub fn one() -> Self {
        Cyclo8::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclo8 { coeffs: [r, Rational::zero(), Rational::zero(), Rational::zero()] }
    }

    pub fn from_int(v: i64) -> Self {
        Cyclo8::from_rational(Rational::from_int(v))
    }

    /// `w^k` for any integer `k`.
    pub fn root_of_unity(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut c = Cyclo8::zero();
        if k < 4 {
            c.coeffs[k] = Rational::one();
        } else {
            c.coeffs[k - 4] = -Rational::one();
        }
        c
    }

    /// Gaussian rational `re + im·i`.
    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Cyclo8 { coeffs: [re, Rational::zero(), im, Rational::zero()] }
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn is_gaussian(&self) -> bool {
        self.coeffs[1].is_zero() && self.coeffs[3].is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let [c0, c1, c2, c3] = self.coeffs.clone().map(|c| c.to_f64());
        Complex64::new(c0 + h * (c1 - c3), c2 + h * (c1 + c3))
    }

    /// The automorphism `w -> w^k` for odd `k`.
    pub fn galois(&self, k: i64) -> Self {
        let mut out = Cyclo8::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = (j as i64 * k).rem_euclid(8) as usize;
            if target < 4 {
                out.coeffs[target] = &out.coeffs[target] + c;
            } else {
                out.coeffs[target - 4] = &out.coeffs[target - 4] - c;
            }
        }
        out
    }

    /// Field norm down to Q: product of all four conjugates.
    pub fn norm(&self) -> Rational {
        let prod = &(&(self * &self.galois(3)) * &self.galois(5)) * &self.galois(7);
        debug_assert!(prod.is_rational());
        prod.coeffs[0].clone()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let conj = &(&self.galois(3) * &self.galois(5)) * &self.galois(7);
        let n = (self * &conj).coeffs[0].clone();
        let inv_n = n.recip()?;
        Some(conj.scale(&inv_n))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclo8 { coeffs: self.coeffs.clone().map(|c| &c * r) }
    }

    /// Sign of the real part of the complex embedding, decided exactly.
    pub fn real_sign(&self) -> Ordering {
        // re = c0 + (c1 - c3)/sqrt(2)
        let half_sqrt2 = &self.coeffs[1] - &self.coeffs[3];
        sign_of_a_plus_b_over_sqrt2(&self.coeffs[0], &half_sqrt2)
    }

    /// Sign of the imaginary part of the complex embedding, decided exactly.
    pub fn imag_sign(&self) -> Ordering {
        // im = c2 + (c1 + c3)/sqrt(2)
        let b = &self.coeffs[1] + &self.coeffs[3];
        sign_of_a_plus_b_over_sqrt2(&self.coeffs[2], &b)
    }

    /// True for the half-plane `re > 0 or (re = 0 and im > 0)`; used to pick
    /// a canonical member of `±s`.
    pub fn is_canonical_sign(&self) -> bool {
        match self.real_sign() {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.imag_sign() == Ordering::Greater,
        }
    }

    /// Square root inside Q(w), if one exists.
    ///
    /// Uses the tower Q ⊂ Q(i) ⊂ Q(i)(√2): writing `a = p + q√2` with
    /// `p, q ∈ Q(i)`, a root `u + v√2` satisfies `u² + 2v² = p`, `2uv = q`,
    /// which reduces to square roots in Q(i) of `p² - 2q²` and of `(p ± r)/2`.
    /// The search is complete; the canonical-sign root is returned.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Cyclo8::zero());
        }
        let root = sqrt_tower(self)?;
        debug_assert_eq!(&(&root * &root), self);
        Some(if root.is_canonical_sign() { root } else { -root })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Cyclo8::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

fn sign_of_a_plus_b_over_sqrt2(a: &Rational, b: &Rational) -> Ordering {
    let sa = a.signum();
    let sb = b.signum();
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: compare a^2 with b^2/2
    let a2 = a * a;
    let b2 = &(b * b) / &Rational::from_int(2);
    match a2.cmp(&b2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// √2 = w - w³.
fn sqrt2() -> Cyclo8 {
    &Cyclo8::root_of_unity(1) - &Cyclo8::root_of_unity(3)
}

/// Splits `a` as `p + q·√2` with `p, q` Gaussian rationals.
fn split_sqrt2(a: &Cyclo8) -> (Cyclo8, Cyclo8) {
    // w = (1+i)/√2 = (1+i)√2/2, w³ = (-1+i)√2/2
    let [c0, c1, c2, c3] = a.coeffs.clone();
    let half = Rational::new(1, 2);
    let p = Cyclo8::gaussian(c0, c2);
    let q = Cyclo8::gaussian(&(&c1 - &c3) * &half, &(&c1 + &c3) * &half);
    (p, q)
}

fn sqrt_gaussian(a: &Cyclo8) -> Option<Cyclo8> {
    debug_assert!(a.is_gaussian());
    let x = a.coeffs[0].clone();
    let y = a.coeffs[2].clone();
    if y.is_zero() {
        if let Some(m) = x.sqrt() {
            return Some(Cyclo8::from_rational(m));
        }
        let n = (-&x).sqrt()?;
        return Some(Cyclo8::gaussian(Rational::zero(), n));
    }
    let modulus = (&(&x * &x) + &(&y * &y)).sqrt()?;
    let m2 = &(&x + &modulus) / &Rational::from_int(2);
    let m = m2.sqrt()?;
    let n = &y / &(&m * &Rational::from_int(2));
    Some(Cyclo8::gaussian(m, n))
}

fn sqrt_tower(a: &Cyclo8) -> Option<Cyclo8> {
    let (p, q) = split_sqrt2(a);
    let root2 = sqrt2();
    if q.is_zero() {
        if let Some(u) = sqrt_gaussian(&p) {
            return Some(u);
        }
        let v = sqrt_gaussian(&p.scale(&Rational::new(1, 2)))?;
        return Some(&v * &root2);
    }
    let disc = &(&p * &p) - &(&q * &q).scale(&Rational::from_int(2));
    let r = sqrt_gaussian(&disc)?;
    for cand in [&p + &r, &p - &r] {
        let u2 = cand.scale(&Rational::new(1, 2));
        if u2.is_zero() {
            continue;
        }
        if let Some(u) = sqrt_gaussian(&u2) {
            let two_u = u.scale(&Rational::from_int(2));
            let v = &q * &two_u.inverse()?;
            let s = &u + &(&v * &root2);
            if &(&s * &s) == a {
                return Some(s);
            }
        }
    }
    None
}

impl<'a> Add<&'a Cyclo8> for &'a Cyclo8 {
    type Output = Cyclo8;
    fn add(self, rhs: &'a Cyclo8) -> Cyclo8 {
        let mut out = self.clone();
        for (o, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !r.is_zero() {
                *o = &*o + r;
            }
        }
        out
    }
}

impl<'a> Sub<&'a Cyclo8> for &'a Cyclo8 {
    type Output = Cyclo8;
    fn sub(self, rhs: &'a Cyclo8) -> Cyclo8 {
        let mut out = self.clone();
        for (o, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !r.is_zero() {
                *o = &*o - r;
            }
        }
        out
    }
}

impl<'a> Mul<&'a Cyclo8> for &'a Cyclo8 {
    type Output = Cyclo8;
    fn mul(self, rhs: &'a Cyclo8) -> Cyclo8 {
        let mut out = Cyclo8::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                let k = i + j;
                if k < 4 {
                    out.coeffs[k] = &out.coeffs[k] + &prod;
                } else {
                    out.coeffs[k - 4] = &out.coeffs[k - 4] - &prod;
                }
            }
        }
        out
    }
}

impl Neg for &Cyclo8 {
    type Output = Cyclo8;
    fn neg(self) -> Cyclo8 {
        Cyclo8 { coeffs: self.coeffs.clone().map(|c| -c) }
    }
}

impl Neg for Cyclo8 {
    type Output = Cyclo8;
    fn neg(self) -> Cyclo8 {
        -&self
    }
}

impl fmt::Display for Cyclo8 {
    /// Gaussian values print as `a+bi`; everything else as a polynomial in `w`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let units: [&str; 4] = if self.is_gaussian() {
            ["", "", "i", ""]
        } else {
            ["", "w", "w^2", "w^3"]
        };
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.signum() == Ordering::Less;
            let magnitude = if negative { -c } else { c.clone() };
            if negative {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if k == 0 {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{}", units[k])?;
            } else {
                write!(f, "{magnitude}{}", units[k])?;
            }
            first = false;
        }
        Ok(())
    }
}
