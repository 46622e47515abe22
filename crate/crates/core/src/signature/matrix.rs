use std::fmt;

use crate::exactnum::{Mode, Scalar};

/// A 2×2 matrix `[[t00, t01], [t10, t11]]` used for holographic transforms.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryMatrix {
    pub t: [[Scalar; 2]; 2],
}

impl BinaryMatrix {
    pub fn new(t00: Scalar, t01: Scalar, t10: Scalar, t11: Scalar) -> Self {
        BinaryMatrix { t: [[t00, t01], [t10, t11]] }
    }

    pub fn from_ints(v: [[i64; 2]; 2], mode: Mode) -> Self {
        let s = |x| Scalar::from_int(x, mode);
        BinaryMatrix::new(s(v[0][0]), s(v[0][1]), s(v[1][0]), s(v[1][1]))
    }

    pub fn identity(mode: Mode) -> Self {
        BinaryMatrix::from_ints([[1, 0], [0, 1]], mode)
    }

    /// `H2 = [[1, 1], [1, -1]]`.
    pub fn hadamard(mode: Mode) -> Self {
        BinaryMatrix::from_ints([[1, 1], [1, -1]], mode)
    }

    pub fn mode(&self) -> Mode {
        self.t[0][0].mode()
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.t[row][col]
    }

    pub fn det(&self) -> Scalar {
        &(&self.t[0][0] * &self.t[1][1]) - &(&self.t[0][1] * &self.t[1][0])
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn inverse(&self) -> Option<BinaryMatrix> {
        let inv_det = self.det().inverse()?;
        let [[a, b], [c, d]] = &self.t;
        Some(BinaryMatrix::new(
            d * &inv_det,
            &(-b) * &inv_det,
            &(-c) * &inv_det,
            a * &inv_det,
        ))
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let [[a, b], [c, d]] = self.t.clone();
        BinaryMatrix::new(a, c, b, d)
    }

    pub fn mul(&self, other: &BinaryMatrix) -> BinaryMatrix {
        let e = |i: usize, j: usize| {
            &(&self.t[i][0] * &other.t[0][j]) + &(&self.t[i][1] * &other.t[1][j])
        };
        BinaryMatrix::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.t;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_squares_to_twice_identity() {
        let h = BinaryMatrix::hadamard(Mode::Exact);
        let two = BinaryMatrix::from_ints([[2, 0], [0, 2]], Mode::Exact);
        assert_eq!(h.mul(&h), two);
        assert_eq!(h.det(), Scalar::from_int(-2, Mode::Exact));
    }

    #[test]
    fn inverse_round_trip() {
        let m = BinaryMatrix::from_ints([[2, 1], [1, 1]], Mode::Exact);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), BinaryMatrix::identity(Mode::Exact));
        assert!(BinaryMatrix::from_ints([[1, 2], [2, 4]], Mode::Exact).inverse().is_none());
    }
}
