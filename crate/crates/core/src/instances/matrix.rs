//! Upper unitriangular matrices and the diagonal dilators acting on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, ToPrimitive, Zero};
use num::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exact rational entries.
pub type Rational = BigRational;

/// Entry type of a [`UnipotentMatrix`]: a commutative ring containing the
/// dyadic rationals, with division by non-zero elements.
pub trait Entry:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Exact conversion where the entry type allows it; `None` for
    /// non-finite input.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn recip(&self) -> Self;
}

impl Entry for f64 {
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn recip(&self) -> Self {
        1.0 / self
    }
}

impl Entry for Rational {
    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn recip(&self) -> Self {
        num::traits::Inv::inv(self.clone())
    }
}

/// An `n × n` real upper-triangular matrix with unit diagonal.
///
/// Only the strictly upper entries are stored, so the unit diagonal and the
/// zero lower triangle hold exactly by construction.
#[derive(Clone, PartialEq)]
pub struct UnipotentMatrix<T: Entry = f64> {
    n: usize,
    upper: Vec<T>,
}

#[inline]
fn packed_len(n: usize) -> usize {
    n * (n - 1) / 2
}

impl<T: Entry> UnipotentMatrix<T> {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        UnipotentMatrix {
            n,
            upper: vec![T::zero(); packed_len(n)],
        }
    }

    /// Builds a matrix from its strictly upper entries in row-major order.
    pub fn from_upper(n: usize, upper: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if upper.len() != packed_len(n) {
            return Err(Error::InvalidInput(format!(
                "{n}x{n} unipotent matrix needs {} upper entries, got {}",
                packed_len(n),
                upper.len()
            )));
        }
        Ok(UnipotentMatrix { n, upper })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Strictly upper entries, row-major.
    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i < self.n && j < self.n, "index out of bounds");
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[self.idx(i, j)].clone(),
            std::cmp::Ordering::Equal => T::one(),
            std::cmp::Ordering::Greater => T::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.upper.iter().all(Zero::is_zero)
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.n, other.n, "unipotent matrices of different size");
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_dim(rhs);
        let n = self.n;
        let mut out = Vec::with_capacity(self.upper.len());
        for i in 0..n {
            for j in i + 1..n {
                let mut acc = self.upper[self.idx(i, j)].clone() + rhs.upper[rhs.idx(i, j)].clone();
                for k in i + 1..j {
                    acc = acc
                        + self.upper[self.idx(i, k)].clone() * rhs.upper[rhs.idx(k, j)].clone();
                }
                out.push(acc);
            }
        }
        UnipotentMatrix { n, upper: out }
    }

    pub fn inverse(&self) -> Self {
        let n = self.n;
        let mut inv = Self::identity(n);
        // From A·X = I: X_ij = -A_ij - Σ_{i<k<j} A_ik X_kj, rows bottom-up.
        for i in (0..n).rev() {
            for j in i + 1..n {
                let mut acc = -self.upper[self.idx(i, j)].clone();
                for k in i + 1..j {
                    acc = acc - self.upper[self.idx(i, k)].clone() * inv.upper[inv.idx(k, j)].clone();
                }
                let at = inv.idx(i, j);
                inv.upper[at] = acc;
            }
        }
        inv
    }

    /// `𝐞⁻¹ · self · 𝐞` for `𝐞 = diag(s, s², …, sⁿ)`: entry `(i, j)` is
    /// multiplied by `s^(j-i)`.
    pub fn dilate(&self, s: &T) -> Self {
        let n = self.n;
        let mut powers = Vec::with_capacity(n);
        let mut p = T::one();
        for _ in 0..n {
            powers.push(p.clone());
            p = p * s.clone();
        }
        let mut out = self.clone();
        for i in 0..n {
            for j in i + 1..n {
                let at = out.idx(i, j);
                out.upper[at] = out.upper[at].clone() * powers[j - i].clone();
            }
        }
        out
    }

    /// Group commutator `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// Frobenius distance, accumulated in `f64` after an exact subtraction.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        self.check_dim(other);
        self.upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest absolute entry (the unit diagonal included).
    pub fn max_abs(&self) -> f64 {
        self.upper
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(1.0, f64::max)
    }

    pub fn convert<U: Entry>(&self) -> UnipotentMatrix<U> {
        UnipotentMatrix {
            n: self.n,
            upper: self
                .upper
                .iter()
                .map(|v| U::from_f64(v.to_f64()).unwrap_or_else(U::zero))
                .collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_f64()).collect())
            .collect()
    }
}

impl UnipotentMatrix<f64> {
    /// Validates a dense matrix: square, finite, unit diagonal and zero lower
    /// triangle, all exactly.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let mut upper = Vec::with_capacity(packed_len(n));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!("entry ({i},{j}) is not finite")));
                }
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => upper.push(v),
                    std::cmp::Ordering::Equal if v != 1.0 => {
                        return Err(Error::InvalidInput(format!("diagonal entry ({i},{i}) = {v}, expected 1")))
                    }
                    std::cmp::Ordering::Greater if v != 0.0 => {
                        return Err(Error::InvalidInput(format!("lower entry ({i},{j}) = {v}, expected 0")))
                    }
                    _ => {}
                }
            }
        }
        Ok(UnipotentMatrix { n, upper })
    }

    /// Exact rational copy (every finite `f64` is a dyadic rational).
    pub fn to_exact(&self) -> UnipotentMatrix<Rational> {
        self.convert()
    }
}

impl UnipotentMatrix<Rational> {
    /// Nearest `f64` matrix.
    pub fn to_f64(&self) -> UnipotentMatrix<f64> {
        self.convert()
    }
}

impl<T: Entry> fmt::Debug for UnipotentMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnipotentMatrix")
            .field("n", &self.n)
            .field("rows", &self.to_rows())
            .finish()
    }
}

/// The diagonal matrix `𝐞` with `𝐞_ii = scaleⁱ` (1-based `i`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalDilator {
    pub scale: Scalar,
    pub dim: usize,
}

impl DiagonalDilator {
    pub fn new(scale: Scalar, dim: usize) -> Self {
        DiagonalDilator { scale, dim }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (1..=self.dim).map(|i| self.scale.value().powi(i as i32)).collect()
    }

    /// `𝐞⁻¹ · m · 𝐞`.
    pub fn conjugate<T: Entry>(&self, m: &UnipotentMatrix<T>) -> Result<UnipotentMatrix<T>> {
        if m.dim() != self.dim {
            return Err(Error::InvalidInput(format!(
                "dilator of size {} applied to a {}x{} matrix",
                self.dim,
                m.dim(),
                m.dim()
            )));
        }
        let s = T::from_f64(self.scale.value()).ok_or(Error::InvalidScalar(self.scale.value()))?;
        Ok(m.dilate(&s))
    }
}
