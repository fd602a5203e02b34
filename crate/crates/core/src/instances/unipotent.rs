//! The group `N` of upper unitriangular matrices with the dilations
//! `δ^x_e y = x 𝐞⁻¹ x⁻¹ y 𝐞`, `𝐞 = diag(e, e², …, eⁿ)`.
//!
//! Points are held as exact rationals. Every finite `f64` is a dyadic
//! rational and the group law and the dilations are polynomial in the entries,
//! so compositions carry no rounding at all. This matters for the emergent
//! limits: `x •_ε w` rescales the graded entries of `x⁻¹w` by up to
//! `ε^-(n-1)`, which in floating point would amplify the cancellation error of
//! `x⁻¹w` beyond any useful tolerance once `n ≥ 3`.

use rand::{Rng, RngCore};

use crate::algebra::{AlgebraHandle, Carrier, Dilations, DomainBounds};
use crate::error::{Error, Result};
use crate::instances::conical::ConicalGroupSpec;
use crate::instances::matrix::{Entry, Rational, UnipotentMatrix};
use crate::point::Point;
use crate::scalar::Scalar;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

fn exact_scalar(a: Scalar) -> Result<Rational> {
    Rational::from_f64(a.value()).ok_or(Error::InvalidScalar(a.value()))
}

fn matrix_of(p: &Point, dim: usize) -> Result<&UnipotentMatrix<Rational>> {
    let m = p.as_matrix()?;
    if m.dim() != dim {
        return Err(Error::CarrierMismatch {
            left: format!("unipotent:{dim}"),
            right: format!("unipotent:{}", m.dim()),
        });
    }
    Ok(m)
}

pub struct UnipotentGroup {
    dim: usize,
    group: ConicalGroupSpec,
}

impl UnipotentGroup {
    pub fn new(dim: usize) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(Error::OutOfRange {
                what: "unipotent dimension",
                value: dim as f64,
                min: MIN_DIM as f64,
                max: MAX_DIM as f64,
            });
        }
        Ok(UnipotentGroup {
            dim,
            group: unipotent_group(dim),
        })
    }
}

impl Dilations for UnipotentGroup {
    fn carrier(&self) -> Carrier {
        Carrier::Unipotent { dim: self.dim }
    }

    fn circ(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        let (x, y) = (matrix_of(x, self.dim)?, matrix_of(y, self.dim)?);
        let rel = x.inverse().mul(y);
        Ok(Point::Matrix(x.mul(&rel.dilate(&exact_scalar(a)?))))
    }

    fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        Ok(matrix_of(x, self.dim)?.frobenius_distance(matrix_of(y, self.dim)?))
    }

    fn sample(&self, rng: &mut dyn RngCore, bounds: &DomainBounds, count: usize) -> Result<Vec<Point>> {
        let w = bounds.box_half_width;
        let len = self.dim * (self.dim - 1) / 2;
        (0..count)
            .map(|_| {
                let upper = (0..len).map(|_| rng.random_range(-w..=w)).collect();
                UnipotentMatrix::from_upper(self.dim, upper).map(Point::from)
            })
            .collect()
    }

    fn group(&self) -> Option<&ConicalGroupSpec> {
        Some(&self.group)
    }
}

/// `N` with matrix multiplication and the diagonal-conjugation scaling.
pub fn unipotent_group(dim: usize) -> ConicalGroupSpec {
    ConicalGroupSpec::new(
        format!("unipotent:{dim}"),
        Point::Matrix(UnipotentMatrix::identity(dim)),
        move |x, y| Ok(Point::Matrix(matrix_of(x, dim)?.mul(matrix_of(y, dim)?))),
        move |x| Ok(Point::Matrix(matrix_of(x, dim)?.inverse())),
        move |a, x| Ok(Point::Matrix(matrix_of(x, dim)?.dilate(&exact_scalar(a)?))),
    )
}

pub fn make_unipotent(n: usize) -> Result<AlgebraHandle> {
    Ok(AlgebraHandle::new(UnipotentGroup::new(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: f64) -> Scalar {
        Scalar::new(v).unwrap()
    }

    fn m(n: usize, upper: &[f64]) -> Point {
        Point::from(UnipotentMatrix::from_upper(n, upper.to_vec()).unwrap())
    }

    #[test]
    fn dimension_range() {
        assert!(make_unipotent(1).is_err());
        assert!(make_unipotent(9).is_err());
        assert!(make_unipotent(8).is_ok());
    }

    #[test]
    fn circ_scales_the_corner_entry() {
        let alg = make_unipotent(2).unwrap();
        let r = alg.circ(s(0.5), &m(2, &[0.0]), &m(2, &[1.0])).unwrap();
        assert_eq!(r, m(2, &[0.5]));
        let back = alg.bullet(s(0.5), &m(2, &[0.0]), &r).unwrap();
        assert_eq!(back, m(2, &[1.0]));
    }

    #[test]
    fn circ_matches_explicit_conjugation_formula() {
        // oracle: x 𝐞⁻¹ x⁻¹ y 𝐞 with dense f64 matrices
        let alg = make_unipotent(3).unwrap();
        let x = UnipotentMatrix::from_upper(3, vec![0.5, -0.25, 0.75]).unwrap();
        let y = UnipotentMatrix::from_upper(3, vec![-1.0, 0.5, 0.25]).unwrap();
        let e = 0.3f64;
        let d = [e, e * e, e * e * e];
        let dense = |a: &[Vec<f64>], b: &[Vec<f64>]| -> Vec<Vec<f64>> {
            (0..3).map(|i| (0..3).map(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
        };
        let diag = |v: [f64; 3]| -> Vec<Vec<f64>> {
            (0..3).map(|i| (0..3).map(|j| if i == j { v[i] } else { 0.0 }).collect()).collect()
        };
        let e_inv = diag([1.0 / d[0], 1.0 / d[1], 1.0 / d[2]]);
        let oracle = dense(
            &dense(&dense(&dense(&x.to_rows(), &e_inv), &x.inverse().to_rows()), &y.to_rows()),
            &diag(d),
        );
        let got = alg.circ(s(e), &Point::from(x), &Point::from(y)).unwrap();
        let got = got.as_matrix().unwrap().to_f64().to_rows();
        for i in 0..3 {
            for j in 0..3 {
                assert!((got[i][j] - oracle[i][j]).abs() < 1e-14, "({i},{j}) {} vs {}", got[i][j], oracle[i][j]);
            }
        }
    }

    #[test]
    fn action_law_is_exact() {
        let alg = make_unipotent(4).unwrap();
        let x = m(4, &[0.1, -0.2, 0.3, 0.4, -0.5, 0.6]);
        let y = m(4, &[-0.7, 0.8, 0.9, -0.1, 0.2, -0.3]);
        let (a, b) = (s(0.5), s(0.25));
        let lhs = alg.circ(a, &x, &alg.circ(b, &x, &y).unwrap()).unwrap();
        let rhs = alg.circ(a * b, &x, &y).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_metric() {
        let alg = make_unipotent(2).unwrap();
        assert_eq!(alg.dist(&m(2, &[0.0]), &m(2, &[0.0])).unwrap(), 0.0);
        assert_eq!(alg.dist(&m(2, &[0.0]), &m(2, &[-3.0])).unwrap(), 3.0);
        assert!(alg.dist(&m(2, &[0.0]), &m(3, &[0.0, 0.0, 0.0])).is_err());
    }
}
