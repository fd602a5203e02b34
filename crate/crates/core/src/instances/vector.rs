//! Real vector spaces with the affine dilations `x ∘_a y = x + a(y - x)`.

use rand::{Rng, RngCore};

use crate::algebra::{AlgebraHandle, Carrier, Chart, Dilations, DomainBounds};
use crate::error::{Error, Result};
use crate::instances::conical::ConicalGroupSpec;
use crate::point::Point;
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 16;

/// A finite real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorPoint(Vec<f64>);

impl VectorPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("vector point needs at least one coordinate".into()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain(format!("coordinate {i} is not finite")));
        }
        Ok(VectorPoint(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

fn coords_of(p: &Point, dim: usize) -> Result<&[f64]> {
    let v = p.as_vector()?;
    if v.dim() != dim {
        return Err(Error::CarrierMismatch {
            left: format!("vector:{dim}"),
            right: format!("vector:{}", v.dim()),
        });
    }
    Ok(v.coords())
}

fn combine(x: &[f64], y: &[f64], f: impl Fn(f64, f64) -> f64) -> Result<Point> {
    Ok(Point::Vector(VectorPoint::new(x.iter().zip(y).map(|(&a, &b)| f(a, b)).collect())?))
}

/// ℝⁿ as an emergent algebra.
pub struct VectorSpace {
    dim: usize,
    group: ConicalGroupSpec,
}

impl VectorSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::OutOfRange {
                what: "vector space dimension",
                value: dim as f64,
                min: 1.0,
                max: MAX_DIM as f64,
            });
        }
        Ok(VectorSpace {
            dim,
            group: vector_group(dim),
        })
    }
}

impl Dilations for VectorSpace {
    fn carrier(&self) -> Carrier {
        Carrier::Vector { dim: self.dim }
    }

    fn circ(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        let a = a.value();
        combine(coords_of(x, self.dim)?, coords_of(y, self.dim)?, |xi, yi| xi + a * (yi - xi))
    }

    fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        let (x, y) = (coords_of(x, self.dim)?, coords_of(y, self.dim)?);
        Ok(x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
    }

    fn sample(&self, rng: &mut dyn RngCore, bounds: &DomainBounds, count: usize) -> Result<Vec<Point>> {
        let w = bounds.box_half_width;
        (0..count)
            .map(|_| Point::vector((0..self.dim).map(|_| rng.random_range(-w..=w)).collect()))
            .collect()
    }

    fn group(&self) -> Option<&ConicalGroupSpec> {
        Some(&self.group)
    }

    fn chart(&self) -> Option<&dyn Chart> {
        Some(self)
    }
}

/// Flat exponential `exp_x(v) = x + v`.
impl Chart for VectorSpace {
    fn exp(&self, x: &Point, v: &[f64]) -> Result<Point> {
        let x = coords_of(x, self.dim)?;
        if v.len() != self.dim {
            return Err(Error::InvalidInput(format!("tangent vector of length {} in dimension {}", v.len(), self.dim)));
        }
        combine(x, v, |a, b| a + b)
    }

    fn log(&self, x: &Point, y: &Point) -> Result<Vec<f64>> {
        let (x, y) = (coords_of(x, self.dim)?, coords_of(y, self.dim)?);
        Ok(y.iter().zip(x).map(|(b, a)| b - a).collect())
    }
}

/// `(ℝⁿ, +)` with the usual scalar multiplication.
pub fn vector_group(dim: usize) -> ConicalGroupSpec {
    ConicalGroupSpec::new(
        format!("vector:{dim}"),
        Point::vector(vec![0.0; dim]).expect("zero vector is finite"),
        move |x, y| combine(coords_of(x, dim)?, coords_of(y, dim)?, |a, b| a + b),
        move |x| Point::vector(coords_of(x, dim)?.iter().map(|c| -c).collect()),
        move |a, x| Point::vector(coords_of(x, dim)?.iter().map(|c| a.value() * c).collect()),
    )
}

pub fn make_vector_space(n: usize) -> Result<AlgebraHandle> {
    Ok(AlgebraHandle::new(VectorSpace::new(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: f64) -> Scalar {
        Scalar::new(v).unwrap()
    }

    #[test]
    fn dimension_range() {
        assert!(make_vector_space(0).is_err());
        assert!(make_vector_space(17).is_err());
        assert!(make_vector_space(16).is_ok());
    }

    #[test]
    fn circ_on_the_line() {
        let alg = make_vector_space(1).unwrap();
        let r = alg.circ(s(0.5), &Point::real(0.0).unwrap(), &Point::real(4.0).unwrap()).unwrap();
        assert_eq!(r, Point::real(2.0).unwrap());
    }

    #[test]
    fn euclidean_metric() {
        let alg = make_vector_space(2).unwrap();
        let x = Point::vector(vec![0.0, 0.0]).unwrap();
        let y = Point::vector(vec![3.0, 4.0]).unwrap();
        assert_eq!(alg.dist(&x, &y).unwrap(), 5.0);
        assert_eq!(alg.dist(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let alg = make_vector_space(2).unwrap();
        let x = Point::vector(vec![0.0, 0.0]).unwrap();
        let y = Point::vector(vec![3.0]).unwrap();
        assert!(matches!(alg.dist(&x, &y), Err(Error::CarrierMismatch { .. })));
        let m = Point::sphere([0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(alg.circ(s(0.5), &x, &m), Err(Error::CarrierMismatch { .. })));
    }

    #[test]
    fn flat_chart_round_trip() {
        let vs = VectorSpace::new(3).unwrap();
        let x = Point::vector(vec![1.0, -2.0, 0.5]).unwrap();
        let v = [0.25, 0.5, -1.0];
        let y = vs.exp(&x, &v).unwrap();
        assert_eq!(vs.log(&x, &y).unwrap(), v.to_vec());
    }
}
