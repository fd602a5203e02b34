use crate::error::{Error, Result};
use crate::instances::matrix::{Rational, UnipotentMatrix};
use crate::instances::sphere::SpherePoint;
use crate::instances::vector::VectorPoint;

/// An element of some carrier.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Vector(VectorPoint),
    /// Unipotent matrices are held exactly; see [`crate::instances::unipotent`].
    Matrix(UnipotentMatrix<Rational>),
    Sphere(SpherePoint),
}

impl Point {
    pub fn vector(coords: Vec<f64>) -> Result<Point> {
        VectorPoint::new(coords).map(Point::Vector)
    }

    /// A point of the real line.
    pub fn real(x: f64) -> Result<Point> {
        Point::vector(vec![x])
    }

    pub fn matrix(m: &UnipotentMatrix<f64>) -> Point {
        Point::Matrix(m.to_exact())
    }

    pub fn sphere(coords: [f64; 3]) -> Result<Point> {
        SpherePoint::new(coords).map(Point::Sphere)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Point::Vector(_) => "vector",
            Point::Matrix(_) => "matrix",
            Point::Sphere(_) => "sphere",
        }
    }

    fn mismatch(&self, wanted: &str) -> Error {
        Error::CarrierMismatch {
            left: wanted.to_string(),
            right: self.kind().to_string(),
        }
    }

    pub fn as_vector(&self) -> Result<&VectorPoint> {
        match self {
            Point::Vector(v) => Ok(v),
            other => Err(other.mismatch("vector")),
        }
    }

    pub fn as_matrix(&self) -> Result<&UnipotentMatrix<Rational>> {
        match self {
            Point::Matrix(m) => Ok(m),
            other => Err(other.mismatch("matrix")),
        }
    }

    pub fn as_sphere(&self) -> Result<&SpherePoint> {
        match self {
            Point::Sphere(s) => Ok(s),
            other => Err(other.mismatch("sphere")),
        }
    }

    /// Flat `f64` coordinates: vector entries, strictly upper matrix entries
    /// (row-major) or the three ambient sphere coordinates.
    pub fn coordinates(&self) -> Vec<f64> {
        match self {
            Point::Vector(v) => v.coords().to_vec(),
            Point::Matrix(m) => m.to_f64().upper().to_vec(),
            Point::Sphere(s) => s.coords().to_vec(),
        }
    }
}

impl From<VectorPoint> for Point {
    fn from(v: VectorPoint) -> Self {
        Point::Vector(v)
    }
}

impl From<SpherePoint> for Point {
    fn from(s: SpherePoint) -> Self {
        Point::Sphere(s)
    }
}

impl From<UnipotentMatrix<f64>> for Point {
    fn from(m: UnipotentMatrix<f64>) -> Self {
        Point::matrix(&m)
    }
}
