//! The unit sphere S² with geodesic dilations
//! `x ∘_a y = exp_x(a · log_x y)`.

use std::f64::consts::PI;

use rand::{Rng, RngCore};

use crate::algebra::{AlgebraHandle, Carrier, Chart, Dilations, DomainBounds};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::Scalar;

/// Points closer than this (in angle) to the antipode have no logarithm.
pub const ANTIPODAL_MARGIN: f64 = 1e-9;
const ORTHOGONALITY_TOL: f64 = 1e-12;

type V3 = [f64; 3];

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &V3) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn axpy(alpha: f64, x: &V3, y: &V3) -> V3 {
    [alpha * x[0] + y[0], alpha * x[1] + y[1], alpha * x[2] + y[2]]
}

fn scale(alpha: f64, x: &V3) -> V3 {
    [alpha * x[0], alpha * x[1], alpha * x[2]]
}

/// A unit vector in ℝ³, renormalised on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint(V3);

impl SpherePoint {
    pub const NORTH: SpherePoint = SpherePoint([0.0, 0.0, 1.0]);

    pub fn new(coords: V3) -> Result<Self> {
        let n = norm(&coords);
        if !n.is_finite() || n < 1e-12 {
            return Err(Error::domain(format!("{coords:?} cannot be normalised onto the sphere")));
        }
        Ok(SpherePoint(scale(1.0 / n, &coords)))
    }

    pub fn coords(&self) -> &V3 {
        &self.0
    }

    /// Great-circle distance.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        norm(&cross(&self.0, &other.0)).atan2(dot(&self.0, &other.0))
    }
}

/// A vector tangent to the sphere at `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub base: SpherePoint,
    pub vec: V3,
}

impl TangentVector {
    /// Accepts `vec` if its normal component is below `1e-12 · max(1, |vec|)`
    /// and removes that component.
    pub fn new(base: SpherePoint, vec: V3) -> Result<Self> {
        if vec.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("tangent vector is not finite"));
        }
        let normal = dot(&base.0, &vec);
        if normal.abs() > ORTHOGONALITY_TOL * norm(&vec).max(1.0) {
            return Err(Error::domain(format!(
                "vector {vec:?} is not tangent at {:?} (normal component {normal:e})",
                base.0
            )));
        }
        Ok(TangentVector {
            base,
            vec: axpy(-normal, &base.0, &vec),
        })
    }

    pub fn zero(base: SpherePoint) -> Self {
        TangentVector { base, vec: [0.0; 3] }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.vec)
    }
}

/// `exp_x(v) = cos|v| · x + sin|v| · v/|v|`, for `|v| < π`.
pub fn sphere_exp(x: &SpherePoint, v: &TangentVector) -> Result<SpherePoint> {
    if x.angle_to(&v.base) > 1e-12 {
        return Err(Error::InvalidInput("tangent vector is based at a different point".into()));
    }
    let t = v.norm();
    if t >= PI {
        return Err(Error::domain(format!("|v| = {t} reaches the cut locus (π)")));
    }
    if t == 0.0 {
        return Ok(*x);
    }
    SpherePoint::new(axpy(t.cos(), &x.0, &scale(t.sin() / t, &v.vec)))
}

/// Inverse of [`sphere_exp`]; the result has length `dist(x, y)`.
pub fn sphere_log(x: &SpherePoint, y: &SpherePoint) -> Result<TangentVector> {
    let c = dot(&x.0, &y.0);
    let w = axpy(-c, &x.0, &y.0);
    let s = norm(&w);
    let theta = s.atan2(c);
    if theta > PI - ANTIPODAL_MARGIN {
        return Err(Error::domain("antipodal points have no geodesic logarithm"));
    }
    if s == 0.0 {
        return Ok(TangentVector::zero(*x));
    }
    let v = scale(theta / s, &w);
    // re-project: w is orthogonal to x up to rounding
    let normal = dot(&x.0, &v);
    Ok(TangentVector {
        base: *x,
        vec: axpy(-normal, &x.0, &v),
    })
}

fn sphere_of(p: &Point) -> Result<&SpherePoint> {
    p.as_sphere()
}

fn tangent3(v: &[f64]) -> Result<V3> {
    v.try_into()
        .map_err(|_| Error::InvalidInput(format!("sphere tangent vectors have 3 coordinates, got {}", v.len())))
}

pub struct Sphere;

impl Dilations for Sphere {
    fn carrier(&self) -> Carrier {
        Carrier::Sphere
    }

    fn circ(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        let x = sphere_of(x)?;
        let v = sphere_log(x, sphere_of(y)?)?;
        let scaled = TangentVector {
            base: *x,
            vec: scale(a.value(), &v.vec),
        };
        Ok(Point::Sphere(sphere_exp(x, &scaled)?))
    }

    fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        Ok(sphere_of(x)?.angle_to(sphere_of(y)?))
    }

    /// A uniformly random centre, then `count` points in the geodesic cap of
    /// radius `bounds.cap_radius` around it.
    fn sample(&self, rng: &mut dyn RngCore, bounds: &DomainBounds, count: usize) -> Result<Vec<Point>> {
        let centre = loop {
            let g = gaussian3(rng);
            if norm(&g) > 1e-6 {
                break SpherePoint::new(g)?;
            }
        };
        (0..count)
            .map(|_| {
                let dir = loop {
                    let g = gaussian3(rng);
                    let t = axpy(-dot(&g, &centre.0), &centre.0, &g);
                    let n = norm(&t);
                    if n > 1e-6 {
                        break scale(1.0 / n, &t);
                    }
                };
                let angle = bounds.cap_radius * rng.random::<f64>().sqrt();
                let v = TangentVector {
                    base: centre,
                    vec: scale(angle, &dir),
                };
                sphere_exp(&centre, &v).map(Point::Sphere)
            })
            .collect()
    }

    fn chart(&self) -> Option<&dyn Chart> {
        Some(self)
    }
}

impl Chart for Sphere {
    fn exp(&self, x: &Point, v: &[f64]) -> Result<Point> {
        let x = sphere_of(x)?;
        let v = TangentVector::new(*x, tangent3(v)?)?;
        Ok(Point::Sphere(sphere_exp(x, &v)?))
    }

    fn log(&self, x: &Point, y: &Point) -> Result<Vec<f64>> {
        Ok(sphere_log(sphere_of(x)?, sphere_of(y)?)?.vec.to_vec())
    }
}

fn gaussian3(rng: &mut dyn RngCore) -> V3 {
    // Box-Muller; three of the four normals are used
    let mut out = [0.0; 4];
    for pair in out.chunks_mut(2) {
        let u1: f64 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        pair[0] = r * (2.0 * PI * u2).cos();
        pair[1] = r * (2.0 * PI * u2).sin();
    }
    [out[0], out[1], out[2]]
}

pub fn make_sphere() -> AlgebraHandle {
    AlgebraHandle::new(Sphere)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &V3, b: &V3, tol: f64) -> bool {
        (0..3).all(|i| (a[i] - b[i]).abs() < tol)
    }

    #[test]
    fn quarter_great_circle() {
        let v = TangentVector::new(SpherePoint::NORTH, [PI / 2.0, 0.0, 0.0]).unwrap();
        let y = sphere_exp(&SpherePoint::NORTH, &v).unwrap();
        assert!(close(y.coords(), &[1.0, 0.0, 0.0], 1e-15));
        let back = sphere_log(&SpherePoint::NORTH, &SpherePoint::new([1.0, 0.0, 0.0]).unwrap()).unwrap();
        assert!(close(&back.vec, &[PI / 2.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn zero_vector_and_self_log() {
        let x = SpherePoint::new([1.0, 2.0, 2.0]).unwrap();
        assert_eq!(sphere_exp(&x, &TangentVector::zero(x)).unwrap(), x);
        assert_eq!(sphere_log(&x, &x).unwrap().vec, [0.0; 3]);
    }

    #[test]
    fn domain_errors() {
        let south = SpherePoint::new([0.0, 0.0, -1.0]).unwrap();
        assert!(sphere_log(&SpherePoint::NORTH, &south).unwrap_err().is_domain());
        let long = TangentVector::new(SpherePoint::NORTH, [PI, 0.0, 0.0]).unwrap();
        assert!(sphere_exp(&SpherePoint::NORTH, &long).unwrap_err().is_domain());
        assert!(TangentVector::new(SpherePoint::NORTH, [0.0, 0.0, 0.1]).is_err());
        let alg = make_sphere();
        let r = alg.circ(Scalar::new(0.5).unwrap(), &Point::Sphere(SpherePoint::NORTH), &Point::Sphere(south));
        assert!(r.unwrap_err().is_domain());
    }

    #[test]
    fn meridian_halving() {
        // oracle: along the meridian y = 0 the point at angle θ is (sin θ, 0, cos θ)
        let alg = make_sphere();
        let y = Point::sphere([0.8f64.sin(), 0.0, 0.8f64.cos()]).unwrap();
        let r = alg.circ(Scalar::new(0.5).unwrap(), &Point::Sphere(SpherePoint::NORTH), &y).unwrap();
        let expect = [0.4f64.sin(), 0.0, 0.4f64.cos()];
        assert!(close(r.as_sphere().unwrap().coords(), &expect, 1e-15));
    }

    #[test]
    fn log_length_is_distance_and_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x = SpherePoint::new(gaussian3(&mut rng)).unwrap();
            let raw = gaussian3(&mut rng);
            let t = axpy(-dot(&raw, &x.0), &x.0, &raw);
            let len = 3.0 * rng.random::<f64>();
            let v = TangentVector::new(x, scale(len / norm(&t), &t)).unwrap();
            let y = sphere_exp(&x, &v).unwrap();
            let back = sphere_log(&x, &y).unwrap();
            assert!(close(&back.vec, &v.vec, 1e-12), "{back:?} vs {v:?}");
            assert!((back.norm() - x.angle_to(&y)).abs() < 1e-14);
            assert!((norm(y.coords()) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sampler_stays_in_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bounds = DomainBounds {
            cap_radius: 0.2,
            ..DomainBounds::default()
        };
        for _ in 0..100 {
            let pts = Sphere.sample(&mut rng, &bounds, 4).unwrap();
            for p in &pts {
                for q in &pts {
                    assert!(Sphere.dist(p, q).unwrap() <= 0.4 + 1e-12);
                }
            }
        }
    }
}
