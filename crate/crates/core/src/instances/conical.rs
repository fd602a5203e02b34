//! Conical groups and the linear emergent algebra they induce,
//! `x ∘_a y = x · a(x⁻¹ · y)`.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;

use crate::algebra::{AlgebraHandle, Carrier, Dilations, DomainBounds, Metric, Sampler};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::Scalar;

type MulFn = dyn Fn(&Point, &Point) -> Result<Point> + Send + Sync;
type InvFn = dyn Fn(&Point) -> Result<Point> + Send + Sync;
type ScaleFn = dyn Fn(Scalar, &Point) -> Result<Point> + Send + Sync;

/// A group with a multiplication by scalars.
#[derive(Clone)]
pub struct ConicalGroupSpec {
    name: String,
    neutral: Point,
    mul: Arc<MulFn>,
    inverse: Arc<InvFn>,
    scale: Arc<ScaleFn>,
}

impl fmt::Debug for ConicalGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConicalGroupSpec")
            .field("name", &self.name)
            .field("neutral", &self.neutral)
            .finish_non_exhaustive()
    }
}

impl ConicalGroupSpec {
    pub fn new(
        name: impl Into<String>,
        neutral: Point,
        mul: impl Fn(&Point, &Point) -> Result<Point> + Send + Sync + 'static,
        inverse: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static,
        scale: impl Fn(Scalar, &Point) -> Result<Point> + Send + Sync + 'static,
    ) -> Self {
        ConicalGroupSpec {
            name: name.into(),
            neutral,
            mul: Arc::new(mul),
            inverse: Arc::new(inverse),
            scale: Arc::new(scale),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn neutral(&self) -> &Point {
        &self.neutral
    }

    pub fn mul(&self, x: &Point, y: &Point) -> Result<Point> {
        (self.mul)(x, y)
    }

    pub fn inverse(&self, x: &Point) -> Result<Point> {
        (self.inverse)(x)
    }

    pub fn scale(&self, a: Scalar, x: &Point) -> Result<Point> {
        (self.scale)(a, x)
    }

    /// `x · a(x⁻¹ · y)`.
    pub fn induced_circ(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        let rel = self.mul(&self.inverse(x)?, y)?;
        self.mul(x, &self.scale(a, &rel)?)
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, x: &Point, y: &Point) -> Result<Point> {
        let xy = self.mul(x, y)?;
        let xyx = self.mul(&xy, &self.inverse(x)?)?;
        self.mul(&xyx, &self.inverse(y)?)
    }
}

/// How thoroughly [`make_conical`] checks a spec before accepting it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicalCheck {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

impl Default for ConicalCheck {
    fn default() -> Self {
        ConicalCheck {
            seed: 0x5eed_c0c1,
            samples: 64,
            tol: 1e-9,
        }
    }
}

/// Samples the group and conical axioms; returns the first violated one.
pub fn verify_conical(spec: &ConicalGroupSpec, metric: &Metric, sampler: &Sampler, check: &ConicalCheck) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
    let bounds = DomainBounds::default();
    let e = spec.neutral();
    let fail = |axiom: &'static str, residual: f64| -> Result<()> {
        if residual < check.tol {
            Ok(())
        } else {
            Err(Error::ConicalAxiom { axiom, residual })
        }
    };
    for _ in 0..check.samples {
        let pts = sampler.sample(&mut rng, &bounds, 3)?;
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        let a = Scalar::new(rng.random_range(0.25f64.ln()..=4f64.ln()).exp())?;
        let b = Scalar::new(rng.random_range(0.25f64.ln()..=4f64.ln()).exp())?;
        let d = |p: &Point, q: &Point| metric.dist(p, q);

        let xy = spec.mul(x, y)?;
        fail("associativity", d(&spec.mul(&xy, z)?, &spec.mul(x, &spec.mul(y, z)?)?)?)?;
        fail("neutral", d(&spec.mul(e, x)?, x)?.max(d(&spec.mul(x, e)?, x)?))?;
        let xi = spec.inverse(x)?;
        fail("inverse", d(&spec.mul(x, &xi)?, e)?.max(d(&spec.mul(&xi, x)?, e)?))?;
        fail("scale action", d(&spec.scale(a, &spec.scale(b, x)?)?, &spec.scale(a * b, x)?)?)?;
        fail(
            "scale distributes over product",
            d(&spec.scale(a, &xy)?, &spec.mul(&spec.scale(a, x)?, &spec.scale(a, y)?)?)?,
        )?;
        fail("scale commutes with inverse", d(&spec.scale(a, &xi)?, &spec.inverse(&spec.scale(a, x)?)?)?)?;
        fail("scale fixes neutral", d(&spec.scale(a, e)?, e)?)?;
    }
    Ok(())
}

/// The linear emergent algebra of a conical group.
pub struct ConicalAlgebra {
    spec: ConicalGroupSpec,
    metric: Metric,
    sampler: Option<Sampler>,
}

impl ConicalAlgebra {
    /// The induced algebra without sampler and without axiom checks; enough
    /// to evaluate terms on given points.
    pub fn induced(spec: ConicalGroupSpec, metric: Metric) -> AlgebraHandle {
        AlgebraHandle::new(ConicalAlgebra {
            spec,
            metric,
            sampler: None,
        })
    }
}

impl Dilations for ConicalAlgebra {
    fn carrier(&self) -> Carrier {
        Carrier::Conical {
            name: self.spec.name.clone(),
        }
    }

    fn circ(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        self.spec.induced_circ(a, x, y)
    }

    fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        self.metric.dist(x, y)
    }

    fn sample(&self, rng: &mut dyn rand::RngCore, bounds: &DomainBounds, count: usize) -> Result<Vec<Point>> {
        match &self.sampler {
            Some(s) => s.sample(rng, bounds, count),
            None => Err(Error::InvalidInput(format!("conical algebra `{}` has no sampler", self.spec.name))),
        }
    }

    fn group(&self) -> Option<&ConicalGroupSpec> {
        Some(&self.spec)
    }
}

/// Builds the induced algebra after checking the spec on a seeded sample.
pub fn make_conical(spec: ConicalGroupSpec, metric: Metric, sampler: Sampler) -> Result<AlgebraHandle> {
    make_conical_with(spec, metric, sampler, &ConicalCheck::default())
}

pub fn make_conical_with(
    spec: ConicalGroupSpec,
    metric: Metric,
    sampler: Sampler,
    check: &ConicalCheck,
) -> Result<AlgebraHandle> {
    verify_conical(&spec, &metric, &sampler, check)?;
    Ok(AlgebraHandle::new(ConicalAlgebra {
        spec,
        metric,
        sampler: Some(sampler),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::unipotent::{make_unipotent, unipotent_group};
    use crate::instances::vector::{make_vector_space, vector_group};

    fn s(v: f64) -> Scalar {
        Scalar::new(v).unwrap()
    }

    #[test]
    fn shipped_specs_pass_the_check() {
        for alg in [make_vector_space(3).unwrap(), make_unipotent(4).unwrap()] {
            let spec = alg.group().unwrap().clone();
            make_conical(spec, alg.metric(), alg.sampler()).unwrap();
        }
    }

    #[test]
    fn conical_collapses() {
        let alg = make_unipotent(3).unwrap();
        let spec = unipotent_group(3);
        let conical = make_conical(spec.clone(), alg.metric(), alg.sampler()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = alg.sample(&mut rng, &DomainBounds::default(), 2).unwrap();
        let (x, y) = (&pts[0], &pts[1]);
        // y = x gives x
        assert_eq!(conical.circ(s(0.3), x, x).unwrap(), *x);
        // x = e gives the scaling
        assert_eq!(conical.circ(s(0.3), spec.neutral(), y).unwrap(), spec.scale(s(0.3), y).unwrap());
    }

    #[test]
    fn vector_spec_reproduces_vector_space() {
        let alg = make_vector_space(3).unwrap();
        let conical = make_conical(vector_group(3), alg.metric(), alg.sampler()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let pts = alg.sample(&mut rng, &DomainBounds::default(), 2).unwrap();
            let a = s(rng.random_range(0.25..4.0));
            let d = alg.dist(&alg.circ(a, &pts[0], &pts[1]).unwrap(), &conical.circ(a, &pts[0], &pts[1]).unwrap());
            assert!(d.unwrap() < 1e-14);
        }
    }

    #[test]
    fn broken_spec_names_the_axiom() {
        let alg = make_vector_space(2).unwrap();
        // neutral element moved off the additive identity
        let base = vector_group(2);
        let shifted = ConicalGroupSpec::new(
            "shifted",
            Point::vector(vec![1.0, 0.0]).unwrap(),
            move |x, y| base.mul(x, y),
            {
                let g = vector_group(2);
                move |x| g.inverse(x)
            },
            {
                let g = vector_group(2);
                move |a, x| g.scale(a, x)
            },
        );
        match make_conical(shifted, alg.metric(), alg.sampler()) {
            Err(Error::ConicalAxiom { axiom, .. }) => assert_eq!(axiom, "neutral"),
            other => panic!("expected a neutral-element violation, got {other:?}"),
        }

        let g = vector_group(2);
        let bad_scale = ConicalGroupSpec::new(
            "affine-scale",
            g.neutral().clone(),
            {
                let g = g.clone();
                move |x, y| g.mul(x, y)
            },
            {
                let g = g.clone();
                move |x| g.inverse(x)
            },
            // x ↦ x + ln a·(1, 1): an action of Γ, but not by homomorphisms
            move |a, x| {
                let c = x.coordinates();
                Point::vector(vec![c[0] + a.value().ln(), c[1] + a.value().ln()])
            },
        );
        match make_conical(bad_scale, alg.metric(), alg.sampler()) {
            Err(Error::ConicalAxiom { axiom, .. }) => assert_eq!(axiom, "scale distributes over product"),
            other => panic!("expected a distributivity violation, got {other:?}"),
        }
    }
}
