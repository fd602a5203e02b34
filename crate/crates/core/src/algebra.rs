//! The emergent-algebra interface and its finite (non-limit) operations.
//!
//! An instance supplies one operation, the dilation `x ∘_a y`, together with
//! a metric realising the uniform structure and a sampler. Everything else
//! (the inverse operation `•`, approximate difference, sum and inverse, and
//! the distributivity defect terms) is derived here by composition.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::conical::ConicalGroupSpec;
use crate::point::Point;
use crate::scalar::Scalar;

/// Parameters of the region a sampler draws from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DomainBounds {
    /// Half-width of the coordinate box for vector points and for the upper
    /// entries of unipotent matrices.
    pub box_half_width: f64,
    /// Angular radius of the geodesic cap sphere tuples are drawn from.
    pub cap_radius: f64,
}

impl Default for DomainBounds {
    fn default() -> Self {
        DomainBounds {
            box_half_width: 1.0,
            cap_radius: 0.09,
        }
    }
}

impl DomainBounds {
    pub fn validate(&self) -> Result<()> {
        if !(self.box_half_width.is_finite() && self.box_half_width > 0.0 && self.box_half_width <= 10.0) {
            return Err(Error::OutOfRange {
                what: "box_half_width",
                value: self.box_half_width,
                min: 0.0,
                max: 10.0,
            });
        }
        let max_cap = (std::f64::consts::PI - 0.1) / 2.0;
        if !(self.cap_radius.is_finite() && self.cap_radius > 0.0 && self.cap_radius <= max_cap) {
            return Err(Error::OutOfRange {
                what: "cap_radius",
                value: self.cap_radius,
                min: 0.0,
                max: max_cap,
            });
        }
        Ok(())
    }
}

/// Describes which carrier a handle lives on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carrier {
    Vector { dim: usize },
    Unipotent { dim: usize },
    Sphere,
    Conical { name: String },
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Vector { dim } => write!(f, "vector:{dim}"),
            Carrier::Unipotent { dim } => write!(f, "unipotent:{dim}"),
            Carrier::Sphere => f.write_str("sphere"),
            Carrier::Conical { name } => write!(f, "conical:{name}"),
        }
    }
}

/// Geodesic exponential and logarithm, for carriers that have them.
/// Tangent vectors are given in ambient coordinates.
pub trait Chart: Send + Sync {
    fn exp(&self, x: &Point, v: &[f64]) -> Result<Point>;
    fn log(&self, x: &Point, y: &Point) -> Result<Vec<f64>>;
}

/// What an instance has to provide.
pub trait Dilations: Send + Sync {
    fn carrier(&self) -> Carrier;

    /// `x ∘_a y`.
    fn circ(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point>;

    fn dist(&self, x: &Point, y: &Point) -> Result<f64>;

    /// Draws `count` points that are jointly admissible (e.g. all inside one
    /// geodesic cap on the sphere).
    fn sample(&self, rng: &mut dyn RngCore, bounds: &DomainBounds, count: usize) -> Result<Vec<Point>>;

    /// The conical group the dilations come from, if the instance is one.
    fn group(&self) -> Option<&ConicalGroupSpec> {
        None
    }

    fn chart(&self) -> Option<&dyn Chart> {
        None
    }
}

pub type MetricFn = dyn Fn(&Point, &Point) -> Result<f64> + Send + Sync;
pub type SamplerFn = dyn Fn(&mut dyn RngCore, &DomainBounds, usize) -> Result<Vec<Point>> + Send + Sync;

/// A shareable metric on some carrier.
#[derive(Clone)]
pub struct Metric(pub Arc<MetricFn>);

impl Metric {
    pub fn new(f: impl Fn(&Point, &Point) -> Result<f64> + Send + Sync + 'static) -> Self {
        Metric(Arc::new(f))
    }

    pub fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        (self.0)(x, y)
    }
}

/// A shareable seeded sampler of admissible point tuples.
#[derive(Clone)]
pub struct Sampler(pub Arc<SamplerFn>);

impl Sampler {
    pub fn new(
        f: impl Fn(&mut dyn RngCore, &DomainBounds, usize) -> Result<Vec<Point>> + Send + Sync + 'static,
    ) -> Self {
        Sampler(Arc::new(f))
    }

    pub fn sample(&self, rng: &mut dyn RngCore, bounds: &DomainBounds, count: usize) -> Result<Vec<Point>> {
        (self.0)(rng, bounds, count)
    }
}

/// An immutable, cheaply clonable emergent algebra.
#[derive(Clone)]
pub struct AlgebraHandle {
    inner: Arc<dyn Dilations>,
}

impl fmt::Debug for AlgebraHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("AlgebraHandle").field(&self.carrier().to_string()).finish()
    }
}

impl AlgebraHandle {
    pub fn new(instance: impl Dilations + 'static) -> Self {
        AlgebraHandle {
            inner: Arc::new(instance),
        }
    }

    pub fn carrier(&self) -> Carrier {
        self.inner.carrier()
    }

    pub fn name(&self) -> String {
        self.carrier().to_string()
    }

    pub fn group(&self) -> Option<&ConicalGroupSpec> {
        self.inner.group()
    }

    pub fn chart(&self) -> Option<&dyn Chart> {
        self.inner.chart()
    }

    pub fn sample(&self, rng: &mut dyn RngCore, bounds: &DomainBounds, count: usize) -> Result<Vec<Point>> {
        self.inner.sample(rng, bounds, count)
    }

    /// The handle's metric as a standalone value.
    pub fn metric(&self) -> Metric {
        let h = self.clone();
        Metric::new(move |x, y| h.dist(x, y))
    }

    pub fn sampler(&self) -> Sampler {
        let h = self.clone();
        Sampler::new(move |rng, bounds, count| h.sample(rng, bounds, count))
    }

    /// `x ∘_a y`.
    pub fn circ(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        self.inner.circ(a, x, y)
    }

    /// `x •_a y = x ∘_{1/a} y`.
    pub fn bullet(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        self.inner.circ(a.recip(), x, y)
    }

    pub fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        self.inner.dist(x, y)
    }

    /// Approximate difference `Δ^x_a(y, z) = (x ∘_a y) •_a (x ∘_a z)`.
    pub fn approx_delta(&self, a: Scalar, x: &Point, y: &Point, z: &Point) -> Result<Point> {
        let u = self.circ(a, x, y)?;
        let v = self.circ(a, x, z)?;
        self.bullet(a, &u, &v)
    }

    /// Approximate sum `Σ^x_a(y, z) = x •_a ((x ∘_a y) ∘_a z)`.
    pub fn approx_sigma(&self, a: Scalar, x: &Point, y: &Point, z: &Point) -> Result<Point> {
        let u = self.circ(a, x, y)?;
        let w = self.circ(a, &u, z)?;
        self.bullet(a, x, &w)
    }

    /// Approximate inverse `inv^x_a y = (x ∘_a y) •_a x`.
    pub fn approx_inv(&self, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        let u = self.circ(a, x, y)?;
        self.bullet(a, &u, x)
    }

    /// `LIN_{a,b}(x, y, z) = y •_b (x •_a ((x ∘_a y) ∘_b (x ∘_a z)))`; equals
    /// `z` exactly when left distributivity holds on these arguments.
    pub fn lin_term(&self, a: Scalar, b: Scalar, x: &Point, y: &Point, z: &Point) -> Result<Point> {
        let xy = self.circ(a, x, y)?;
        let xz = self.circ(a, x, z)?;
        let inner = self.circ(b, &xy, &xz)?;
        let back = self.bullet(a, x, &inner)?;
        self.bullet(b, y, &back)
    }

    /// `COLIN_{a,b}(x, y, z) = (x ∘_a y) •_b ((x ∘_b z) ∘_a (y ∘_b z))`; equals
    /// `z` exactly when right distributivity holds on these arguments.
    pub fn colin_term(&self, a: Scalar, b: Scalar, x: &Point, y: &Point, z: &Point) -> Result<Point> {
        let xy = self.circ(a, x, y)?;
        let xz = self.circ(b, x, z)?;
        let yz = self.circ(b, y, z)?;
        let inner = self.circ(a, &xz, &yz)?;
        self.bullet(b, &xy, &inner)
    }

    /// Distance between the two sides of the medial law
    /// `(x ∘_a y) ∘_b (u ∘_a v) = (x ∘_b u) ∘_a (y ∘_b v)`.
    pub fn shuffle_residual(
        &self,
        a: Scalar,
        b: Scalar,
        x: &Point,
        y: &Point,
        u: &Point,
        v: &Point,
    ) -> Result<f64> {
        let left = self.circ(b, &self.circ(a, x, y)?, &self.circ(a, u, v)?)?;
        let right = self.circ(a, &self.circ(b, x, u)?, &self.circ(b, y, v)?)?;
        self.dist(&left, &right)
    }

    /// The operation rescaled around `e`:
    /// `x ∘_{a,c}^e y = e •_c ((e ∘_c x) ∘_a (e ∘_c y))`.
    pub fn relative_circ(&self, e: &Point, c: Scalar, a: Scalar, x: &Point, y: &Point) -> Result<Point> {
        let ex = self.circ(c, e, x)?;
        let ey = self.circ(c, e, y)?;
        let inner = self.circ(a, &ex, &ey)?;
        self.bullet(c, e, &inner)
    }
}
