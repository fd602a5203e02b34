//! Numerical limits along the absolute `ε → 0`: the emergent sum,
//! difference and inverse, the infinitesimal dilations, and the tangent
//! conical group at a base point.
//!
//! A limit is the last iterate of `f(ε_k)` along a geometric schedule,
//! accepted once two consecutive successive-iterate distances fall below the
//! requested tolerance. No extrapolation is attempted.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraHandle;
use crate::error::{Error, Result};
use crate::instances::conical::ConicalGroupSpec;
use crate::point::Point;
use crate::scalar::Scalar;

/// `ε_k = start · ratio^k`, `k = 0 .. max_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsoluteSchedule {
    pub start: Scalar,
    pub ratio: f64,
    pub max_steps: usize,
}

impl Default for AbsoluteSchedule {
    /// `0.5 · 0.5^k` for 48 steps, ending near `3.6e-15`.
    fn default() -> Self {
        AbsoluteSchedule {
            start: Scalar::HALF,
            ratio: 0.5,
            max_steps: 48,
        }
    }
}

impl AbsoluteSchedule {
    pub fn new(start: Scalar, ratio: f64, max_steps: usize) -> Result<Self> {
        let s = AbsoluteSchedule { start, ratio, max_steps };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::OutOfRange {
                what: "schedule ratio",
                value: self.ratio,
                min: 0.0,
                max: 1.0,
            });
        }
        if self.max_steps < 3 {
            return Err(Error::InvalidInput("a schedule needs at least 3 steps".into()));
        }
        // the last value must still be a valid scalar
        Scalar::new(self.start.value() * self.ratio.powi(self.max_steps as i32 - 1))?;
        Ok(())
    }

    pub fn epsilon(&self, k: usize) -> Result<Scalar> {
        Scalar::new(self.start.value() * self.ratio.powi(k as i32))
    }

    pub fn epsilons(&self) -> impl Iterator<Item = Result<Scalar>> + '_ {
        (0..self.max_steps).map(|k| self.epsilon(k))
    }
}

/// Outcome of a limit or fixed-point computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Last iterate; present whenever at least one iterate was computed.
    pub limit: Option<Point>,
    /// Successive-iterate distances; `residuals[k] = d(f_k, f_{k+1})`.
    pub residuals: Vec<f64>,
    /// Number of residuals computed.
    pub steps_used: usize,
    pub converged: bool,
}

impl ConvergenceReport {
    /// The larger of the last two residuals. Below the tolerance exactly when
    /// the two-consecutive rule fired.
    pub fn final_residual(&self) -> f64 {
        match self.residuals.as_slice() {
            [] => f64::MAX,
            [r] => *r,
            [.., a, b] => a.max(*b),
        }
    }

    /// The limit, or a [`Error::NonConvergent`] carrying this report.
    pub fn into_limit(self, context: &str) -> Result<Point> {
        match (&self.limit, self.converged) {
            (Some(p), true) => Ok(p.clone()),
            _ => Err(Error::NonConvergent {
                context: context.to_string(),
                report: Box::new(self),
            }),
        }
    }
}

/// Evaluates `f` along the schedule until two consecutive successive
/// distances are below `tol`.
pub fn limit_along_schedule<F, M>(f: F, sched: &AbsoluteSchedule, tol: f64, metric: M) -> Result<ConvergenceReport>
where
    F: Fn(Scalar) -> Result<Point>,
    M: Fn(&Point, &Point) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    sched.validate()?;
    let mut prev = f(sched.epsilon(0)?)?;
    let mut residuals = Vec::new();
    let mut below = 0usize;
    for k in 1..sched.max_steps {
        let next = f(sched.epsilon(k)?)?;
        let r = metric(&prev, &next)?;
        residuals.push(r);
        prev = next;
        below = if r < tol { below + 1 } else { 0 };
        if below == 2 {
            return Ok(ConvergenceReport {
                limit: Some(prev),
                steps_used: residuals.len(),
                residuals,
                converged: true,
            });
        }
    }
    Ok(ConvergenceReport {
        limit: Some(prev),
        steps_used: residuals.len(),
        residuals,
        converged: false,
    })
}

/// `Σ^e(y, z) = lim Σ^e_ε(y, z)`.
pub fn emergent_sigma(
    alg: &AlgebraHandle,
    sched: &AbsoluteSchedule,
    e: &Point,
    y: &Point,
    z: &Point,
    tol: f64,
) -> Result<ConvergenceReport> {
    limit_along_schedule(|eps| alg.approx_sigma(eps, e, y, z), sched, tol, |p, q| alg.dist(p, q))
}

/// `Δ^e(y, z) = lim Δ^e_ε(y, z)`.
pub fn emergent_delta(
    alg: &AlgebraHandle,
    sched: &AbsoluteSchedule,
    e: &Point,
    y: &Point,
    z: &Point,
    tol: f64,
) -> Result<ConvergenceReport> {
    limit_along_schedule(|eps| alg.approx_delta(eps, e, y, z), sched, tol, |p, q| alg.dist(p, q))
}

/// `inv^e y = lim inv^e_ε y`.
pub fn emergent_inv(alg: &AlgebraHandle, sched: &AbsoluteSchedule, e: &Point, y: &Point, tol: f64) -> Result<ConvergenceReport> {
    limit_along_schedule(|eps| alg.approx_inv(eps, e, y), sched, tol, |p, q| alg.dist(p, q))
}

/// The infinitesimal dilation `x ∘_b^e y = lim_{c→0} x ∘_{b,c}^e y`.
pub fn infinitesimal_circ(
    alg: &AlgebraHandle,
    sched: &AbsoluteSchedule,
    e: &Point,
    b: Scalar,
    x: &Point,
    y: &Point,
    tol: f64,
) -> Result<ConvergenceReport> {
    limit_along_schedule(|c| alg.relative_circ(e, c, b, x, y), sched, tol, |p, q| alg.dist(p, q))
}

/// Points the tangent-group construction is probed on before it is handed
/// out.
const TANGENT_PROBES: usize = 4;
const TANGENT_PROBE_SEED: u64 = 0x7a9_6e47;

/// The conical group at `e`: product `Σ^e`, inverse `inv^e`, neutral `e`,
/// scaling `a·x = e ∘_a x`.
///
/// The emergent product and inverse are probed on a few sampled points first;
/// a non-convergent probe fails the construction. Later calls report their
/// own non-convergence as [`Error::NonConvergent`].
pub fn tangent_conical_group(alg: &AlgebraHandle, sched: &AbsoluteSchedule, e: &Point, tol: f64) -> Result<ConicalGroupSpec> {
    use rand::SeedableRng;

    let mul = {
        let (alg, sched, e) = (alg.clone(), *sched, e.clone());
        move |x: &Point, y: &Point| emergent_sigma(&alg, &sched, &e, x, y, tol)?.into_limit("tangent product")
    };
    let inverse = {
        let (alg, sched, e) = (alg.clone(), *sched, e.clone());
        move |x: &Point| emergent_inv(&alg, &sched, &e, x, tol)?.into_limit("tangent inverse")
    };
    let scale = {
        let (alg, e) = (alg.clone(), e.clone());
        move |a: Scalar, x: &Point| alg.circ(a, &e, x)
    };

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(TANGENT_PROBE_SEED);
    let probes = alg.sample(&mut rng, &Default::default(), TANGENT_PROBES + 1)?;
    for pair in probes.windows(2) {
        mul(&pair[0], &pair[1])?;
        inverse(&pair[0])?;
    }

    Ok(ConicalGroupSpec::new(
        format!("tangent({})", alg.name()),
        e.clone(),
        mul,
        inverse,
        scale,
    ))
}
