use crate::algebra::AlgebraHandle;
use crate::error::{Error, Result};
use crate::limits::{emergent_delta, emergent_sigma, AbsoluteSchedule, ConvergenceReport};
use crate::point::Point;
use crate::scalar::Scalar;

use super::{run_campaign, Evaluation, PropertyReport, SampleSpec};

/// The idempotence, left-division and action axioms:
/// `x ∘_a x = x`, `x •_a (x ∘_a y) = x ∘_a (x •_a y) = y`,
/// `x ∘_a (x ∘_b y) = x ∘_{ab} y` and `x ∘_1 y = y`.
pub fn check_axioms(alg: &AlgebraHandle, s: &SampleSpec, tol: f64) -> Result<PropertyReport> {
    run_campaign("axioms", &alg.name(), s, tol, |rng| {
        let pts = alg.sample(rng, &s.bounds, 2)?;
        let (x, y) = (&pts[0], &pts[1]);
        let a = s.scalar_range.draw(rng)?;
        let b = s.scalar_range.draw(rng)?;
        let d = |p: &Point, q: &Point| alg.dist(p, q);

        let r1 = d(&alg.circ(a, x, x)?, x)?;
        let r2 = d(&alg.bullet(a, x, &alg.circ(a, x, y)?)?, y)?.max(d(&alg.circ(a, x, &alg.bullet(a, x, y)?)?, y)?);
        let act = d(&alg.circ(a, x, &alg.circ(b, x, y)?)?, &alg.circ(a * b, x, y)?)?;
        let unit = d(&alg.circ(Scalar::ONE, x, y)?, y)?;
        Ok(Evaluation::worst(
            [("R1", r1), ("R2", r2), ("act", act), ("unit", unit)],
            vec![a, b],
            pts.clone(),
        ))
    })
}

/// Scalar at which the contraction `x ∘_ε y → x` is measured.
pub const EM_PROBE_EPSILON: f64 = 1e-7;

fn cauchy_residual(report: &ConvergenceReport) -> f64 {
    // unconverged sequences count with their last residuals, which are then
    // at or above the tolerance
    report.final_residual()
}

/// The convergence axiom: `x ∘_ε y → x`, and the approximate difference and
/// sum based at a sampled `x` form Cauchy sequences along `sched`.
///
/// A sample's residual is the largest of `d(x ∘_ε y, x)` at the first
/// scheduled `ε ≤ 1e-7` and the final successive residuals of the Δ and Σ
/// sequences computed to `tol`.
pub fn check_em(alg: &AlgebraHandle, sched: &AbsoluteSchedule, s: &SampleSpec, tol: f64) -> Result<PropertyReport> {
    sched.validate()?;
    let probe = sched
        .epsilons()
        .find(|e| e.as_ref().is_ok_and(|e| e.value() <= EM_PROBE_EPSILON))
        .ok_or_else(|| Error::InvalidInput(format!("schedule never reaches ε ≤ {EM_PROBE_EPSILON:e}")))??;
    run_campaign("em", &alg.name(), s, tol, |rng| {
        let pts = alg.sample(rng, &s.bounds, 3)?;
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        let contraction = alg.dist(&alg.circ(probe, x, y)?, x)?;
        let delta = emergent_delta(alg, sched, x, y, z, tol)?;
        let sigma = emergent_sigma(alg, sched, x, y, z, tol)?;
        Ok(Evaluation::worst(
            [
                ("contraction", contraction),
                ("delta", cauchy_residual(&delta)),
                ("sigma", cauchy_residual(&sigma)),
            ],
            vec![probe],
            pts.clone(),
        ))
    })
}
