use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraHandle, Metric, Sampler};
use crate::error::{Error, Result};
use crate::instances::conical::{make_conical_with, ConicalAlgebra, ConicalCheck, ConicalGroupSpec};
use crate::limits::{tangent_conical_group, AbsoluteSchedule};
use crate::point::Point;
use crate::scalar::Scalar;

use super::{check_distributivity, run_campaign, Distributivity, Evaluation, PropertyReport, SampleSpec, Thresholds, Verdict};

/// Limits inside the round trip are computed this much tighter than the
/// round-trip tolerance.
const INNER_TOL_FACTOR: f64 = 1e-3;
/// Samples used to check that the tangent spec is a conical group.
const TANGENT_CHECK_SAMPLES: usize = 8;

/// Builds the tangent conical group at `e`, rebuilds the dilations from it
/// and reports the largest distance to the original ones.
///
/// When the instance is itself a conical group with neutral element `e`, the
/// tangent product and inverse are also compared with the group's own. If the
/// tangent spec cannot be built or is not a conical group (as happens on
/// curved instances) the failed report says why instead of sampling.
pub fn theorem1_roundtrip(
    alg: &AlgebraHandle,
    e: &Point,
    sched: &AbsoluteSchedule,
    s: &SampleSpec,
    tol: f64,
) -> Result<PropertyReport> {
    let inner = tol * INNER_TOL_FACTOR;
    let check = ConicalCheck {
        seed: s.seed,
        samples: TANGENT_CHECK_SAMPLES,
        tol,
    };
    let built = tangent_conical_group(alg, sched, e, inner).and_then(|tangent| {
        make_conical_with(tangent.clone(), alg.metric(), alg.sampler(), &check).map(|h| (tangent, h))
    });
    let (tangent, rebuilt) = match built {
        Ok(pair) => pair,
        Err(err) => {
            let (residual, detail) = match &err {
                Error::ConicalAxiom { axiom, residual } => (*residual, format!("tangent group violates {axiom}")),
                Error::NonConvergent { context, report } => (report.final_residual(), format!("{context} did not converge")),
                Error::Domain(msg) => (f64::INFINITY, format!("domain error while building the tangent group: {msg}")),
                _ => return Err(err),
            };
            let mut r = PropertyReport::from_residual("THEOREM1", alg.name(), residual, tol, None);
            r.argmax = Some(super::SampleRecord {
                index: 0,
                scalars: vec![],
                points: vec![e.coordinates()],
                detail,
            });
            return Ok(r);
        }
    };
    let own = alg.group().filter(|g| g.neutral() == e);

    run_campaign("THEOREM1", &alg.name(), s, tol, |rng| {
        let pts = alg.sample(rng, &s.bounds, 2)?;
        let (x, y) = (&pts[0], &pts[1]);
        let a = s.scalar_range.draw(rng)?;
        let circ = alg.dist(&rebuilt.circ(a, x, y)?, &alg.circ(a, x, y)?)?;
        let (mut product, mut inverse) = (0.0, 0.0);
        if let Some(g) = own {
            product = alg.dist(&tangent.mul(x, y)?, &g.mul(x, y)?)?;
            inverse = alg.dist(&tangent.inverse(x)?, &g.inverse(x)?)?;
        }
        Ok(Evaluation::worst(
            [("circ", circ), ("product", product), ("inverse", inverse)],
            vec![a],
            pts.clone(),
        ))
    })
}

/// Max over samples of `d(xy, yx)`.
pub fn commutativity_campaign(spec: &ConicalGroupSpec, metric: &Metric, sampler: &Sampler, s: &SampleSpec, tol: f64) -> Result<PropertyReport> {
    run_campaign("COMMUTATIVE", &format!("conical:{}", spec.name()), s, tol, |rng| {
        let pts = sampler.sample(rng, &s.bounds, 2)?;
        let r = metric.dist(&spec.mul(&pts[0], &pts[1])?, &spec.mul(&pts[1], &pts[0])?)?;
        Ok(Evaluation::worst([("commutator", r)], vec![], pts))
    })
}

/// The three verdicts whose agreement characterises commutative conical
/// groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub spec: String,
    pub commutative: PropertyReport,
    pub colin: PropertyReport,
    pub shuffle: PropertyReport,
    pub verdicts: [Verdict; 3],
    /// All three verdicts are equal and none is inconclusive.
    pub agree: bool,
    /// The first pair of verdicts that differ, e.g. `"commutative/COLIN"`.
    pub mismatch: Option<String>,
}

/// Checks that commutativity of the group, right distributivity and
/// mediality of its induced dilations stand or fall together.
pub fn theorem2_dichotomy(
    spec: &ConicalGroupSpec,
    metric: &Metric,
    sampler: &Sampler,
    s: &SampleSpec,
    t: &Thresholds,
) -> Result<DichotomyReport> {
    t.validate()?;
    let alg = crate::instances::conical::make_conical(spec.clone(), metric.clone(), sampler.clone())?;
    let commutative = commutativity_campaign(spec, metric, sampler, s, t.pass)?;
    let colin = check_distributivity(&alg, Distributivity::Colin, s, t.pass)?;
    let shuffle = check_distributivity(&alg, Distributivity::Shuffle, s, t.pass)?;
    let verdicts = [commutative.verdict(t), colin.verdict(t), shuffle.verdict(t)];
    let names = ["commutative", "COLIN", "SHUFFLE"];
    let mismatch = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(i, j)| verdicts[i] != verdicts[j])
        .map(|(i, j)| format!("{}/{}", names[i], names[j]))
        .or_else(|| {
            verdicts
                .iter()
                .position(|v| *v == Verdict::Inconclusive)
                .map(|i| format!("{} inconclusive", names[i]))
        });
    Ok(DichotomyReport {
        spec: spec.name().to_string(),
        commutative,
        colin,
        shuffle,
        verdicts,
        agree: mismatch.is_none(),
        mismatch,
    })
}

/// Distance between `COLIN_{a,1/b}(e, e •_a y, z)` and
/// `[y ∘_b e, z ∘_a e] · z`, with `e` the neutral element. The left side is
/// evaluated through the induced dilations, the right side through the group
/// operations.
pub fn commutator_identity_check(
    spec: &ConicalGroupSpec,
    metric: &Metric,
    a: Scalar,
    b: Scalar,
    y: &Point,
    z: &Point,
) -> Result<f64> {
    let alg = ConicalAlgebra::induced(spec.clone(), metric.clone());
    let e = spec.neutral();
    let left = alg.colin_term(a, b.recip(), e, &alg.bullet(a, e, y)?, z)?;
    let c = spec.commutator(&spec.induced_circ(b, y, e)?, &spec.induced_circ(a, z, e)?)?;
    let right = spec.mul(&c, z)?;
    metric.dist(&left, &right)
}

/// [`commutator_identity_check`] over sampled `a, b, y, z`.
pub fn commutator_identity_campaign(
    spec: &ConicalGroupSpec,
    metric: &Metric,
    sampler: &Sampler,
    s: &SampleSpec,
    tol: f64,
) -> Result<PropertyReport> {
    run_campaign("COMMUTATOR_IDENTITY", &format!("conical:{}", spec.name()), s, tol, |rng| {
        let pts = sampler.sample(rng, &s.bounds, 2)?;
        let a = s.scalar_range.draw(rng)?;
        let b = s.scalar_range.draw(rng)?;
        let r = commutator_identity_check(spec, metric, a, b, &pts[0], &pts[1])?;
        Ok(Evaluation::worst([("identity", r)], vec![a, b], pts))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub instance: String,
    pub lin: PropertyReport,
    pub colin: PropertyReport,
    /// `y ∘_b e = e ∘_{1-b} y` for `b ∈ (0, 1)`; run on instances that pass
    /// COLIN.
    pub complement: Option<PropertyReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub entries: Vec<WitnessEntry>,
    /// Instances passing COLIN but not LIN, or failing the complement
    /// identity after passing COLIN.
    pub violations: Vec<String>,
    pub holds: bool,
}

/// Range `b` is drawn from for the complement identity.
const COMPLEMENT_RANGE: std::ops::RangeInclusive<f64> = 0.01..=0.99;

/// Right distributivity implies left distributivity: every handle whose
/// COLIN campaign passes must pass LIN too. Handles passing COLIN are also
/// checked for `y ∘_b e = e ∘_{1-b} y`.
pub fn colin_implies_lin_witness(handles: &[AlgebraHandle], s: &SampleSpec, tol: f64) -> Result<WitnessReport> {
    let mut entries = Vec::with_capacity(handles.len());
    let mut violations = Vec::new();
    for alg in handles {
        let lin = check_distributivity(alg, Distributivity::Lin, s, tol)?;
        let colin = check_distributivity(alg, Distributivity::Colin, s, tol)?;
        let complement = if colin.passed {
            let r = run_campaign("COMPLEMENT", &alg.name(), s, tol, |rng| {
                let pts = alg.sample(rng, &s.bounds, 2)?;
                let (y, e) = (&pts[0], &pts[1]);
                let b = Scalar::new(rng.random_range(COMPLEMENT_RANGE))?;
                let r = alg.dist(&alg.circ(b, y, e)?, &alg.circ(b.complement()?, e, y)?)?;
                Ok(Evaluation::worst([("complement", r)], vec![b], pts.clone()))
            })?;
            if !r.passed {
                violations.push(format!("{}: complement identity fails", alg.name()));
            }
            if !lin.passed {
                violations.push(format!("{}: COLIN passes but LIN fails", alg.name()));
            }
            Some(r)
        } else {
            None
        };
        entries.push(WitnessEntry {
            instance: alg.name(),
            lin,
            colin,
            complement,
        });
    }
    Ok(WitnessReport {
        holds: violations.is_empty(),
        entries,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::matrix::UnipotentMatrix;
    use crate::instances::{make_sphere, make_unipotent, make_vector_space, unipotent_group, vector_group};

    fn s(v: f64) -> Scalar {
        Scalar::new(v).unwrap()
    }

    #[test]
    fn roundtrip_on_linear_instances() {
        let spec = SampleSpec::new(4, 30);
        let sched = AbsoluteSchedule::default();
        let vs = make_vector_space(2).unwrap();
        let r = theorem1_roundtrip(&vs, &Point::vector(vec![0.0, 0.0]).unwrap(), &sched, &spec, 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
        let un = make_unipotent(3).unwrap();
        let id = Point::from(UnipotentMatrix::<f64>::identity(3));
        let r = theorem1_roundtrip(&un, &id, &sched, &spec, 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn roundtrip_on_the_sphere_does_not_pass() {
        let sp = make_sphere();
        let north = Point::sphere([0.0, 0.0, 1.0]).unwrap();
        let spec = SampleSpec::new(4, 10);
        let r = theorem1_roundtrip(&sp, &north, &AbsoluteSchedule::default(), &spec, 1e-6).unwrap();
        assert!(!r.passed, "{r:?}");
    }

    #[test]
    fn dichotomy_agrees_on_shipped_specs() {
        let s = SampleSpec::new(5, 100);
        let t = Thresholds::default();
        for (spec, alg, commutative) in [
            (vector_group(3), make_vector_space(3).unwrap(), true),
            (unipotent_group(2), make_unipotent(2).unwrap(), true),
            (unipotent_group(3), make_unipotent(3).unwrap(), false),
        ] {
            let r = theorem2_dichotomy(&spec, &alg.metric(), &alg.sampler(), &s, &t).unwrap();
            assert!(r.agree, "{r:?}");
            let want = if commutative { Verdict::Pass } else { Verdict::Fail };
            assert_eq!(r.verdicts, [want; 3]);
        }
    }

    #[test]
    fn commutator_identity_hand_cases() {
        let alg = make_unipotent(3).unwrap();
        let spec = unipotent_group(3);
        let m = alg.metric();
        let y = Point::from(UnipotentMatrix::from_upper(3, vec![0.5, -0.25, 1.0]).unwrap());
        let z = Point::from(UnipotentMatrix::from_upper(3, vec![-0.75, 0.5, 0.125]).unwrap());
        assert!(commutator_identity_check(&spec, &m, s(0.5), s(0.5), &y, &z).unwrap() < 1e-12);
        // with y = e both sides are z
        let e = spec.neutral().clone();
        assert_eq!(commutator_identity_check(&spec, &m, s(0.3), s(2.0), &e, &z).unwrap(), 0.0);
        // COLIN fails on these arguments, so the identity is not trivial
        let left = alg.colin_term(s(0.5), s(2.0), &e, &alg.bullet(s(0.5), &e, &y).unwrap(), &z).unwrap();
        assert!(alg.dist(&left, &z).unwrap() > 1e-3);

        let vs = make_vector_space(2).unwrap();
        let g = vector_group(2);
        let y = Point::vector(vec![0.3, 0.4]).unwrap();
        let z = Point::vector(vec![-1.0, 0.5]).unwrap();
        assert!(commutator_identity_check(&g, &vs.metric(), s(1.5), s(0.7), &y, &z).unwrap() < 1e-14);
    }

    #[test]
    fn witness_over_shipped_instances() {
        let s = SampleSpec::new(6, 100);
        let handles = [
            make_vector_space(2).unwrap(),
            make_unipotent(2).unwrap(),
            make_unipotent(3).unwrap(),
            make_sphere(),
        ];
        let w = colin_implies_lin_witness(&handles, &s, 1e-9).unwrap();
        assert!(w.holds, "{:?}", w.violations);
        let colin_passing: Vec<_> = w.entries.iter().filter(|e| e.complement.is_some()).map(|e| e.instance.as_str()).collect();
        assert_eq!(colin_passing, ["vector:2", "unipotent:2"]);
        assert!(colin_implies_lin_witness(&[], &s, 1e-9).unwrap().holds);
    }
}
