//! Seeded property campaigns.
//!
//! Every campaign draws its samples from a [`SampleSpec`]: sample `i` uses a
//! ChaCha8 generator seeded with the spec's seed on stream `i`, so results do
//! not depend on thread scheduling. Samples whose inputs fall outside an
//! instance's domain are skipped and counted, and replacements are drawn from
//! further streams.

mod axioms;
mod curvature;
mod distributivity;
mod theorems;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::DomainBounds;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::Scalar;

pub use axioms::{check_axioms, check_em};
pub use curvature::{curvature_scaling, schild_ladder, CurvatureFit, CurvatureRow, CurvatureVerdict, MIN_GAP};
pub use distributivity::{check_distributivity, Distributivity};
pub use theorems::{
    colin_implies_lin_witness, commutator_identity_campaign, commutator_identity_check, commutativity_campaign,
    theorem1_roundtrip, theorem2_dichotomy, DichotomyReport, WitnessEntry, WitnessReport,
};

/// At most this many streams are drawn per requested sample.
pub const MAX_DRAW_FACTOR: usize = 10;

/// Log-uniform sampling window for scalars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarRange {
    pub min: f64,
    pub max: f64,
}

impl Default for ScalarRange {
    fn default() -> Self {
        ScalarRange { min: 0.25, max: 4.0 }
    }
}

impl ScalarRange {
    pub fn validate(&self) -> Result<()> {
        Scalar::interface(self.min)?;
        Scalar::interface(self.max)?;
        if self.min > self.max {
            return Err(Error::InvalidInput(format!(
                "scalar range is empty ({} > {})",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn draw(&self, rng: &mut impl Rng) -> Result<Scalar> {
        if self.min == self.max {
            return Scalar::new(self.min);
        }
        Scalar::new(rng.random_range(self.min.ln()..=self.max.ln()).exp())
    }
}

/// What a campaign samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleSpec {
    pub seed: u64,
    pub count: usize,
    pub scalar_range: ScalarRange,
    pub bounds: DomainBounds,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            seed: 20_190_117,
            count: 1000,
            scalar_range: ScalarRange::default(),
            bounds: DomainBounds::default(),
        }
    }
}

impl SampleSpec {
    pub fn new(seed: u64, count: usize) -> Self {
        SampleSpec {
            seed,
            count,
            ..SampleSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidInput("sample count must be positive".into()));
        }
        self.scalar_range.validate()?;
        self.bounds.validate()
    }

    /// The generator for sample stream `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// A copy with a different sample count.
    pub fn with_count(&self, count: usize) -> Self {
        SampleSpec { count, ..*self }
    }
}

/// Pass / fail thresholds on a max residual; values in between are
/// inconclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub pass: f64,
    pub fail: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { pass: 1e-9, fail: 1e-3 }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.pass > 0.0 && self.pass < self.fail && self.fail.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "thresholds need 0 < pass < fail, got pass={} fail={}",
                self.pass, self.fail
            )));
        }
        Ok(())
    }

    pub fn classify(&self, residual: f64) -> Verdict {
        if residual < self.pass {
            Verdict::Pass
        } else if residual > self.fail {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// The inputs of one evaluated sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    /// Stream index the sample was drawn from.
    pub index: u64,
    pub scalars: Vec<f64>,
    /// Flat coordinates of each point, see [`Point::coordinates`].
    pub points: Vec<Vec<f64>>,
    /// Which sub-check produced the residual.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub instance: String,
    /// Largest residual seen; non-finite residuals are recorded as `f64::MAX`.
    pub max_residual: f64,
    pub argmax: Option<SampleRecord>,
    /// Samples evaluated.
    pub count: usize,
    /// Samples skipped for domain errors.
    pub skipped: usize,
    pub tolerance: f64,
    /// `max_residual < tolerance`.
    pub passed: bool,
}

impl PropertyReport {
    pub fn verdict(&self, t: &Thresholds) -> Verdict {
        t.classify(self.max_residual)
    }

    pub(crate) fn from_residual(
        property: impl Into<String>,
        instance: impl Into<String>,
        residual: f64,
        tolerance: f64,
        argmax: Option<SampleRecord>,
    ) -> Self {
        let max_residual = finite_or_max(residual);
        PropertyReport {
            property: property.into(),
            instance: instance.into(),
            max_residual,
            argmax,
            count: 1,
            skipped: 0,
            tolerance,
            passed: max_residual < tolerance,
        }
    }
}

fn finite_or_max(r: f64) -> f64 {
    if r.is_finite() {
        r
    } else {
        f64::MAX
    }
}

/// One evaluated sample.
pub(crate) struct Evaluation {
    pub residual: f64,
    pub scalars: Vec<Scalar>,
    pub points: Vec<Point>,
    pub detail: String,
}

impl Evaluation {
    /// Picks the largest of several named residuals.
    pub fn worst(parts: impl IntoIterator<Item = (&'static str, f64)>, scalars: Vec<Scalar>, points: Vec<Point>) -> Self {
        let mut residual = 0.0;
        let mut detail = "";
        for (name, r) in parts {
            let r = if r.is_nan() { f64::INFINITY } else { r };
            if detail.is_empty() || r > residual {
                residual = r;
                detail = name;
            }
        }
        Evaluation {
            residual,
            scalars,
            points,
            detail: detail.to_string(),
        }
    }
}

/// Runs `eval` on `spec.count` samples, in parallel, skipping domain errors.
pub(crate) fn run_campaign<F>(
    property: &str,
    instance: &str,
    spec: &SampleSpec,
    tolerance: f64,
    eval: F,
) -> Result<PropertyReport>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Evaluation> + Sync,
{
    spec.validate()?;
    let limit = (spec.count * MAX_DRAW_FACTOR) as u64;
    let mut next = 0u64;
    let mut evaluated: Vec<(u64, Evaluation)> = Vec::with_capacity(spec.count);
    let mut skipped = 0usize;
    while evaluated.len() < spec.count && next < limit {
        let want = (spec.count - evaluated.len()) as u64;
        let batch: Vec<u64> = (next..(next + want).min(limit)).collect();
        next += batch.len() as u64;
        let results: Vec<(u64, Result<Evaluation>)> = batch
            .into_par_iter()
            .map(|i| (i, eval(&mut spec.rng(i))))
            .collect();
        for (i, r) in results {
            match r {
                Ok(ev) => evaluated.push((i, ev)),
                Err(e) if e.is_domain() => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    if evaluated.len() < spec.count {
        return Err(Error::Domain(format!(
            "{property} on {instance}: only {} of {} samples were inside the domain after {limit} draws",
            evaluated.len(),
            spec.count
        )));
    }

    let mut best: Option<&(u64, Evaluation)> = None;
    for item in &evaluated {
        if best.is_none_or(|b| item.1.residual > b.1.residual) {
            best = Some(item);
        }
    }
    let (index, ev) = best.expect("count is positive");
    let max_residual = finite_or_max(ev.residual);
    Ok(PropertyReport {
        property: property.to_string(),
        instance: instance.to_string(),
        max_residual,
        argmax: Some(SampleRecord {
            index: *index,
            scalars: ev.scalars.iter().map(|s| s.value()).collect(),
            points: ev.points.iter().map(Point::coordinates).collect(),
            detail: ev.detail.clone(),
        }),
        count: evaluated.len(),
        skipped,
        tolerance,
        passed: max_residual < tolerance,
    })
}
