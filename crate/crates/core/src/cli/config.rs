//! Campaign configuration, schema `emergent-campaign/1`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraHandle;
use crate::error::{Error, Result};
use crate::instances::matrix::UnipotentMatrix;
use crate::instances::{make_sphere, make_unipotent, make_vector_space};
use crate::limits::AbsoluteSchedule;
use crate::point::Point;
use crate::verifier::{SampleSpec, Thresholds, Verdict};

pub const CONFIG_SCHEMA: &str = "emergent-campaign/1";

/// `vector:<n>`, `unipotent:<n>` or `sphere`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Vector(usize),
    Unipotent(usize),
    Sphere,
}

impl InstanceKind {
    pub fn build(self) -> Result<AlgebraHandle> {
        match self {
            InstanceKind::Vector(n) => make_vector_space(n),
            InstanceKind::Unipotent(n) => make_unipotent(n),
            InstanceKind::Sphere => Ok(make_sphere()),
        }
    }

    /// The natural base point: the origin, the identity matrix, the north pole.
    pub fn origin(self) -> Point {
        match self {
            InstanceKind::Vector(n) => Point::vector(vec![0.0; n]).expect("zero vector is finite"),
            InstanceKind::Unipotent(n) => Point::from(UnipotentMatrix::<f64>::identity(n)),
            InstanceKind::Sphere => Point::sphere([0.0, 0.0, 1.0]).expect("unit vector"),
        }
    }

    /// Parses flat coordinates into a point of this carrier.
    pub fn point(self, coords: &[f64]) -> Result<Point> {
        match self {
            InstanceKind::Vector(n) => {
                if coords.len() != n {
                    return Err(Error::InvalidInput(format!("vector:{n} points have {n} coordinates, got {}", coords.len())));
                }
                Point::vector(coords.to_vec())
            }
            InstanceKind::Unipotent(n) => {
                Ok(Point::from(UnipotentMatrix::from_upper(n, coords.to_vec())?))
            }
            InstanceKind::Sphere => {
                let c: [f64; 3] = coords
                    .try_into()
                    .map_err(|_| Error::InvalidInput(format!("sphere points have 3 coordinates, got {}", coords.len())))?;
                Point::sphere(c)
            }
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceKind::Vector(n) => write!(f, "vector:{n}"),
            InstanceKind::Unipotent(n) => write!(f, "unipotent:{n}"),
            InstanceKind::Sphere => f.write_str("sphere"),
        }
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, param) = match s.split_once(':') {
            Some((k, p)) => (k, Some(p)),
            None => (s, None),
        };
        let dim = |what: &str| -> Result<usize> {
            let p = param.ok_or_else(|| Error::Config(format!("instance `{s}` needs a dimension, e.g. `{what}:3`")))?;
            p.parse()
                .map_err(|_| Error::Config(format!("instance `{s}`: `{p}` is not a dimension")))
        };
        let kind = match kind {
            "vector" => InstanceKind::Vector(dim("vector")?),
            "unipotent" => InstanceKind::Unipotent(dim("unipotent")?),
            "sphere" if param.is_none() => InstanceKind::Sphere,
            "sphere" => return Err(Error::Config("`sphere` takes no parameters".into())),
            other => return Err(Error::Config(format!("unknown instance kind `{other}`"))),
        };
        // range check up front so that config errors surface before any work
        kind.build().map_err(|e| Error::Config(format!("instance `{s}`: {e}")))?;
        Ok(kind)
    }
}

impl Serialize for InstanceKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for InstanceKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Names accepted in `properties` and by the `property` command.
pub const PROPERTY_NAMES: [&str; 6] = ["LIN", "COLIN", "SHUFFLE", "THEOREM1", "THEOREM2", "THEOREM3"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Exact identities pass below this.
    pub pass: f64,
    /// Residuals above this count as genuine failures.
    pub fail: f64,
    /// Emergent (limit) quantities pass below this.
    pub limit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pass: 1e-9,
            fail: 1e-3,
            limit: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            pass: self.pass,
            fail: self.fail,
        }
    }
}

/// Expected verdict of a property on the instances matching a pattern.
/// Patterns are an exact instance name, `kind:*`, or `*`; the first matching
/// rule wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub instance: String,
    pub property: String,
    pub expect: Verdict,
}

impl Expectation {
    fn new(instance: &str, property: &str, expect: Verdict) -> Self {
        Expectation {
            instance: instance.into(),
            property: property.into(),
            expect,
        }
    }

    pub fn matches(&self, instance: &str, property: &str) -> bool {
        if !self.property.eq_ignore_ascii_case(property) {
            return false;
        }
        match self.instance.strip_suffix(":*") {
            _ if self.instance == "*" => true,
            Some(kind) => instance.split(':').next() == Some(kind),
            None => self.instance == instance,
        }
    }
}

/// The default classification matrix.
pub fn default_expectations() -> Vec<Expectation> {
    use Verdict::{Fail, Pass};
    let mut v = vec![
        Expectation::new("*", "axioms", Pass),
        Expectation::new("*", "em", Pass),
    ];
    for p in ["LIN", "COLIN", "SHUFFLE"] {
        v.push(Expectation::new("vector:*", p, Pass));
        v.push(Expectation::new("unipotent:2", p, Pass));
    }
    v.extend([
        Expectation::new("unipotent:*", "LIN", Pass),
        Expectation::new("unipotent:*", "COLIN", Fail),
        Expectation::new("unipotent:*", "SHUFFLE", Fail),
        Expectation::new("sphere", "LIN", Fail),
        Expectation::new("vector:*", "THEOREM1", Pass),
        Expectation::new("unipotent:*", "THEOREM1", Pass),
        Expectation::new("*", "COMMUTATOR_IDENTITY", Pass),
    ]);
    v
}

/// Expected exponent of the ladder gap and the accepted deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureExpectation {
    pub slope: f64,
    pub slope_tolerance: f64,
}

impl Default for CurvatureExpectation {
    fn default() -> Self {
        CurvatureExpectation {
            slope: 2.0,
            slope_tolerance: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampaignConfig {
    pub schema: String,
    pub instances: Vec<InstanceKind>,
    pub properties: Vec<String>,
    pub sample: SampleSpec,
    /// Sample count for campaigns that take limits (em, THEOREM1), which cost
    /// tens of compositions per sample.
    pub limit_samples: usize,
    pub schedule: AbsoluteSchedule,
    pub tolerances: Tolerances,
    pub expectations: Vec<Expectation>,
    pub curvature: CurvatureExpectation,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            schema: CONFIG_SCHEMA.into(),
            instances: vec![
                InstanceKind::Vector(1),
                InstanceKind::Vector(3),
                InstanceKind::Unipotent(2),
                InstanceKind::Unipotent(3),
                InstanceKind::Unipotent(4),
                InstanceKind::Unipotent(5),
                InstanceKind::Sphere,
            ],
            properties: PROPERTY_NAMES.iter().map(|s| s.to_string()).collect(),
            sample: SampleSpec::default(),
            limit_samples: 200,
            schedule: AbsoluteSchedule::default(),
            tolerances: Tolerances::default(),
            expectations: default_expectations(),
            curvature: CurvatureExpectation::default(),
        }
    }
}

impl CampaignConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: CampaignConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != CONFIG_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported config schema `{}` (expected `{CONFIG_SCHEMA}`)",
                self.schema
            )));
        }
        if self.instances.is_empty() {
            return Err(Error::Config("no instances configured".into()));
        }
        for p in &self.properties {
            if !PROPERTY_NAMES.iter().any(|n| n.eq_ignore_ascii_case(p)) {
                return Err(Error::Config(format!("unknown property `{p}`")));
            }
        }
        if self.limit_samples == 0 {
            return Err(Error::Config("limit_samples must be positive".into()));
        }
        self.sample.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.schedule.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.tolerances.thresholds().validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(self.tolerances.limit > 0.0) {
            return Err(Error::Config("tolerances.limit must be positive".into()));
        }
        Ok(())
    }

    /// First matching expectation, if any.
    pub fn expected(&self, instance: &str, property: &str) -> Option<Verdict> {
        self.expectations
            .iter()
            .find(|e| e.matches(instance, property))
            .map(|e| e.expect)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_descriptors() {
        assert_eq!("vector:3".parse::<InstanceKind>().unwrap(), InstanceKind::Vector(3));
        assert_eq!("unipotent:5".parse::<InstanceKind>().unwrap(), InstanceKind::Unipotent(5));
        assert_eq!("sphere".parse::<InstanceKind>().unwrap(), InstanceKind::Sphere);
        for bad in ["torus", "vector", "vector:x", "unipotent:1", "vector:17", "sphere:2"] {
            assert!(matches!(bad.parse::<InstanceKind>(), Err(Error::Config(_))), "{bad}");
        }
        assert_eq!(InstanceKind::Unipotent(4).to_string(), "unipotent:4");
    }

    #[test]
    fn expectation_patterns() {
        let cfg = CampaignConfig::default();
        assert_eq!(cfg.expected("unipotent:2", "COLIN"), Some(Verdict::Pass));
        assert_eq!(cfg.expected("unipotent:3", "colin"), Some(Verdict::Fail));
        assert_eq!(cfg.expected("vector:7", "SHUFFLE"), Some(Verdict::Pass));
        assert_eq!(cfg.expected("sphere", "LIN"), Some(Verdict::Fail));
        assert_eq!(cfg.expected("sphere", "COLIN"), None);
        assert_eq!(cfg.expected("sphere", "axioms"), Some(Verdict::Pass));
    }

    #[test]
    fn default_config_round_trips_and_validates() {
        let cfg = CampaignConfig::default();
        cfg.validate().unwrap();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: CampaignConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_config_uses_defaults() {
        let cfg: CampaignConfig =
            serde_json::from_str(r#"{"schema": "emergent-campaign/1", "instances": ["sphere"], "sample": {"count": 10}}"#).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.sample.count, 10);
        assert_eq!(cfg.sample.seed, SampleSpec::default().seed);
        assert_eq!(cfg.instances, [InstanceKind::Sphere]);
    }

    #[test]
    fn bad_configs() {
        let parse = |s: &str| serde_json::from_str::<CampaignConfig>(s);
        assert!(parse(r#"{"instances": ["klein"]}"#).is_err());
        assert!(parse(r#"{"instancez": []}"#).is_err());
        let cfg = CampaignConfig {
            schema: "emergent-campaign/0".into(),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let mut cfg = CampaignConfig::default();
        cfg.properties.push("CURVY".into());
        assert!(cfg.validate().is_err());
        let mut cfg = CampaignConfig::default();
        cfg.tolerances.pass = 1.0;
        assert!(cfg.validate().is_err());
    }
}
