//! Run reports, schema `emergent-report/1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verifier::{CurvatureFit, DichotomyReport, PropertyReport, Verdict, WitnessReport};

use super::config::CampaignConfig;

pub const REPORT_SCHEMA: &str = "emergent-report/1";

/// One property campaign on one instance, with its expectation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub instance: String,
    pub property: String,
    pub verdict: Verdict,
    pub expected: Option<Verdict>,
    /// `None` when there is no expectation.
    pub matched: Option<bool>,
    pub report: PropertyReport,
}

/// One run of a solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRecord {
    pub instance: String,
    /// `series` (the dilation equation) or `commutator`.
    pub method: String,
    pub base: Vec<f64>,
    pub target: Vec<f64>,
    pub epsilon: f64,
    pub tol: f64,
    pub solution: Option<Vec<f64>>,
    pub converged: bool,
    pub steps_used: usize,
    /// `residuals[n]` is the distance between iterates `n` and `n + 1`.
    pub residuals: Vec<f64>,
    /// Residual of the equation being solved at the returned solution.
    pub equation_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRecord {
    pub instance: String,
    pub point: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub fit: CurvatureFit,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub config: CampaignConfig,
    #[serde(default)]
    pub properties: Vec<PropertyRecord>,
    #[serde(default)]
    pub dichotomies: Vec<DichotomyReport>,
    #[serde(default)]
    pub witness: Option<WitnessReport>,
    #[serde(default)]
    pub solves: Vec<SolveRecord>,
    #[serde(default)]
    pub curvature: Option<CurvatureRecord>,
    /// Problems that stopped part of the run, e.g. a non-convergent limit.
    #[serde(default)]
    pub errors: Vec<String>,
    pub exit_code: i32,
    /// Wall-clock time per phase, in milliseconds.
    #[serde(default)]
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: &str, config: &CampaignConfig) -> Self {
        RunReport {
            schema: REPORT_SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: config.sample.seed,
            config: config.clone(),
            properties: Vec::new(),
            dichotomies: Vec::new(),
            witness: None,
            solves: Vec::new(),
            curvature: None,
            errors: Vec::new(),
            exit_code: 0,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The report without timings, for comparing runs.
    pub fn body_json(&self) -> Result<String> {
        let mut body = self.clone();
        body.timings_ms.clear();
        body.to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: RunReport = serde_json::from_str(text)?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported report schema `{}` (expected `{REPORT_SCHEMA}`)",
                r.schema
            )));
        }
        Ok(r)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Every expectation that was checked was met, and no part of the run
    /// failed.
    pub fn expectations_met(&self) -> bool {
        self.errors.is_empty()
            && self.properties.iter().all(|p| p.matched != Some(false))
            && self.dichotomies.iter().all(|d| d.agree)
            && self.witness.as_ref().is_none_or(|w| w.holds)
            && self.curvature.as_ref().is_none_or(|c| c.matched)
            && self.solves.iter().all(|s| s.converged)
    }

    /// Plot-ready rows: property residuals, solver traces or ladder gaps.
    pub fn write_table(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        if let Some(c) = &self.curvature {
            w.write_record(["a", "gap"])?;
            for r in &c.fit.rows {
                w.write_record([r.a.to_string(), r.gap.to_string()])?;
            }
        } else if !self.solves.is_empty() {
            w.write_record(["method", "n", "residual"])?;
            for s in &self.solves {
                for (n, r) in s.residuals.iter().enumerate() {
                    w.write_record([s.method.clone(), n.to_string(), r.to_string()])?;
                }
            }
        } else {
            w.write_record(["instance", "property", "max_residual", "verdict", "expected"])?;
            for p in &self.properties {
                w.write_record([
                    p.instance.clone(),
                    p.property.clone(),
                    p.report.max_residual.to_string(),
                    p.verdict.to_string(),
                    p.expected.map(|v| v.to_string()).unwrap_or_default(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} v{}  command={}  seed={}  exit={}",
            self.schema, self.tool_version, self.command, self.seed, self.exit_code
        );
        for p in &self.properties {
            let expect = match (p.expected, p.matched) {
                (Some(e), Some(true)) => format!("expected {e}, ok"),
                (Some(e), _) => format!("expected {e}, MISMATCH"),
                (None, _) => "informational".into(),
            };
            let _ = writeln!(
                out,
                "  {:<14} {:<20} max {:>10.3e}  n={:<5} skipped={:<3} {:<12} {expect}",
                p.instance, p.property, p.report.max_residual, p.report.count, p.report.skipped, p.verdict
            );
        }
        for d in &self.dichotomies {
            let v: Vec<String> = d.verdicts.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                out,
                "  dichotomy {:<14} commutative/COLIN/SHUFFLE = {}  {}",
                d.spec,
                v.join("/"),
                if d.agree { "agree" } else { "DISAGREE" }
            );
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(
                out,
                "  COLIN => LIN over {} instances: {}",
                w.entries.len(),
                if w.holds { "holds".to_string() } else { w.violations.join("; ") }
            );
        }
        for s in &self.solves {
            let _ = writeln!(
                out,
                "  solve {:<10} {:<14} eps={} converged={} steps={} equation residual {:.3e}",
                s.method, s.instance, s.epsilon, s.converged, s.steps_used, s.equation_residual
            );
            if let Some(x) = &s.solution {
                let _ = writeln!(out, "    solution {x:?}");
            }
        }
        if let Some(c) = &self.curvature {
            for r in &c.fit.rows {
                let _ = writeln!(out, "  a={:<8} gap={:.6e}", r.a, r.gap);
            }
            let slope = c.fit.slope.map(|s| format!("{s:.4}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "  verdict {:?} slope {slope} matched={}", c.fit.verdict, c.matched);
        }
        for e in &self.errors {
            let _ = writeln!(out, "  error: {e}");
        }
        out
    }
}
