//! Command-line driver: `axioms`, `property`, `geomseries`, `curvature` and
//! `report`.
//!
//! Exit codes: 0 when every expectation is met, 1 on a verification or
//! convergence failure, 2 on a usage or configuration error.

pub mod config;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::geomseries::{solve_commutator, solve_dilation_equation, GeomSeriesProblem};
use crate::point::Point;
use crate::scalar::Scalar;
use crate::verifier::{
    check_axioms, check_distributivity, check_em, colin_implies_lin_witness, commutator_identity_campaign,
    curvature_scaling, theorem1_roundtrip, theorem2_dichotomy, CurvatureVerdict, Distributivity, PropertyReport,
    Thresholds,
};

pub use config::{CampaignConfig, InstanceKind, CONFIG_SCHEMA};
pub use report::{CurvatureRecord, PropertyRecord, RunReport, SolveRecord, REPORT_SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "emergent", version, about = "Verification workbench for emergent algebras")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Campaign config (JSON, schema emergent-campaign/1).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides the sampling seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the number of samples per campaign.
    #[arg(long, global = true, value_name = "N")]
    pub samples: Option<usize>,
    /// Overrides the pass tolerance (for `geomseries`: the solver tolerance).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Writes the JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Writes plot rows as CSV here.
    #[arg(long, global = true, value_name = "PATH")]
    pub table: Option<PathBuf>,
    /// Instance descriptor `vector:<n>`, `unipotent:<n>` or `sphere`;
    /// repeatable, replaces the configured list.
    #[arg(long = "instance", global = true, value_name = "KIND:PARAMS")]
    pub instances: Vec<String>,
    /// Suppresses the summary on stdout.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Idempotence, left-division and action axioms, and the convergence axiom.
    Axioms,
    /// LIN, COLIN, SHUFFLE, THEOREM1 (tangent round trip), THEOREM2
    /// (commutativity dichotomy), THEOREM3 (COLIN implies LIN) or ALL.
    Property {
        #[arg(value_name = "KIND")]
        kind: String,
    },
    /// Solves the dilation equation `S ∘_ε e = x` by the geometric series.
    Geomseries {
        /// Base point coordinates (default: origin, identity or north pole).
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        base: Option<Vec<f64>>,
        /// Target coordinates; upper entries row-major for matrices.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        target: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
    },
    /// Fits the exponent of the Schild's-ladder gap.
    Curvature {
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
        a_values: Vec<f64>,
        /// Base point (default: north pole or origin).
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        point: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        v: Option<Vec<f64>>,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        w: Option<Vec<f64>>,
    },
    /// Pretty-prints a stored report.
    Report { path: PathBuf },
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub report: Option<RunReport>,
    pub text: String,
    pub exit_code: i32,
}

/// Maps an error to the exit code it causes.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::InvalidInput(_)
        | Error::OutOfRange { .. }
        | Error::InvalidScalar(_)
        | Error::CarrierMismatch { .. }
        | Error::Json(_)
        | Error::Io(_)
        | Error::Csv(_) => EXIT_USAGE,
        Error::Domain(_) | Error::NumericRange(_) | Error::ConicalAxiom { .. } | Error::NonConvergent { .. } => EXIT_FAILED,
    }
}

/// Parses `args` (program name first), runs, prints and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            if !cli.opts.quiet {
                print!("{}", outcome.text);
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("emergent: {e}");
            exit_code_for(&e)
        }
    }
}

/// Runs the command and writes `--out` / `--table` files.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    if let Command::Report { path } = &cli.command {
        let report = RunReport::load(path)?;
        return Ok(Outcome {
            text: report.summary(),
            report: Some(report),
            exit_code: EXIT_OK,
        });
    }
    let cfg = resolve_config(&cli.opts)?;
    let mut report = match &cli.command {
        Command::Axioms => cmd_axioms(&cfg)?,
        Command::Property { kind } => cmd_property(&cfg, kind)?,
        Command::Geomseries {
            base,
            target,
            epsilon,
            max_iter,
        } => cmd_geomseries(&cfg, &cli.opts, base.as_deref(), target, *epsilon, *max_iter)?,
        Command::Curvature { a_values, point, v, w } => {
            cmd_curvature(&cfg, &cli.opts, a_values, point.as_deref(), v.as_deref(), w.as_deref())?
        }
        Command::Report { .. } => unreachable!("handled above"),
    };
    report.exit_code = if report.expectations_met() { EXIT_OK } else { EXIT_FAILED };
    if let Some(path) = &cli.opts.out {
        std::fs::write(path, report.to_json()?)?;
    }
    if let Some(path) = &cli.opts.table {
        report.write_table(path)?;
    }
    Ok(Outcome {
        text: report.summary(),
        exit_code: report.exit_code,
        report: Some(report),
    })
}

fn resolve_config(opts: &GlobalOpts) -> Result<CampaignConfig> {
    let mut cfg = match &opts.config {
        Some(path) => CampaignConfig::load(path)?,
        None => CampaignConfig::default(),
    };
    if let Some(seed) = opts.seed {
        cfg.sample.seed = seed;
    }
    if let Some(n) = opts.samples {
        cfg.sample.count = n;
        cfg.limit_samples = n;
    }
    if let Some(tol) = opts.tol {
        cfg.tolerances.pass = tol;
    }
    if !opts.instances.is_empty() {
        cfg.instances = opts
            .instances
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<InstanceKind>>>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn record(cfg: &CampaignConfig, report: PropertyReport) -> PropertyRecord {
    let thresholds = Thresholds {
        pass: report.tolerance,
        fail: cfg.tolerances.fail.max(report.tolerance),
    };
    let verdict = report.verdict(&thresholds);
    let expected = cfg.expected(&report.instance, &report.property);
    PropertyRecord {
        instance: report.instance.clone(),
        property: report.property.clone(),
        verdict,
        expected,
        matched: expected.map(|e| e == verdict),
        report,
    }
}

fn timed<T>(report: &mut RunReport, label: String, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    report.timings_ms.insert(label, t.elapsed().as_secs_f64() * 1e3);
    out
}

/// Runs a campaign; failures other than usage errors are recorded in the
/// report instead of aborting the run.
fn campaign(
    report: &mut RunReport,
    cfg: &CampaignConfig,
    label: String,
    f: impl FnOnce() -> Result<PropertyReport>,
) -> Result<()> {
    match timed(report, label.clone(), f) {
        Ok(r) => report.properties.push(record(cfg, r)),
        Err(e) if exit_code_for(&e) == EXIT_FAILED => report.errors.push(format!("{label}: {e}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

pub fn cmd_axioms(cfg: &CampaignConfig) -> Result<RunReport> {
    let mut report = RunReport::new("axioms", cfg);
    let limit_spec = cfg.sample.with_count(cfg.limit_samples);
    for kind in &cfg.instances {
        let alg = kind.build()?;
        campaign(&mut report, cfg, format!("{kind}/axioms"), || {
            check_axioms(&alg, &cfg.sample, cfg.tolerances.pass)
        })?;
        campaign(&mut report, cfg, format!("{kind}/em"), || {
            check_em(&alg, &cfg.schedule, &limit_spec, cfg.tolerances.limit)
        })?;
    }
    Ok(report)
}

pub fn cmd_property(cfg: &CampaignConfig, kind: &str) -> Result<RunReport> {
    let upper = kind.to_ascii_uppercase();
    let kinds: Vec<String> = match upper.as_str() {
        "ALL" => cfg.properties.iter().map(|p| p.to_ascii_uppercase()).collect(),
        k if config::PROPERTY_NAMES.contains(&k) => vec![upper.clone()],
        _ => {
            return Err(Error::Config(format!(
                "unknown property `{kind}` (expected one of {} or ALL)",
                config::PROPERTY_NAMES.join(", ")
            )))
        }
    };
    let mut report = RunReport::new(&format!("property {upper}"), cfg);
    let handles = cfg
        .instances
        .iter()
        .map(|k| Ok((*k, k.build()?)))
        .collect::<Result<Vec<_>>>()?;
    for property in kinds {
        match property.as_str() {
            "LIN" | "COLIN" | "SHUFFLE" => {
                let law: Distributivity = property.parse()?;
                for (kind, alg) in &handles {
                    campaign(&mut report, cfg, format!("{kind}/{law}"), || {
                        check_distributivity(alg, law, &cfg.sample, cfg.tolerances.pass)
                    })?;
                }
            }
            "THEOREM1" => {
                let spec = cfg.sample.with_count(cfg.limit_samples);
                for (kind, alg) in &handles {
                    campaign(&mut report, cfg, format!("{kind}/THEOREM1"), || {
                        theorem1_roundtrip(alg, &kind.origin(), &cfg.schedule, &spec, cfg.tolerances.limit)
                    })?;
                }
            }
            "THEOREM2" => {
                for (kind, alg) in &handles {
                    let Some(group) = alg.group() else { continue };
                    let (metric, sampler) = (alg.metric(), alg.sampler());
                    let label = format!("{kind}/THEOREM2");
                    let d = timed(&mut report, label.clone(), || {
                        theorem2_dichotomy(group, &metric, &sampler, &cfg.sample, &cfg.tolerances.thresholds())
                    });
                    match d {
                        Ok(d) => report.dichotomies.push(d),
                        Err(e) if exit_code_for(&e) == EXIT_FAILED => report.errors.push(format!("{label}: {e}")),
                        Err(e) => return Err(e),
                    }
                    campaign(&mut report, cfg, format!("{kind}/COMMUTATOR_IDENTITY"), || {
                        commutator_identity_campaign(group, &metric, &sampler, &cfg.sample, cfg.tolerances.pass)
                    })?;
                }
            }
            "THEOREM3" => {
                let algs: Vec<_> = handles.iter().map(|(_, a)| a.clone()).collect();
                let w = timed(&mut report, "THEOREM3".into(), || {
                    colin_implies_lin_witness(&algs, &cfg.sample, cfg.tolerances.pass)
                })?;
                report.witness = Some(w);
            }
            other => unreachable!("validated property {other}"),
        }
    }
    Ok(report)
}

fn single_instance(opts: &GlobalOpts, default: InstanceKind) -> Result<InstanceKind> {
    match opts.instances.as_slice() {
        [] => Ok(default),
        [one] => one.parse(),
        _ => Err(Error::Config("this command takes a single --instance".into())),
    }
}

pub fn cmd_geomseries(
    cfg: &CampaignConfig,
    opts: &GlobalOpts,
    base: Option<&[f64]>,
    target: &[f64],
    epsilon: f64,
    max_iter: usize,
) -> Result<RunReport> {
    let kind = single_instance(opts, InstanceKind::Vector(1))?;
    let alg = kind.build()?;
    let tol = opts.tol.unwrap_or(1e-10);
    let eps = Scalar::interface(epsilon)?;
    let e = match base {
        Some(c) => kind.point(c)?,
        None => kind.origin(),
    };
    let x = kind.point(target)?;
    let mut report = RunReport::new("geomseries", cfg);
    report.config.instances = vec![kind];

    let mut problem = GeomSeriesProblem::new(alg, e.clone(), x.clone(), eps, tol);
    problem.max_iter = max_iter;
    problem.schedule = cfg.schedule;
    let sol = timed(&mut report, "series".into(), || solve_dilation_equation(&problem))?;
    report.solves.push(SolveRecord {
        instance: kind.to_string(),
        method: "series".into(),
        base: e.coordinates(),
        target: x.coordinates(),
        epsilon,
        tol,
        solution: sol.report.limit.as_ref().map(Point::coordinates),
        converged: sol.report.converged,
        steps_used: sol.report.steps_used,
        residuals: sol.report.residuals.clone(),
        equation_residual: sol.equation_residual,
    });

    if matches!(kind, InstanceKind::Unipotent(_)) && e == kind.origin() {
        let xm = x.as_matrix()?.to_f64();
        let record = match timed(&mut report, "commutator".into(), || solve_commutator(&xm, eps, tol)) {
            Ok(c) => SolveRecord {
                solution: Some(c.y.upper().to_vec()),
                converged: true,
                steps_used: c.report.steps_used,
                residuals: c.report.residuals,
                equation_residual: c.residual,
                ..commutator_record(kind, &x, epsilon, tol)
            },
            Err(Error::NonConvergent { report: r, .. }) => SolveRecord {
                solution: r.limit.as_ref().map(Point::coordinates),
                steps_used: r.steps_used,
                residuals: r.residuals.clone(),
                ..commutator_record(kind, &x, epsilon, tol)
            },
            Err(other) => return Err(other),
        };
        report.solves.push(record);
    }
    Ok(report)
}

fn commutator_record(kind: InstanceKind, x: &Point, epsilon: f64, tol: f64) -> SolveRecord {
    SolveRecord {
        instance: kind.to_string(),
        method: "commutator".into(),
        base: kind.origin().coordinates(),
        target: x.coordinates(),
        epsilon,
        tol,
        solution: None,
        converged: false,
        steps_used: 0,
        residuals: Vec::new(),
        equation_residual: f64::MAX,
    }
}

pub fn cmd_curvature(
    cfg: &CampaignConfig,
    opts: &GlobalOpts,
    a_values: &[f64],
    point: Option<&[f64]>,
    v: Option<&[f64]>,
    w: Option<&[f64]>,
) -> Result<RunReport> {
    let kind = single_instance(opts, InstanceKind::Sphere)?;
    let alg = kind.build()?;
    let dim = match kind {
        InstanceKind::Vector(n) if n >= 2 => n,
        InstanceKind::Sphere => 3,
        other => return Err(Error::Config(format!("curvature needs a sphere or a vector space of dimension ≥ 2, got {other}"))),
    };
    let unit = |i: usize| (0..dim).map(|j| f64::from(u8::from(i == j))).collect::<Vec<f64>>();
    let x = match point {
        Some(c) => kind.point(c)?,
        None => kind.origin(),
    };
    let v = v.map(<[f64]>::to_vec).unwrap_or_else(|| unit(0));
    let w = w.map(<[f64]>::to_vec).unwrap_or_else(|| unit(1));
    let scalars = a_values
        .iter()
        .map(|&a| Scalar::interface(a))
        .collect::<Result<Vec<_>>>()?;

    let mut report = RunReport::new("curvature", cfg);
    report.config.instances = vec![kind];
    let fit = timed(&mut report, "curvature".into(), || curvature_scaling(&alg, &x, &v, &w, &scalars))?;
    let want = cfg.curvature;
    let matched = match (kind, fit.verdict) {
        (InstanceKind::Sphere, CurvatureVerdict::Curved) => {
            fit.slope.is_some_and(|s| (s - want.slope).abs() <= want.slope_tolerance)
        }
        (InstanceKind::Vector(_), CurvatureVerdict::Flat) => true,
        _ => false,
    };
    report.curvature = Some(CurvatureRecord {
        instance: kind.to_string(),
        point: x.coordinates(),
        v,
        w,
        fit,
        matched,
    });
    Ok(report)
}
