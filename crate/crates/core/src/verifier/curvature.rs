use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraHandle;
use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::Scalar;

/// Gaps below this are treated as exact zeros and left out of the fit.
pub const MIN_GAP: f64 = 1e-13;
const ORTHONORMAL_TOL: f64 = 1e-9;

fn chart_of(alg: &AlgebraHandle) -> Result<&dyn crate::algebra::Chart> {
    alg.chart()
        .ok_or_else(|| Error::InvalidInput(format!("{} has no exponential chart", alg.name())))
}

/// One rung of Schild's ladder at scale `a`:
/// `log_x(x •_a LIN_{½,½}(x, exp_x(av), exp_x(aw)))`.
///
/// Geodesic parallelograms are closed with midpoints (`½`); on a flat chart
/// the result is exactly `w`, on a curved one it differs from `w` at order
/// `a²`.
pub fn schild_ladder(alg: &AlgebraHandle, x: &Point, v: &[f64], w: &[f64], a: Scalar) -> Result<Vec<f64>> {
    let chart = chart_of(alg)?;
    let scaled = |t: &[f64]| t.iter().map(|c| a.value() * c).collect::<Vec<_>>();
    let u = chart.exp(x, &scaled(v))?;
    let z = chart.exp(x, &scaled(w))?;
    let lin = alg.lin_term(Scalar::HALF, Scalar::HALF, x, &u, &z)?;
    chart.log(x, &alg.bullet(a, x, &lin)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub a: f64,
    /// `|w − r^a_x(v, w)|`.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureVerdict {
    /// Enough non-zero gaps for a slope.
    Curved,
    /// Every gap below [`MIN_GAP`].
    Flat,
    /// Fewer than two usable gaps, but not all zero.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureFit {
    pub rows: Vec<CurvatureRow>,
    /// Least-squares slope of `log gap` against `log a`.
    pub slope: Option<f64>,
    /// The `a` values whose gap was below [`MIN_GAP`].
    pub excluded: Vec<f64>,
    pub verdict: CurvatureVerdict,
}

impl CurvatureFit {
    /// `gap(a_k) / gap(a_{k+1})` for consecutive usable rows.
    pub fn gap_ratios(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .filter(|w| w[0].gap >= MIN_GAP && w[1].gap >= MIN_GAP)
            .map(|w| w[0].gap / w[1].gap)
            .collect()
    }
}

fn check_orthonormal(v: &[f64], w: &[f64]) -> Result<()> {
    if v.len() != w.len() {
        return Err(Error::InvalidInput(format!("tangent vectors of lengths {} and {}", v.len(), w.len())));
    }
    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
    let (vv, ww, vw) = (dot(v, v), dot(w, w), dot(v, w));
    if (vv - 1.0).abs() > ORTHONORMAL_TOL || (ww - 1.0).abs() > ORTHONORMAL_TOL || vw.abs() > ORTHONORMAL_TOL {
        return Err(Error::InvalidInput(format!(
            "tangent pair is not orthonormal (|v|² = {vv}, |w|² = {ww}, v·w = {vw})"
        )));
    }
    Ok(())
}

/// Fits the exponent of the ladder gap `|w − r^a_x(v, w)| ~ C a^p`.
///
/// Needs at least four strictly decreasing `a` values and an orthonormal
/// pair `v, w` tangent at `x`.
pub fn curvature_scaling(alg: &AlgebraHandle, x: &Point, v: &[f64], w: &[f64], a_values: &[Scalar]) -> Result<CurvatureFit> {
    if a_values.len() < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 values of a, got {}", a_values.len())));
    }
    if a_values.windows(2).any(|p| p[1].value() >= p[0].value()) {
        return Err(Error::InvalidInput("values of a must be strictly decreasing".into()));
    }
    check_orthonormal(v, w)?;

    let mut rows = Vec::with_capacity(a_values.len());
    for &a in a_values {
        let r = schild_ladder(alg, x, v, w, a)?;
        let gap = r.iter().zip(w).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        rows.push(CurvatureRow { a: a.value(), gap });
    }
    let (used, excluded): (Vec<_>, Vec<_>) = rows.iter().partition(|r| r.gap >= MIN_GAP);
    let excluded: Vec<f64> = excluded.iter().map(|r: &&CurvatureRow| r.a).collect();
    let (slope, verdict) = match used.len() {
        0 => (None, CurvatureVerdict::Flat),
        1 => (None, CurvatureVerdict::Undetermined),
        _ => (Some(loglog_slope(&used)), CurvatureVerdict::Curved),
    };
    Ok(CurvatureFit {
        rows,
        slope,
        excluded,
        verdict,
    })
}

fn loglog_slope(rows: &[&CurvatureRow]) -> f64 {
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.a.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.gap.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{make_sphere, make_unipotent, make_vector_space};

    fn scalars(v: &[f64]) -> Vec<Scalar> {
        v.iter().map(|&a| Scalar::new(a).unwrap()).collect()
    }

    #[test]
    fn flat_chart_reproduces_w() {
        let alg = make_vector_space(3).unwrap();
        let x = Point::vector(vec![0.5, -0.25, 1.0]).unwrap();
        let w = [0.0, 1.0, 0.0];
        let r = schild_ladder(&alg, &x, &[1.0, 0.0, 0.0], &w, Scalar::new(0.1).unwrap()).unwrap();
        for (p, q) in r.iter().zip(&w) {
            assert!((p - q).abs() < 1e-14);
        }
    }

    #[test]
    fn sphere_gap_shrinks_quadratically() {
        let alg = make_sphere();
        let x = Point::sphere([0.0, 0.0, 1.0]).unwrap();
        let fit = curvature_scaling(&alg, &x, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &scalars(&[0.2, 0.1, 0.05, 0.025])).unwrap();
        assert_eq!(fit.verdict, CurvatureVerdict::Curved);
        let slope = fit.slope.unwrap();
        assert!((slope - 2.0).abs() < 0.15, "{fit:?}");
        for r in fit.gap_ratios() {
            assert!((r - 4.0).abs() < 0.4, "{r}");
        }
    }

    #[test]
    fn parallel_arguments_close_the_ladder() {
        let alg = make_sphere();
        let x = Point::sphere([0.0, 0.0, 1.0]).unwrap();
        let w = [0.6, 0.8, 0.0];
        let r = schild_ladder(&alg, &x, &w, &w, Scalar::new(0.1).unwrap()).unwrap();
        let gap = r.iter().zip(&w).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        assert!(gap < 1e-12, "{gap}");
    }

    #[test]
    fn gap_tends_to_zero_with_a() {
        let alg = make_sphere();
        let x = Point::sphere([0.3, -0.2, 0.9]).unwrap();
        let xs = x.as_sphere().unwrap().coords();
        // an orthonormal tangent frame at x
        let v = {
            let t = [xs[2], 0.0, -xs[0]];
            let n = (t[0] * t[0] + t[2] * t[2]).sqrt();
            [t[0] / n, 0.0, t[2] / n]
        };
        let w = [
            xs[1] * v[2] - xs[2] * v[1],
            xs[2] * v[0] - xs[0] * v[2],
            xs[0] * v[1] - xs[1] * v[0],
        ];
        let mut last = f64::MAX;
        for a in [0.4, 0.2, 0.1, 0.05, 0.025] {
            let r = schild_ladder(&alg, &x, &v, &w, Scalar::new(a).unwrap()).unwrap();
            let gap = r.iter().zip(&w).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn flat_adapter_is_reported_flat() {
        let alg = make_vector_space(3).unwrap();
        let x = Point::vector(vec![0.0; 3]).unwrap();
        let fit = curvature_scaling(&alg, &x, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &scalars(&[0.2, 0.1, 0.05, 0.025])).unwrap();
        assert_eq!(fit.verdict, CurvatureVerdict::Flat);
        assert_eq!(fit.slope, None);
        assert_eq!(fit.excluded.len(), 4);
        assert!(fit.rows.iter().all(|r| r.gap < 1e-12));
    }

    #[test]
    fn preconditions() {
        let alg = make_sphere();
        let x = Point::sphere([0.0, 0.0, 1.0]).unwrap();
        let (v, w) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        assert!(curvature_scaling(&alg, &x, &v, &w, &scalars(&[0.2, 0.1, 0.05])).is_err());
        assert!(curvature_scaling(&alg, &x, &v, &w, &scalars(&[0.2, 0.1, 0.1, 0.05])).is_err());
        assert!(curvature_scaling(&alg, &x, &v, &[0.6, 0.8, 0.0], &scalars(&[0.2, 0.1, 0.05, 0.025])).is_err());
        let no_chart = make_unipotent(2).unwrap();
        let id = Point::from(crate::instances::matrix::UnipotentMatrix::<f64>::identity(2));
        assert!(schild_ladder(&no_chart, &id, &[1.0], &[0.0], Scalar::HALF).is_err());
    }
}
