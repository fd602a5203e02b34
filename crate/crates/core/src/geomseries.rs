//! The non-commutative geometric series.
//!
//! Given a base `e`, a target `x` and `ε ∈ (0, 1)`, find `S` with
//! `S ∘_ε e = x`. The solution is the limit of
//! `S₀ = x`, `S_{n+1} = Σ^e(x, e ∘_ε S_n)`, i.e. the series
//! `Σₙ (δ^e_ε)ⁿ x` summed with the emergent sum at `e`.
//!
//! On the unipotent group at `e = I` the partial sums have the closed form
//! `(x𝐞⁻¹)^m x 𝐞^m`, and their limit solves the commutator equation
//! `y 𝐞⁻¹ y⁻¹ 𝐞 = x`.

use crate::algebra::AlgebraHandle;
use crate::error::{Error, Result};
use crate::instances::matrix::UnipotentMatrix;
use crate::limits::{emergent_sigma, AbsoluteSchedule, ConvergenceReport};
use crate::point::Point;
use crate::scalar::Scalar;

/// Entries above this magnitude abort the closed-form products.
pub const OVERFLOW_GUARD: f64 = 1e100;
/// Largest number of factors the partial sums accept.
pub const MAX_TERMS: usize = 200;
/// Iteration cap of [`solve_commutator`].
pub const MAX_COMMUTATOR_ITER: usize = 5000;

#[derive(Debug, Clone)]
pub struct GeomSeriesProblem {
    pub alg: AlgebraHandle,
    /// The base point `e`.
    pub base: Point,
    /// The right-hand side `x`.
    pub target: Point,
    pub epsilon: Scalar,
    pub tol: f64,
    pub max_iter: usize,
    /// Used only when the instance has no group structure and `Σ^e` has to be
    /// computed as a limit (to `tol / 10`).
    pub schedule: AbsoluteSchedule,
}

impl GeomSeriesProblem {
    pub fn new(alg: AlgebraHandle, base: Point, target: Point, epsilon: Scalar, tol: f64) -> Self {
        GeomSeriesProblem {
            alg,
            base,
            target,
            epsilon,
            tol,
            max_iter: 500,
            schedule: AbsoluteSchedule::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        let e = self.epsilon.value();
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::OutOfRange {
                what: "epsilon",
                value: e,
                min: 0.0,
                max: 1.0,
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be positive".into()));
        }
        Ok(())
    }

    /// `Σ^e(v, w)`: `v · e⁻¹ · w` on conical instances, otherwise the emergent
    /// limit.
    fn sum(&self, v: &Point, w: &Point) -> Result<Point> {
        let e = &self.base;
        match self.alg.group() {
            Some(g) => g.mul(&g.mul(v, &g.inverse(e)?)?, w),
            None => emergent_sigma(&self.alg, &self.schedule, e, v, w, 0.1 * self.tol)?.into_limit("emergent sum"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeomSeriesSolution {
    /// `limit` is the last iterate; `residuals[n] = d(S_n, S_{n+1})`.
    pub report: ConvergenceReport,
    /// `S₀, S₁, …` in order.
    pub iterates: Vec<Point>,
    /// `d(S ∘_ε e, x)` for the last iterate.
    pub equation_residual: f64,
}

/// Iterates the series until successive iterates are closer than `tol` and
/// the defining equation holds to `10·tol`.
///
/// Running out of iterations is not an error; the report then has
/// `converged = false`.
pub fn solve_dilation_equation(p: &GeomSeriesProblem) -> Result<GeomSeriesSolution> {
    p.validate()?;
    let (alg, e, x, eps) = (&p.alg, &p.base, &p.target, p.epsilon);
    let equation = |s: &Point| -> Result<f64> { alg.dist(&alg.circ(eps, s, e)?, x) };

    let mut iterates = vec![x.clone()];
    let mut residuals = Vec::new();
    let mut converged = false;
    let mut equation_residual = equation(x)?;
    for _ in 0..p.max_iter {
        let last = iterates.last().expect("at least S0");
        let next = p.sum(x, &alg.circ(eps, e, last)?)?;
        let step = alg.dist(last, &next)?;
        residuals.push(step);
        iterates.push(next);
        if step < p.tol {
            equation_residual = equation(iterates.last().expect("just pushed"))?;
            if equation_residual < 10.0 * p.tol {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        equation_residual = equation(iterates.last().expect("at least S0"))?;
    }
    Ok(GeomSeriesSolution {
        report: ConvergenceReport {
            limit: iterates.last().cloned(),
            steps_used: residuals.len(),
            residuals,
            converged,
        },
        iterates,
        equation_residual,
    })
}

/// `(δ^S_ε)ⁿ S₀` for `n = 0 ..= count`: the iterates of the series, recovered
/// from its sum.
pub fn replay_iterates(alg: &AlgebraHandle, sum: &Point, epsilon: Scalar, s0: &Point, count: usize) -> Result<Vec<Point>> {
    let mut out = vec![s0.clone()];
    for _ in 0..count {
        let next = alg.circ(epsilon, sum, out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

fn check_ratio(e: Scalar, m: usize) -> Result<f64> {
    let v = e.value();
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::OutOfRange {
            what: "e",
            value: v,
            min: 0.0,
            max: 1.0,
        });
    }
    if m > MAX_TERMS {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as f64,
            min: 0.0,
            max: MAX_TERMS as f64,
        });
    }
    Ok(v)
}

fn guard(entries: impl IntoIterator<Item = f64>, what: &str) -> Result<()> {
    for v in entries {
        if !(v.abs() <= OVERFLOW_GUARD) {
            return Err(Error::NumericRange(format!("{what}: entry {v:e} exceeds {OVERFLOW_GUARD:e}")));
        }
    }
    Ok(())
}

type Dense = Vec<Vec<f64>>;

/// Product of two upper-triangular matrices.
fn upper_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            out[i][j] = (i..=j).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// `(x𝐞⁻¹)^m x 𝐞^m`, evaluated literally in floating point.
///
/// The diagonal of `(x𝐞⁻¹)^m` grows like `e^(-nm)`; products that leave
/// `±1e100` raise [`Error::NumericRange`].
pub fn unipotent_partial_sum(x: &UnipotentMatrix<f64>, e: Scalar, m: usize) -> Result<UnipotentMatrix<f64>> {
    let ev = check_ratio(e, m)?;
    let n = x.dim();
    let rows = x.to_rows();
    // 𝐞_jj = e^(j+1) with 0-based j
    let diag: Vec<f64> = (1..=n).map(|i| ev.powi(i as i32)).collect();
    let xe_inv: Dense = (0..n)
        .map(|i| (0..n).map(|j| rows[i][j] / diag[j]).collect())
        .collect();
    guard(xe_inv.iter().flatten().copied(), "x𝐞⁻¹")?;

    let mut power: Dense = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for _ in 0..m {
        power = upper_mul(&power, &xe_inv);
        guard(power.iter().flatten().copied(), "(x𝐞⁻¹)^m")?;
    }
    let px = upper_mul(&power, &rows);
    guard(px.iter().flatten().copied(), "(x𝐞⁻¹)^m x")?;
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for (i, row) in px.iter().enumerate() {
        for (j, v) in row.iter().enumerate().skip(i + 1) {
            upper.push(v * diag[j].powi(m as i32));
        }
    }
    guard(upper.iter().copied(), "partial sum")?;
    UnipotentMatrix::from_upper(n, upper)
}

/// `x · (𝐞⁻¹x𝐞) · (𝐞⁻²x𝐞²) ⋯ (𝐞⁻ᵐx𝐞ᵐ)`, multiplying factors whose entries
/// `x_ij e^((j-i)k)` decay to the identity.
pub fn unipotent_partial_sum_iter(x: &UnipotentMatrix<f64>, e: Scalar, m: usize) -> Result<UnipotentMatrix<f64>> {
    let ev = check_ratio(e, m)?;
    let mut acc = x.clone();
    let mut ek = 1.0;
    for _ in 0..m {
        ek *= ev;
        acc = acc.mul(&x.dilate(&ek));
        guard(acc.upper().iter().copied(), "partial sum")?;
    }
    Ok(acc)
}

/// `[y, 𝐞⁻¹] = y 𝐞⁻¹ y⁻¹ 𝐞`.
pub fn commutator_with_dilator(y: &UnipotentMatrix<f64>, e: Scalar) -> UnipotentMatrix<f64> {
    y.mul(&y.inverse().dilate(&e.value()))
}

#[derive(Debug, Clone)]
pub struct CommutatorSolution {
    pub y: UnipotentMatrix<f64>,
    /// Frobenius increments between consecutive partial sums.
    pub report: ConvergenceReport,
    /// `‖[y, 𝐞⁻¹] − x‖_F`.
    pub residual: f64,
}

/// Solves `[y, 𝐞⁻¹] = x` as the limit of the partial sums.
///
/// Stops once two consecutive increments are below `tol`; the solution is
/// accepted if the commutator equation then holds to `10·tol`. Otherwise the
/// result is [`Error::NonConvergent`] carrying the increment trace.
pub fn solve_commutator(x: &UnipotentMatrix<f64>, e: Scalar, tol: f64) -> Result<CommutatorSolution> {
    let ev = check_ratio(e, 0)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut acc = x.clone();
    let mut ek = 1.0;
    let mut residuals = Vec::new();
    let mut below = 0;
    for _ in 0..MAX_COMMUTATOR_ITER {
        ek *= ev;
        let next = acc.mul(&x.dilate(&ek));
        guard(next.upper().iter().copied(), "partial sum")?;
        let step = next.frobenius_distance(&acc);
        residuals.push(step);
        acc = next;
        below = if step < tol { below + 1 } else { 0 };
        if below == 2 || ek == 0.0 {
            break;
        }
    }
    let residual = commutator_with_dilator(&acc, e).frobenius_distance(x);
    let report = ConvergenceReport {
        limit: Some(Point::matrix(&acc)),
        steps_used: residuals.len(),
        residuals,
        converged: below == 2 && residual < 10.0 * tol,
    };
    if !report.converged {
        return Err(Error::NonConvergent {
            context: format!("commutator equation (residual {residual:e})"),
            report: Box::new(report),
        });
    }
    Ok(CommutatorSolution { y: acc, report, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{make_sphere, make_unipotent, make_vector_space};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(v: f64) -> Scalar {
        Scalar::new(v).unwrap()
    }

    fn random_unipotent(rng: &mut ChaCha8Rng, n: usize) -> UnipotentMatrix<f64> {
        UnipotentMatrix::from_upper(n, (0..n * (n - 1) / 2).map(|_| rng.random_range(-1.0..=1.0)).collect()).unwrap()
    }

    #[test]
    fn scalar_series_on_the_line() {
        let alg = make_vector_space(1).unwrap();
        let p = GeomSeriesProblem::new(alg, Point::real(0.0).unwrap(), Point::real(1.0).unwrap(), s(0.5), 1e-10);
        let sol = solve_dilation_equation(&p).unwrap();
        assert!(sol.report.converged);
        let got = sol.report.limit.unwrap().coordinates()[0];
        assert!((got - 2.0).abs() < 1e-9, "{got}");
        assert!(sol.equation_residual < 1e-9);
        // S_n is the partial sum of 1 + ε + ε² + …
        for (n, it) in sol.iterates.iter().enumerate() {
            let partial: f64 = (0..=n).map(|k| 0.5f64.powi(k as i32)).sum();
            assert!((it.coordinates()[0] - partial).abs() < 1e-15);
        }
    }

    #[test]
    fn corner_entry_of_two_by_two() {
        let alg = make_unipotent(2).unwrap();
        let x = Point::from(UnipotentMatrix::from_upper(2, vec![1.0]).unwrap());
        let id = Point::from(UnipotentMatrix::<f64>::identity(2));
        let sol = solve_dilation_equation(&GeomSeriesProblem::new(alg, id, x, s(0.5), 1e-10)).unwrap();
        assert!(sol.report.converged);
        assert!((sol.report.limit.unwrap().coordinates()[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn target_equal_to_base_is_fixed() {
        let alg = make_vector_space(2).unwrap();
        let e = Point::vector(vec![0.3, -0.1]).unwrap();
        let sol = solve_dilation_equation(&GeomSeriesProblem::new(alg, e.clone(), e.clone(), s(0.4), 1e-12)).unwrap();
        assert!(sol.report.converged);
        assert_eq!(sol.report.limit.unwrap(), e);
    }

    #[test]
    fn epsilon_outside_unit_interval_rejected() {
        let alg = make_vector_space(1).unwrap();
        let p = GeomSeriesProblem::new(alg, Point::real(0.0).unwrap(), Point::real(1.0).unwrap(), s(1.5), 1e-10);
        assert!(matches!(solve_dilation_equation(&p), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn iteration_cap_gives_unconverged_report() {
        let alg = make_vector_space(1).unwrap();
        let mut p = GeomSeriesProblem::new(alg, Point::real(0.0).unwrap(), Point::real(1.0).unwrap(), s(0.9), 1e-12);
        p.max_iter = 5;
        let sol = solve_dilation_equation(&p).unwrap();
        assert!(!sol.report.converged);
        assert_eq!(sol.report.steps_used, 5);
        assert_eq!(sol.iterates.len(), 6);
    }

    #[test]
    fn iterates_are_powers_of_the_dilation_at_the_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (alg, n) in [(make_vector_space(3).unwrap(), 0), (make_unipotent(3).unwrap(), 3)] {
            let pts = alg.sample(&mut rng, &Default::default(), 2).unwrap();
            let base = if n == 0 { pts[0].clone() } else { Point::from(UnipotentMatrix::<f64>::identity(n)) };
            let sol = solve_dilation_equation(&GeomSeriesProblem::new(alg.clone(), base, pts[1].clone(), s(0.5), 1e-11)).unwrap();
            assert!(sol.report.converged);
            let sum = sol.report.limit.clone().unwrap();
            let replay = replay_iterates(&alg, &sum, s(0.5), &sol.iterates[0], sol.iterates.len() - 1).unwrap();
            for (a, b) in replay.iter().zip(&sol.iterates) {
                assert!(alg.dist(a, b).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn sphere_uses_the_emergent_sum() {
        let alg = make_sphere();
        let e = Point::sphere([0.0, 0.0, 1.0]).unwrap();
        let x = Point::sphere([0.05, 0.02, 1.0]).unwrap();
        let mut p = GeomSeriesProblem::new(alg.clone(), e, x, s(0.5), 1e-6);
        p.max_iter = 100;
        let sol = solve_dilation_equation(&p).unwrap();
        assert!(sol.report.converged, "{:?}", sol.report.residuals);
        assert!(sol.equation_residual < 1e-5);
    }

    #[test]
    fn partial_sums_small_cases() {
        let x = UnipotentMatrix::from_upper(2, vec![1.0]).unwrap();
        assert_eq!(unipotent_partial_sum(&x, s(0.5), 0).unwrap(), x);
        assert_eq!(unipotent_partial_sum_iter(&x, s(0.5), 0).unwrap(), x);
        assert!((unipotent_partial_sum(&x, s(0.5), 2).unwrap().get(0, 1) - 1.75).abs() < 1e-15);
        assert!((unipotent_partial_sum_iter(&x, s(0.5), 2).unwrap().get(0, 1) - 1.75).abs() < 1e-15);
        assert!(unipotent_partial_sum(&x, s(0.5), MAX_TERMS + 1).is_err());
        assert!(unipotent_partial_sum(&x, s(1.0), 3).is_err());
    }

    #[test]
    fn two_by_two_corner_is_the_scalar_partial_sum() {
        let x = UnipotentMatrix::from_upper(2, vec![0.7]).unwrap();
        for m in 0..60 {
            let want: f64 = (0..=m).map(|k| 0.7 * 0.6f64.powi(k)).sum();
            let got = unipotent_partial_sum_iter(&x, s(0.6), m as usize).unwrap().get(0, 1);
            assert!((got - want).abs() < 1e-14 * want.max(1.0));
        }
    }

    #[test]
    fn closed_form_matches_iterative_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=5 {
            for e in [0.5, 0.7, 0.9] {
                let x = random_unipotent(&mut rng, n);
                for m in [0, 1, 2, 7, 20, 50] {
                    let a = unipotent_partial_sum(&x, s(e), m).unwrap();
                    let b = unipotent_partial_sum_iter(&x, s(e), m).unwrap();
                    assert!(a.frobenius_distance(&b) < 1e-10, "n={n} e={e} m={m}");
                }
            }
        }
    }

    #[test]
    fn closed_form_guard_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x = random_unipotent(&mut rng, 5);
        assert!(matches!(unipotent_partial_sum(&x, s(0.1), 50), Err(Error::NumericRange(_))));
    }

    #[test]
    fn commutator_equation() {
        let x = UnipotentMatrix::from_upper(2, vec![1.0]).unwrap();
        let sol = solve_commutator(&x, s(0.5), 1e-12).unwrap();
        assert!((sol.y.get(0, 1) - 2.0).abs() < 1e-11);
        // [y, 𝐞⁻¹] in the corner is y₁₂(1 − e)
        assert!((commutator_with_dilator(&sol.y, s(0.5)).get(0, 1) - 1.0).abs() < 1e-11);

        let id = UnipotentMatrix::<f64>::identity(3);
        assert_eq!(solve_commutator(&id, s(0.3), 1e-12).unwrap().y, id);

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in [3, 4] {
            for e in [0.3, 0.5, 0.7] {
                let x = random_unipotent(&mut rng, n);
                let sol = solve_commutator(&x, s(e), 1e-10).unwrap();
                assert!(sol.residual < 1e-8, "n={n} e={e}: {}", sol.residual);
            }
        }
    }
}
