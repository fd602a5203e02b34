//! Solving `S ∘_ε e = x` by the non-commutative geometric series.

use emergent::{
    make_vector_space, solve_commutator, solve_dilation_equation, unipotent_partial_sum, unipotent_partial_sum_iter,
    GeomSeriesProblem, Point, Scalar, UnipotentMatrix,
};

fn main() -> emergent::Result<()> {
    let half = Scalar::new(0.5)?;
    let line = make_vector_space(1)?;
    let p = GeomSeriesProblem::new(line, Point::real(0.0)?, Point::real(1.0)?, half, 1e-10);
    let sol = solve_dilation_equation(&p)?;
    println!("line: S = {:?} after {} iterations", sol.report.limit.as_ref().map(Point::coordinates), sol.report.steps_used);
    for (n, r) in sol.report.residuals.iter().take(6).enumerate() {
        println!("  step {n}: {r:.3e}");
    }

    let x = UnipotentMatrix::from_upper(3, vec![1.0, 2.0, 3.0])?;
    let c = solve_commutator(&x, half, 1e-10)?;
    println!("y · D y⁻¹ D⁻¹ = x on unipotent:3: y = {:?}, residual {:.2e}", c.y.upper(), c.residual);

    let x5 = UnipotentMatrix::from_upper(4, vec![0.5, -1.0, 0.25, 1.0, 0.5, -0.75])?;
    let e = Scalar::new(0.7)?;
    for m in [1, 5, 20] {
        let closed = unipotent_partial_sum(&x5, e, m)?;
        let iter = unipotent_partial_sum_iter(&x5, e, m)?;
        println!("m = {m:>2}: closed form vs recursion {:.2e}", closed.frobenius_distance(&iter));
    }
    Ok(())
}
