//! Emergent sum, difference and inverse as limits along a schedule.
//!
//! On the line the limits are affine: `Σ^x(y, z) = y + z − x`,
//! `Δ^x(y, z) = x + z − y`, `inv^x y = 2x − y`. At the identity of the
//! Heisenberg group the emergent sum is the group product.

use emergent::{emergent_delta, emergent_inv, emergent_sigma, make_unipotent, make_vector_space, AbsoluteSchedule, Point, UnipotentMatrix};

fn main() -> emergent::Result<()> {
    let sched = AbsoluteSchedule::default();
    let line = make_vector_space(1)?;
    let (x, y, z) = (Point::real(1.0)?, Point::real(2.5)?, Point::real(-0.5)?);

    let sigma = emergent_sigma(&line, &sched, &x, &y, &z, 1e-12)?;
    println!("Σ^1(2.5, -0.5) = {:?} after {} steps", sigma.limit.map(|p| p.coordinates()), sigma.steps_used);
    let delta = emergent_delta(&line, &sched, &x, &y, &z, 1e-12)?;
    println!("Δ^1(2.5, -0.5) = {:?}", delta.limit.map(|p| p.coordinates()));
    let inv = emergent_inv(&line, &sched, &x, &y, 1e-12)?;
    println!("inv^1 2.5 = {:?}", inv.limit.map(|p| p.coordinates()));

    let h = make_unipotent(3)?;
    let id = Point::from(UnipotentMatrix::<f64>::identity(3));
    let p = UnipotentMatrix::from_upper(3, vec![1.0, 0.5, -1.0])?;
    let q = UnipotentMatrix::from_upper(3, vec![0.25, 2.0, 0.75])?;
    let r = emergent_sigma(&h, &sched, &id, &Point::from(p.clone()), &Point::from(q.clone()), 1e-10)?;
    let limit = r.into_limit("Heisenberg sum")?;
    let gap = limit.as_matrix()?.to_f64().frobenius_distance(&p.mul(&q));
    println!("Heisenberg: |Σ^I(p, q) − pq| = {gap:.2e}");
    Ok(())
}
