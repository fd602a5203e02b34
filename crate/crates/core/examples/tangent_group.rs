//! Rebuilds a conical group from the emergent operations at a point.
//!
//! At the identity of `unipotent:3` the tangent group reproduces matrix
//! multiplication and inversion.

use emergent::verifier::theorem1_roundtrip;
use emergent::{make_unipotent, tangent_conical_group, AbsoluteSchedule, Point, SampleSpec, UnipotentMatrix};

fn main() -> emergent::Result<()> {
    let sched = AbsoluteSchedule::default();
    let h = make_unipotent(3)?;
    let id = Point::from(UnipotentMatrix::<f64>::identity(3));
    let tangent = tangent_conical_group(&h, &sched, &id, 1e-10)?;

    let p = UnipotentMatrix::from_upper(3, vec![0.5, -1.0, 0.75])?;
    let q = UnipotentMatrix::from_upper(3, vec![1.5, 0.25, -0.5])?;
    let prod = tangent.mul(&Point::from(p.clone()), &Point::from(q.clone()))?;
    let inv = tangent.inverse(&Point::from(p.clone()))?;
    println!("{}", tangent.name());
    println!("  product gap {:.2e}", prod.as_matrix()?.to_f64().frobenius_distance(&p.mul(&q)));
    println!("  inverse gap {:.2e}", inv.as_matrix()?.to_f64().frobenius_distance(&p.inverse()));

    let spec = SampleSpec::default().with_count(50);
    let r = theorem1_roundtrip(&h, &id, &sched, &spec, 1e-6)?;
    println!("  round trip over {} samples: max {:.2e}, passed {}", r.count, r.max_residual, r.passed);
    Ok(())
}
