//! Commutativity, COLIN and SHUFFLE agree on every conical group, and COLIN
//! residuals are commutators.

use emergent::verifier::{commutator_identity_check, theorem2_dichotomy, Thresholds};
use emergent::{make_unipotent, make_vector_space, Point, SampleSpec, Scalar, UnipotentMatrix};

fn main() -> emergent::Result<()> {
    let spec = SampleSpec::default().with_count(300);
    for alg in [make_vector_space(2)?, make_unipotent(2)?, make_unipotent(3)?, make_unipotent(4)?] {
        let group = alg.group().expect("conical instance");
        let d = theorem2_dichotomy(group, &alg.metric(), &alg.sampler(), &spec, &Thresholds::default())?;
        println!(
            "{:<14} commutative {:<5} COLIN {:<5} SHUFFLE {:<5} agree {}",
            d.spec, d.verdicts[0], d.verdicts[1], d.verdicts[2], d.agree
        );
    }

    let h = make_unipotent(3)?;
    let group = h.group().expect("conical instance");
    let y = Point::from(UnipotentMatrix::from_upper(3, vec![1.0, 2.0, -0.5])?);
    let z = Point::from(UnipotentMatrix::from_upper(3, vec![-0.75, 0.5, 1.25])?);
    let (a, b) = (Scalar::new(0.5)?, Scalar::new(3.0)?);
    let gap = commutator_identity_check(group, &h.metric(), a, b, &y, &z)?;
    println!("COLIN term vs commutator form on unipotent:3: {gap:.2e}");
    Ok(())
}
