//! Every instance that passes COLIN also passes LIN and the complement
//! identity `y ∘_b e = e ∘_{1−b} y`.

use emergent::verifier::colin_implies_lin_witness;
use emergent::{make_sphere, make_unipotent, make_vector_space, SampleSpec};

fn main() -> emergent::Result<()> {
    let algs = vec![make_vector_space(2)?, make_unipotent(2)?, make_unipotent(3)?, make_sphere()];
    let w = colin_implies_lin_witness(&algs, &SampleSpec::default().with_count(300), 1e-9)?;
    for e in &w.entries {
        let complement = e.complement.as_ref().map(|c| format!("{:.1e}", c.max_residual));
        println!(
            "{:<14} LIN {:.1e}  COLIN {:.1e}  complement {}",
            e.instance,
            e.lin.max_residual,
            e.colin.max_residual,
            complement.as_deref().unwrap_or("-")
        );
    }
    println!("holds: {}", w.holds);
    Ok(())
}
