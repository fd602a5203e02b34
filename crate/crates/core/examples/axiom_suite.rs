//! Seeded axiom and convergence campaigns on three instances.
//!
//! `cargo run --release --example axiom_suite`

use emergent::verifier::{check_axioms, check_em};
use emergent::{make_sphere, make_unipotent, make_vector_space, AbsoluteSchedule, SampleSpec};

fn main() -> emergent::Result<()> {
    let spec = SampleSpec::default();
    let limits = spec.with_count(100);
    let sched = AbsoluteSchedule::default();
    for alg in [make_vector_space(3)?, make_unipotent(3)?, make_sphere()] {
        let ax = check_axioms(&alg, &spec, 1e-9)?;
        let em = check_em(&alg, &sched, &limits, 1e-6)?;
        println!(
            "{:<12} axioms max {:.2e} over {}   em max {:.2e} over {}",
            alg.name(),
            ax.max_residual,
            ax.count,
            em.max_residual,
            em.count
        );
        if let Some(worst) = &em.argmax {
            println!("  worst em sample #{} ({})", worst.index, worst.detail);
        }
    }
    Ok(())
}
