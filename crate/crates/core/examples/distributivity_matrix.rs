//! The LIN / COLIN / SHUFFLE classification table.

use emergent::verifier::{check_distributivity, Distributivity, Thresholds};
use emergent::{make_sphere, make_unipotent, make_vector_space, SampleSpec};

fn main() -> emergent::Result<()> {
    let spec = SampleSpec::default().with_count(300);
    let thresholds = Thresholds::default();
    let algs = [
        make_vector_space(1)?,
        make_vector_space(3)?,
        make_unipotent(2)?,
        make_unipotent(3)?,
        make_unipotent(4)?,
        make_sphere(),
    ];
    println!("{:<14}{:>22}{:>22}{:>22}", "instance", "LIN", "COLIN", "SHUFFLE");
    for alg in &algs {
        print!("{:<14}", alg.name());
        for law in Distributivity::ALL {
            let r = check_distributivity(alg, law, &spec, thresholds.pass)?;
            print!("{:>22}", format!("{} ({:.1e})", r.verdict(&thresholds), r.max_residual));
        }
        println!();
    }
    Ok(())
}
