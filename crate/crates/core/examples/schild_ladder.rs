//! Curvature detection from the Schild's-ladder gap: quadratic on the sphere,
//! zero on a flat space.

use emergent::verifier::curvature_scaling;
use emergent::{make_sphere, make_vector_space, Point, Scalar};

fn main() -> emergent::Result<()> {
    let a: Vec<Scalar> = [0.2, 0.1, 0.05, 0.025].iter().map(|&a| Scalar::new(a)).collect::<Result<_, _>>()?;
    let (v, w) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);

    let sphere = curvature_scaling(&make_sphere(), &Point::sphere([0.0, 0.0, 1.0])?, &v, &w, &a)?;
    for r in &sphere.rows {
        println!("sphere a={:<6} gap {:.4e}", r.a, r.gap);
    }
    println!("  ratios {:?}", sphere.gap_ratios());
    println!("  slope {:?} ({:?})", sphere.slope, sphere.verdict);

    let flat = curvature_scaling(&make_vector_space(3)?, &Point::vector(vec![0.0; 3])?, &v, &w, &a)?;
    println!("vector:3 verdict {:?}", flat.verdict);
    Ok(())
}
