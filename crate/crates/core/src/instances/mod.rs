//! Concrete emergent algebras.

pub mod conical;
pub mod matrix;
pub mod sphere;
pub mod unipotent;
pub mod vector;

pub use conical::{make_conical, make_conical_with, ConicalAlgebra, ConicalCheck, ConicalGroupSpec};
pub use matrix::{DiagonalDilator, Entry, Rational, UnipotentMatrix};
pub use sphere::{make_sphere, sphere_exp, sphere_log, SpherePoint, TangentVector};
pub use unipotent::{make_unipotent, unipotent_group};
pub use vector::{make_vector_space, vector_group, VectorPoint};
