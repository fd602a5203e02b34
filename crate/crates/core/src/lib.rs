//! A workbench for emergent algebras.
//!
//! An emergent algebra is a family of dilation operations `x ∘_a y`, indexed
//! by scalars `a ∈ (0, ∞)`, whose approximate sums and differences converge as
//! `a → 0`. This crate provides concrete instances (real vector spaces, the
//! unipotent matrix groups, any conical group, the round sphere), a limit
//! engine for the emergent operations, a fixed-point solver for the
//! non-commutative geometric series, and seeded property campaigns for the
//! distributivity laws and their consequences.
//!
//! ```
//! use emergent::{make_vector_space, Point, Scalar};
//!
//! let line = make_vector_space(1).unwrap();
//! let half = Scalar::new(0.5).unwrap();
//! let p = line.circ(half, &Point::real(0.0).unwrap(), &Point::real(4.0).unwrap()).unwrap();
//! assert_eq!(p, Point::real(2.0).unwrap());
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod geomseries;
pub mod instances;
pub mod limits;
pub mod point;
pub mod scalar;
pub mod verifier;

pub use algebra::{AlgebraHandle, Carrier, Chart, Dilations, DomainBounds, Metric, Sampler};
pub use error::{Error, Result};
pub use geomseries::{
    solve_commutator, solve_dilation_equation, unipotent_partial_sum, unipotent_partial_sum_iter, GeomSeriesProblem,
    GeomSeriesSolution,
};
pub use instances::{
    make_conical, make_sphere, make_unipotent, make_vector_space, sphere_exp, sphere_log, ConicalGroupSpec,
    DiagonalDilator, SpherePoint, TangentVector, UnipotentMatrix, VectorPoint,
};
pub use limits::{
    emergent_delta, emergent_inv, emergent_sigma, infinitesimal_circ, limit_along_schedule, tangent_conical_group,
    AbsoluteSchedule, ConvergenceReport,
};
pub use point::Point;
pub use scalar::Scalar;
pub use verifier::{PropertyReport, SampleSpec, Verdict};
