//! Layer-adapted meshes, robust discretizations and uniform-convergence
//! studies for singularly perturbed two-point boundary-value problems.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod discretize;
pub mod harness;
pub mod linalg;
pub mod mesh;
pub mod problems;
pub mod quadrature;
pub mod roots;
