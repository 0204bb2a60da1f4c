//! Tensor-product NURBS bases: clamped and periodic knot vectors, rational
//! evaluation with mixed parametric derivatives up to third order, knot
//! insertion and degree elevation.

mod knots;
mod patch;
mod refine;
mod tensor;

pub use knots::{ders_basis_funs, Basis1d, KnotVector, PeriodicKnots, Univariate};
pub use patch::{eval_basis, NurbsPatch};
pub use refine::{elevate_degree, refine_uniform};
pub use tensor::{eval_tensor, BasisEval, Element, TensorBasis, MAX_DERIV};
