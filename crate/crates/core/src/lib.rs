pub mod assembly;
pub mod error;
pub mod geometry;
pub mod mechanics;
pub mod nurbs;
pub mod postprocess;
pub mod problem;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod taylor;

pub use error::{Error, Result};
