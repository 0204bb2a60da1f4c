//! Middle-surface geometry in global Cartesian coordinates: parametrizations,
//! projectors, tangential gradients and the Weingarten map.

mod frame;
mod map;

pub(crate) use frame::{cross, frame_from_derivatives, jet_frame_from_derivatives};
pub use frame::{
    boundary_frame_at, boundary_frame_from, frame_at, frame_kernel, frame_values, jet_frame, surface_grad_scalar,
    surface_grad_vector_dir, BoundaryFrame, SurfaceFrame,
};
pub use map::GeometryMap;
