//! Polygons, smoothing kernels, and convolutional corner rounding into exact parametric curves.

mod curve;
mod kernel;
mod polygon;
pub mod vec2;

pub use curve::{
    round_polygon, CornerProfile, CurveSample, PiecewiseCurve, ProfileShape, Segment,
};
pub use kernel::{
    gaussian_corner_profile, gaussian_threshold, kernel_eval, kernel_fourier, poly_constant,
    poly_profile, select_delta, SmoothingKernel,
};
pub use polygon::Polygon;
pub use vec2::Point;
