//! Applications: circle-valued coordinates, density maximization, mapper
//! graphs with a local-maxima quotient, and coloring by pushforward.

mod circle;
mod coloring;
mod density;
mod embed;
mod mapper;

pub use circle::{
    circle_distortion, geodesic_distance, map_distortion, minimize_circle_distortion, winding_number, wrap_angle,
    CircleCoordinates, CircleLocalization, CircleModel, CircleObjective,
};
pub use coloring::{intensity_report, pushforward_coloring, simplex_colors, Coloring, Rgb};
pub use density::{
    kde_evaluate, kde_gradient, maximize_density, pairwise_sum, DensityEstimate, DensityMaximum, DensityObjective,
};
pub use embed::localize;
pub use mapper::{mapper_1d, quotient_local_maxima, MapperGraph, MapperNode, MaximumRule, QuotientGraph};
