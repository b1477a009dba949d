//! Simplicial complexes, point clouds and the builders that connect them.

mod builders;
mod complex;
mod homology;
mod models;
mod pointcloud;
mod samples;
mod simplex;

pub use builders::{lazy_witness, maxmin_landmarks, maxmin_landmarks_from, vietoris_rips, Landmarks};
pub use complex::SimplicialComplex;
pub use homology::{betti, betti_number, cohomology_basis, homology_basis};
pub use models::{model_complex, ModelComplex};
pub use pointcloud::{euclidean, PointCloud};
pub use samples::{circle_points, noisy_circle, trefoil, trefoil_point};
pub use simplex::Simplex;
