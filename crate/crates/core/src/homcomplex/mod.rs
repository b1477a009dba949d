//! The degree 0 and 1 terms of `Hom(C(X), C(Y))` and the affine chart of
//! chain-homotopy classes built from them.

mod index;
mod map;
mod param;

pub use index::{hom_boundary, HomBasisIndex};
pub use map::{induced_homology_map, simplicial_chain_map, vertex_map_of, ChainMapMatrix};
pub use param::{
    chain_map_generators, evaluate_map, evaluate_reduced_map, kunneth_rank, select_b_coefficients, BPolicy,
    MapParameterization,
};
