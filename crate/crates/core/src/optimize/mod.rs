//! Selection of concrete representatives from a map parameterization.

mod aw;
mod export;
pub mod lp;
mod norm;
mod penalty;
mod search;

pub use aw::{
    aw_diagonal, aw_loss, aw_total_loss, descend_with_restarts, gradient_descent, kron_apply, minimize_aw, round_map,
    AwObjective, DescentOptions, DescentResult,
};
pub use export::{map_from_json, map_to_csv, map_to_json};
pub use lp::{solve_lp, Bound, LinearProgram, LpBackend, LpSolution, LpStatus, Sense};
pub use norm::{
    build_norm_lp, random_vertex, solve_norm_lp, sparsest_vertex, sparsity_score, NormLp, NormSolution,
    SparsestVertex, VertexSampler,
};
pub use penalty::{bisimplicial_penalty, norm_objective, PenaltyReport};
pub use search::{
    bits_to_z2, enumerate_z2, greedy_search, penalty_objective, random_walk, simulated_annealing, AnnealingSchedule,
    Enumeration, SearchTrace, DEFAULT_ENUMERATION_CAP, MAX_LISTED_MINIMIZERS,
};
