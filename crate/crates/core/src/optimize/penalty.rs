use crate::algebra::Field;
use crate::homcomplex::ChainMapMatrix;

/// Image and preimage sizes of a map, and the bisimpliciality penalty
/// `max_σ |f(σ)|_0 + max_τ |f*(τ)|_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PenaltyReport {
    pub value: usize,
    /// Nonzero entries per domain simplex (matrix column).
    pub image_counts: Vec<usize>,
    /// Nonzero entries per codomain simplex (matrix row).
    pub preimage_counts: Vec<usize>,
}

pub fn bisimplicial_penalty<F: Field>(g: &ChainMapMatrix<F>) -> PenaltyReport {
    let m = g.matrix();
    let image_counts: Vec<usize> = m.columns().iter().map(|c| c.nnz()).collect();
    let mut preimage_counts = vec![0; m.rows()];
    for (r, _, _) in m.triplets() {
        preimage_counts[r] += 1;
    }
    let value = image_counts.iter().max().copied().unwrap_or(0) + preimage_counts.iter().max().copied().unwrap_or(0);
    PenaltyReport { value, image_counts, preimage_counts }
}

/// `‖G‖₁ + ‖Gᵀ‖₁` with `‖·‖₁` the largest absolute column sum.
pub fn norm_objective<F: Field>(g: &ChainMapMatrix<F>) -> f64 {
    let m = g.matrix();
    let col = m.columns().iter().map(|c| c.iter().map(|(_, a)| a.to_f64().abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut rows = vec![0.0; m.rows()];
    for (r, _, a) in m.triplets() {
        rows[r] += a.to_f64().abs();
    }
    col + rows.into_iter().fold(0.0, f64::max)
}
