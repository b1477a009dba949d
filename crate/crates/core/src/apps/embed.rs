use crate::algebra::SparseVector;
use crate::complexes::SimplicialComplex;
use crate::error::{invalid, Result};
use crate::homcomplex::MapParameterization;

/// `ψ(Σ cᵢ σᵢ) = Σ cᵢ φ(σᵢ)` for a chain supported on vertices.
///
/// `chain` is indexed by global simplex index of `complex` (or by vertex
/// index when only vertices are given); `phi[k]` is the coordinate of the
/// `k`-th vertex.
pub fn localize(chain: &SparseVector<f64>, complex: &SimplicialComplex, phi: &[Vec<f64>]) -> Result<Vec<f64>> {
    let nv = complex.count(0);
    if chain.dim() != complex.len() && chain.dim() != nv {
        return invalid(format!("chain of length {} for a complex with {} simplices", chain.dim(), complex.len()));
    }
    if phi.len() != nv {
        return invalid(format!("{} coordinates for {nv} vertices", phi.len()));
    }
    let width = phi.first().map_or(0, Vec::len);
    if phi.iter().any(|p| p.len() != width) {
        return invalid("vertex coordinates have different lengths");
    }
    let mut out = vec![0.0; width];
    for (i, a) in chain.iter() {
        if i >= nv {
            return invalid(format!("chain touches {}, which is not a vertex", complex.simplex(i)));
        }
        for (o, x) in out.iter_mut().zip(&phi[i]) {
            *o += a * x;
        }
    }
    Ok(out)
}

/// Localized images of the domain vertices as an affine function of the
/// independent homotopy coefficients: `P(c) = P₀ + Σₙ cₙ Aₙ`.
#[derive(Clone, Debug)]
pub(crate) struct VertexEmbedding {
    base: Vec<Vec<f64>>,
    /// Per direction, the nonzero `(domain vertex, displacement)` pairs.
    directions: Vec<Vec<(usize, Vec<f64>)>>,
    width: usize,
}

impl VertexEmbedding {
    pub(crate) fn new(p: &MapParameterization<f64>, phi: &[Vec<f64>]) -> Result<Self> {
        let (x, y) = (p.domain(), p.codomain());
        let ny = y.count(0);
        if phi.len() != ny {
            return invalid(format!("{} codomain coordinates for {ny} vertices", phi.len()));
        }
        let width = phi.first().map_or(0, Vec::len);
        if phi.iter().any(|q| q.len() != width) {
            return invalid("codomain coordinates have different lengths");
        }
        let nx = x.count(0);
        let index = p.index();
        // vertex-to-vertex entries (domain vertex, codomain vertex, value)
        let vertex_part = |v: &SparseVector<f64>| -> Vec<(usize, usize, f64)> {
            v.iter()
                .filter_map(|(e, &a)| {
                    let (s, t) = index.pair(e);
                    (s < nx && t < ny).then_some((s, t, a))
                })
                .collect()
        };
        let mut base = vec![vec![0.0; width]; nx];
        for (s, t, a) in vertex_part(&p.base_vector()) {
            for (o, q) in base[s].iter_mut().zip(&phi[t]) {
                *o += a * q;
            }
        }
        let directions = p
            .reduced_homotopies()
            .iter()
            .map(|h| {
                let mut acc: Vec<(usize, Vec<f64>)> = Vec::new();
                for (s, t, a) in vertex_part(h) {
                    let slot = match acc.iter().position(|(v, _)| *v == s) {
                        Some(k) => k,
                        None => {
                            acc.push((s, vec![0.0; width]));
                            acc.len() - 1
                        }
                    };
                    for (o, q) in acc[slot].1.iter_mut().zip(&phi[t]) {
                        *o += a * q;
                    }
                }
                acc
            })
            .collect();
        Ok(VertexEmbedding { base, directions, width })
    }

    pub(crate) fn dim(&self) -> usize {
        self.directions.len()
    }

    pub(crate) fn check(&self, c: &[f64]) -> Result<()> {
        if c.len() != self.dim() {
            return invalid(format!("{} coefficients for {} homotopy directions", c.len(), self.dim()));
        }
        Ok(())
    }

    pub(crate) fn positions(&self, c: &[f64]) -> Vec<Vec<f64>> {
        let mut pos = self.base.clone();
        for (d, &a) in self.directions.iter().zip(c) {
            if a == 0.0 {
                continue;
            }
            for (s, disp) in d {
                for (o, q) in pos[*s].iter_mut().zip(disp) {
                    *o += a * q;
                }
            }
        }
        pos
    }

    /// Chain rule: turns per-vertex position gradients into a gradient over
    /// the coefficients.
    pub(crate) fn pull_back(&self, dpos: &[Vec<f64>]) -> Vec<f64> {
        self.directions
            .iter()
            .map(|d| {
                d.iter()
                    .map(|(s, disp)| disp.iter().zip(&dpos[*s]).map(|(a, b)| a * b).sum::<f64>())
                    .sum()
            })
            .collect()
    }

    pub(crate) fn width(&self) -> usize {
        self.width
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{model_complex, ModelComplex};

    #[test]
    fn localize_examples() {
        let sq = model_complex(ModelComplex::Square).unwrap();
        let phi = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![2.0, 2.0], vec![0.0, 2.0]];
        let unit = SparseVector::unit(sq.len(), 2);
        assert_eq!(localize(&unit, &sq, &phi).unwrap(), phi[2]);
        let half = SparseVector::from_pairs(sq.len(), [(0, 0.5), (1, 0.5)]).unwrap();
        assert_eq!(localize(&half, &sq, &phi).unwrap(), vec![1.0, 0.0]);
        assert_eq!(localize(&SparseVector::zero(sq.len()), &sq, &phi).unwrap(), vec![0.0, 0.0]);
        let edge = SparseVector::unit(sq.len(), 5);
        assert!(localize(&edge, &sq, &phi).is_err());
    }
}
