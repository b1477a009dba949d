use serde_json::{Map, Value};

use crate::complexes::SimplicialComplex;
use crate::error::{invalid, Result};
use crate::homcomplex::ChainMapMatrix;

pub type Rgb = [f64; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct Coloring {
    /// Per domain simplex, the average of its vertex colors.
    pub domain: Vec<Rgb>,
    /// Per codomain simplex, before clamping.
    pub raw: Vec<Rgb>,
    pub clamped: Vec<Rgb>,
}

/// Colors every simplex by the mean of its vertex colors; `mu` is indexed by
/// vertex position.
pub fn simplex_colors(k: &SimplicialComplex, mu: &[Rgb]) -> Result<Vec<Rgb>> {
    if mu.len() != k.count(0) {
        return invalid(format!("{} colors for {} vertices", mu.len(), k.count(0)));
    }
    Ok(k.simplices()
        .iter()
        .map(|s| {
            let mut c = [0.0; 3];
            for v in s.vertices() {
                let m = mu[k.vertex_index(*v).expect("face")];
                for i in 0..3 {
                    c[i] += m[i];
                }
            }
            c.map(|x| x / s.vertices().len() as f64)
        })
        .collect())
}

/// `μ*(τ) = μ(f*(τ))`: the domain coloring extended linearly over the
/// adjoint image of each codomain simplex.
pub fn pushforward_coloring(g: &ChainMapMatrix<f64>, mu: &[Rgb]) -> Result<Coloring> {
    let domain = simplex_colors(g.domain(), mu)?;
    let mut raw = vec![[0.0; 3]; g.codomain().len()];
    for (t, s, a) in g.matrix().triplets() {
        for i in 0..3 {
            raw[t][i] += a * domain[s][i];
        }
    }
    let clamped = raw.iter().map(|c| c.map(|x| x.clamp(0.0, 1.0))).collect();
    Ok(Coloring { domain, raw, clamped })
}

/// Codomain simplices whose adjoint image has absolute coefficient sum above
/// one, with that sum.
pub fn intensity_report(g: &ChainMapMatrix<f64>) -> Vec<(usize, f64)> {
    let mut sums = vec![0.0; g.codomain().len()];
    for (t, _, a) in g.matrix().triplets() {
        sums[t] += a.abs();
    }
    sums.into_iter().enumerate().filter(|(_, s)| *s > 1.0 + 1e-9).collect()
}

impl Coloring {
    pub fn to_json(&self, domain: &SimplicialComplex, codomain: &SimplicialComplex) -> Value {
        let table = |k: &SimplicialComplex, colors: &[Rgb]| -> Value {
            let m: Map<String, Value> = k
                .simplices()
                .iter()
                .zip(colors)
                .map(|(s, c)| (s.to_string(), Value::from(c.to_vec())))
                .collect();
            Value::Object(m)
        };
        let mut root = Map::new();
        root.insert("domain".into(), table(domain, &self.domain));
        root.insert("raw".into(), table(codomain, &self.raw));
        root.insert("clamped".into(), table(codomain, &self.clamped));
        Value::Object(root)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complexes::{model_complex, ModelComplex};

    fn palette(n: usize) -> Vec<Rgb> {
        (0..n).map(|i| [i as f64 / n as f64, 0.5, 1.0 - i as f64 / n as f64]).collect()
    }

    #[test]
    fn identity_and_zero() {
        let k = Arc::new(model_complex(ModelComplex::Square).unwrap());
        let mu = palette(4);
        let id = pushforward_coloring(&ChainMapMatrix::identity(k.clone()), &mu).unwrap();
        assert_eq!(id.raw, id.domain);
        assert_eq!(id.raw[4], [(0.0 + 0.25) / 2.0, 0.5, (1.0 + 0.75) / 2.0]);
        let zero = pushforward_coloring(&ChainMapMatrix::zero(k.clone(), k), &mu).unwrap();
        assert!(zero.raw.iter().all(|c| *c == [0.0; 3]));
        assert!(intensity_report(&ChainMapMatrix::<f64>::identity(Arc::new(model_complex(ModelComplex::Point).unwrap()))).is_empty());
    }

    #[test]
    fn palette_size_checked() {
        let k = Arc::new(model_complex(ModelComplex::Square).unwrap());
        assert!(pushforward_coloring(&ChainMapMatrix::identity(k), &palette(3)).is_err());
    }
}
