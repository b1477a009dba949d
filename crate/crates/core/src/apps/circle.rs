use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use crate::apps::embed::VertexEmbedding;
use crate::complexes::{model_complex, ModelComplex, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::homcomplex::{ChainMapMatrix, MapParameterization};
use crate::optimize::{descend_with_restarts, DescentOptions};

/// The `n`-gon with vertex `k` at angle `2πk/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleModel {
    n: usize,
}

impl CircleModel {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return invalid(format!("a circle model needs at least 3 vertices, got {n}"));
        }
        Ok(CircleModel { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_angle(&self, k: usize) -> f64 {
        TAU * (k % self.n) as f64 / self.n as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.vertex_angle(k)).collect()
    }

    pub fn complex(&self) -> SimplicialComplex {
        model_complex(ModelComplex::NGon(self.n)).expect("n >= 3")
    }
}

/// Wraps an angle difference into `(-π, π]`.
pub fn wrap_angle(delta: f64) -> f64 {
    let r = delta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Geodesic distance on the unit circle.
pub fn geodesic_distance(a: f64, b: f64) -> f64 {
    let r = (b - a).abs().rem_euclid(TAU);
    r.min(TAU - r)
}

/// How a vertex chain is turned into an angle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CircleLocalization {
    /// Weighted sum of vertex angles.
    #[default]
    Literal,
    /// Weighted sum of the vertices' points on the unit circle, projected back.
    Chord,
}

impl FromStr for CircleLocalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(CircleLocalization::Literal),
            "chord" => Ok(CircleLocalization::Chord),
            other => invalid(format!("unknown localization {other:?}; use literal or chord")),
        }
    }
}

/// Sum of squared geodesic distances between the localized images of the
/// endpoints of every domain edge, as a function of the coefficients.
#[derive(Clone, Debug)]
pub struct CircleObjective {
    embedding: VertexEmbedding,
    edges: Vec<(usize, usize)>,
    mode: CircleLocalization,
}

impl CircleObjective {
    pub fn new(p: &MapParameterization<f64>, model: &CircleModel, mode: CircleLocalization) -> Result<Self> {
        if p.codomain().simplices() != model.complex().simplices() {
            return invalid(format!("the codomain is not the {}-gon of the circle model", model.n()));
        }
        let phi: Vec<Vec<f64>> = match mode {
            CircleLocalization::Literal => model.angles().into_iter().map(|a| vec![a]).collect(),
            CircleLocalization::Chord => model.angles().into_iter().map(|a| vec![a.cos(), a.sin()]).collect(),
        };
        let x = p.domain();
        let edges = x
            .simplices_of_dim(1)
            .iter()
            .map(|e| {
                let v = e.vertices();
                (x.vertex_index(v[0]).expect("face"), x.vertex_index(v[1]).expect("face"))
            })
            .collect();
        Ok(CircleObjective { embedding: VertexEmbedding::new(p, &phi)?, edges, mode })
    }

    pub fn dim(&self) -> usize {
        self.embedding.dim()
    }

    /// `ψ(f(σ))` for every domain vertex, unwrapped for the literal rule.
    pub fn raw_angles(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.embedding.check(c)?;
        Ok(self.embedding.positions(c).iter().map(|p| self.angle_of(p)).collect())
    }

    /// Angles in `[0, 2π)`.
    pub fn angles(&self, c: &[f64]) -> Result<Vec<f64>> {
        Ok(self.raw_angles(c)?.into_iter().map(|a| a.rem_euclid(TAU)).collect())
    }

    fn angle_of(&self, p: &[f64]) -> f64 {
        match self.mode {
            CircleLocalization::Literal => p[0],
            CircleLocalization::Chord => p[1].atan2(p[0]),
        }
    }

    pub fn value(&self, c: &[f64]) -> Result<f64> {
        Ok(self.value_and_gradient(c)?.0)
    }

    /// The distortion and its gradient. At the cut locus the wrapped
    /// difference is taken as `+π`, which fixes a one-sided subgradient.
    pub fn value_and_gradient(&self, c: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.embedding.check(c)?;
        let pos = self.embedding.positions(c);
        let theta: Vec<f64> = pos.iter().map(|p| self.angle_of(p)).collect();
        let mut dtheta = vec![0.0; theta.len()];
        let mut total = 0.0;
        for &(i, j) in &self.edges {
            let w = wrap_angle(theta[j] - theta[i]);
            total += w * w;
            dtheta[j] += 2.0 * w;
            dtheta[i] -= 2.0 * w;
        }
        let dpos: Vec<Vec<f64>> = match self.mode {
            CircleLocalization::Literal => dtheta.iter().map(|&d| vec![d]).collect(),
            CircleLocalization::Chord => pos
                .iter()
                .zip(&dtheta)
                .map(|(p, &d)| {
                    let r2 = p[0] * p[0] + p[1] * p[1];
                    if r2 == 0.0 {
                        vec![0.0, 0.0]
                    } else {
                        vec![-d * p[1] / r2, d * p[0] / r2]
                    }
                })
                .collect(),
        };
        Ok((total, self.embedding.pull_back(&dpos)))
    }
}

/// Distortion of the map with coefficients `c`.
pub fn circle_distortion(
    p: &MapParameterization<f64>,
    model: &CircleModel,
    c: &[f64],
    mode: CircleLocalization,
) -> Result<f64> {
    CircleObjective::new(p, model, mode)?.value(c)
}

/// Distortion of an explicit map into the model's polygon.
pub fn map_distortion(g: &ChainMapMatrix<f64>, model: &CircleModel, mode: CircleLocalization) -> Result<f64> {
    let y = g.codomain();
    if y.simplices() != model.complex().simplices() {
        return invalid(format!("the codomain is not the {}-gon of the circle model", model.n()));
    }
    let x = g.domain();
    let angles = model.angles();
    let theta: Vec<f64> = (0..x.count(0))
        .map(|s| {
            let image = g.image(s);
            match mode {
                CircleLocalization::Literal => image.iter().filter(|(t, _)| *t < angles.len()).map(|(t, a)| a * angles[t]).sum(),
                CircleLocalization::Chord => {
                    let (mut u, mut v) = (0.0, 0.0);
                    for (t, a) in image.iter().filter(|(t, _)| *t < angles.len()) {
                        u += a * angles[t].cos();
                        v += a * angles[t].sin();
                    }
                    v.atan2(u)
                }
            }
        })
        .collect();
    Ok(x.simplices_of_dim(1)
        .iter()
        .map(|e| {
            let v = e.vertices();
            let (i, j) = (x.vertex_index(v[0]).expect("face"), x.vertex_index(v[1]).expect("face"));
            geodesic_distance(theta[i], theta[j]).powi(2)
        })
        .sum())
}

#[derive(Clone, Debug)]
pub struct CircleCoordinates {
    pub coefficients: Vec<f64>,
    /// `ψ(f(σ))` in `[0, 2π)` per domain vertex.
    pub angles: Vec<f64>,
    pub distortion: f64,
    pub initial_distortion: f64,
}

/// Locally minimizes the distortion from `start` (zero when absent) with
/// seeded restarts.
pub fn minimize_circle_distortion(
    p: &MapParameterization<f64>,
    model: &CircleModel,
    mode: CircleLocalization,
    start: Option<&[f64]>,
    opts: &DescentOptions,
    seed: u64,
) -> Result<CircleCoordinates> {
    let obj = CircleObjective::new(p, model, mode)?;
    let zero = vec![0.0; obj.dim()];
    let start = start.unwrap_or(&zero);
    obj.embedding.check(start)?;
    let f = |c: &[f64]| obj.value_and_gradient(c);
    let run = descend_with_restarts(&f, start, opts, seed)?;
    Ok(CircleCoordinates {
        angles: obj.angles(&run.coefficients)?,
        coefficients: run.coefficients,
        distortion: run.value,
        initial_distortion: run.initial_value,
    })
}

/// Signed number of turns made by the closed sequence of angles, each step
/// taken the short way round.
pub fn winding_number(cycle: &[f64]) -> f64 {
    if cycle.len() < 2 {
        return 0.0;
    }
    let n = cycle.len();
    (0..n).map(|k| wrap_angle(cycle[(k + 1) % n] - cycle[k])).sum::<f64>() / TAU
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Rational;
    use crate::homcomplex::chain_map_generators;

    #[test]
    fn geodesic_examples() {
        assert!((geodesic_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
        assert!((geodesic_distance(0.0, PI) - PI).abs() < 1e-12);
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(1.5 * PI) + 0.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn winding_examples() {
        let m = CircleModel::new(8).unwrap();
        assert!((winding_number(&m.angles()) - 1.0).abs() < 1e-12);
        let rev: Vec<f64> = m.angles().into_iter().rev().collect();
        assert!((winding_number(&rev) + 1.0).abs() < 1e-12);
        assert_eq!(winding_number(&[0.3; 5]), 0.0);
    }

    #[test]
    fn identity_distortion() {
        let model = CircleModel::new(6).unwrap();
        let k = Arc::new(model.complex());
        let p = chain_map_generators::<Rational>(&k, &k).unwrap().map_field::<f64>();
        let obj = CircleObjective::new(&p, &model, CircleLocalization::Literal).unwrap();
        // the base map sends every vertex to one vertex
        assert_eq!(obj.value(&vec![0.0; obj.dim()]).unwrap(), 0.0);
        assert!(CircleModel::new(2).is_err());
    }

    #[test]
    fn identity_map_distortion() {
        for n in [3, 5, 16] {
            let model = CircleModel::new(n).unwrap();
            let id = ChainMapMatrix::<f64>::identity(Arc::new(model.complex()));
            let expect = n as f64 * (TAU / n as f64).powi(2);
            for mode in [CircleLocalization::Literal, CircleLocalization::Chord] {
                assert!((map_distortion(&id, &model, mode).unwrap() - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gradient_matches_differences() {
        let model = CircleModel::new(4).unwrap();
        let x = Arc::new(model.complex());
        let p = chain_map_generators::<Rational>(&x, &x).unwrap().map_field::<f64>();
        for mode in [CircleLocalization::Literal, CircleLocalization::Chord] {
            let obj = CircleObjective::new(&p, &model, mode).unwrap();
            let c: Vec<f64> = (0..obj.dim()).map(|i| 0.37 * ((i * 7 % 5) as f64 - 2.0) + 0.11).collect();
            let (_, g) = obj.value_and_gradient(&c).unwrap();
            for i in 0..obj.dim() {
                let h = 1e-6;
                let mut a = c.clone();
                let mut b = c.clone();
                a[i] += h;
                b[i] -= h;
                let fd = (obj.value(&a).unwrap() - obj.value(&b).unwrap()) / (2.0 * h);
                assert!((fd - g[i]).abs() <= 1e-5 * (1.0 + fd.abs()), "{mode:?} {i}: {fd} vs {}", g[i]);
            }
        }
    }
}
