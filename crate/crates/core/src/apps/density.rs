use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::apps::embed::VertexEmbedding;
use crate::complexes::PointCloud;
use crate::error::{invalid, Result};
use crate::homcomplex::MapParameterization;
use crate::optimize::{descend_with_restarts, DescentOptions};

/// Gaussian kernel density estimate `f(y) = Σᵢ K((y - yᵢ)/h) / (n h)`.
#[derive(Clone, Debug)]
pub struct DensityEstimate {
    samples: PointCloud,
    bandwidth: f64,
}

impl DensityEstimate {
    pub fn new(samples: PointCloud, bandwidth: f64) -> Result<Self> {
        if !(bandwidth > 0.0) || !bandwidth.is_finite() {
            return invalid(format!("bandwidth must be positive, got {bandwidth}"));
        }
        if samples.is_empty() {
            return invalid("a density estimate needs at least one sample");
        }
        Ok(DensityEstimate { samples, bandwidth })
    }

    pub fn samples(&self) -> &PointCloud {
        &self.samples
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn dim(&self) -> usize {
        self.samples.ambient_dim()
    }

    fn check(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.dim() {
            return invalid(format!("query has dimension {}, samples have {}", y.len(), self.dim()));
        }
        Ok(())
    }

    /// Per-sample kernel weights `K((y - yᵢ)/h) / (n h)`.
    fn weights(&self, y: &[f64]) -> Vec<f64> {
        let d = self.dim() as i32;
        let h = self.bandwidth;
        let norm = 1.0 / (self.samples.len() as f64 * h * TAU.powf(d as f64 / 2.0));
        self.samples
            .points()
            .iter()
            .map(|p| {
                let r2: f64 = p.iter().zip(y).map(|(a, b)| ((b - a) / h).powi(2)).sum();
                norm * (-0.5 * r2).exp()
            })
            .collect()
    }

    pub fn evaluate(&self, y: &[f64]) -> Result<f64> {
        self.check(y)?;
        Ok(pairwise_sum(&self.weights(y)))
    }

    /// `∇f(y) = Σᵢ wᵢ (yᵢ - y) / h²`.
    pub fn gradient(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check(y)?;
        let w = self.weights(y);
        let h2 = self.bandwidth * self.bandwidth;
        Ok((0..self.dim())
            .map(|k| {
                let terms: Vec<f64> =
                    self.samples.points().iter().zip(&w).map(|(p, wi)| wi * (p[k] - y[k]) / h2).collect();
                pairwise_sum(&terms)
            })
            .collect())
    }

    /// Evaluates at many points in parallel; the result does not depend on
    /// the thread count.
    pub fn evaluate_many(&self, ys: &[Vec<f64>]) -> Result<Vec<f64>> {
        crate::parallel::install(|| ys.par_iter().map(|y| self.evaluate(y)).collect())
    }
}

pub fn kde_evaluate(d: &DensityEstimate, y: &[f64]) -> Result<f64> {
    d.evaluate(y)
}

pub fn kde_gradient(d: &DensityEstimate, y: &[f64]) -> Result<Vec<f64>> {
    d.gradient(y)
}

/// Recursive halving sum, fixed by the input order alone.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[derive(Clone, Debug)]
pub struct DensityMaximum {
    pub coefficients: Vec<f64>,
    /// Localized image of every domain vertex.
    pub image: Vec<Vec<f64>>,
    pub value: f64,
    pub initial_value: f64,
}

/// `Σ_σ f(ψ(g(σ)))` over domain vertices, with `phi` giving codomain vertex
/// coordinates.
#[derive(Clone, Debug)]
pub struct DensityObjective {
    embedding: VertexEmbedding,
    density: DensityEstimate,
}

impl DensityObjective {
    pub fn new(p: &MapParameterization<f64>, density: DensityEstimate, phi: &[Vec<f64>]) -> Result<Self> {
        let embedding = VertexEmbedding::new(p, phi)?;
        if embedding.width() != density.dim() {
            return invalid(format!(
                "codomain coordinates have dimension {}, samples have {}",
                embedding.width(),
                density.dim()
            ));
        }
        Ok(DensityObjective { embedding, density })
    }

    pub fn dim(&self) -> usize {
        self.embedding.dim()
    }

    pub fn image(&self, c: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.embedding.check(c)?;
        Ok(self.embedding.positions(c))
    }

    pub fn value_and_gradient(&self, c: &[f64]) -> Result<(f64, Vec<f64>)> {
        let pos = self.image(c)?;
        let mut values = Vec::with_capacity(pos.len());
        let mut dpos = Vec::with_capacity(pos.len());
        for y in &pos {
            values.push(self.density.evaluate(y)?);
            dpos.push(self.density.gradient(y)?);
        }
        Ok((pairwise_sum(&values), self.embedding.pull_back(&dpos)))
    }

    pub fn value(&self, c: &[f64]) -> Result<f64> {
        let pos = self.image(c)?;
        let values = pos.iter().map(|y| self.density.evaluate(y)).collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum(&values))
    }
}

/// Gradient ascent on the density objective from `start` (zero when absent)
/// with seeded restarts. Never returns a value below the start's.
pub fn maximize_density(
    p: &MapParameterization<f64>,
    density: &DensityEstimate,
    phi: &[Vec<f64>],
    start: Option<&[f64]>,
    opts: &DescentOptions,
    seed: u64,
) -> Result<DensityMaximum> {
    let obj = DensityObjective::new(p, density.clone(), phi)?;
    let zero = vec![0.0; obj.dim()];
    let start = start.unwrap_or(&zero);
    obj.embedding.check(start)?;
    if obj.dim() == 0 {
        let value = obj.value(start)?;
        return Ok(DensityMaximum { coefficients: Vec::new(), image: obj.image(start)?, value, initial_value: value });
    }
    let f = |c: &[f64]| {
        let (v, g) = obj.value_and_gradient(c)?;
        Ok((-v, g.into_iter().map(|x| -x).collect()))
    };
    let run = descend_with_restarts(&f, start, opts, seed)?;
    Ok(DensityMaximum {
        image: obj.image(&run.coefficients)?,
        coefficients: run.coefficients,
        value: -run.value,
        initial_value: -run.initial_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(points: Vec<Vec<f64>>) -> PointCloud {
        PointCloud::new(points).unwrap()
    }

    #[test]
    fn single_sample_peak() {
        let d = DensityEstimate::new(cloud(vec![vec![0.0]]), 1.0).unwrap();
        assert!((d.evaluate(&[0.0]).unwrap() - 1.0 / TAU.sqrt()).abs() < 1e-15);
        assert!(DensityEstimate::new(cloud(vec![vec![0.0]]), 0.0).is_err());
        assert!(DensityEstimate::new(cloud(vec![vec![0.0]]), -1.0).is_err());
        assert!(d.evaluate(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn symmetric_midpoint_is_critical() {
        let d = DensityEstimate::new(cloud(vec![vec![-1.0, 2.0], vec![1.0, 2.0]]), 0.7).unwrap();
        let g = d.gradient(&[0.0, 2.0]).unwrap();
        assert!(g.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn gradient_matches_differences() {
        let d = DensityEstimate::new(cloud(vec![vec![0.0, 0.3], vec![1.0, -0.2], vec![0.4, 0.9]]), 0.6).unwrap();
        let y = [0.2, 0.1];
        let g = d.gradient(&y).unwrap();
        for k in 0..2 {
            let h = 1e-6;
            let mut a = y;
            let mut b = y;
            a[k] += h;
            b[k] -= h;
            let fd = (d.evaluate(&a).unwrap() - d.evaluate(&b).unwrap()) / (2.0 * h);
            assert!((fd - g[k]).abs() <= 1e-6 * fd.abs().max(1e-3));
        }
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let v: Vec<f64> = (0..100).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 4950.0);
    }
}
