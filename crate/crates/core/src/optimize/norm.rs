//! The `‖G‖₁ + ‖Gᵀ‖₁` program over the affine space of maps, and random
//! vertices of its optimal face.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Field, Rational};
use crate::error::{invalid, Error, Result};
use crate::homcomplex::{ChainMapMatrix, MapParameterization};
use crate::optimize::lp::{solve_lp, Bound, LinearProgram, LpBackend, LpStatus, Sense};
use crate::optimize::norm_objective;

/// The norm program in terms of the independent homotopy coefficients.
///
/// Variables are `c` (free), then a positive and a negative part for every
/// hom-basis entry that can be nonzero, then `t1` and `t2`. Each entry
/// satisfies `pos - neg - Σ_n H_n[e] c_n = F[e]`; every domain column sum of
/// `pos + neg` is at most `t1` and every codomain row sum at most `t2`. The
/// objective is `t1 + t2`.
#[derive(Clone, Debug)]
pub struct NormLp {
    pub lp: LinearProgram,
    pub num_coefficients: usize,
    /// Hom-basis positions with an absolute-value pair.
    pub support: Vec<usize>,
    pub t1: usize,
    pub t2: usize,
}

pub fn build_norm_lp<F: Field>(p: &MapParameterization<F>) -> NormLp {
    let base = p.base_vector();
    let hs = p.reduced_homotopies();
    let support: Vec<usize> = base
        .iter()
        .map(|(i, _)| i)
        .chain(hs.iter().flat_map(|h| h.iter().map(|(i, _)| i)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut lp = LinearProgram::new();
    let r = hs.len();
    for _ in 0..r {
        lp.add_variable(0.0, Bound::FREE);
    }
    let mut rows_of_entry: Vec<Vec<(usize, f64)>> = vec![Vec::new(); support.len()];
    let position = |i: usize| support.binary_search(&i).expect("in support");
    for (n, h) in hs.iter().enumerate() {
        for (i, a) in h.iter() {
            rows_of_entry[position(i)].push((n, -a.to_f64()));
        }
    }
    let mut abs_parts = Vec::with_capacity(support.len());
    for (k, &e) in support.iter().enumerate() {
        let pos = lp.add_variable(0.0, Bound::NON_NEGATIVE);
        let neg = lp.add_variable(0.0, Bound::NON_NEGATIVE);
        let mut coeffs = vec![(pos, 1.0), (neg, -1.0)];
        coeffs.extend(rows_of_entry[k].iter().copied());
        lp.add_constraint(coeffs, Sense::Eq, base.get(e).to_f64());
        abs_parts.push((pos, neg));
    }
    let t1 = lp.add_variable(1.0, Bound::NON_NEGATIVE);
    let t2 = lp.add_variable(1.0, Bound::NON_NEGATIVE);
    let idx = p.index();
    let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); p.domain().len()];
    let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); p.codomain().len()];
    for (k, &e) in support.iter().enumerate() {
        let (s, t) = idx.pair(e);
        by_col[s].push(k);
        by_row[t].push(k);
    }
    for (group, bound) in [(by_col, t1), (by_row, t2)] {
        for ks in group.into_iter().filter(|ks| !ks.is_empty()) {
            let mut coeffs: Vec<(usize, f64)> =
                ks.iter().flat_map(|&k| [(abs_parts[k].0, 1.0), (abs_parts[k].1, 1.0)]).collect();
            coeffs.push((bound, -1.0));
            lp.add_constraint(coeffs, Sense::Le, 0.0);
        }
    }
    NormLp { lp, num_coefficients: r, support, t1, t2 }
}

/// Result of one norm-program solve.
#[derive(Clone, Debug)]
pub struct NormSolution {
    /// Optimum of the norm program.
    pub optimum: f64,
    /// Independent homotopy coefficients of the returned map.
    pub coefficients: Vec<f64>,
    pub exact_coefficients: Option<Vec<Rational>>,
    pub map: ChainMapMatrix<f64>,
    /// `‖G‖₁ + ‖Gᵀ‖₁` of the returned map.
    pub value: f64,
    pub vertex: bool,
}

fn status_error(status: LpStatus) -> Error {
    Error::Consistency(format!("norm program reported {status:?}; it is always feasible and bounded below"))
}

/// Solves the norm program once.
pub fn solve_norm_lp<F: Field>(p: &MapParameterization<F>, backend: LpBackend) -> Result<NormSolution> {
    let nlp = build_norm_lp(p);
    let sol = solve_lp(&nlp.lp, backend)?;
    if !sol.is_optimal() {
        return Err(status_error(sol.status));
    }
    finish(p, &nlp, sol.value, &sol.x, sol.exact.map(|(_, x)| x), sol.vertex)
}

/// Largest denominator tried when snapping floating LP coefficients.
const SNAP_DENOMINATOR: i128 = 10_000;
const SNAP_TOL: f64 = 1e-7;

/// Nearest fraction with denominator at most [`SNAP_DENOMINATOR`] when it
/// lies within [`SNAP_TOL`] of `x`, from the continued-fraction convergents.
fn snap(x: f64) -> Option<Rational> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..40 {
        let a = rest.floor();
        let (h, k) = (a as i128 * h1 + h0, a as i128 * k1 + k0);
        if k > SNAP_DENOMINATOR {
            return None;
        }
        if (x - h as f64 / k as f64).abs() <= SNAP_TOL {
            return Some(Rational::new(h.into(), k.into()));
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = rest - a;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

fn finish<F: Field>(
    p: &MapParameterization<F>,
    nlp: &NormLp,
    optimum: f64,
    x: &[f64],
    exact: Option<Vec<Rational>>,
    vertex: bool,
) -> Result<NormSolution> {
    let r = nlp.num_coefficients;
    let exact_coefficients = exact.map(|x| x[..r].to_vec());
    // floating vertices are rational; recover them so the map is exact
    let rational = exact_coefficients.clone().or_else(|| x[..r].iter().map(|&v| snap(v)).collect());
    if let Some(c) = rational {
        let pq = p.map_field::<Rational>();
        let map = pq.to_map(&pq.evaluate_reduced_vector(&c)?).map_field::<f64>();
        let value = norm_objective(&map);
        if value <= optimum + SNAP_TOL * (1.0 + optimum.abs()) {
            let coefficients = c.iter().map(Field::to_f64).collect();
            return Ok(NormSolution { optimum, coefficients, exact_coefficients, map, value, vertex });
        }
    }
    let coefficients = x[..r].to_vec();
    let pf = p.map_field::<f64>();
    let map = pf.to_map(&pf.evaluate_reduced_vector(&coefficients)?);
    let value = norm_objective(&map);
    Ok(NormSolution { optimum, coefficients, exact_coefficients, map, value, vertex })
}

/// Solves the norm program once and then draws vertices of its optimal face
/// along seeded random directions.
#[derive(Clone, Debug)]
pub struct VertexSampler<'a, F> {
    p: &'a MapParameterization<F>,
    nlp: NormLp,
    optimum: f64,
    backend: LpBackend,
}

impl<'a, F: Field> VertexSampler<'a, F> {
    pub fn new(p: &'a MapParameterization<F>, backend: LpBackend) -> Result<Self> {
        let nlp = build_norm_lp(p);
        let sol = solve_lp(&nlp.lp, backend)?;
        if !sol.is_optimal() {
            return Err(status_error(sol.status));
        }
        Ok(VertexSampler { p, nlp, optimum: sol.value, backend })
    }

    pub fn optimum(&self) -> f64 {
        self.optimum
    }

    /// Minimizes `v · c` over the optimal face for a standard normal `v`
    /// drawn from `seed`.
    pub fn vertex(&self, seed: u64) -> Result<NormSolution> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lp = self.nlp.lp.clone();
        let slack = 1e-9 * (1.0 + self.optimum.abs());
        lp.add_constraint(vec![(self.nlp.t1, 1.0), (self.nlp.t2, 1.0)], Sense::Le, self.optimum + slack);
        for v in lp.objective.iter_mut() {
            *v = 0.0;
        }
        for j in 0..self.nlp.num_coefficients {
            lp.objective[j] = rng.sample(StandardNormal);
        }
        let sol = solve_lp(&lp, self.backend)?;
        if !sol.is_optimal() {
            return Err(status_error(sol.status));
        }
        finish(self.p, &self.nlp, self.optimum, &sol.x, sol.exact.map(|(_, x)| x), sol.vertex)
    }
}

/// One random vertex of the optimal face.
pub fn random_vertex<F: Field>(p: &MapParameterization<F>, seed: u64, backend: LpBackend) -> Result<NormSolution> {
    VertexSampler::new(p, backend)?.vertex(seed)
}

/// Entrywise 2-norm over entrywise 1-norm; 1 for a single nonzero entry.
pub fn sparsity_score<F: Field>(g: &ChainMapMatrix<F>) -> Result<f64> {
    let (mut l1, mut l2) = (0.0, 0.0);
    for (_, _, a) in g.matrix().triplets() {
        let v = a.to_f64().abs();
        l1 += v;
        l2 += v * v;
    }
    if l1 == 0.0 {
        return invalid("sparsity score of the zero map");
    }
    Ok(l2.sqrt() / l1)
}

/// Best of several random vertices by sparsity score.
#[derive(Clone, Debug)]
pub struct SparsestVertex {
    pub solution: NormSolution,
    pub score: f64,
    /// Zero-based draw that produced the winner.
    pub draw: usize,
    pub draws: usize,
}

/// Draws up to `max_draws` vertices, stopping early once a score reaches
/// `target`. Ties keep the earliest draw.
pub fn sparsest_vertex<F: Field>(
    p: &MapParameterization<F>,
    max_draws: usize,
    target: Option<f64>,
    seed: u64,
    backend: LpBackend,
) -> Result<SparsestVertex> {
    if max_draws == 0 {
        return invalid("need at least one draw");
    }
    let sampler = VertexSampler::new(p, backend)?;
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<SparsestVertex> = None;
    for draw in 0..max_draws {
        let s = sampler.vertex(seeds.random())?;
        let score = sparsity_score(&s.map)?;
        if best.as_ref().is_none_or(|b| score > b.score) {
            best = Some(SparsestVertex { solution: s, score, draw, draws: 0 });
        }
        if target.is_some_and(|t| score >= t) {
            let mut b = best.expect("set above");
            b.draws = draw + 1;
            return Ok(b);
        }
    }
    let mut b = best.expect("at least one draw");
    b.draws = max_draws;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Matrix;
    use crate::complexes::{model_complex, ModelComplex};
    use crate::homcomplex::chain_map_generators;

    #[test]
    fn triangle_optimum_is_two() {
        let t = model_complex(ModelComplex::Triangle).unwrap();
        let p = chain_map_generators::<Rational>(&t, &t).unwrap();
        for backend in [LpBackend::Dense, LpBackend::Exact, LpBackend::Sparse] {
            let s = solve_norm_lp(&p, backend).unwrap();
            assert!((s.optimum - 2.0).abs() < 1e-9, "{backend:?}");
            assert!((s.value - 2.0).abs() < 1e-7);
            assert!(s.map.is_chain_map());
        }
    }

    #[test]
    fn no_homotopies_gives_constant() {
        let pt = model_complex(ModelComplex::Point).unwrap();
        let p = chain_map_generators::<Rational>(&pt, &pt).unwrap();
        let nlp = build_norm_lp(&p);
        assert_eq!(nlp.num_coefficients, 0);
        assert!((solve_norm_lp(&p, LpBackend::Dense).unwrap().optimum - 2.0).abs() < 1e-12);
    }

    #[test]
    fn score_examples() {
        let k = Arc::new(model_complex(ModelComplex::NGon(4)).unwrap());
        let one = Matrix::from_triplets(8, 8, [(0usize, 0usize, 1.0)]).unwrap();
        let g = ChainMapMatrix::new(one, k.clone(), k.clone()).unwrap();
        assert!((sparsity_score(&g).unwrap() - 1.0).abs() < 1e-15);
        let quarter = Matrix::from_triplets(8, 8, (0..4).map(|i| (i, 0usize, 0.25))).unwrap();
        let g = ChainMapMatrix::new(quarter, k.clone(), k.clone()).unwrap();
        assert!((sparsity_score(&g).unwrap() - 0.5).abs() < 1e-15);
        assert!(sparsity_score(&ChainMapMatrix::<f64>::zero(k.clone(), k)).is_err());
    }

    #[test]
    fn snapping() {
        assert_eq!(snap(0.333_333_333_4), Some(Rational::new(1.into(), 3.into())));
        assert_eq!(snap(-2.000_000_001), Some(Rational::from_integer((-2).into())));
        assert_eq!(snap(1e-10), Some(Rational::from_integer(0.into())));
        assert_eq!(snap(std::f64::consts::PI), None);
        assert_eq!(snap(f64::NAN), None);
    }

    #[test]
    fn float_vertices_are_exact_chain_maps() {
        let oct = model_complex(ModelComplex::NGon(8)).unwrap();
        let sq = model_complex(ModelComplex::Square).unwrap();
        let p = chain_map_generators::<Rational>(&oct, &sq).unwrap();
        for seed in 0..4 {
            let v = random_vertex(&p, seed, LpBackend::Dense).unwrap();
            assert!(v.map.chain_defect().triplets().all(|(_, _, a)| a.abs() < 1e-14));
            assert!((v.value - 3.0).abs() < 1e-9);
        }
    }
}
