//! Alexander-Whitney simpliciality loss and its local minimization.

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::algebra::{Field, Matrix, SparseVector};
use crate::complexes::{Simplex, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::homcomplex::{ChainMapMatrix, MapParameterization};

/// `Δ(σ) = Σ_i σ|[0..i] ⊗ σ|[i..n]` as (front, back) pairs.
pub fn aw_diagonal(sigma: &Simplex) -> Vec<(Simplex, Simplex)> {
    (0..=sigma.dim()).map(|i| (sigma.front(i), sigma.back(i))).collect()
}

/// `(F ⊗ F) v` computed as `vec(F V Fᵀ)`, where `V` is `v` reshaped
/// column-major into an `I x I` matrix. The result is column-major `J x J`.
pub fn kron_apply<F: Field>(f: &Matrix<F>, v: &[F]) -> Result<Vec<F>> {
    let (j, i) = (f.rows(), f.cols());
    if v.len() != i * i {
        return invalid(format!("vector of length {} for a {j}x{i} factor; expected {}", v.len(), i * i));
    }
    // F V, one column at a time
    let mut fv: Vec<SparseVector<F>> = Vec::with_capacity(i);
    for c in 0..i {
        let col = SparseVector::from_dense(&v[c * i..(c + 1) * i]);
        fv.push(f.mul_vec(&col)?);
    }
    // (F V) Fᵀ: column b is Σ_c F[b, c] (F V)[:, c]
    let ft = f.transpose();
    let mut out = vec![F::zero(); j * j];
    for b in 0..j {
        let mut acc = SparseVector::zero(j);
        for (c, a) in ft.column(b).iter() {
            acc = acc.axpy(a, &fv[c]);
        }
        for (r, a) in acc.iter() {
            out[b * j + r] = a.clone();
        }
    }
    Ok(out)
}

/// Diagonal of every simplex as global (front, back) index pairs.
fn diagonals(k: &SimplicialComplex) -> Vec<Vec<(usize, usize)>> {
    k.simplices()
        .iter()
        .map(|s| {
            aw_diagonal(s)
                .into_iter()
                .map(|(a, b)| (k.index_of(&a).expect("face"), k.index_of(&b).expect("face")))
                .collect()
        })
        .collect()
}

/// `Σ_σ ‖G V_σ Gᵀ - Σ_j G[j, σ] W_j‖²_F` and optionally its gradient in `G`.
/// `g` is `J x I`; `vx` lists the domain diagonals, `wy` the codomain ones.
fn loss_and_gradient(
    g: &Array2<f64>,
    vx: &[Vec<(usize, usize)>],
    wy: &[Vec<(usize, usize)>],
    want_gradient: bool,
) -> (f64, Option<Array2<f64>>) {
    let (jn, _) = g.dim();
    let mut loss = 0.0;
    let mut grad = want_gradient.then(|| Array2::<f64>::zeros(g.dim()));
    let mut r = Array2::<f64>::zeros((jn, jn));
    for (sigma, pairs) in vx.iter().enumerate() {
        r.fill(0.0);
        for &(f, b) in pairs {
            let (gf, gb) = (g.column(f), g.column(b));
            for (a, &x) in gf.iter().enumerate() {
                if x != 0.0 {
                    r.row_mut(a).scaled_add(x, &gb);
                }
            }
        }
        for (j, w) in wy.iter().enumerate() {
            let c = g[[j, sigma]];
            if c != 0.0 {
                for &(f, b) in w {
                    r[[f, b]] -= c;
                }
            }
        }
        loss += r.iter().map(|x| x * x).sum::<f64>();
        if let Some(grad) = grad.as_mut() {
            for &(f, b) in pairs {
                let rgb: Array1<f64> = r.dot(&g.column(b));
                let rtgf: Array1<f64> = r.t().dot(&g.column(f));
                grad.column_mut(f).scaled_add(2.0, &rgb);
                grad.column_mut(b).scaled_add(2.0, &rtgf);
            }
            for (j, w) in wy.iter().enumerate() {
                let s: f64 = w.iter().map(|&(f, b)| r[[f, b]]).sum();
                grad[[j, sigma]] -= 2.0 * s;
            }
        }
    }
    (loss, grad)
}

fn dense(g: &ChainMapMatrix<f64>) -> Array2<f64> {
    let m = g.matrix();
    let mut a = Array2::zeros((m.rows(), m.cols()));
    for (r, c, v) in m.triplets() {
        a[[r, c]] = *v;
    }
    a
}

/// AW loss of `g` alone.
pub fn aw_loss(g: &ChainMapMatrix<f64>) -> f64 {
    loss_and_gradient(&dense(g), &diagonals(g.domain()), &diagonals(g.codomain()), false).0
}

/// `L_AW(g) + L_AW(g*)`, the adjoint taken with the complexes swapped.
pub fn aw_total_loss(g: &ChainMapMatrix<f64>) -> f64 {
    aw_loss(g) + aw_loss(&g.adjoint())
}

/// The total AW loss as a function of the independent homotopy coefficients.
pub struct AwObjective {
    base: Array2<f64>,
    /// Each direction as `(row, col, value)` entries of its matrix.
    directions: Vec<Vec<(usize, usize, f64)>>,
    vx: Vec<Vec<(usize, usize)>>,
    wy: Vec<Vec<(usize, usize)>>,
    template: ChainMapMatrix<f64>,
}

impl AwObjective {
    pub fn new(p: &MapParameterization<f64>) -> Self {
        let template = p.to_map(&p.base_vector());
        let directions = p
            .reduced_homotopies()
            .iter()
            .map(|h| {
                h.iter()
                    .map(|(e, &v)| {
                        let (s, t) = p.index().pair(e);
                        (t, s, v)
                    })
                    .collect()
            })
            .collect();
        AwObjective {
            base: dense(&template),
            directions,
            vx: diagonals(p.domain()),
            wy: diagonals(p.codomain()),
            template,
        }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    fn matrix(&self, c: &[f64]) -> Array2<f64> {
        let mut g = self.base.clone();
        for (d, &a) in self.directions.iter().zip(c) {
            for &(r, s, v) in d {
                g[[r, s]] += a * v;
            }
        }
        g
    }

    pub fn map(&self, c: &[f64]) -> ChainMapMatrix<f64> {
        let g = self.matrix(c);
        let triplets = g.indexed_iter().filter(|(_, v)| **v != 0.0).map(|((r, s), v)| (r, s, *v));
        let m = Matrix::from_triplets(g.nrows(), g.ncols(), triplets).expect("in range");
        ChainMapMatrix::new(m, self.template.domain().clone(), self.template.codomain().clone())
            .expect("degree-0 entries")
    }

    fn check(&self, c: &[f64]) -> Result<()> {
        if c.len() != self.dim() {
            return invalid(format!("{} coefficients for {} directions", c.len(), self.dim()));
        }
        Ok(())
    }

    pub fn loss(&self, c: &[f64]) -> Result<f64> {
        self.check(c)?;
        let g = self.matrix(c);
        let gt = g.t().to_owned();
        Ok(loss_and_gradient(&g, &self.vx, &self.wy, false).0 + loss_and_gradient(&gt, &self.wy, &self.vx, false).0)
    }

    pub fn loss_and_gradient(&self, c: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check(c)?;
        let g = self.matrix(c);
        let gt = g.t().to_owned();
        let (l1, d1) = loss_and_gradient(&g, &self.vx, &self.wy, true);
        let (l2, d2) = loss_and_gradient(&gt, &self.wy, &self.vx, true);
        let total = d1.expect("requested") + d2.expect("requested").t();
        let grad = self
            .directions
            .iter()
            .map(|d| d.iter().map(|&(r, s, v)| total[[r, s]] * v).sum())
            .collect();
        Ok((l1 + l2, grad))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentOptions {
    pub max_iterations: usize,
    /// Stop once the gradient norm falls below this.
    pub gradient_tolerance: f64,
    /// Standard deviation of the perturbation for restarts after the first.
    pub restart_scale: f64,
    pub restarts: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { max_iterations: 2000, gradient_tolerance: 1e-10, restart_scale: 0.5, restarts: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct DescentResult {
    pub coefficients: Vec<f64>,
    pub value: f64,
    pub initial_value: f64,
    /// Objective after each accepted step of the winning run.
    pub trace: Vec<f64>,
    /// Run that produced the result; 0 is the unperturbed start.
    pub run: usize,
}

/// Gradient descent with Armijo backtracking on a smooth objective.
pub fn gradient_descent(
    f: &dyn Fn(&[f64]) -> Result<(f64, Vec<f64>)>,
    start: &[f64],
    opts: &DescentOptions,
) -> Result<(Vec<f64>, f64, Vec<f64>)> {
    let mut x = start.to_vec();
    let (mut fx, mut gx) = f(&x)?;
    let finite = |v: f64, it: usize, x: &[f64]| -> Result<()> {
        if v.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite { iteration: it, detail: format!("objective {v} at {x:?}") })
        }
    };
    finite(fx, 0, &x)?;
    let mut trace = vec![fx];
    let mut step = 1.0;
    for it in 1..=opts.max_iterations {
        let gnorm2: f64 = gx.iter().map(|g| g * g).sum();
        if gnorm2.sqrt() < opts.gradient_tolerance {
            break;
        }
        let mut accepted = false;
        while step > 1e-20 {
            let trial: Vec<f64> = x.iter().zip(&gx).map(|(a, g)| a - step * g).collect();
            let (ft, gt) = f(&trial)?;
            finite(ft, it, &trial)?;
            if ft <= fx - 1e-4 * step * gnorm2 {
                x = trial;
                fx = ft;
                gx = gt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        trace.push(fx);
        step *= 2.0;
    }
    Ok((x, fx, trace))
}

/// Runs [`gradient_descent`] from `start` and from `opts.restarts` seeded
/// perturbations of it, keeping the lowest value (earliest run on ties).
pub fn descend_with_restarts(
    f: &dyn Fn(&[f64]) -> Result<(f64, Vec<f64>)>,
    start: &[f64],
    opts: &DescentOptions,
    seed: u64,
) -> Result<DescentResult> {
    let initial_value = f(start)?.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, opts.restart_scale.max(f64::MIN_POSITIVE)).expect("valid");
    let mut best: Option<DescentResult> = None;
    for run in 0..=opts.restarts {
        let x0: Vec<f64> =
            if run == 0 { start.to_vec() } else { start.iter().map(|a| a + noise.sample(&mut rng)).collect() };
        let (x, v, trace) = gradient_descent(f, &x0, opts)?;
        if best.as_ref().is_none_or(|b| v < b.value) {
            best = Some(DescentResult { coefficients: x, value: v, initial_value, trace, run });
        }
    }
    Ok(best.expect("at least one run"))
}

/// Locally minimizes `L_AW(g) + L_AW(g*)` over the independent homotopy
/// coefficients, starting from `start` (zero when absent).
pub fn minimize_aw(
    p: &MapParameterization<f64>,
    start: Option<&[f64]>,
    opts: &DescentOptions,
    seed: u64,
) -> Result<(DescentResult, ChainMapMatrix<f64>)> {
    let obj = AwObjective::new(p);
    let zero = vec![0.0; obj.dim()];
    let start = start.unwrap_or(&zero);
    if start.len() != obj.dim() {
        return invalid(format!("start has {} coefficients, expected {}", start.len(), obj.dim()));
    }
    let f = |c: &[f64]| obj.loss_and_gradient(c);
    let result = descend_with_restarts(&f, start, opts, seed)?;
    let map = obj.map(&result.coefficients);
    Ok((result, map))
}

/// Rounds every entry to the nearest integer (threshold 0.5).
pub fn round_map(g: &ChainMapMatrix<f64>) -> ChainMapMatrix<f64> {
    let m = g.matrix();
    let triplets = m.triplets().map(|(r, c, v)| (r, c, v.round()));
    let rounded = Matrix::from_triplets(m.rows(), m.cols(), triplets).expect("same shape");
    ChainMapMatrix::new(rounded, g.domain().clone(), g.codomain().clone()).expect("same support")
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Rational;
    use crate::complexes::{model_complex, ModelComplex};
    use crate::homcomplex::chain_map_generators;

    #[test]
    fn diagonal_examples() {
        let show = |s: &Simplex| -> Vec<(String, String)> {
            aw_diagonal(s).iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
        };
        assert_eq!(show(&Simplex::vertex(0)), vec![("[0]".into(), "[0]".into())]);
        let e = Simplex::new(vec![0, 1]).unwrap();
        assert_eq!(show(&e), vec![("[0]".into(), "[0,1]".into()), ("[0,1]".into(), "[1]".into())]);
        let t = Simplex::new(vec![0, 1, 2]).unwrap();
        assert_eq!(show(&t).last().unwrap(), &("[0,1,2]".to_string(), "[2]".to_string()));
    }

    #[test]
    fn kron_small_cases() {
        let id = Matrix::<Rational>::identity(3);
        let v: Vec<Rational> = (0..9).map(Rational::from_i64).collect();
        assert_eq!(kron_apply(&id, &v).unwrap(), v);
        let a = Matrix::from_dense(&[vec![Rational::from_i64(3)]]).unwrap();
        assert_eq!(kron_apply(&a, &[Rational::from_i64(2)]).unwrap(), vec![Rational::from_i64(18)]);
        assert!(kron_apply(&id, &v[..4]).is_err());
    }

    #[test]
    fn identity_has_zero_loss() {
        let k = Arc::new(model_complex(ModelComplex::Octahedron).unwrap());
        assert_eq!(aw_total_loss(&ChainMapMatrix::identity(k)), 0.0);
    }

    #[test]
    fn averaging_map_is_penalized() {
        let t = Arc::new(model_complex(ModelComplex::Triangle).unwrap());
        let third = 1.0 / 3.0;
        let m = Matrix::from_triplets(6, 6, (0..3).flat_map(|s| (0..3).map(move |r| (r, s, third)))).unwrap();
        let g = ChainMapMatrix::new(m, t.clone(), t).unwrap();
        assert!(aw_loss(&g) > 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let t = model_complex(ModelComplex::Triangle).unwrap();
        let p = chain_map_generators::<Rational>(&t, &t).unwrap().map_field::<f64>();
        let obj = AwObjective::new(&p);
        let c: Vec<f64> = (0..obj.dim()).map(|i| 0.3 * (i as f64) - 0.4).collect();
        let (_, grad) = obj.loss_and_gradient(&c).unwrap();
        let h = 1e-5;
        for i in 0..obj.dim() {
            let mut up = c.clone();
            up[i] += h;
            let mut dn = c.clone();
            dn[i] -= h;
            let fd = (obj.loss(&up).unwrap() - obj.loss(&dn).unwrap()) / (2.0 * h);
            assert!((fd - grad[i]).abs() <= 1e-5 * (1.0 + grad[i].abs()), "{i}: {fd} vs {}", grad[i]);
        }
    }

    #[test]
    fn descent_does_not_increase() {
        let t = model_complex(ModelComplex::Triangle).unwrap();
        let p = chain_map_generators::<Rational>(&t, &t).unwrap().map_field::<f64>();
        let (r, g) = minimize_aw(&p, None, &DescentOptions { restarts: 2, ..Default::default() }, 4).unwrap();
        assert!(r.value <= r.initial_value);
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(g.is_chain_map());
    }
}
