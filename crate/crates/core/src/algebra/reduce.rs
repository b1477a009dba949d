use std::collections::BTreeMap;

use crate::algebra::field::Field;
use crate::algebra::sparse::{Matrix, SparseVector};
use crate::error::{invalid, Result};

/// Outcome of Gaussian elimination on a matrix.
#[derive(Clone, Debug)]
pub struct Reduction<F> {
    pub rank: usize,
    /// Pivot columns in increasing order.
    pub pivots: Vec<usize>,
    /// One vector per free column; `m * k = 0` for each.
    pub kernel_basis: Vec<SparseVector<F>>,
    /// The original columns at the pivot positions.
    pub image_basis: Vec<SparseVector<F>>,
}

/// Reduced row echelon form, rows stored sparsely.
struct Rref<F> {
    cols: usize,
    pivot_rows: Vec<SparseVector<F>>,
    pivot_cols: Vec<usize>,
}

impl<F: Field> Rref<F> {
    /// Pivots are taken in column order; within a column the first remaining
    /// row (original order) holding a nonzero entry is used.
    fn new(m: &Matrix<F>) -> Self {
        let cols = m.cols();
        let mut remaining: Vec<SparseVector<F>> =
            m.transpose().into_columns().into_iter().filter(|r| !r.is_zero()).collect();
        let mut pivot_rows: Vec<SparseVector<F>> = Vec::new();
        let mut pivot_cols = Vec::new();

        for c in 0..cols {
            // Every remaining row has its leading entry at or after `c`.
            let Some(pos) = remaining.iter().position(|r| r.leading().map(|(i, _)| i) == Some(c))
            else {
                continue;
            };
            let row = remaining.remove(pos);
            let lead = row.leading().map(|(_, v)| v.clone()).expect("nonzero row");
            let pivot = row.scale(&lead.inverse().expect("nonzero pivot"));

            for r in remaining.iter_mut() {
                if let Some((i, a)) = r.leading() {
                    if i == c {
                        let a = a.negated();
                        *r = r.axpy(&a, &pivot);
                    }
                }
            }
            remaining.retain(|r| !r.is_zero());
            for r in pivot_rows.iter_mut() {
                let a = r.get(c);
                if !a.is_zero() {
                    *r = r.axpy(&a.negated(), &pivot);
                }
            }
            pivot_rows.push(pivot);
            pivot_cols.push(c);
        }
        Rref { cols, pivot_rows, pivot_cols }
    }

    fn kernel_basis(&self) -> Vec<SparseVector<F>> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivot_cols {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut pairs = vec![(f, F::one())];
                for (row, &pc) in self.pivot_rows.iter().zip(&self.pivot_cols) {
                    let a = row.get(f);
                    if !a.is_zero() {
                        pairs.push((pc, a.negated()));
                    }
                }
                SparseVector::from_pairs(self.cols, pairs).expect("indices in range")
            })
            .collect()
    }
}

/// Gaussian elimination producing rank, pivots, a kernel basis and an image basis.
pub fn row_reduce<F: Field>(m: &Matrix<F>) -> Reduction<F> {
    let rref = Rref::new(m);
    let kernel_basis = rref.kernel_basis();
    let image_basis = rref.pivot_cols.iter().map(|&c| m.column(c).clone()).collect();
    Reduction {
        rank: rref.pivot_cols.len(),
        pivots: rref.pivot_cols.clone(),
        kernel_basis,
        image_basis,
    }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut basis = EchelonBasis::new(m.rows());
    m.columns().iter().filter(|c| basis.insert(c)).count()
}

/// Expresses `v` in terms of `basis`. Returns `None` when `v` is outside the
/// span. Free coefficients (for dependent bases) are set to zero.
pub fn solve_membership<F: Field>(
    basis: &[SparseVector<F>],
    v: &SparseVector<F>,
) -> Result<Option<Vec<F>>> {
    let dim = v.dim();
    if let Some(b) = basis.iter().find(|b| b.dim() != dim) {
        return invalid(format!("basis vector of dimension {} but target has dimension {dim}", b.dim()));
    }
    let mut columns: Vec<SparseVector<F>> = basis.to_vec();
    columns.push(v.clone());
    let augmented = Matrix::from_columns(dim, columns)?;
    let rref = Rref::new(&augmented);
    let last = basis.len();
    if rref.pivot_cols.contains(&last) {
        return Ok(None);
    }
    let mut coefficients = vec![F::zero(); basis.len()];
    for (row, &pc) in rref.pivot_rows.iter().zip(&rref.pivot_cols) {
        coefficients[pc] = row.get(last);
    }
    Ok(Some(coefficients))
}

/// Incrementally built basis in column echelon form. Each stored vector has a
/// distinct leading index and a leading coefficient of one.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    dim: usize,
    by_lead: BTreeMap<usize, SparseVector<F>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, by_lead: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.by_lead.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_lead.is_empty()
    }

    /// Eliminates leading entries until the lead is not a stored pivot. The
    /// result is zero exactly when `v` lies in the span.
    pub fn reduce(&self, v: &SparseVector<F>) -> SparseVector<F> {
        let mut v = v.clone();
        while let Some((lead, a)) = v.leading() {
            match self.by_lead.get(&lead) {
                Some(b) => {
                    let a = a.negated();
                    v = v.axpy(&a, b);
                }
                None => break,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVector<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current span.
    pub fn insert(&mut self, v: &SparseVector<F>) -> bool {
        debug_assert_eq!(v.dim(), self.dim);
        let r = self.reduce(v);
        match r.leading() {
            None => false,
            Some((lead, _)) => {
                self.by_lead.insert(lead, r.normalized());
                true
            }
        }
    }
}

/// Indices of `candidates` that are independent modulo `subspace` and the
/// candidates accepted before them.
pub fn independent_modulo<F: Field>(
    dim: usize,
    subspace: &[SparseVector<F>],
    candidates: &[SparseVector<F>],
) -> Vec<usize> {
    let mut basis = EchelonBasis::new(dim);
    for s in subspace {
        basis.insert(s);
    }
    candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| basis.insert(c))
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Rational, Z2};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_dense(&rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let r = row_reduce(&Matrix::<Rational>::zeros(3, 3));
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel_basis.len(), 3);
        for (i, k) in r.kernel_basis.iter().enumerate() {
            assert_eq!(k, &SparseVector::unit(3, i));
        }
    }

    #[test]
    fn triangle_boundary_kernel() {
        // columns [0,1], [0,2], [1,2]; rows [0], [1], [2]
        let d1 = qm(&[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]]);
        let r = row_reduce(&d1);
        assert_eq!(r.rank, 2);
        assert_eq!(r.kernel_basis.len(), 1);
        assert_eq!(r.kernel_basis[0].to_dense(), vec![q(1), q(-1), q(1)]);
    }

    #[test]
    fn membership_examples() {
        let e0 = SparseVector::unit(2, 0);
        let e1 = SparseVector::<Rational>::unit(2, 1);
        assert_eq!(solve_membership(&[e0.clone()], &e0).unwrap(), Some(vec![q(1)]));
        let b = vec![e0.add(&e1), e1.clone()];
        assert_eq!(solve_membership(&b, &e0).unwrap(), Some(vec![q(1), q(-1)]));
        assert_eq!(solve_membership(&[e0.clone()], &e1).unwrap(), None);
        assert!(solve_membership(&[SparseVector::unit(3, 0)], &e0).is_err());
    }

    #[test]
    fn echelon_basis_over_z2() {
        let v = |bits: &[i64]| SparseVector::from_dense(&bits.iter().map(|&b| Z2::from_i64(b)).collect::<Vec<_>>());
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(&v(&[1, 1, 0])));
        assert!(b.insert(&v(&[0, 1, 1])));
        assert!(!b.insert(&v(&[1, 0, 1])));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn float_kernel_threshold() {
        let m = Matrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 4.0 + 1e-12]]).unwrap();
        let r = row_reduce(&m);
        assert_eq!(r.rank, 1);
        let k = &r.kernel_basis[0];
        let mk = m.mul_vec(k).unwrap();
        assert!(mk.is_zero());
    }
}
