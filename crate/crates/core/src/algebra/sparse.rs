use std::cmp::Ordering;

use crate::algebra::field::Field;
use crate::error::{invalid, Result};

/// A vector stored as strictly increasing `(index, coefficient)` pairs with no
/// stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVector<F> {
    dim: usize,
    entries: Vec<(usize, F)>,
}

impl<F: Field> SparseVector<F> {
    pub fn zero(dim: usize) -> Self {
        SparseVector { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim, "unit index {index} out of range {dim}");
        SparseVector { dim, entries: vec![(index, F::one())] }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs; repeated indices
    /// are summed and zeros dropped.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, F)>) -> Result<Self> {
        let mut pairs: Vec<(usize, F)> = pairs.into_iter().collect();
        if let Some(&(i, _)) = pairs.iter().find(|(i, _)| *i >= dim) {
            return invalid(format!("index {i} out of range for dimension {dim}"));
        }
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, F)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.plus(&v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        Ok(SparseVector { dim, entries })
    }

    pub fn from_dense(values: &[F]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        SparseVector { dim: values.len(), entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn get(&self, index: usize) -> F {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zero(self.dim);
        }
        let entries = self
            .entries
            .iter()
            .map(|(i, v)| (*i, v.times(a)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SparseVector { dim: self.dim, entries }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: &F, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        if a.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() || q < other.entries.len() {
            let ord = match (self.entries.get(p), other.entries.get(q)) {
                (Some((i, _)), Some((j, _))) => i.cmp(j),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.entries[p].clone());
                    p += 1;
                }
                Ordering::Greater => {
                    let (j, v) = &other.entries[q];
                    let w = v.times(a);
                    if !w.is_zero() {
                        out.push((*j, w));
                    }
                    q += 1;
                }
                Ordering::Equal => {
                    let (i, u) = &self.entries[p];
                    let w = u.plus(&other.entries[q].1.times(a));
                    if !w.is_zero() {
                        out.push((*i, w));
                    }
                    p += 1;
                    q += 1;
                }
            }
        }
        SparseVector { dim: self.dim, entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&F::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&F::one().negated(), other)
    }

    pub fn dot(&self, other: &Self) -> F {
        let mut acc = F::zero();
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() && q < other.entries.len() {
            match self.entries[p].0.cmp(&other.entries[q].0) {
                Ordering::Less => p += 1,
                Ordering::Greater => q += 1,
                Ordering::Equal => {
                    acc = acc.plus(&self.entries[p].1.times(&other.entries[q].1));
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }

    /// Scales so that the first stored coefficient is one.
    pub fn normalized(&self) -> Self {
        match self.entries.first() {
            None => self.clone(),
            Some((_, lead)) => self.scale(&lead.inverse().expect("nonzero lead")),
        }
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> SparseVector<G> {
        let entries = self
            .entries
            .iter()
            .map(|(i, v)| (*i, f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SparseVector { dim: self.dim, entries }
    }
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    columns: Vec<SparseVector<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, columns: vec![SparseVector::zero(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, columns: (0..n).map(|i| SparseVector::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVector<F>>) -> Result<Self> {
        if let Some(c) = columns.iter().find(|c| c.dim() != rows) {
            return invalid(format!("column of dimension {} in a matrix with {rows} rows", c.dim()));
        }
        Ok(Matrix { rows, columns })
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F)>,
    ) -> Result<Self> {
        let mut per_col: Vec<Vec<(usize, F)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if c >= cols {
                return invalid(format!("column {c} out of range {cols}"));
            }
            per_col[c].push((r, v));
        }
        let columns = per_col
            .into_iter()
            .map(|pairs| SparseVector::from_pairs(rows, pairs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows, columns })
    }

    pub fn from_dense(rows: &[Vec<F>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return invalid("ragged dense matrix");
        }
        let triplets = rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))
        });
        Self::from_triplets(n_rows, n_cols, triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &SparseVector<F> {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVector<F>] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVector<F>> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.columns[c].get(r)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVector::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVector::is_zero)
    }

    /// Iterates stored entries in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut per_row: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col.iter() {
                per_row[r].push((c, v.clone()));
            }
        }
        let cols = self.cols();
        let columns = per_row
            .into_iter()
            .map(|entries| SparseVector { dim: cols, entries })
            .collect();
        Matrix { rows: cols, columns }
    }

    pub fn mul_vec(&self, v: &SparseVector<F>) -> Result<SparseVector<F>> {
        if v.dim() != self.cols() {
            return invalid(format!("vector of dimension {} times {}x{} matrix", v.dim(), self.rows, self.cols()));
        }
        let mut acc = SparseVector::zero(self.rows);
        for (c, a) in v.iter() {
            acc = acc.axpy(a, &self.columns[c]);
        }
        Ok(acc)
    }

    pub fn matmul(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if other.rows != self.cols() {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            ));
        }
        let columns = other
            .columns
            .iter()
            .map(|col| self.mul_vec(col))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, columns })
    }

    pub fn axpy(&self, a: &F, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.rows != other.rows || self.cols() != other.cols() {
            return invalid("shape mismatch in matrix sum");
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(x, y)| x.axpy(a, y))
            .collect();
        Ok(Matrix { rows: self.rows, columns })
    }

    pub fn add(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        self.axpy(&F::one(), other)
    }

    pub fn sub(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        self.axpy(&F::one().negated(), other)
    }

    pub fn scale(&self, a: &F) -> Matrix<F> {
        Matrix { rows: self.rows, columns: self.columns.iter().map(|c| c.scale(a)).collect() }
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.cols()]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, columns: self.columns.iter().map(|c| c.map_field(&f)).collect() }
    }

    /// Row `r` as a sparse vector over column indices.
    pub fn row(&self, r: usize) -> SparseVector<F> {
        let entries = self
            .columns
            .iter()
            .enumerate()
            .filter_map(|(c, col)| {
                let v = col.get(r);
                (!v.is_zero()).then_some((c, v))
            })
            .collect();
        SparseVector { dim: self.cols(), entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn from_pairs_merges_and_drops_zeros() {
        let v = SparseVector::from_pairs(5, vec![(3, q(1)), (1, q(2)), (3, q(-1))]).unwrap();
        assert_eq!(v.entries(), &[(1, q(2))]);
        assert!(SparseVector::<Rational>::from_pairs(2, vec![(2, q(1))]).is_err());
    }

    #[test]
    fn axpy_cancels() {
        let a = SparseVector::from_dense(&[q(1), q(2), q(0)]);
        let b = SparseVector::from_dense(&[q(0), q(1), q(5)]);
        let c = a.axpy(&q(-2), &b);
        assert_eq!(c.to_dense(), vec![q(1), q(0), q(-10)]);
        assert_eq!(c.nnz(), 2);
    }

    #[test]
    fn matmul_and_transpose() {
        let m = Matrix::from_dense(&[vec![q(1), q(2)], vec![q(0), q(3)]]).unwrap();
        let mt = m.transpose();
        assert_eq!(mt.to_dense(), vec![vec![q(1), q(0)], vec![q(2), q(3)]]);
        let p = m.matmul(&mt).unwrap();
        assert_eq!(p.to_dense(), vec![vec![q(5), q(6)], vec![q(6), q(9)]]);
        assert!(m.matmul(&Matrix::zeros(3, 1)).is_err());
    }
}
