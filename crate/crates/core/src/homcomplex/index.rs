use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::{Field, Matrix, SparseVector};
use crate::complexes::SimplicialComplex;
use crate::parallel;

/// Basis `{σ* ⊗ τ : dim τ - dim σ = n}` of the degree-`n` hom term.
///
/// Pairs hold global simplex indices and are ordered by `(σ, τ)`, which is
/// `(dim σ, index of σ, index of τ)` lexicographic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBasisIndex {
    degree: isize,
    pairs: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl HomBasisIndex {
    pub fn new(x: &SimplicialComplex, y: &SimplicialComplex, degree: isize) -> Self {
        let mut pairs = Vec::new();
        for d in 0..=x.dim().unwrap_or(0) {
            let Ok(e) = usize::try_from(d as isize + degree) else { continue };
            if x.count(d) == 0 {
                continue;
            }
            for s in x.offset(d)..x.offset(d + 1) {
                for t in y.offset(e)..y.offset(e + 1) {
                    pairs.push((s, t));
                }
            }
        }
        let lookup = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        HomBasisIndex { degree, pairs, lookup }
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(σ, τ)` global indices of basis element `i`.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn position(&self, sigma: usize, tau: usize) -> Option<usize> {
        self.lookup.get(&(sigma, tau)).copied()
    }
}

/// Matrix of `d^H_n : Hom_n -> Hom_{n-1}`, where
/// `d^H_n(σ* ⊗ τ) = σ* ⊗ ∂τ + (-1)^(n+1) Σ_a [∂a : σ] a* ⊗ τ`
/// with `a` running over the cofaces of `σ`.
pub fn hom_boundary<F: Field>(x: &SimplicialComplex, y: &SimplicialComplex, n: isize) -> Matrix<F> {
    let src = HomBasisIndex::new(x, y, n);
    let dst = HomBasisIndex::new(x, y, n - 1);
    hom_boundary_indexed(x, y, &src, &dst)
}

pub(crate) fn hom_boundary_indexed<F: Field>(
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    src: &HomBasisIndex,
    dst: &HomBasisIndex,
) -> Matrix<F> {
    let sign: i64 = if (src.degree() + 1).rem_euclid(2) == 0 { 1 } else { -1 };
    let column = |c: usize| -> SparseVector<F> {
        let (s, t) = src.pair(c);
        let mut entries = Vec::new();
        for &(face, k) in y.faces_of(t) {
            entries.push((dst.position(s, face).expect("face pair in basis"), F::from_i64(k)));
        }
        for &(coface, k) in x.cofaces_of(s) {
            entries.push((dst.position(coface, t).expect("coface pair in basis"), F::from_i64(sign * k)));
        }
        SparseVector::from_pairs(dst.len(), entries).expect("indices in range")
    };
    let columns: Vec<SparseVector<F>> =
        parallel::install(|| (0..src.len()).into_par_iter().map(column).collect());
    Matrix::from_columns(dst.len(), columns).expect("column dimensions match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::complexes::{model_complex, ModelComplex};

    #[test]
    fn point_to_point() {
        let p = model_complex(ModelComplex::Point).unwrap();
        assert_eq!(HomBasisIndex::new(&p, &p, 0).len(), 1);
        let d0 = hom_boundary::<Rational>(&p, &p, 0);
        assert_eq!((d0.rows(), d0.cols()), (0, 1));
    }

    #[test]
    fn triangle_degree_one() {
        let t = model_complex(ModelComplex::Triangle).unwrap();
        let d1 = hom_boundary::<Rational>(&t, &t, 1);
        assert_eq!(d1.cols(), 9);
        assert_eq!(d1.rows(), 18);
        let d0 = hom_boundary::<Rational>(&t, &t, 0);
        assert!(d0.matmul(&d1).unwrap().is_zero());
    }

    #[test]
    fn flat_order() {
        let t = model_complex(ModelComplex::Triangle).unwrap();
        let idx = HomBasisIndex::new(&t, &t, 0);
        assert_eq!(&idx.pairs()[..4], &[(0, 0), (0, 1), (0, 2), (1, 0)]);
        assert_eq!(idx.pair(9), (3, 3));
    }
}
