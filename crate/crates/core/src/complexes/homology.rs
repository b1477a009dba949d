//! Homology and cohomology of a complex over a field, with representatives.

use crate::algebra::{independent_modulo, rank, row_reduce, Field, Matrix, SparseVector};
use crate::complexes::SimplicialComplex;

/// Boundary `C_dim -> C_{dim-1}`, or an empty operator out of degree zero.
fn boundary_or_empty<F: Field>(k: &SimplicialComplex, dim: usize) -> Matrix<F> {
    if dim == 0 {
        Matrix::zeros(0, k.count(0))
    } else {
        k.boundary_matrix(dim).expect("dim >= 1")
    }
}

/// Betti numbers `beta_0 ..= beta_top` over `F`.
pub fn betti<F: Field>(k: &SimplicialComplex) -> Vec<usize> {
    let Some(top) = k.dim() else { return Vec::new() };
    let ranks: Vec<usize> = (0..=top + 1).map(|d| rank(&boundary_or_empty::<F>(k, d))).collect();
    (0..=top).map(|d| k.count(d) - ranks[d] - ranks[d + 1]).collect()
}

pub fn betti_number<F: Field>(k: &SimplicialComplex, dim: usize) -> usize {
    betti::<F>(k).get(dim).copied().unwrap_or(0)
}

/// Cycle representatives of `H_dim`, in local coordinates of dimension `dim`.
///
/// The kernel basis of the boundary is scanned in order and a vector is kept
/// when it is independent of the boundaries and of those kept before it.
pub fn homology_basis<F: Field>(k: &SimplicialComplex, dim: usize) -> Vec<SparseVector<F>> {
    let n = k.count(dim);
    if n == 0 {
        return Vec::new();
    }
    let cycles = row_reduce(&boundary_or_empty::<F>(k, dim)).kernel_basis;
    let boundaries = boundary_or_empty::<F>(k, dim + 1).into_columns();
    independent_modulo(n, &boundaries, &cycles)
        .into_iter()
        .map(|i| cycles[i].normalized())
        .collect()
}

fn reversed<F: Field>(v: &SparseVector<F>) -> SparseVector<F> {
    let n = v.dim();
    SparseVector::from_pairs(n, v.iter().map(|(i, a)| (n - 1 - i, a.clone()))).expect("in range")
}

/// Cocycle representatives of `H^dim`, as functionals on `C_dim`.
///
/// Cocycles are found with the basis order reversed, so the chosen
/// representatives favour the latest simplices. This pairs with the earliest
/// cycle representatives of [`homology_basis`].
pub fn cohomology_basis<F: Field>(k: &SimplicialComplex, dim: usize) -> Vec<SparseVector<F>> {
    let n = k.count(dim);
    if n == 0 {
        return Vec::new();
    }
    // coboundary out of degree `dim`, with reversed column order
    let up = boundary_or_empty::<F>(k, dim + 1).transpose();
    let flip = |m: &Matrix<F>| -> Matrix<F> {
        let cols: Vec<_> = (0..m.cols()).rev().map(|c| m.column(c).clone()).collect();
        Matrix::from_columns(m.rows(), cols).expect("same shape")
    };
    let up_rev = flip(&up);
    let cocycles: Vec<SparseVector<F>> =
        row_reduce(&up_rev).kernel_basis.iter().map(reversed).collect();
    // coboundaries: columns of the transposed lower boundary
    let coboundaries: Vec<SparseVector<F>> = if dim == 0 {
        Vec::new()
    } else {
        boundary_or_empty::<F>(k, dim).transpose().into_columns()
    };
    independent_modulo(n, &coboundaries, &cocycles)
        .into_iter()
        .map(|i| cocycles[i].normalized())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Rational, Z2};
    use crate::complexes::{model_complex, ModelComplex};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn triangle_representatives() {
        let t = model_complex(ModelComplex::Triangle).unwrap();
        assert_eq!(betti::<Rational>(&t), vec![1, 1]);
        let h1 = homology_basis::<Rational>(&t, 1);
        assert_eq!(h1.len(), 1);
        assert_eq!(h1[0].to_dense(), vec![q(1), q(-1), q(1)]);
        let h0 = homology_basis::<Rational>(&t, 0);
        assert_eq!(h0[0].to_dense(), vec![q(1), q(0), q(0)]);
        let c0 = cohomology_basis::<Rational>(&t, 0);
        assert_eq!(c0[0].to_dense(), vec![q(1), q(1), q(1)]);
        let c1 = cohomology_basis::<Rational>(&t, 1);
        assert_eq!(c1[0].to_dense(), vec![q(0), q(0), q(1)]);
    }

    #[test]
    fn polyhedra_are_spheres() {
        for m in [ModelComplex::Octahedron, ModelComplex::Icosahedron] {
            let k = model_complex(m).unwrap();
            assert_eq!(betti::<Rational>(&k), vec![1, 0, 1]);
            assert_eq!(betti::<Z2>(&k), vec![1, 0, 1]);
            assert_eq!(cohomology_basis::<Rational>(&k, 2).len(), 1);
        }
    }

    #[test]
    fn filled_triangle_is_contractible() {
        let k = model_complex(ModelComplex::FilledTriangle).unwrap();
        assert_eq!(betti::<Rational>(&k), vec![1, 0, 0]);
        assert!(homology_basis::<Rational>(&k, 1).is_empty());
    }

    #[test]
    fn cocycles_pair_with_cycles() {
        let k = model_complex(ModelComplex::NGon(6)).unwrap();
        let z = homology_basis::<Rational>(&k, 1);
        let a = cohomology_basis::<Rational>(&k, 1);
        assert!(!a[0].dot(&z[0]).is_zero());
    }
}
