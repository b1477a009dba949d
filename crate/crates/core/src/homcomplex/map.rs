use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{convert, solve_membership, Field, Matrix, SparseVector};
use crate::complexes::{homology_basis, Simplex, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::homcomplex::HomBasisIndex;

/// A degree-0 map `C(X) -> C(Y)` as a `|Y| x |X|` matrix in global simplex
/// indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMapMatrix<F> {
    matrix: Matrix<F>,
    domain: Arc<SimplicialComplex>,
    codomain: Arc<SimplicialComplex>,
}

impl<F: Field> ChainMapMatrix<F> {
    /// Wraps a matrix, checking its shape and that it preserves dimension.
    pub fn new(matrix: Matrix<F>, domain: Arc<SimplicialComplex>, codomain: Arc<SimplicialComplex>) -> Result<Self> {
        if matrix.rows() != codomain.len() || matrix.cols() != domain.len() {
            return invalid(format!(
                "map matrix is {}x{} but the complexes need {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.len(),
                domain.len()
            ));
        }
        for (r, c, _) in matrix.triplets() {
            if codomain.simplex(r).dim() != domain.simplex(c).dim() {
                return invalid(format!(
                    "entry ({r}, {c}) maps {} to {} and changes dimension",
                    domain.simplex(c),
                    codomain.simplex(r)
                ));
            }
        }
        Ok(ChainMapMatrix { matrix, domain, codomain })
    }

    /// Reads a vector over the degree-0 hom basis.
    pub fn from_hom_vector(
        index: &HomBasisIndex,
        v: &SparseVector<F>,
        domain: Arc<SimplicialComplex>,
        codomain: Arc<SimplicialComplex>,
    ) -> Result<Self> {
        if v.dim() != index.len() {
            return invalid(format!("hom vector of length {} for a basis of {}", v.dim(), index.len()));
        }
        let triplets = v.iter().map(|(i, a)| {
            let (s, t) = index.pair(i);
            (t, s, a.clone())
        });
        let matrix = Matrix::from_triplets(codomain.len(), domain.len(), triplets)?;
        Ok(ChainMapMatrix { matrix, domain, codomain })
    }

    pub fn to_hom_vector(&self, index: &HomBasisIndex) -> Result<SparseVector<F>> {
        let pairs = self
            .matrix
            .triplets()
            .map(|(r, c, a)| {
                index
                    .position(c, r)
                    .map(|i| (i, a.clone()))
                    .ok_or_else(|| Error::InvalidInput(format!("entry ({r}, {c}) is outside the hom basis")))
            })
            .collect::<Result<Vec<_>>>()?;
        SparseVector::from_pairs(index.len(), pairs)
    }

    pub fn identity(k: Arc<SimplicialComplex>) -> Self {
        ChainMapMatrix { matrix: Matrix::identity(k.len()), domain: k.clone(), codomain: k }
    }

    pub fn zero(domain: Arc<SimplicialComplex>, codomain: Arc<SimplicialComplex>) -> Self {
        ChainMapMatrix { matrix: Matrix::zeros(codomain.len(), domain.len()), domain, codomain }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn domain(&self) -> &Arc<SimplicialComplex> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<SimplicialComplex> {
        &self.codomain
    }

    /// Image of domain simplex `sigma` (global index) as a codomain chain.
    pub fn image(&self, sigma: usize) -> &SparseVector<F> {
        self.matrix.column(sigma)
    }

    /// The adjoint map `C(Y) -> C(X)`, i.e. the transpose with the complexes
    /// swapped.
    pub fn adjoint(&self) -> ChainMapMatrix<F> {
        ChainMapMatrix {
            matrix: self.matrix.transpose(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        }
    }

    /// `∂_Y G - G ∂_X`.
    pub fn chain_defect(&self) -> Matrix<F> {
        let left = self.codomain.total_boundary::<F>().matmul(&self.matrix).expect("shapes agree");
        let right = self.matrix.matmul(&self.domain.total_boundary::<F>()).expect("shapes agree");
        left.sub(&right).expect("shapes agree")
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_defect().is_zero()
    }

    pub fn map_field<G: Field>(&self) -> ChainMapMatrix<G> {
        ChainMapMatrix {
            matrix: self.matrix.map_field(convert::<F, G>),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    /// Dense row-major entries as floats.
    pub fn to_dense_f64(&self) -> Vec<Vec<f64>> {
        self.matrix.to_dense().iter().map(|r| r.iter().map(Field::to_f64).collect()).collect()
    }
}

/// Chain map induced by a simplicial vertex map `phi` (domain vertex id to
/// codomain vertex id). A simplex goes to the sign of the permutation sorting
/// its image vertices times the image simplex, or to zero when two vertices
/// collapse.
pub fn simplicial_chain_map<F: Field>(
    domain: Arc<SimplicialComplex>,
    codomain: Arc<SimplicialComplex>,
    phi: &BTreeMap<usize, usize>,
) -> Result<ChainMapMatrix<F>> {
    let mut triplets = Vec::new();
    for (c, s) in domain.simplices().iter().enumerate() {
        let mut image = Vec::with_capacity(s.vertices().len());
        for v in s.vertices() {
            match phi.get(v) {
                Some(&w) => image.push(w),
                None => return invalid(format!("vertex map misses domain vertex {v}")),
            }
        }
        let mut sorted = image.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        // parity of the sorting permutation, counted by inversions
        let inversions = (0..image.len())
            .flat_map(|i| (i + 1..image.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| image[i] > image[j])
            .count();
        let t = Simplex::new(image)?;
        let Some(r) = codomain.index_of(&t) else {
            return invalid(format!("{s} maps to {t}, which is not in the codomain"));
        };
        triplets.push((r, c, F::from_i64(if inversions % 2 == 0 { 1 } else { -1 })));
    }
    let matrix = Matrix::from_triplets(codomain.len(), domain.len(), triplets)?;
    ChainMapMatrix::new(matrix, domain, codomain)
}

/// Reads a vertex map off the vertex block of `g`: every domain vertex must
/// go to exactly one codomain vertex with coefficient one.
pub fn vertex_map_of<F: Field>(g: &ChainMapMatrix<F>) -> Result<BTreeMap<usize, usize>> {
    let (x, y) = (g.domain(), g.codomain());
    let mut phi = BTreeMap::new();
    for c in 0..x.count(0) {
        let image = g.image(c);
        match image.entries() {
            [(r, a)] if a.is_one() && *r < y.count(0) => {
                phi.insert(x.simplex(c).vertices()[0], y.simplex(*r).vertices()[0]);
            }
            _ => return invalid(format!("vertex {} does not map to a single vertex", x.simplex(c))),
        }
    }
    Ok(phi)
}

fn lift<F: Field>(k: &SimplicialComplex, dim: usize, v: &SparseVector<F>) -> SparseVector<F> {
    let off = k.offset(dim);
    SparseVector::from_pairs(k.len(), v.iter().map(|(i, a)| (i + off, a.clone()))).expect("in range")
}

fn restrict<F: Field>(k: &SimplicialComplex, dim: usize, v: &SparseVector<F>) -> SparseVector<F> {
    let (lo, hi) = (k.offset(dim), k.offset(dim + 1));
    SparseVector::from_pairs(hi - lo, v.iter().filter(|(i, _)| (lo..hi).contains(i)).map(|(i, a)| (i - lo, a.clone())))
        .expect("in range")
}

/// Matrix of the map induced on `H_dim`, in the representative bases of
/// [`homology_basis`]; its shape is `β_dim(Y) x β_dim(X)`.
pub fn induced_homology_map<F: Field>(g: &ChainMapMatrix<F>, dim: usize) -> Result<Matrix<F>> {
    if !g.is_chain_map() {
        return invalid("induced_homology_map needs a chain map");
    }
    let (x, y) = (g.domain(), g.codomain());
    let src = homology_basis::<F>(x, dim);
    let dst = homology_basis::<F>(y, dim);
    let mut span = dst.clone();
    if y.count(dim + 1) > 0 {
        span.extend(y.boundary_matrix::<F>(dim + 1)?.into_columns());
    }
    let mut columns = Vec::with_capacity(src.len());
    for z in &src {
        let image = restrict(y, dim, &g.matrix().mul_vec(&lift(x, dim, z))?);
        let coeffs = if span.is_empty() {
            Some(Vec::new())
        } else {
            solve_membership(&span, &image)?
        };
        let coeffs = coeffs.ok_or_else(|| Error::Consistency("image of a cycle is not a cycle".into()))?;
        columns.push(SparseVector::from_dense(&coeffs[..dst.len()]));
    }
    Matrix::from_columns(dst.len(), columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::complexes::{model_complex, ModelComplex};

    #[test]
    fn identity_induces_identity() {
        let k = Arc::new(model_complex(ModelComplex::Octahedron).unwrap());
        let id = ChainMapMatrix::<Rational>::identity(k);
        for d in 0..3 {
            let m = induced_homology_map(&id, d).unwrap();
            assert_eq!(m, Matrix::identity(m.rows()));
        }
    }

    #[test]
    fn non_chain_map_rejected() {
        let t = Arc::new(model_complex(ModelComplex::Triangle).unwrap());
        let m = Matrix::from_triplets(6, 6, [(3usize, 3usize, Rational::from_i64(1))]).unwrap();
        let g = ChainMapMatrix::new(m, t.clone(), t).unwrap();
        assert!(!g.is_chain_map());
        assert!(induced_homology_map(&g, 1).is_err());
    }

    #[test]
    fn simplicial_maps_are_chain_maps() {
        let sq = Arc::new(model_complex(ModelComplex::Square).unwrap());
        // reflection through the diagonal 0-2 reverses orientation
        let phi: BTreeMap<usize, usize> = [(0, 0), (1, 3), (2, 2), (3, 1)].into();
        let g = simplicial_chain_map::<Rational>(sq.clone(), sq.clone(), &phi).unwrap();
        assert!(g.is_chain_map());
        assert_eq!(vertex_map_of(&g).unwrap(), phi);
        let h1 = induced_homology_map(&g, 1).unwrap();
        assert_eq!(h1.get(0, 0), Rational::from_i64(-1));
        let collapse: BTreeMap<usize, usize> = [(0, 0), (1, 0), (2, 0), (3, 0)].into();
        let c = simplicial_chain_map::<Rational>(sq.clone(), sq.clone(), &collapse).unwrap();
        assert!(c.is_chain_map());
        assert_eq!(c.matrix().nnz(), 4);
        let bad: BTreeMap<usize, usize> = [(0, 0), (1, 2), (2, 2), (3, 2)].into();
        assert!(simplicial_chain_map::<Rational>(sq.clone(), sq, &bad).is_err());
    }

    #[test]
    fn dimension_changing_entry_rejected() {
        let t = Arc::new(model_complex(ModelComplex::Triangle).unwrap());
        let m = Matrix::from_triplets(6, 6, [(3usize, 0usize, Rational::from_i64(1))]).unwrap();
        assert!(ChainMapMatrix::new(m, t.clone(), t).is_err());
    }
}
