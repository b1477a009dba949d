use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{convert, rank, row_reduce, EchelonBasis, Field, FieldKind, SparseVector};
use crate::complexes::{betti, cohomology_basis, homology_basis, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::homcomplex::index::hom_boundary_indexed;
use crate::homcomplex::{ChainMapMatrix, HomBasisIndex};

/// Affine chart `Σ b_m f_m + Σ c_n h_n` of the chain maps `X -> Y`.
///
/// Generators and homotopies are vectors over the degree-0 hom basis.
/// `homotopies` holds every column of `d^H_1`; `independent` lists the
/// positions of a linearly independent subset spanning the same space.
#[derive(Clone, Debug)]
pub struct MapParameterization<F> {
    domain: Arc<SimplicialComplex>,
    codomain: Arc<SimplicialComplex>,
    index: HomBasisIndex,
    generators: Vec<SparseVector<F>>,
    generator_degrees: Vec<usize>,
    homotopies: Vec<SparseVector<F>>,
    independent: Vec<usize>,
    b: Vec<F>,
}

/// `Σ_k β^k(X) β_{k+n}(Y)`, the rank of `H_n` of the hom-complex over a field.
pub fn kunneth_rank<F: Field>(x: &SimplicialComplex, y: &SimplicialComplex, n: isize) -> usize {
    let bx = betti::<F>(x);
    let by = betti::<F>(y);
    bx.iter()
        .enumerate()
        .filter_map(|(k, &b)| {
            let j = usize::try_from(k as isize + n).ok()?;
            Some(b * by.get(j).copied().unwrap_or(0))
        })
        .sum()
}

/// Computes generators of `H_0(Hom(C(X), C(Y)))` and the homotopy directions.
///
/// Generators are the products `α ⊗ z` of cohomology and homology
/// representatives in each dimension, checked against the hom-complex: each
/// must be a `d^H_0`-cycle and independent modulo `im d^H_1`. Their number is
/// compared with `dim ker d^H_0 - rank d^H_1`. `b` starts as all ones.
pub fn chain_map_generators<F: Field>(x: &SimplicialComplex, y: &SimplicialComplex) -> Result<MapParameterization<F>> {
    if x.is_empty() || y.is_empty() {
        return invalid("both complexes must be nonempty");
    }
    let idx_m1 = HomBasisIndex::new(x, y, -1);
    let idx0 = HomBasisIndex::new(x, y, 0);
    let idx1 = HomBasisIndex::new(x, y, 1);
    let d0 = hom_boundary_indexed::<F>(x, y, &idx0, &idx_m1);
    let d1 = hom_boundary_indexed::<F>(x, y, &idx1, &idx0);

    let homotopies: Vec<SparseVector<F>> = d1.columns().to_vec();
    let mut boundaries = EchelonBasis::new(idx0.len());
    let independent: Vec<usize> = (0..homotopies.len()).filter(|&i| boundaries.insert(&homotopies[i])).collect();
    let expected = idx0.len() - rank(&d0) - independent.len();

    let mut generators = Vec::new();
    let mut generator_degrees = Vec::new();
    let top = x.dim().unwrap_or(0).min(y.dim().unwrap_or(0));
    for k in 0..=top {
        let alphas = cohomology_basis::<F>(x, k);
        let cycles = homology_basis::<F>(y, k);
        for alpha in &alphas {
            for z in &cycles {
                let pairs = alpha.iter().flat_map(|(s, a)| {
                    let sigma = x.offset(k) + s;
                    let idx0 = &idx0;
                    z.iter().map(move |(t, c)| {
                        (idx0.position(sigma, y.offset(k) + t).expect("degree-0 pair"), a.times(c))
                    })
                });
                let f = SparseVector::from_pairs(idx0.len(), pairs)?;
                if !d0.mul_vec(&f)?.is_zero() {
                    return Err(Error::Consistency(format!("product generator in dimension {k} is not a chain map")));
                }
                if boundaries.insert(&f) {
                    generators.push(f.normalized());
                    generator_degrees.push(k);
                }
            }
        }
    }
    if generators.len() > expected {
        return Err(Error::Consistency(format!(
            "{} independent product generators but H_0 of the hom-complex has rank {expected}",
            generators.len()
        )));
    }
    if generators.len() < expected {
        // fall back on kernel vectors of d^H_0
        for v in row_reduce(&d0).kernel_basis {
            if generators.len() == expected {
                break;
            }
            if boundaries.insert(&v) {
                let degree = v.leading().map_or(0, |(i, _)| x.simplex(idx0.pair(i).0).dim());
                generators.push(v.normalized());
                generator_degrees.push(degree);
            }
        }
    }
    let b = vec![F::one(); generators.len()];
    Ok(MapParameterization {
        domain: Arc::new(x.clone()),
        codomain: Arc::new(y.clone()),
        index: idx0,
        generators,
        generator_degrees,
        homotopies,
        independent,
        b,
    })
}

/// Policy for the fixed generator coefficients `b`.
#[derive(Clone, Debug, PartialEq)]
pub enum BPolicy {
    AllOnes,
    /// `b_m = 1` when generator `m` lives in one of these homology
    /// dimensions, else 0.
    ByDimension(Vec<usize>),
    /// Explicit integer values.
    Explicit(Vec<i64>),
}

impl FromStr for BPolicy {
    type Err = Error;

    /// `all_ones`, `dims:0,1` or `values:1,0`.
    fn from_str(s: &str) -> Result<Self> {
        let list = |rest: &str| -> Result<Vec<i64>> {
            rest.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad entry {t:?} in {s:?}"))))
                .collect()
        };
        let s = s.trim();
        if s == "all_ones" || s == "all-ones" {
            Ok(BPolicy::AllOnes)
        } else if let Some(rest) = s.strip_prefix("dims:") {
            let dims = list(rest)?;
            if dims.iter().any(|&d| d < 0) {
                return invalid(format!("negative dimension in {s:?}"));
            }
            Ok(BPolicy::ByDimension(dims.into_iter().map(|d| d as usize).collect()))
        } else if let Some(rest) = s.strip_prefix("values:") {
            Ok(BPolicy::Explicit(list(rest)?))
        } else {
            invalid(format!("unknown b policy {s:?}; expected all_ones, dims:..., or values:..."))
        }
    }
}

/// Coefficients chosen by `policy` for the generators of `p`.
pub fn select_b_coefficients<F: Field>(p: &MapParameterization<F>, policy: &BPolicy) -> Result<Vec<F>> {
    match policy {
        BPolicy::AllOnes => Ok(vec![F::one(); p.generators.len()]),
        BPolicy::ByDimension(dims) => Ok(p
            .generator_degrees
            .iter()
            .map(|d| if dims.contains(d) { F::one() } else { F::zero() })
            .collect()),
        BPolicy::Explicit(values) => {
            if values.len() != p.generators.len() {
                return invalid(format!("{} b values for {} generators", values.len(), p.generators.len()));
            }
            Ok(values.iter().map(|&v| F::from_i64(v)).collect())
        }
    }
}

impl<F: Field> MapParameterization<F> {
    pub fn domain(&self) -> &Arc<SimplicialComplex> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<SimplicialComplex> {
        &self.codomain
    }

    pub fn index(&self) -> &HomBasisIndex {
        &self.index
    }

    pub fn generators(&self) -> &[SparseVector<F>] {
        &self.generators
    }

    /// Homology dimension of each generator.
    pub fn generator_degrees(&self) -> &[usize] {
        &self.generator_degrees
    }

    /// All columns of `d^H_1`.
    pub fn homotopies(&self) -> &[SparseVector<F>] {
        &self.homotopies
    }

    /// Positions in [`Self::homotopies`] of the independent subset.
    pub fn independent_homotopies(&self) -> &[usize] {
        &self.independent
    }

    pub fn reduced_homotopies(&self) -> Vec<SparseVector<F>> {
        self.independent.iter().map(|&i| self.homotopies[i].clone()).collect()
    }

    pub fn b(&self) -> &[F] {
        &self.b
    }

    pub fn set_b(&mut self, b: Vec<F>) -> Result<()> {
        if b.len() != self.generators.len() {
            return invalid(format!("{} b values for {} generators", b.len(), self.generators.len()));
        }
        self.b = b;
        Ok(())
    }

    pub fn with_policy(mut self, policy: &BPolicy) -> Result<Self> {
        let b = select_b_coefficients(&self, policy)?;
        self.b = b;
        Ok(self)
    }

    /// Wraps a hom vector as a map.
    pub fn to_map(&self, v: &SparseVector<F>) -> ChainMapMatrix<F> {
        ChainMapMatrix::from_hom_vector(&self.index, v, self.domain.clone(), self.codomain.clone())
            .expect("vector over this basis")
    }

    pub fn generator_map(&self, m: usize) -> ChainMapMatrix<F> {
        self.to_map(&self.generators[m])
    }

    pub fn homotopy_map(&self, n: usize) -> ChainMapMatrix<F> {
        self.to_map(&self.homotopies[n])
    }

    /// `Σ b_m f_m` as a hom vector.
    pub fn base_vector(&self) -> SparseVector<F> {
        self.generators
            .iter()
            .zip(&self.b)
            .fold(SparseVector::zero(self.index.len()), |acc, (f, b)| acc.axpy(b, f))
    }

    fn combine(&self, directions: &[&SparseVector<F>], c: &[F]) -> Result<SparseVector<F>> {
        if c.len() != directions.len() {
            return invalid(format!("{} coefficients for {} homotopy directions", c.len(), directions.len()));
        }
        Ok(directions.iter().zip(c).fold(self.base_vector(), |acc, (h, a)| acc.axpy(a, h)))
    }

    /// `Σ b_m f_m + Σ c_n h_n` over all raw homotopy columns.
    pub fn evaluate_vector(&self, c: &[F]) -> Result<SparseVector<F>> {
        let dirs: Vec<&SparseVector<F>> = self.homotopies.iter().collect();
        self.combine(&dirs, c)
    }

    /// Same as [`Self::evaluate_vector`] over the independent homotopies.
    pub fn evaluate_reduced_vector(&self, c: &[F]) -> Result<SparseVector<F>> {
        let dirs: Vec<&SparseVector<F>> = self.independent.iter().map(|&i| &self.homotopies[i]).collect();
        self.combine(&dirs, c)
    }

    pub fn map_field<G: Field>(&self) -> MapParameterization<G> {
        let conv = |v: &SparseVector<F>| v.map_field(convert::<F, G>);
        MapParameterization {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            index: self.index.clone(),
            generators: self.generators.iter().map(conv).collect(),
            generator_degrees: self.generator_degrees.clone(),
            homotopies: self.homotopies.iter().map(conv).collect(),
            independent: self.independent.clone(),
            b: self.b.iter().map(convert::<F, G>).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let sparse = |v: &SparseVector<F>| -> Value {
            Value::Array(v.iter().map(|(i, a)| json!([i, a.to_json()])).collect())
        };
        let mut m = Map::new();
        m.insert("b".into(), Value::Array(self.b.iter().map(Field::to_json).collect()));
        m.insert(
            "basis_index".into(),
            Value::Array(self.index.pairs().iter().map(|&(s, t)| json!([s, t])).collect()),
        );
        m.insert("codomain".into(), self.codomain.to_json());
        m.insert("domain".into(), self.domain.to_json());
        m.insert("field".into(), Value::from(F::KIND.tag()));
        m.insert("generator_degrees".into(), json!(self.generator_degrees));
        m.insert("generators".into(), Value::Array(self.generators.iter().map(sparse).collect()));
        m.insert("homotopies".into(), Value::Array(self.homotopies.iter().map(sparse).collect()));
        m.insert("independent_homotopies".into(), json!(self.independent));
        Value::Object(m)
    }

    /// Reads the form written by [`Self::to_json`]. The basis index is
    /// rebuilt from the complexes and must agree with the stored one.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = v.get("field").and_then(Value::as_str).ok_or_else(|| bad("missing field tag"))?;
        if FieldKind::from_tag(field)? != F::KIND {
            return invalid(format!("parameterization is over {field}, expected {}", F::KIND.tag()));
        }
        let domain = SimplicialComplex::from_json(v.get("domain").ok_or_else(|| bad("missing domain"))?)?;
        let codomain = SimplicialComplex::from_json(v.get("codomain").ok_or_else(|| bad("missing codomain"))?)?;
        let index = HomBasisIndex::new(&domain, &codomain, 0);
        let stored: Vec<(usize, usize)> = array(v, "basis_index")?
            .iter()
            .map(|p| Ok((uint(p.get(0))?, uint(p.get(1))?)))
            .collect::<Result<_>>()?;
        if stored != index.pairs() {
            return invalid("basis_index does not match the complexes");
        }
        let vectors = |key: &str| -> Result<Vec<SparseVector<F>>> {
            array(v, key)?
                .iter()
                .map(|vec| {
                    let pairs = vec
                        .as_array()
                        .ok_or_else(|| bad("sparse vector must be an array"))?
                        .iter()
                        .map(|e| Ok((uint(e.get(0))?, F::from_json(e.get(1).ok_or_else(|| bad("missing value"))?)?)))
                        .collect::<Result<Vec<_>>>()?;
                    SparseVector::from_pairs(index.len(), pairs)
                })
                .collect()
        };
        let generators = vectors("generators")?;
        let homotopies = vectors("homotopies")?;
        let b = array(v, "b")?.iter().map(F::from_json).collect::<Result<Vec<_>>>()?;
        let generator_degrees =
            array(v, "generator_degrees")?.iter().map(|d| uint(Some(d))).collect::<Result<Vec<_>>>()?;
        let independent =
            array(v, "independent_homotopies")?.iter().map(|d| uint(Some(d))).collect::<Result<Vec<_>>>()?;
        if b.len() != generators.len() || generator_degrees.len() != generators.len() {
            return invalid("b and generator_degrees must have one entry per generator");
        }
        if independent.iter().any(|&i| i >= homotopies.len()) {
            return invalid("independent homotopy index out of range");
        }
        Ok(MapParameterization {
            domain: Arc::new(domain),
            codomain: Arc::new(codomain),
            index,
            generators,
            generator_degrees,
            homotopies,
            independent,
            b,
        })
    }
}

fn bad(msg: &str) -> Error {
    Error::InvalidInput(format!("parameterization JSON: {msg}"))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.get(key).and_then(Value::as_array).ok_or_else(|| bad(&format!("missing array {key:?}")))
}

fn uint(v: Option<&Value>) -> Result<usize> {
    v.and_then(Value::as_u64).map(|u| u as usize).ok_or_else(|| bad("expected a non-negative integer"))
}

/// Evaluates the map for coefficients on all raw homotopy columns.
pub fn evaluate_map<F: Field>(p: &MapParameterization<F>, c: &[F]) -> Result<ChainMapMatrix<F>> {
    Ok(p.to_map(&p.evaluate_vector(c)?))
}

/// Evaluates the map for coefficients on the independent homotopies.
pub fn evaluate_reduced_map<F: Field>(p: &MapParameterization<F>, c: &[F]) -> Result<ChainMapMatrix<F>> {
    Ok(p.to_map(&p.evaluate_reduced_vector(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Rational, Z2};
    use crate::complexes::{model_complex, ModelComplex};
    use crate::homcomplex::induced_homology_map;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn triangle_pair() -> MapParameterization<Rational> {
        let t = model_complex(ModelComplex::Triangle).unwrap();
        chain_map_generators(&t, &t).unwrap()
    }

    #[test]
    fn triangle_generators_match_worked_example() {
        let p = triangle_pair();
        assert_eq!(p.generators().len(), 2);
        assert_eq!(p.homotopies().len(), 9);
        assert_eq!(p.generator_degrees(), &[0, 1]);
        // f0 sends every vertex to [0]
        let f0 = p.generator_map(0);
        for v in 0..3 {
            assert_eq!(f0.image(v).entries(), &[(0, q(1))]);
        }
        // f1 sends [1,2] to [0,1] - [0,2] + [1,2] and kills the other edges
        let f1 = p.generator_map(1);
        assert!(f1.image(3).is_zero() && f1.image(4).is_zero());
        assert_eq!(f1.image(5).entries(), &[(3, q(1)), (4, q(-1)), (5, q(1))]);
        assert!(f0.is_chain_map() && f1.is_chain_map());
    }

    #[test]
    fn triangle_induced_maps() {
        let p = triangle_pair();
        let f0 = p.generator_map(0);
        assert!(induced_homology_map(&f0, 1).unwrap().is_zero());
        let f = evaluate_map(&p, &vec![q(0); 9]).unwrap();
        for d in 0..2 {
            assert_eq!(induced_homology_map(&f, d).unwrap().get(0, 0), q(1));
        }
        let mut c = vec![q(0); 9];
        c[4] = q(1);
        let g = evaluate_map(&p, &c).unwrap();
        for d in 0..2 {
            assert_eq!(induced_homology_map(&g, d).unwrap(), induced_homology_map(&f, d).unwrap());
        }
    }

    #[test]
    fn b_policies() {
        let p = triangle_pair();
        assert_eq!(select_b_coefficients(&p, &BPolicy::AllOnes).unwrap(), vec![q(1), q(1)]);
        let dims = "dims:0".parse().unwrap();
        assert_eq!(select_b_coefficients(&p, &dims).unwrap(), vec![q(1), q(0)]);
        assert!(select_b_coefficients(&p, &BPolicy::Explicit(vec![1])).is_err());
        assert!("nonsense".parse::<BPolicy>().is_err());
    }

    #[test]
    fn square_over_z2() {
        let s = model_complex(ModelComplex::Square).unwrap();
        let p = chain_map_generators::<Z2>(&s, &s).unwrap();
        assert_eq!(p.homotopies().len(), 16);
        assert_eq!(p.generators().len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let p = triangle_pair();
        let j = p.to_json();
        let back = MapParameterization::<Rational>::from_json(&j).unwrap();
        assert_eq!(back.to_json(), j);
        assert!(MapParameterization::<Z2>::from_json(&j).is_err());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let p = triangle_pair();
        assert!(evaluate_map(&p, &[q(1)]).is_err());
        assert!(evaluate_reduced_map(&p, &vec![q(0); p.independent_homotopies().len()]).is_ok());
    }
}
