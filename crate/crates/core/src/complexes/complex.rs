use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::{json, Map, Value};

use crate::algebra::{Field, Matrix};
use crate::complexes::simplex::Simplex;
use crate::error::{invalid, Result};

/// A finite, face-closed simplicial complex with a fixed basis order.
///
/// Simplices are stored sorted by `(dimension, vertices)`; a simplex's
/// position in that order is its global basis index. Within one dimension the
/// local index is the position relative to [`SimplicialComplex::offset`].
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    offsets: Vec<usize>,
    faces: Vec<Vec<(usize, i64)>>,
    cofaces: Vec<Vec<(usize, i64)>>,
    filtration: Option<Vec<f64>>,
    geometry: Option<BTreeMap<usize, Vec<f64>>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
            && self.filtration == other.filtration
            && self.geometry == other.geometry
    }
}

impl SimplicialComplex {
    /// Builds from a face-closed simplex list. Duplicates are ignored; a
    /// missing face is an error.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let set: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &set {
            for (face, _) in s.boundary() {
                if !set.contains(&face) {
                    return invalid(format!("complex is not closed under faces: {s} lacks {face}"));
                }
            }
        }
        Ok(Self::from_sorted(set.into_iter().collect()))
    }

    /// The smallest complex containing the given simplices.
    pub fn closure_of(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let set: BTreeSet<Simplex> = simplices.into_iter().flat_map(|s| s.all_faces()).collect();
        Self::from_sorted(set.into_iter().collect())
    }

    /// Convenience constructor from raw vertex lists; takes the closure.
    pub fn from_vertex_lists(lists: &[&[usize]]) -> Result<Self> {
        let simplices = lists.iter().map(|l| Simplex::new(l.to_vec())).collect::<Result<Vec<_>>>()?;
        Ok(Self::closure_of(simplices))
    }

    fn from_sorted(simplices: Vec<Simplex>) -> Self {
        let index: HashMap<Simplex, usize> =
            simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let top = simplices.last().map_or(0, |s| s.dim() + 1);
        let mut offsets = vec![0; top + 1];
        for d in 0..=top {
            offsets[d] = simplices.partition_point(|s| s.dim() < d);
        }
        let mut faces = vec![Vec::new(); simplices.len()];
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            for (face, sign) in s.boundary() {
                let j = index[&face];
                faces[i].push((j, sign));
                cofaces[j].push((i, sign));
            }
        }
        SimplicialComplex { simplices, index, offsets, faces, cofaces, filtration: None, geometry: None }
    }

    /// Attaches filtration values in basis order; they must be non-negative
    /// and monotone along faces.
    pub fn with_filtration(mut self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.simplices.len() {
            return invalid(format!("{} filtration values for {} simplices", values.len(), self.simplices.len()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return invalid(format!("filtration value {v} is not a finite non-negative number"));
        }
        for (i, fs) in self.faces.iter().enumerate() {
            for &(j, _) in fs {
                if values[j] > values[i] {
                    return invalid(format!(
                        "filtration not monotone: {} at {} exceeds {} at {}",
                        self.simplices[j], values[j], self.simplices[i], values[i]
                    ));
                }
            }
        }
        self.filtration = Some(values);
        Ok(self)
    }

    pub fn with_geometry(mut self, geometry: BTreeMap<usize, Vec<f64>>) -> Result<Self> {
        for v in self.vertex_ids() {
            if !geometry.contains_key(&v) {
                return invalid(format!("geometry lacks coordinates for vertex {v}"));
            }
        }
        self.geometry = Some(geometry);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Global index of the first simplex of dimension `d`.
    pub fn offset(&self, d: usize) -> usize {
        self.offsets.get(d).copied().unwrap_or(self.simplices.len())
    }

    pub fn count(&self, d: usize) -> usize {
        self.offset(d + 1) - self.offset(d)
    }

    pub fn simplices_of_dim(&self, d: usize) -> &[Simplex] {
        &self.simplices[self.offset(d)..self.offset(d + 1)]
    }

    pub fn vertex_ids(&self) -> Vec<usize> {
        self.simplices_of_dim(0).iter().map(|s| s.vertices()[0]).collect()
    }

    /// Global index of vertex `v`.
    pub fn vertex_index(&self, v: usize) -> Option<usize> {
        self.index_of(&Simplex::vertex(v))
    }

    /// Codimension-one faces of simplex `i` as `(global index, sign)`.
    pub fn faces_of(&self, i: usize) -> &[(usize, i64)] {
        &self.faces[i]
    }

    /// Cofaces of simplex `i` as `(global index, sign of i in their boundary)`.
    pub fn cofaces_of(&self, i: usize) -> &[(usize, i64)] {
        &self.cofaces[i]
    }

    pub fn filtration(&self) -> Option<&[f64]> {
        self.filtration.as_deref()
    }

    pub fn geometry(&self) -> Option<&BTreeMap<usize, Vec<f64>>> {
        self.geometry.as_ref()
    }

    /// Coordinates of the vertices in basis order.
    pub fn vertex_coordinates(&self) -> Option<Vec<Vec<f64>>> {
        let g = self.geometry.as_ref()?;
        self.vertex_ids().iter().map(|v| g.get(v).cloned()).collect()
    }

    /// Boundary operator from dimension `dim` to `dim - 1` in local indices.
    /// A dimension without simplices gives a matrix with no columns.
    pub fn boundary_matrix<F: Field>(&self, dim: usize) -> Result<Matrix<F>> {
        if dim == 0 {
            return invalid("boundary_matrix needs dim >= 1");
        }
        let (lo, hi) = (self.offset(dim), self.offset(dim + 1));
        let row_offset = self.offset(dim - 1);
        let triplets = (lo..hi).flat_map(|c| {
            self.faces[c].iter().map(move |&(r, sign)| (r - row_offset, c - lo, F::from_i64(sign)))
        });
        Matrix::from_triplets(self.count(dim - 1), hi - lo, triplets)
    }

    /// The full boundary operator on all of `C(X)` in global indices.
    pub fn total_boundary<F: Field>(&self) -> Matrix<F> {
        let n = self.len();
        let triplets = (0..n).flat_map(|c| self.faces[c].iter().map(move |&(r, s)| (r, c, F::from_i64(s))));
        Matrix::from_triplets(n, n, triplets).expect("indices in range")
    }

    /// Canonical JSON form: all simplices sorted by `(dimension, vertices)`.
    pub fn to_json(&self) -> Value {
        let simplices: Vec<Value> = self
            .simplices
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut m = Map::new();
                m.insert("v".into(), json!(s.vertices()));
                if let Some(f) = &self.filtration {
                    m.insert("filtration".into(), json!(f[i]));
                }
                Value::Object(m)
            })
            .collect();
        let mut root = Map::new();
        root.insert("vertices".into(), json!(self.vertex_ids()));
        root.insert("simplices".into(), Value::Array(simplices));
        if let Some(g) = &self.geometry {
            let geo: Map<String, Value> = g.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            root.insert("geometry".into(), Value::Object(geo));
        }
        Value::Object(root)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let Some(list) = value.get("simplices").and_then(Value::as_array) else {
            return invalid("complex JSON lacks a \"simplices\" array");
        };
        let mut simplices = Vec::with_capacity(list.len());
        let mut filtration: Vec<(Simplex, f64)> = Vec::new();
        for entry in list {
            let Some(vs) = entry.get("v").and_then(Value::as_array) else {
                return invalid(format!("simplex entry {entry} lacks \"v\""));
            };
            let vs = vs
                .iter()
                .map(|x| x.as_u64().map(|u| u as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| crate::Error::InvalidInput(format!("bad vertex list in {entry}")))?;
            let s = Simplex::new(vs)?;
            if let Some(f) = entry.get("filtration").and_then(Value::as_f64) {
                filtration.push((s.clone(), f));
            }
            simplices.push(s);
        }
        if let Some(vs) = value.get("vertices").and_then(Value::as_array) {
            for v in vs {
                match v.as_u64() {
                    Some(u) => simplices.push(Simplex::vertex(u as usize)),
                    None => return invalid(format!("bad vertex id {v}")),
                }
            }
        }
        let mut complex = Self::from_simplices(simplices)?;
        if !filtration.is_empty() {
            if filtration.len() != complex.len() {
                return invalid("filtration given for only some simplices");
            }
            let mut values = vec![0.0; complex.len()];
            for (s, f) in filtration {
                values[complex.index[&s]] = f;
            }
            complex = complex.with_filtration(values)?;
        }
        if let Some(geo) = value.get("geometry").and_then(Value::as_object) {
            let mut g = BTreeMap::new();
            for (k, v) in geo {
                let id: usize = k.parse().map_err(|_| crate::Error::InvalidInput(format!("bad vertex key {k:?}")))?;
                let coords = v
                    .as_array()
                    .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| crate::Error::InvalidInput(format!("bad coordinates for vertex {k}")))?;
                g.insert(id, coords);
            }
            complex = complex.with_geometry(g)?;
        }
        Ok(complex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rank, Rational};

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(&[&[0, 1], &[0, 2], &[1, 2]]).unwrap()
    }

    #[test]
    fn closure_and_order() {
        let t = triangle();
        assert_eq!(t.len(), 6);
        assert_eq!(t.count(0), 3);
        assert_eq!(t.count(1), 3);
        assert_eq!(t.simplex(3).to_string(), "[0,1]");
        assert_eq!(t.dim(), Some(1));
    }

    #[test]
    fn missing_face_rejected() {
        let s = vec![Simplex::vertex(0), Simplex::new(vec![0, 1]).unwrap()];
        assert!(SimplicialComplex::from_simplices(s).is_err());
    }

    #[test]
    fn triangle_boundary_column() {
        let d1 = triangle().boundary_matrix::<Rational>(1).unwrap();
        // column [0,1] = [1] - [0]
        assert_eq!(d1.column(0).to_dense(), vec![Rational::from_i64(-1), Rational::from_i64(1), Rational::from_i64(0)]);
        assert_eq!(rank(&d1), 2);
    }

    #[test]
    fn filled_triangle_boundary() {
        let t = SimplicialComplex::from_vertex_lists(&[&[0, 1, 2]]).unwrap();
        let d2 = t.boundary_matrix::<Rational>(2).unwrap();
        // [1,2] - [0,2] + [0,1] in local order [0,1], [0,2], [1,2]
        let q = Rational::from_i64;
        assert_eq!(d2.column(0).to_dense(), vec![q(1), q(-1), q(1)]);
        let d1 = t.boundary_matrix::<Rational>(1).unwrap();
        assert!(d1.matmul(&d2).unwrap().is_zero());
    }

    #[test]
    fn empty_dimension_gives_no_columns() {
        let d = triangle().boundary_matrix::<Rational>(2).unwrap();
        assert_eq!((d.rows(), d.cols()), (3, 0));
        assert!(triangle().boundary_matrix::<Rational>(0).is_err());
    }

    #[test]
    fn filtration_monotonicity() {
        let t = triangle();
        assert!(t.clone().with_filtration(vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).is_ok());
        assert!(t.with_filtration(vec![2.0, 0.0, 0.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn json_is_canonical() {
        let t = triangle();
        let s = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"simplices":[{"v":[0]},{"v":[1]},{"v":[2]},{"v":[0,1]},{"v":[0,2]},{"v":[1,2]}],"vertices":[0,1,2]}"#
        );
        let back = SimplicialComplex::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
