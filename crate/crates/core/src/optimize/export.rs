use std::fmt::Write;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{Field, FieldKind, Matrix};
use crate::complexes::SimplicialComplex;
use crate::error::{invalid, Error, Result};
use crate::homcomplex::ChainMapMatrix;

/// Dense row-major CSV with five decimal places.
pub fn map_to_csv<F: Field>(g: &ChainMapMatrix<F>) -> String {
    let mut out = String::new();
    for row in g.to_dense_f64() {
        let cells: Vec<String> = row.iter().map(|v| format!("{:.5}", v + 0.0)).collect();
        writeln!(out, "{}", cells.join(",")).expect("string write");
    }
    out
}

/// Sparse JSON with both complexes embedded.
pub fn map_to_json<F: Field>(g: &ChainMapMatrix<F>) -> Value {
    let m = g.matrix();
    let mut o = Map::new();
    o.insert("codomain".into(), g.codomain().to_json());
    o.insert("domain".into(), g.domain().to_json());
    o.insert(
        "entries".into(),
        Value::Array(m.triplets().map(|(r, c, v)| json!([r, c, v.to_json()])).collect()),
    );
    o.insert("field".into(), json!(F::KIND.tag()));
    o.insert("shape".into(), json!([m.rows(), m.cols()]));
    Value::Object(o)
}

/// Reads a map written by [`map_to_json`], converting entries into `F`.
pub fn map_from_json<F: Field>(v: &Value) -> Result<ChainMapMatrix<F>> {
    let bad = |msg: &str| Error::InvalidInput(format!("map JSON: {msg}"));
    let tag = v.get("field").and_then(Value::as_str).ok_or_else(|| bad("missing field"))?;
    let kind = FieldKind::from_tag(tag)?;
    if kind == FieldKind::Z2 && F::KIND != FieldKind::Z2 {
        return invalid("a Z/2 map cannot be read over another field");
    }
    let domain = SimplicialComplex::from_json(v.get("domain").ok_or_else(|| bad("missing domain"))?)?;
    let codomain = SimplicialComplex::from_json(v.get("codomain").ok_or_else(|| bad("missing codomain"))?)?;
    let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries"))?;
    let triplets = entries
        .iter()
        .map(|e| {
            let r = e.get(0).and_then(Value::as_u64).ok_or_else(|| bad("bad row"))? as usize;
            let c = e.get(1).and_then(Value::as_u64).ok_or_else(|| bad("bad column"))? as usize;
            let x = F::from_json(e.get(2).ok_or_else(|| bad("missing value"))?)?;
            Ok((r, c, x))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_triplets(codomain.len(), domain.len(), triplets)?;
    ChainMapMatrix::new(m, Arc::new(domain), Arc::new(codomain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::complexes::{model_complex, ModelComplex};

    #[test]
    fn csv_and_json() {
        let k = Arc::new(model_complex(ModelComplex::Triangle).unwrap());
        let g = ChainMapMatrix::<Rational>::identity(k);
        let csv = map_to_csv(&g);
        assert_eq!(csv.lines().next().unwrap(), "1.00000,0.00000,0.00000,0.00000,0.00000,0.00000");
        let back: ChainMapMatrix<Rational> = map_from_json(&map_to_json(&g)).unwrap();
        assert_eq!(back, g);
        let lifted: ChainMapMatrix<f64> = map_from_json(&map_to_json(&g)).unwrap();
        assert!(lifted.is_chain_map());
    }
}
