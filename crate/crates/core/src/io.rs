//! JSON encodings of scalars, matrices, vertices, chains and pairing
//! reports. Every writer has a reader that accepts its output unchanged;
//! objects serialize with sorted keys.
//!
//! ```text
//! matrix  [["a", "b"], ["c", "d"]]
//! vertex  {"place": "zero", "level": -2, "offset": [[-3, "1/2"]]}
//! point   {"inf": vertex, "zero": vertex}
//! chain   [{"cell": {"eInf": {"v1": vertex, "v2": vertex},
//!                    "eZero": {"v1": vertex, "v2": vertex}}, "coeff": "3"}]
//! ```
//!
//! Offsets are listed by uniformizer exponent. An edge `{v1, v2}` is read
//! as oriented from `v1` to `v2`; writers emit the canonical orientation.
//! Lower-dimensional cells use `vInf` or `vZero` in place of an edge.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{parse_rational_function, parse_scalar, Field, FieldScalar, LaurentPolynomial, Place, RationalFunction};
use crate::cocycle::PairingReport;
use crate::complex::{Cell, Chain, ProductVertex};
use crate::error::{Error, Result};
use crate::group::Matrix2;
use crate::tree::{TreeEdge, TreeVertex};

fn format_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn matrix_to_json(m: &Matrix2) -> Value {
    json!([[m.a().to_string(), m.b().to_string()], [m.c().to_string(), m.d().to_string()]])
}

/// Reads a matrix; it need not have determinant 1 but must be nonsingular.
pub fn matrix_from_json(v: &Value, field: Field) -> Result<Matrix2> {
    let rows: [[String; 2]; 2] = serde_json::from_value(v.clone()).map_err(format_err)?;
    let p = |s: &str| parse_rational_function(s, field);
    Matrix2::new(p(&rows[0][0])?, p(&rows[0][1])?, p(&rows[1][0])?, p(&rows[1][1])?)
}

pub fn ratfunc_from_json(v: &Value, field: Field) -> Result<RationalFunction> {
    let s = v.as_str().ok_or_else(|| Error::Format(format!("expected a string, got {v}")))?;
    parse_rational_function(s, field)
}

pub fn scalar_from_json(v: &Value, field: Field) -> Result<FieldScalar> {
    match v {
        Value::String(s) => parse_scalar(s, field),
        Value::Number(n) => n
            .as_i64()
            .map(|k| field.from_i64(k))
            .ok_or_else(|| Error::Format(format!("coefficient {n} is not an integer"))),
        _ => Err(Error::Format(format!("expected a scalar, got {v}"))),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    place: Place,
    level: i64,
    #[serde(default)]
    offset: Vec<(i64, Value)>,
}

pub fn vertex_to_json(v: &TreeVertex) -> Value {
    let offset: Vec<Value> = v.offset().terms().map(|(e, c)| json!([e, c.to_string()])).collect();
    json!({"place": v.place(), "level": v.level(), "offset": offset})
}

pub fn vertex_from_json(v: &Value, field: Field) -> Result<TreeVertex> {
    let raw: VertexJson = serde_json::from_value(v.clone()).map_err(format_err)?;
    let mut offset = LaurentPolynomial::zero(field);
    for (e, c) in &raw.offset {
        offset.add_term(*e, scalar_from_json(c, field)?);
    }
    Ok(TreeVertex::new(raw.place, raw.level, offset))
}

pub fn point_to_json(p: &ProductVertex) -> Value {
    json!({"inf": vertex_to_json(p.inf()), "zero": vertex_to_json(p.zero())})
}

pub fn point_from_json(v: &Value, field: Field) -> Result<ProductVertex> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::Format(format!("point lacks '{k}'")));
    ProductVertex::new(vertex_from_json(get("inf")?, field)?, vertex_from_json(get("zero")?, field)?)
}

fn edge_to_json(e: &TreeEdge) -> Value {
    json!({"v1": vertex_to_json(e.lo()), "v2": vertex_to_json(e.hi())})
}

fn edge_from_json(v: &Value, field: Field, at: Place) -> Result<(TreeEdge, i8)> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::Format(format!("edge lacks '{k}'")));
    let (a, b) = (vertex_from_json(get("v1")?, field)?, vertex_from_json(get("v2")?, field)?);
    if a.place() != at || b.place() != at {
        return Err(Error::MixedPlaces(a.place(), b.place()));
    }
    TreeEdge::oriented(&a, &b)
}

pub fn cell_to_json(c: &Cell) -> Value {
    match c {
        Cell::Vertex(p) => json!({"vInf": vertex_to_json(p.inf()), "vZero": vertex_to_json(p.zero())}),
        Cell::EdgeInf { edge, zero } => json!({"eInf": edge_to_json(edge), "vZero": vertex_to_json(zero)}),
        Cell::EdgeZero { inf, edge } => json!({"vInf": vertex_to_json(inf), "eZero": edge_to_json(edge)}),
        Cell::Square { inf, zero } => json!({"eInf": edge_to_json(inf), "eZero": edge_to_json(zero)}),
    }
}

/// Reads a cell with the sign of its stated orientation.
pub fn cell_from_json(v: &Value, field: Field) -> Result<(Cell, i8)> {
    let obj = v.as_object().ok_or_else(|| Error::Format("cell must be an object".into()))?;
    if let Some(k) = obj.keys().find(|k| !["eInf", "vInf", "eZero", "vZero"].contains(&k.as_str())) {
        return Err(Error::Format(format!("unknown cell key '{k}'")));
    }
    let vertex = |k: &str, at: Place| -> Result<TreeVertex> {
        let t = vertex_from_json(&obj[k], field)?;
        if t.place() != at {
            return Err(Error::MixedPlaces(t.place(), at));
        }
        Ok(t)
    };
    let inf = match (obj.get("eInf"), obj.contains_key("vInf")) {
        (Some(e), false) => Ok(edge_from_json(e, field, Place::Infinity)?),
        (None, true) => Err(vertex("vInf", Place::Infinity)?),
        _ => return Err(Error::Format("cell needs exactly one of eInf, vInf".into())),
    };
    let zero = match (obj.get("eZero"), obj.contains_key("vZero")) {
        (Some(e), false) => Ok(edge_from_json(e, field, Place::Zero)?),
        (None, true) => Err(vertex("vZero", Place::Zero)?),
        _ => return Err(Error::Format("cell needs exactly one of eZero, vZero".into())),
    };
    Ok(match (inf, zero) {
        (Ok((e, s1)), Ok((f, s2))) => (Cell::Square { inf: e, zero: f }, s1 * s2),
        (Ok((edge, s)), Err(zero)) => (Cell::EdgeInf { edge, zero }, s),
        (Err(inf), Ok((edge, s))) => (Cell::EdgeZero { inf, edge }, s),
        (Err(inf), Err(zero)) => (Cell::Vertex(ProductVertex::new(inf, zero)?), 1),
    })
}

pub fn chain_to_json(c: &Chain) -> Value {
    Value::Array(c.iter().map(|(cell, a)| json!({"cell": cell_to_json(cell), "coeff": a.to_string()})).collect())
}

pub fn chain_from_json(v: &Value, field: Field) -> Result<Chain> {
    let items = v.as_array().ok_or_else(|| Error::Format("chain must be a list".into()))?;
    let mut out = Chain::zero(field);
    for item in items {
        let cell = item.get("cell").ok_or_else(|| Error::Format("chain entry lacks 'cell'".into()))?;
        let coeff = item.get("coeff").ok_or_else(|| Error::Format("chain entry lacks 'coeff'".into()))?;
        let (cell, sign) = cell_from_json(cell, field)?;
        let a = scalar_from_json(coeff, field)?;
        out.add_cell(cell, if sign > 0 { a } else { -a })?;
    }
    Ok(out)
}

pub fn pairing_to_json(r: &PairingReport) -> Value {
    let matrix: Vec<Vec<String>> = r.matrix.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
    json!({"indices": r.indices, "matrix": matrix, "triangular": r.triangular, "rank": r.rank})
}

/// Reads a report back; warnings are not part of the format.
pub fn pairing_from_json(v: &Value, field: Field) -> Result<PairingReport> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Raw {
        indices: Vec<i64>,
        matrix: Vec<Vec<Value>>,
        triangular: bool,
        rank: usize,
    }
    let raw: Raw = serde_json::from_value(v.clone()).map_err(format_err)?;
    let matrix = raw
        .matrix
        .iter()
        .map(|row| row.iter().map(|x| scalar_from_json(x, field)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(PairingReport { indices: raw.indices, matrix, triangular: raw.triangular, rank: raw.rank, warnings: vec![] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{make_c, square_b, TriangleVariant};

    const Q: Field = Field::Rationals;

    #[test]
    fn matrix_round_trip() {
        let m = crate::group::d_power(Q, 2);
        let j = matrix_to_json(&m);
        assert_eq!(j, json!([["t^2", "0"], ["0", "1/(t^2)"]]));
        assert_eq!(matrix_from_json(&j, Q).unwrap(), m);
        assert!(matrix_from_json(&json!([["1", "1"], ["1", "1"]]), Q).is_err());
    }

    #[test]
    fn vertex_round_trip() {
        let v = TreeVertex::new(Place::Zero, 3, LaurentPolynomial::from_terms(Q, [(-1, Q.from_ratio(1, 2).unwrap())]));
        let j = vertex_to_json(&v);
        assert_eq!(j, json!({"place": "zero", "level": 3, "offset": [[-1, "1/2"]]}));
        assert_eq!(vertex_from_json(&j, Q).unwrap(), v);
        let short = json!({"place": "inf", "level": 0});
        assert_eq!(vertex_from_json(&short, Q).unwrap(), TreeVertex::base(Place::Infinity, Q));
    }

    #[test]
    fn chain_round_trip() {
        let b = square_b(1, TriangleVariant::CornerAtX2n, Q);
        let j = chain_to_json(&b);
        assert_eq!(chain_from_json(&j, Q).unwrap(), b);
        let text = serde_json::to_string(&j).unwrap();
        let again: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&chain_to_json(&chain_from_json(&again, Q).unwrap())).unwrap(), text);
    }

    #[test]
    fn reversed_edges_flip_sign() {
        let c = make_c(2, &Q.from_i64(1), &Q.zero()).to_chain();
        let mut j = chain_to_json(&c);
        let e = j[0]["cell"]["eInf"].as_object_mut().unwrap();
        let v1 = e.remove("v1").unwrap();
        let v2 = e.remove("v2").unwrap();
        e.insert("v1".into(), v2);
        e.insert("v2".into(), v1);
        assert_eq!(chain_from_json(&j, Q).unwrap(), c.scale(&Q.from_i64(-1)));
    }

    #[test]
    fn malformed_cells() {
        assert!(chain_from_json(&json!({"cell": 1}), Q).is_err());
        assert!(chain_from_json(&json!([{"cell": {"eInf": 1}, "coeff": "1"}]), Q).is_err());
        assert!(chain_from_json(&json!([{"cell": {"bogus": 1}, "coeff": "1"}]), Q).is_err());
    }
}
