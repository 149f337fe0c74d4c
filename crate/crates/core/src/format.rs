//! JSON encodings. Every document carries `"format": "odlin/1"`; rationals
//! are strings in lowest terms, keys come out sorted.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::datavec::{DataVector, Instance};
use crate::error::{Error, Result};
use crate::linpn::Vas;
use crate::semieq::SemiEq;
use crate::solvers::{Term, Verdict, Witness};
use crate::{LinSys, Rat, RatMat, RatVec};

pub const FORMAT: &str = "odlin/1";

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

/// Parses a JSON document and checks the optional format tag.
pub fn parse(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text)?;
    match v.get("format") {
        None => Ok(v),
        Some(Value::String(s)) if s == FORMAT => Ok(v),
        Some(other) => Err(bad(format!("unsupported format {other}"))),
    }
}

/// Pretty-printed, newline-terminated output with the format tag added.
pub fn render(mut v: Value) -> String {
    if let Value::Object(m) = &mut v {
        m.insert("format".into(), Value::String(FORMAT.into()));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

/// A rational from a string such as `"-3/4"` or from a JSON integer.
pub fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => Rat::from_str(s.trim()).map_err(|e| bad(format!("bad rational \"{s}\": {e}"))),
        Value::Number(n) => n.as_i64().map(|i| Rat::from_integer(i.into())).ok_or_else(|| bad(format!("{n} is not an integer"))),
        other => Err(bad(format!("expected a rational, found {other}"))),
    }
}

pub fn rat_to_value(r: &Rat) -> Value {
    Value::String(r.to_string())
}

fn usize_from(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().and_then(|n| n.to_usize()).ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn int_from(v: &Value) -> Result<i64> {
    let r = rat_from_value(v)?;
    if !r.is_integer() {
        return Err(bad(format!("{r} is not an integer")));
    }
    r.to_integer().to_i64().ok_or_else(|| bad(format!("{r} does not fit in 64 bits")))
}

pub fn vec_from_value(v: &Value) -> Result<RatVec> {
    array(v, "vector")?.iter().map(rat_from_value).collect()
}

pub fn vec_to_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_value).collect())
}

fn ints_from(v: &Value) -> Result<Vec<i64>> {
    array(v, "vector")?.iter().map(int_from).collect()
}

/// A matrix given as a list of rows.
pub fn matrix_from_value(v: &Value) -> Result<RatMat> {
    let rows: Vec<RatVec> = array(v, "matrix")?.iter().map(vec_from_value).collect::<Result<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    RatMat::from_rows(rows, cols)
}

pub fn matrix_to_value(m: &RatMat) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vec_to_value(r)).collect())
}

fn data_vector_from(v: &Value, dimension: usize) -> Result<DataVector> {
    let points = array(field(v, "points")?, "points")?
        .iter()
        .map(|p| Ok((rat_from_value(field(p, "datum")?)?, vec_from_value(field(p, "vec")?)?)))
        .collect::<Result<Vec<_>>>()?;
    DataVector::new(dimension, points)
}

fn data_vector_to(v: &DataVector) -> Value {
    let points: Vec<Value> = v.points().iter().map(|(d, x)| json!({"datum": rat_to_value(d), "vec": vec_to_value(x)})).collect();
    json!({ "points": points })
}

pub fn instance_from_value(v: &Value) -> Result<Instance> {
    let dimension = usize_from(field(v, "dimension")?, "dimension")?;
    let target = data_vector_from(field(v, "target")?, dimension)?;
    let generators = array(field(v, "vectors")?, "vectors")?
        .iter()
        .map(|g| data_vector_from(g, dimension))
        .collect::<Result<Vec<_>>>()?;
    Instance::new(dimension, target, generators)
}

pub fn instance_to_value(inst: &Instance) -> Value {
    json!({
        "dimension": inst.dimension,
        "target": data_vector_to(&inst.target),
        "vectors": inst.generators.iter().map(data_vector_to).collect::<Vec<_>>(),
    })
}

pub fn vas_from_value(v: &Value) -> Result<Vas> {
    let dimension = usize_from(field(v, "dimension")?, "dimension")?;
    let actions = array(field(v, "actions")?, "actions")?.iter().map(ints_from).collect::<Result<Vec<_>>>()?;
    Vas::new(dimension, actions, ints_from(field(v, "init")?)?, ints_from(field(v, "final")?)?)
}

pub fn vas_to_value(vas: &Vas) -> Value {
    json!({
        "dimension": vas.dimension,
        "actions": vas.actions,
        "init": vas.init,
        "final": vas.final_,
    })
}

pub fn semieq_from_value(v: &Value) -> Result<SemiEq<Rat>> {
    let a = matrix_from_value(field(v, "A")?)?;
    let b = vec_from_value(field(v, "b")?)?;
    let implications = array(field(v, "implications")?, "implications")?
        .iter()
        .map(|p| match array(p, "implication")?.as_slice() {
            [i, j] => Ok((usize_from(i, "variable")?, usize_from(j, "variable")?)),
            _ => Err(bad("an implication is a pair [i, j]")),
        })
        .collect::<Result<BTreeSet<_>>>()?;
    SemiEq::new(LinSys::new(a, b)?, implications)
}

pub fn semieq_to_value(s: &SemiEq<Rat>) -> Value {
    json!({
        "A": matrix_to_value(&s.system.matrix),
        "b": vec_to_value(&s.system.rhs),
        "implications": s.implications.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
    })
}

pub fn histogram_from_value(v: &Value) -> Result<RatMat> {
    matrix_from_value(field(v, "matrix")?)
}

pub fn family_from_value(v: &Value) -> Result<Vec<RatMat>> {
    array(field(v, "family")?, "family")?.iter().map(matrix_from_value).collect()
}

fn witness_to_value(w: &Witness) -> Value {
    Value::Array(
        w.terms
            .iter()
            .map(|t| json!({"coeff": rat_to_value(&t.coeff), "vector": t.vector, "placement": t.placement}))
            .collect(),
    )
}

pub fn verdict_to_value(v: &Verdict) -> Value {
    let mut m = Map::new();
    m.insert("status".into(), Value::String(v.status.as_str().into()));
    if let Some(w) = &v.witness {
        m.insert("witness".into(), witness_to_value(w));
        m.insert("slots".into(), json!(w.slots));
    }
    if let Some(e) = &v.evidence {
        m.insert("evidence".into(), vec_to_value(e));
    }
    Value::Object(m)
}

/// Reads the witness part of a verdict document.
pub fn witness_from_value(v: &Value) -> Result<Witness> {
    let slots = usize_from(field(v, "slots")?, "slots")?;
    let terms = array(field(v, "witness")?, "witness")?
        .iter()
        .map(|t| {
            let placement = array(field(t, "placement")?, "placement")?
                .iter()
                .map(|p| usize_from(p, "slot"))
                .collect::<Result<Vec<_>>>()?;
            Ok(Term {
                coeff: rat_from_value(field(t, "coeff")?)?,
                vector: usize_from(field(t, "vector")?, "vector")?,
                placement,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Witness { terms, slots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::Status;

    #[test]
    fn rationals_round_trip_in_lowest_terms() {
        let r = rat_from_value(&json!("6/-4")).unwrap();
        assert_eq!(rat_to_value(&r), json!("-3/2"));
        assert_eq!(rat_to_value(&rat_from_value(&json!(7)).unwrap()), json!("7"));
        assert!(rat_from_value(&json!("1/0")).is_err());
        assert!(rat_from_value(&json!(1.5)).is_err());
    }

    #[test]
    fn instance_round_trip() {
        let text = r#"{"dimension": 1, "target": {"points": [{"datum": "1/2", "vec": ["1"]}]},
            "vectors": [{"points": [{"datum": "0", "vec": ["1"]}]}]}"#;
        let inst = instance_from_value(&parse(text).unwrap()).unwrap();
        let again = instance_from_value(&parse(&render(instance_to_value(&inst))).unwrap()).unwrap();
        assert_eq!(inst, again);
        let unordered = r#"{"dimension": 1, "target": {"points": [{"datum": "2", "vec": ["1"]}, {"datum": "1", "vec": ["1"]}]},
            "vectors": [{"points": [{"datum": "0", "vec": ["1"]}]}]}"#;
        assert!(instance_from_value(&parse(unordered).unwrap()).is_err());
    }

    #[test]
    fn rendering_sorts_keys() {
        let out = render(vas_to_value(&Vas::new(1, vec![vec![1]], vec![0], vec![1]).unwrap()));
        let keys: Vec<usize> = ["actions", "dimension", "final", "format", "init"].iter().map(|k| out.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn verdict_and_witness() {
        let w = Witness { terms: vec![Term { coeff: Rat::new((-1).into(), 2.into()), vector: 0, placement: vec![1] }], slots: 2 };
        let v = Verdict::solvable(w.clone());
        let value = parse(&render(verdict_to_value(&v))).unwrap();
        assert_eq!(value["status"], json!("solvable"));
        assert_eq!(witness_from_value(&value).unwrap(), w);
        assert_eq!(verdict_to_value(&Verdict { status: Status::Unknown, witness: None, evidence: None }), json!({"status": "unknown"}));
    }

    #[test]
    fn malformed_json_reports_position() {
        let e = parse("{\"dimension\": }").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
        assert!(parse(r#"{"format": "other/2"}"#).is_err());
    }

    #[test]
    fn semieq_round_trip() {
        let text = r#"{"A": [["1", "-1"]], "b": ["0"], "implications": [[0, 1]]}"#;
        let s = semieq_from_value(&parse(text).unwrap()).unwrap();
        assert_eq!(semieq_from_value(&semieq_to_value(&s)).unwrap(), s);
    }
}
