//! JSON documents for capacities, functions and point maps.
//!
//! Capacity: `{"space": ["a","b"], "values": ["0", "3/10", "1/2", "1"]}`,
//! where entry `i` is the value on the subset whose bit `j` marks point `j`.
//! Function: `{"space": [...], "values": {"a": "2", "b": "1"}}`.
//! Map: `{"domain": [...], "codomain": [...], "map": {"a": "c", ...}}`.
//!
//! Values are `"p/q"` or exact decimals; bare JSON numbers are accepted on
//! input and read through their decimal text.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::capacity::Capacity;
use crate::choquet::RealFunction;
use crate::diagram::{Diagram, DiagramSpec};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::space::{FiniteSpace, PointMap};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityDoc {
    pub space: Vec<String>,
    pub values: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub space: Vec<String>,
    pub values: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
    pub map: BTreeMap<String, String>,
}

fn value_to_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::InvalidRational(other.to_string())),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn capacity_from_doc(doc: &CapacityDoc) -> Result<Capacity> {
    let space = FiniteSpace::new(doc.space.iter().cloned())?;
    let values = doc
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            value_to_rational(v).map_err(|_| Error::Format(format!("values[{i}]: not a rational: {v}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Capacity::new(space, values)
}

pub fn capacity_to_doc(c: &Capacity) -> CapacityDoc {
    CapacityDoc {
        space: c.space().points().to_vec(),
        values: c.values().iter().map(|v| Value::String(format_rational(v))).collect(),
    }
}

pub fn parse_capacity(text: &str) -> Result<Capacity> {
    capacity_from_doc(&from_json(text)?)
}

pub fn capacity_json(c: &Capacity) -> Value {
    serde_json::to_value(capacity_to_doc(c)).expect("serializable")
}

pub fn function_from_doc(doc: &FunctionDoc) -> Result<RealFunction> {
    let space = FiniteSpace::new(doc.space.iter().cloned())?;
    let table = doc
        .values
        .iter()
        .map(|(k, v)| {
            let r = value_to_rational(v)
                .map_err(|_| Error::Format(format!("values.{k}: not a rational: {v}")))?;
            Ok((k.clone(), r))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    RealFunction::from_labels(space, &table)
}

pub fn parse_function(text: &str) -> Result<RealFunction> {
    function_from_doc(&from_json(text)?)
}

pub fn function_json(f: &RealFunction) -> Value {
    let values = f
        .space()
        .points()
        .iter()
        .zip(f.values())
        .map(|(p, v)| (p.clone(), Value::String(format_rational(v))))
        .collect::<serde_json::Map<_, _>>();
    serde_json::json!({"space": f.space().points(), "values": values})
}

pub fn map_from_doc(doc: &MapDoc) -> Result<PointMap> {
    let domain = FiniteSpace::new(doc.domain.iter().cloned())?;
    let codomain = FiniteSpace::new(doc.codomain.iter().cloned())?;
    PointMap::from_labels(domain, codomain, &doc.map)
}

pub fn parse_map(text: &str) -> Result<PointMap> {
    map_from_doc(&from_json(text)?)
}

pub fn map_json(m: &PointMap) -> Value {
    serde_json::json!({
        "domain": m.domain().points(),
        "codomain": m.codomain().points(),
        "map": m.to_labels(),
    })
}

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let spec: DiagramSpec = from_json(text)?;
    Diagram::from_spec(&spec)
}

pub fn diagram_json(d: &Diagram) -> Value {
    serde_json::to_value(d.to_spec()).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_the_documented_capacity() {
        let c = parse_capacity(r#"{"space": ["a","b"], "values": ["0", "3/10", "1/2", "1"]}"#).unwrap();
        assert_eq!(c.values(), &[int(0), ratio(3, 10), ratio(1, 2), int(1)]);
        let c = parse_capacity(r#"{"space": ["a","b"], "values": [0, 0.3, "0.5", 1]}"#).unwrap();
        assert_eq!(c.value(crate::Subset(1)), &ratio(3, 10));
        assert_eq!(capacity_json(&c)["values"][1], "3/10");
    }

    #[test]
    fn capacity_errors() {
        assert!(matches!(parse_capacity("{"), Err(Error::Format(_))));
        assert!(matches!(
            parse_capacity(r#"{"space": ["a"], "values": ["0", "x"]}"#),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            parse_capacity(r#"{"space": ["a"], "values": ["0"]}"#),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn function_and_map_documents() {
        let f = parse_function(r#"{"space": ["a","b"], "values": {"a": "2", "b": "-1/2"}}"#).unwrap();
        assert_eq!(f.values(), &[int(2), ratio(-1, 2)]);
        assert_eq!(parse_function(&function_json(&f).to_string()).unwrap(), f);
        assert!(parse_function(r#"{"space": ["a","b"], "values": {"a": "2"}}"#).is_err());
        let m = parse_map(r#"{"domain": ["a","b"], "codomain": ["c"], "map": {"a": "c", "b": "c"}}"#).unwrap();
        assert_eq!(m.images(), &[0, 0]);
        assert_eq!(parse_map(&map_json(&m).to_string()).unwrap(), m);
    }
}
