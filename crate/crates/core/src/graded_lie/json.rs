//! JSON shapes:
//!
//! - generator: `{"name": "x", "sphere_dim": 3}`
//! - tree: a generator name, or a two-element array `[left, right]`
//! - element: `[{"tree": …, "numerator": "3", "denominator": "2"}, …]`
//!
//! Numerators and denominators are decimal strings so that arbitrary
//! precision survives; plain JSON integers are accepted on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use super::{BracketTree, LieAlgebra, LieElement, LieError};

fn json_err(msg: impl Into<String>) -> LieError {
    LieError::Json(msg.into())
}

fn big_int(v: &Value, field: &str) -> Result<BigInt, LieError> {
    match v {
        Value::String(s) => s
            .parse()
            .map_err(|_| json_err(format!("{field}: {s:?} is not an integer"))),
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
        Value::Number(n) if n.is_u64() => Ok(BigInt::from(n.as_u64().unwrap())),
        _ => Err(json_err(format!("{field}: expected an integer"))),
    }
}

impl LieAlgebra {
    pub fn generators_to_json(&self) -> Value {
        serde_json::to_value(&self.generators).expect("generators serialize")
    }

    pub fn from_json(v: &Value) -> Result<Self, LieError> {
        let gens = serde_json::from_value(v.clone()).map_err(|e| json_err(e.to_string()))?;
        Self::new(gens)
    }

    pub fn tree_to_json(&self, t: &BracketTree) -> Value {
        match t.children() {
            None => Value::String(self.generators[t.generator().unwrap()].name.clone()),
            Some((l, r)) => json!([self.tree_to_json(l), self.tree_to_json(r)]),
        }
    }

    pub fn tree_from_json(&self, v: &Value) -> Result<BracketTree, LieError> {
        match v {
            Value::String(name) => self.leaf_named(name),
            Value::Array(items) if items.len() == 2 => Ok(BracketTree::bracket(
                &self.tree_from_json(&items[0])?,
                &self.tree_from_json(&items[1])?,
            )),
            _ => Err(json_err("a tree is a generator name or a two-element array")),
        }
    }

    pub fn element_to_json(&self, e: &LieElement) -> Value {
        Value::Array(
            e.terms()
                .map(|(t, c)| {
                    json!({
                        "tree": self.tree_to_json(t),
                        "numerator": c.numer().to_string(),
                        "denominator": c.denom().to_string(),
                    })
                })
                .collect(),
        )
    }

    pub fn element_from_json(&self, v: &Value) -> Result<LieElement, LieError> {
        let items = v
            .as_array()
            .ok_or_else(|| json_err("an element is an array of terms"))?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let tree = self.tree_from_json(item.get("tree").ok_or_else(|| json_err("term without tree"))?)?;
            let num = big_int(item.get("numerator").unwrap_or(&Value::Null), "numerator")?;
            let den = match item.get("denominator") {
                None => BigInt::from(1),
                Some(d) => big_int(d, "denominator")?,
            };
            if den.is_zero() {
                return Err(json_err("zero denominator"));
            }
            terms.push((tree, BigRational::new(num, den)));
        }
        LieElement::from_terms(terms)
    }
}
