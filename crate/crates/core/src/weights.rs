//! Per-class importance weights and the registry of named schemes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{EvalError, Result};
use crate::schema::{canonicalize, LabelSchema};

/// Allowed deviation of the weight total from 1.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Named class weights. Must cover exactly the classes of the schema it is
/// used with, be non-negative and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightScheme {
    name: String,
    weights: BTreeMap<String, f64>,
}

impl WeightScheme {
    pub fn new<I, S>(name: impl Into<String>, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let name = name.into();
        let mut map = BTreeMap::new();
        for (class, w) in weights {
            let class = canonicalize(class.as_ref());
            if !w.is_finite() || w < 0.0 {
                return Err(EvalError::config(format!(
                    "scheme `{name}`: weight for `{class}` must be a non-negative number, got {w}"
                )));
            }
            if map.insert(class.clone(), w).is_some() {
                return Err(EvalError::config(format!(
                    "scheme `{name}`: class `{class}` weighted twice"
                )));
            }
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(EvalError::config(format!(
                "scheme `{name}`: weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { name, weights: map })
    }

    /// Parses inline weights of the form `support=0.4,deny=0.4,...`.
    pub fn parse_inline(spec: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let (class, value) = item
                .split_once('=')
                .ok_or_else(|| EvalError::config(format!("weight `{item}` is not of the form class=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| EvalError::config(format!("weight `{item}` has a non-numeric value")))?;
            pairs.push((class.to_string(), value));
        }
        Self::new("custom", pairs)
    }

    /// Equal weight 1/K for every class of `schema`.
    pub fn uniform(schema: &LabelSchema) -> Self {
        let w = 1.0 / schema.len() as f64;
        Self {
            name: "uniform".into(),
            weights: schema.classes().iter().map(|c| (c.clone(), w)).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn get(&self, class: &str) -> Option<f64> {
        self.weights.get(&canonicalize(class)).copied()
    }

    /// Weights in schema order, after checking the class sets coincide.
    pub fn resolve(&self, schema: &LabelSchema) -> Result<Vec<f64>> {
        let missing: Vec<&str> = schema
            .classes()
            .iter()
            .filter(|c| !self.weights.contains_key(*c))
            .map(String::as_str)
            .collect();
        let extra: Vec<&str> = self
            .weights
            .keys()
            .filter(|c| schema.index_of(c).is_none())
            .map(String::as_str)
            .collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(EvalError::config(format!(
                "scheme `{}` does not match schema [{}]: missing [{}], unexpected [{}]",
                self.name,
                schema,
                missing.join(", "),
                extra.join(", ")
            )));
        }
        Ok(schema.classes().iter().map(|c| self.weights[c]).collect())
    }
}

/// The built-in scheme names.
pub const REGISTERED_SCHEMES: [&str; 4] = ["paper", "mama-edha", "upv", "uniform"];

/// Looks up a built-in scheme. The fixed-vector schemes are defined over
/// the support/deny/query/comment inventory; `uniform` adapts to any schema.
pub fn registered_scheme(name: &str, schema: &LabelSchema) -> Result<WeightScheme> {
    let four = |s: f64, d: f64, q: f64, c: f64| {
        WeightScheme::new(name, [("support", s), ("deny", d), ("query", q), ("comment", c)])
    };
    let scheme = match name {
        "paper" => four(0.40, 0.40, 0.15, 0.05)?,
        "mama-edha" => four(0.157, 0.396, 0.399, 0.048)?,
        "upv" => four(0.2, 0.35, 0.35, 0.1)?,
        "uniform" => WeightScheme::uniform(schema),
        other => {
            return Err(EvalError::config(format!(
                "unknown weight scheme `{other}` (expected one of {})",
                REGISTERED_SCHEMES.join(", ")
            )))
        }
    };
    scheme.resolve(schema)?;
    Ok(scheme)
}
