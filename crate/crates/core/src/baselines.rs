//! Reference predictors built from a gold set: the majority-class predictor
//! and one constant predictor per class. They are ordinary [`LabeledSet`]s
//! and go through the same scoring path as submitted systems.

use std::fmt;

use crate::error::{EvalError, Result};
use crate::labels::{class_distribution, LabeledSet};
use crate::schema::LabelSchema;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaselineSpec {
    Majority,
    Constant(String),
}

impl fmt::Display for BaselineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaselineSpec::Majority => f.write_str("majority class"),
            BaselineSpec::Constant(class) => write!(f, "all {class}"),
        }
    }
}

/// Outcome of [`majority_predictor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorityChoice {
    pub class: String,
    /// Every class sharing the top count, in schema order. Length > 1 means
    /// the first one was picked.
    pub tied: Vec<String>,
    pub predictions: LabeledSet,
}

impl MajorityChoice {
    pub fn is_tie(&self) -> bool {
        self.tied.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Baseline {
    pub spec: BaselineSpec,
    pub predictions: LabeledSet,
    /// Classes tied for the majority; empty for constant baselines.
    pub tied: Vec<String>,
}

impl Baseline {
    pub fn name(&self) -> String {
        self.spec.to_string()
    }
}

/// Predicts `class` for every gold id.
pub fn constant_predictor(gold: &LabeledSet, class: &str, schema: &LabelSchema) -> Result<LabeledSet> {
    let idx = schema
        .index_of(class)
        .ok_or_else(|| EvalError::config(format!("class `{class}` is not in the schema [{schema}]")))?;
    let class = &schema.classes()[idx];
    Ok(gold.relabel_all(format!("all {class}"), class))
}

/// Constant predictor of the most frequent gold class. Ties go to the class
/// listed first in the schema.
pub fn majority_predictor(gold: &LabeledSet, schema: &LabelSchema) -> Result<MajorityChoice> {
    let dist = class_distribution(gold, schema)?;
    let top = *dist.counts.iter().max().expect("schema has at least two classes");
    let tied: Vec<String> = dist
        .classes
        .iter()
        .zip(&dist.counts)
        .filter(|(_, &n)| n == top)
        .map(|(c, _)| c.clone())
        .collect();
    let class = tied[0].clone();
    Ok(MajorityChoice {
        predictions: gold.relabel_all("majority class", &class),
        class,
        tied,
    })
}

/// Majority predictor followed by one constant predictor per class, in schema order.
pub fn baseline_suite(gold: &LabeledSet, schema: &LabelSchema) -> Result<Vec<Baseline>> {
    let majority = majority_predictor(gold, schema)?;
    let mut suite = vec![Baseline {
        spec: BaselineSpec::Majority,
        predictions: majority.predictions,
        tied: if majority.tied.len() > 1 {
            majority.tied
        } else {
            Vec::new()
        },
    }];
    for class in schema.classes() {
        suite.push(Baseline {
            spec: BaselineSpec::Constant(class.clone()),
            predictions: constant_predictor(gold, class, schema)?,
            tied: Vec::new(),
        });
    }
    Ok(suite)
}
