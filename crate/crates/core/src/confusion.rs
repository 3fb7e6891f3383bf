//! Confusion matrices: rows are gold classes, columns are predicted classes.

use serde::Serialize;

use crate::error::{EvalError, Result};
use crate::schema::LabelSchema;

/// Per-class outcome counts derived from a confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    schema: LabelSchema,
    counts: Vec<Vec<u64>>,
    n: u64,
}

impl ConfusionMatrix {
    /// Builds a matrix from an explicit count grid (`counts[gold][pred]`).
    pub fn from_counts(schema: LabelSchema, counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = schema.len();
        if counts.len() != k || counts.iter().any(|row| row.len() != k) {
            return Err(EvalError::config(format!(
                "count grid must be {k}x{k} to match the schema"
            )));
        }
        let n = counts.iter().flatten().sum();
        Ok(Self { schema, counts, n })
    }

    pub fn schema(&self) -> &LabelSchema {
        &self.schema
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn num_classes(&self) -> usize {
        self.schema.len()
    }

    pub fn trace(&self) -> u64 {
        (0..self.num_classes()).map(|i| self.counts[i][i]).sum()
    }

    /// Number of gold instances of class `c`.
    pub fn row_sum(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }

    /// Number of instances predicted as class `c`.
    pub fn col_sum(&self, c: usize) -> u64 {
        self.counts.iter().map(|row| row[c]).sum()
    }

    pub fn class_counts(&self, c: usize) -> ClassCounts {
        let tp = self.counts[c][c];
        let fp = self.col_sum(c) - tp;
        let fn_ = self.row_sum(c) - tp;
        ClassCounts {
            tp,
            fp,
            fn_,
            tn: self.n - tp - fp - fn_,
        }
    }

    /// Row-normalized proportions. A row with no gold instances stays all zero.
    pub fn row_normalized(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let total: u64 = row.iter().sum();
                row.iter()
                    .map(|&v| if total == 0 { 0.0 } else { v as f64 / total as f64 })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn ensure_nonempty(&self) -> Result<()> {
        if self.n == 0 {
            Err(EvalError::Degenerate("confusion matrix holds no instances".into()))
        } else {
            Ok(())
        }
    }
}

/// Counts (gold, predicted) label pairs into a matrix over `schema`.
pub fn confusion_from_pairs<G, P>(gold: &[G], pred: &[P], schema: &LabelSchema) -> Result<ConfusionMatrix>
where
    G: AsRef<str>,
    P: AsRef<str>,
{
    if gold.len() != pred.len() {
        return Err(EvalError::LengthMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    if gold.is_empty() {
        return Err(EvalError::Degenerate("no label pairs to count".into()));
    }
    let k = schema.len();
    let mut counts = vec![vec![0u64; k]; k];
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        let gi = schema.require_index(g.as_ref(), || format!("gold position {i}"))?;
        let pi = schema.require_index(p.as_ref(), || format!("prediction position {i}"))?;
        counts[gi][pi] += 1;
    }
    ConfusionMatrix::from_counts(schema.clone(), counts)
}

/// Serializable view of a matrix used in reports.
#[derive(Debug, Clone, Serialize)]
pub struct ConfusionView {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    pub row_normalized: Option<Vec<Vec<f64>>>,
}

impl ConfusionView {
    pub fn new(cm: &ConfusionMatrix, with_proportions: bool) -> Self {
        Self {
            classes: cm.schema().classes().to_vec(),
            counts: cm.counts().to_vec(),
            row_normalized: with_proportions.then(|| cm.row_normalized()),
        }
    }
}
