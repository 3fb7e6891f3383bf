//! Multi-system scoring and per-metric leaderboards.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::confusion::{confusion_from_pairs, ConfusionMatrix};
use crate::error::{EvalError, IdDiff, Result};
use crate::labels::{align, class_distribution, AlignMode, LabeledSet};
use crate::metrics::{all_metrics, AbsentClassPolicy, Metric, MetricOptions, MetricReport};
use crate::schema::LabelSchema;
use crate::weights::WeightScheme;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemEntry {
    pub name: String,
    pub predictions: LabeledSet,
}

impl SystemEntry {
    pub fn new(name: impl Into<String>, predictions: LabeledSet) -> Self {
        Self {
            name: name.into(),
            predictions,
        }
    }
}

/// Descending competition ranking: tied scores share the smallest rank and
/// the next distinct score skips ahead (`1, 2, 2, 4`). Scores are compared
/// exactly.
pub fn rank_column(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut ranks = vec![0; scores.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = if pos > 0 && scores[order[pos - 1]] == scores[i] {
            ranks[order[pos - 1]]
        } else {
            pos + 1
        };
    }
    ranks
}

/// Everything needed to score systems against one gold set.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub schema: LabelSchema,
    pub scheme: WeightScheme,
    pub mode: AlignMode,
    pub metrics: MetricOptions,
}

impl EvalConfig {
    pub fn new(schema: LabelSchema, scheme: WeightScheme) -> Self {
        Self {
            schema,
            scheme,
            mode: AlignMode::Strict,
            metrics: MetricOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dropped {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemRow {
    pub report: MetricReport,
    /// One rank per entry of [`Metric::ALL`].
    pub ranks: [usize; 6],
    /// Ids left out by intersect alignment.
    pub alignment: IdDiff,
}

impl SystemRow {
    pub fn name(&self) -> &str {
        &self.report.system
    }

    pub fn rank(&self, metric: Metric) -> usize {
        self.ranks[metric_index(metric)]
    }
}

fn metric_index(metric: Metric) -> usize {
    Metric::ALL.iter().position(|&m| m == metric).expect("metric is listed")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedTable {
    pub gold: String,
    pub schema: LabelSchema,
    pub scheme: WeightScheme,
    pub mode: AlignMode,
    pub rows: Vec<SystemRow>,
    pub dropped: Vec<Dropped>,
    /// Free-form remarks such as majority-class ties.
    pub notes: Vec<String>,
}

impl RankedTable {
    /// Recomputes every rank column from the full-precision scores.
    pub fn rerank(&mut self) {
        for (j, metric) in Metric::ALL.iter().enumerate() {
            let scores: Vec<f64> = self.rows.iter().map(|r| r.report.value(*metric)).collect();
            for (row, rank) in self.rows.iter_mut().zip(rank_column(&scores)) {
                row.ranks[j] = rank;
            }
        }
    }

    pub fn row(&self, name: &str) -> Option<&SystemRow> {
        self.rows.iter().find(|r| r.name() == name)
    }
}

fn check_gold(gold: &LabeledSet, config: &EvalConfig) -> Result<()> {
    let dist = class_distribution(gold, &config.schema)?;
    if config.metrics.absent == AbsentClassPolicy::Strict {
        if let Some(i) = dist.counts.iter().position(|&n| n == 0) {
            return Err(EvalError::AbsentClass {
                class: dist.classes[i].clone(),
            });
        }
    }
    config.scheme.resolve(&config.schema)?;
    Ok(())
}

fn score_system(gold: &LabeledSet, system: &SystemEntry, config: &EvalConfig) -> Result<SystemRow> {
    let aligned = align(gold, &system.predictions, &config.schema, config.mode)?;
    let cm = confusion_from_pairs(&aligned.gold, &aligned.pred, &config.schema)?;
    let report = all_metrics(&cm, &config.scheme, &config.metrics)?.with_system(&system.name);
    Ok(SystemRow {
        report,
        ranks: [0; 6],
        alignment: aligned.dropped,
    })
}

/// Scores every system and ranks them per metric. Systems that fail to align
/// (or to score) are listed in [`RankedTable::dropped`] with the reason.
pub fn evaluate_all(gold: &LabeledSet, systems: &[SystemEntry], config: &EvalConfig) -> Result<RankedTable> {
    let mut seen = HashSet::new();
    for s in systems {
        if !seen.insert(s.name.as_str()) {
            return Err(EvalError::config(format!("system name `{}` used twice", s.name)));
        }
    }
    check_gold(gold, config)?;

    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    for system in systems {
        match score_system(gold, system, config) {
            Ok(row) => rows.push(row),
            Err(e) => dropped.push(Dropped {
                name: system.name.clone(),
                reason: e.to_string(),
            }),
        }
    }
    if rows.is_empty() {
        return Err(EvalError::EmptyEvaluation);
    }
    let mut table = RankedTable {
        gold: gold.source().to_string(),
        schema: config.schema.clone(),
        scheme: config.scheme.clone(),
        mode: config.mode,
        rows,
        dropped,
        notes: Vec::new(),
    };
    table.rerank();
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalize {
    #[default]
    None,
    Row,
}

impl FromStr for Normalize {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Normalize::None),
            "row" => Ok(Normalize::Row),
            other => Err(EvalError::config(format!(
                "unknown normalization `{other}` (expected none or row)"
            ))),
        }
    }
}

impl fmt::Display for Normalize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalize::None => "none",
            Normalize::Row => "row",
        })
    }
}

/// Confusion matrix of one system, optionally with per-gold-class proportions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionReport {
    pub system: String,
    pub gold: String,
    pub matrix: ConfusionMatrix,
    pub row_normalized: Option<Vec<Vec<f64>>>,
}

pub fn confmat_report(
    gold: &LabeledSet,
    system: &SystemEntry,
    schema: &LabelSchema,
    mode: AlignMode,
    normalize: Normalize,
) -> Result<ConfusionReport> {
    let aligned = align(gold, &system.predictions, schema, mode)?;
    let matrix = confusion_from_pairs(&aligned.gold, &aligned.pred, schema)?;
    Ok(ConfusionReport {
        system: system.name.clone(),
        gold: gold.source().to_string(),
        row_normalized: (normalize == Normalize::Row).then(|| matrix.row_normalized()),
        matrix,
    })
}
