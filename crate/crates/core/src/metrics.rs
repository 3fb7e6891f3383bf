//! Metric formulas over a [`ConfusionMatrix`].
//!
//! Every metric is derived from per-class precision `P_c`, recall `R_c` and
//! false-positive rate `FPR_c`. Zero denominators resolve to zero: a class
//! that is never predicted has `P_c = 0`, a class with no negatives has
//! `FPR_c = 0`, and `Fβ_c = 0` when `β²·P_c + R_c = 0`. A class with no gold
//! instances has undefined recall and is handled by [`AbsentClassPolicy`].
//!
//! All arithmetic is done in `f64`; rounding is left to the renderers.

use serde::Serialize;

use crate::confusion::ConfusionMatrix;
use crate::error::{EvalError, Result};
use crate::weights::WeightScheme;

/// What to do with a schema class that has no gold instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AbsentClassPolicy {
    /// Refuse to score.
    #[default]
    Strict,
    /// Score the class with zero recall and keep it in every average.
    Lenient,
}

/// The β values behind the `wF1`/`wF2` columns.
pub const DEFAULT_BETAS: [f64; 2] = [1.0, 2.0];

/// `(1+β²)·P·R / (β²·P + R)`, zero when the denominator vanishes.
pub fn fbeta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / denom
    }
}

fn ratio(num: u64, denom: u64) -> f64 {
    if denom == 0 {
        0.0
    } else {
        num as f64 / denom as f64
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(EvalError::config(format!("β must be a positive number, got {beta}")))
    }
}

fn precision(cm: &ConfusionMatrix, c: usize) -> f64 {
    let k = cm.class_counts(c);
    ratio(k.tp, k.tp + k.fp)
}

fn recall(cm: &ConfusionMatrix, c: usize, policy: AbsentClassPolicy) -> Result<f64> {
    let k = cm.class_counts(c);
    if k.tp + k.fn_ == 0 && policy == AbsentClassPolicy::Strict {
        return Err(EvalError::AbsentClass {
            class: cm.schema().classes()[c].clone(),
        });
    }
    Ok(ratio(k.tp, k.tp + k.fn_))
}

fn false_positive_rate(cm: &ConfusionMatrix, c: usize) -> f64 {
    let k = cm.class_counts(c);
    ratio(k.fp, k.tn + k.fp)
}

fn recalls(cm: &ConfusionMatrix, policy: AbsentClassPolicy) -> Result<Vec<f64>> {
    (0..cm.num_classes()).map(|c| recall(cm, c, policy)).collect()
}

fn per_class_fbeta(cm: &ConfusionMatrix, beta: f64, policy: AbsentClassPolicy) -> Result<Vec<f64>> {
    check_beta(beta)?;
    (0..cm.num_classes())
        .map(|c| Ok(fbeta(precision(cm, c), recall(cm, c, policy)?, beta)))
        .collect()
}

fn per_class_auc(cm: &ConfusionMatrix, policy: AbsentClassPolicy) -> Result<Vec<f64>> {
    (0..cm.num_classes())
        .map(|c| Ok(discrete_auc(recall(cm, c, policy)?, false_positive_rate(cm, c))))
        .collect()
}

/// Area under the ROC path (0,0) → (fpr, recall) → (1,1).
pub fn discrete_auc(recall: f64, fpr: f64) -> f64 {
    (1.0 + recall - fpr) / 2.0
}

/// Fraction of instances on the diagonal.
pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    cm.ensure_nonempty()?;
    Ok(cm.trace() as f64 / cm.n() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FBetaScore {
    pub beta: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRate {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub fpr: f64,
    pub fbeta: Vec<FBetaScore>,
}

impl ClassRate {
    pub fn fbeta(&self, beta: f64) -> Option<f64> {
        self.fbeta.iter().find(|f| f.beta == beta).map(|f| f.value)
    }
}

/// Per-class precision, recall, FPR and Fβ for each requested β.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ClassRates {
    pub classes: Vec<ClassRate>,
}

impl ClassRates {
    pub fn get(&self, class: &str) -> Option<&ClassRate> {
        let class = crate::schema::canonicalize(class);
        self.classes.iter().find(|r| r.class == class)
    }
}

pub fn class_rates(cm: &ConfusionMatrix, betas: &[f64], policy: AbsentClassPolicy) -> Result<ClassRates> {
    cm.ensure_nonempty()?;
    for &b in betas {
        check_beta(b)?;
    }
    let classes = cm
        .schema()
        .classes()
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let p = precision(cm, c);
            let r = recall(cm, c, policy)?;
            Ok(ClassRate {
                class: name.clone(),
                precision: p,
                recall: r,
                fpr: false_positive_rate(cm, c),
                fbeta: betas
                    .iter()
                    .map(|&beta| FBetaScore {
                        beta,
                        value: fbeta(p, r, beta),
                    })
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassRates { classes })
}

/// Unweighted mean of the per-class Fβ scores.
pub fn macro_fbeta(cm: &ConfusionMatrix, beta: f64, policy: AbsentClassPolicy) -> Result<f64> {
    cm.ensure_nonempty()?;
    let scores = per_class_fbeta(cm, beta, policy)?;
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// Geometric mean of the per-class recalls; exactly zero if any recall is zero.
pub fn gmr(cm: &ConfusionMatrix, policy: AbsentClassPolicy) -> Result<f64> {
    cm.ensure_nonempty()?;
    let recalls = recalls(cm, policy)?;
    if recalls.contains(&0.0) {
        return Ok(0.0);
    }
    let product: f64 = recalls.iter().product();
    Ok(product.powf(1.0 / recalls.len() as f64))
}

/// Single-operating-point AUC of one class.
pub fn auc_class(cm: &ConfusionMatrix, class: &str, policy: AbsentClassPolicy) -> Result<f64> {
    cm.ensure_nonempty()?;
    let c = cm
        .schema()
        .index_of(class)
        .ok_or_else(|| EvalError::config(format!("class `{class}` is not in the schema [{}]", cm.schema())))?;
    Ok(discrete_auc(recall(cm, c, policy)?, false_positive_rate(cm, c)))
}

fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    // Equal weights reduce to the arithmetic mean, computed the same way as
    // the macro average so the two rank identically.
    if weights.windows(2).all(|w| w[0] == w[1]) {
        return values.iter().sum::<f64>() / values.len() as f64;
    }
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

/// `Σ_c w_c · AUC_c`.
pub fn weighted_auc(cm: &ConfusionMatrix, scheme: &WeightScheme, policy: AbsentClassPolicy) -> Result<f64> {
    cm.ensure_nonempty()?;
    let w = scheme.resolve(cm.schema())?;
    Ok(weighted_sum(&w, &per_class_auc(cm, policy)?))
}

/// `Σ_c w_c · Fβ_c`.
pub fn weighted_fbeta(
    cm: &ConfusionMatrix,
    scheme: &WeightScheme,
    beta: f64,
    policy: AbsentClassPolicy,
) -> Result<f64> {
    cm.ensure_nonempty()?;
    let w = scheme.resolve(cm.schema())?;
    Ok(weighted_sum(&w, &per_class_fbeta(cm, beta, policy)?))
}

/// Options shared by report-level scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricOptions {
    /// Extra β values reported per class and as macro/weighted scores.
    /// β = 1 and β = 2 are always computed for the fixed columns.
    pub betas: Vec<f64>,
    pub absent: AbsentClassPolicy,
}

impl Default for MetricOptions {
    fn default() -> Self {
        Self {
            betas: DEFAULT_BETAS.to_vec(),
            absent: AbsentClassPolicy::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaScores {
    pub beta: f64,
    pub macro_fbeta: f64,
    pub weighted_fbeta: f64,
}

/// The six table metrics, per-class rates and the scores for every requested β.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub system: String,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub gmr: f64,
    pub wauc: f64,
    pub wf1: f64,
    pub wf2: f64,
    pub per_class: ClassRates,
    pub by_beta: Vec<BetaScores>,
    pub scheme: WeightScheme,
    pub betas: Vec<f64>,
    pub policy: AbsentClassPolicy,
    pub confusion: ConfusionMatrix,
}

impl MetricReport {
    pub fn value(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Accuracy => self.accuracy,
            Metric::MacroF1 => self.macro_f1,
            Metric::Gmr => self.gmr,
            Metric::WeightedAuc => self.wauc,
            Metric::WeightedF1 => self.wf1,
            Metric::WeightedF2 => self.wf2,
        }
    }

    pub fn with_system(mut self, name: impl Into<String>) -> Self {
        self.system = name.into();
        self
    }
}

/// The fixed table columns, in display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Accuracy,
    MacroF1,
    Gmr,
    WeightedAuc,
    WeightedF1,
    WeightedF2,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Accuracy,
        Metric::MacroF1,
        Metric::Gmr,
        Metric::WeightedAuc,
        Metric::WeightedF1,
        Metric::WeightedF2,
    ];

    /// Machine-readable key used in json and csv.
    pub fn key(self) -> &'static str {
        match self {
            Metric::Accuracy => "acc",
            Metric::MacroF1 => "macro_f1",
            Metric::Gmr => "gmr",
            Metric::WeightedAuc => "wauc",
            Metric::WeightedF1 => "wf1",
            Metric::WeightedF2 => "wf2",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::Accuracy => "ACC",
            Metric::MacroF1 => "macro-F1",
            Metric::Gmr => "GMR",
            Metric::WeightedAuc => "wAUC",
            Metric::WeightedF1 => "wF1",
            Metric::WeightedF2 => "wF2",
        }
    }
}

pub fn all_metrics(cm: &ConfusionMatrix, scheme: &WeightScheme, options: &MetricOptions) -> Result<MetricReport> {
    let policy = options.absent;
    let mut betas: Vec<f64> = DEFAULT_BETAS.to_vec();
    for &b in &options.betas {
        check_beta(b)?;
        if !betas.contains(&b) {
            betas.push(b);
        }
    }
    let by_beta = betas
        .iter()
        .map(|&beta| {
            Ok(BetaScores {
                beta,
                macro_fbeta: macro_fbeta(cm, beta, policy)?,
                weighted_fbeta: weighted_fbeta(cm, scheme, beta, policy)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricReport {
        system: String::new(),
        accuracy: accuracy(cm)?,
        macro_f1: by_beta[0].macro_fbeta,
        gmr: gmr(cm, policy)?,
        wauc: weighted_auc(cm, scheme, policy)?,
        wf1: by_beta[0].weighted_fbeta,
        wf2: by_beta[1].weighted_fbeta,
        per_class: class_rates(cm, &betas, policy)?,
        by_beta,
        scheme: scheme.clone(),
        betas,
        policy,
        confusion: cm.clone(),
    })
}
