//! Evaluation toolkit for imbalanced multi-class classification where some
//! classes matter more than others, such as rumour stance detection
//! (support / deny / query / comment).
//!
//! Everything is computed from a [`ConfusionMatrix`]: accuracy, macro-Fβ,
//! the geometric mean of per-class recall, and class-weighted variants of
//! single-operating-point AUC and Fβ. On top of the metrics sit label-file
//! parsing and alignment, majority/constant baselines, per-metric
//! competition ranking of many systems, and markdown/csv/LaTeX/json/svg
//! rendering.
//!
//! ```
//! use stance_eval::{all_metrics, confusion_from_pairs, registered_scheme, LabelSchema, MetricOptions};
//!
//! let schema = LabelSchema::rumoureval();
//! let gold = ["support", "deny", "query", "comment", "comment"];
//! let pred = ["support", "comment", "query", "comment", "comment"];
//! let cm = confusion_from_pairs(&gold, &pred, &schema).unwrap();
//! let paper = registered_scheme("paper", &schema).unwrap();
//! let report = all_metrics(&cm, &paper, &MetricOptions::default()).unwrap();
//! assert_eq!(report.accuracy, 0.8);
//! assert_eq!(report.gmr, 0.0); // deny is never recalled
//! ```

pub mod baselines;
pub mod cli;
pub mod confusion;
pub mod error;
pub mod labels;
pub mod metrics;
pub mod render;
pub mod schema;
pub mod suite;
pub mod weights;

pub use baselines::{baseline_suite, constant_predictor, majority_predictor, Baseline, BaselineSpec};
pub use confusion::{confusion_from_pairs, ConfusionMatrix};
pub use error::{EvalError, Result};
pub use labels::{
    align, class_distribution, parse_labels, read_labels, AlignMode, ClassDistribution, LabelFormat, LabeledSet,
};
pub use metrics::{
    accuracy, all_metrics, auc_class, class_rates, gmr, macro_fbeta, weighted_auc, weighted_fbeta, AbsentClassPolicy,
    ClassRates, Metric, MetricOptions, MetricReport,
};
pub use render::{Format, Render};
pub use schema::LabelSchema;
pub use suite::{confmat_report, evaluate_all, rank_column, EvalConfig, Normalize, RankedTable, SystemEntry};
pub use weights::{registered_scheme, WeightScheme};
