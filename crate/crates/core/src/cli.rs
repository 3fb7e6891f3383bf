//! Command-line front end.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 alignment
//! failure or nothing to evaluate, 4 configuration error, 5 table written
//! but some systems were dropped.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::baselines::baseline_suite;
use crate::error::{EvalError, Result};
use crate::labels::{align, class_distribution, read_labels, AlignMode, LabelFormat, LabeledSet};
use crate::metrics::{AbsentClassPolicy, MetricOptions};
use crate::render::{Format, Render};
use crate::schema::LabelSchema;
use crate::suite::{confmat_report, evaluate_all, EvalConfig, Normalize, SystemEntry};
use crate::weights::{registered_scheme, WeightScheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "stance-eval",
    version,
    about = "Class-weighted evaluation of multi-class stance predictions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score one prediction file against the gold labels
    Score {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scoring: Scoring,
        /// Prediction file, optionally as name=path
        #[arg(long)]
        pred: String,
        /// Label file format: tsv, json-map or rumoureval2019
        #[arg(long, default_value = "tsv")]
        pred_format: LabelFormat,
    },
    /// Score and rank several prediction files
    Rank {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scoring: Scoring,
        /// Prediction file as name=path or path (repeatable)
        #[arg(long, required = true)]
        pred: Vec<String>,
        /// Label file format: tsv, json-map or rumoureval2019
        #[arg(long, default_value = "tsv")]
        pred_format: LabelFormat,
    },
    /// Score the majority-class and constant-class baselines
    Baselines {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scoring: Scoring,
    },
    /// Confusion matrices of one or more prediction files
    Confmat {
        #[command(flatten)]
        common: Common,
        /// Prediction file as name=path or path (repeatable)
        #[arg(long, required = true)]
        pred: Vec<String>,
        /// Label file format: tsv, json-map or rumoureval2019
        #[arg(long, default_value = "tsv")]
        pred_format: LabelFormat,
        /// Id alignment: strict fails on any id mismatch, intersect scores the shared ids
        #[arg(long, default_value = "strict")]
        mode: AlignMode,
        /// Cell values: none for counts, row for fractions of each gold row
        #[arg(long, default_value = "none")]
        normalize: Normalize,
    },
    /// Class distribution of the gold labels
    Dist {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Gold label file
    #[arg(long)]
    gold: PathBuf,
    /// Label file format: tsv, json-map or rumoureval2019
    #[arg(long, default_value = "tsv")]
    gold_format: LabelFormat,
    /// Ordered class list
    #[arg(long, default_value = "support,deny,query,comment")]
    schema: String,
    /// Output format: markdown, csv, latex, json or svg
    #[arg(long, default_value = "markdown")]
    format: Format,
    /// Write output here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Scoring {
    /// Named weight scheme: paper, mama-edha, upv or uniform
    #[arg(long, default_value = "paper", conflicts_with = "weights")]
    scheme: String,
    /// Inline weights, e.g. support=0.4,deny=0.4,query=0.15,comment=0.05
    #[arg(long)]
    weights: Option<String>,
    /// Extra β values for per-class and json output, comma separated
    #[arg(long, default_value = "1,2")]
    beta: String,
    /// Id alignment: strict fails on any id mismatch, intersect scores the shared ids
    #[arg(long, default_value = "strict")]
    mode: AlignMode,
    /// Treat classes missing from the gold set as zero recall instead of failing
    #[arg(long)]
    lenient: bool,
}

impl Scoring {
    fn config(&self, schema: &LabelSchema) -> Result<EvalConfig> {
        let scheme = match &self.weights {
            Some(inline) => {
                let w = WeightScheme::parse_inline(inline)?;
                w.resolve(schema)?;
                w
            }
            None => registered_scheme(&self.scheme, schema)?,
        };
        let betas = self
            .beta
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|b| b.is_finite() && *b > 0.0)
                    .ok_or_else(|| EvalError::config(format!("invalid β `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EvalConfig {
            schema: schema.clone(),
            scheme,
            mode: self.mode,
            metrics: MetricOptions {
                betas,
                absent: if self.lenient {
                    AbsentClassPolicy::Lenient
                } else {
                    AbsentClassPolicy::Strict
                },
            },
        })
    }
}

/// Splits `name=path`; a bare path is named after its file stem.
fn split_pred(arg: &str) -> (String, PathBuf) {
    match arg.split_once('=') {
        Some((name, path)) if !name.is_empty() => (name.to_string(), PathBuf::from(path)),
        _ => {
            let path = PathBuf::from(arg);
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| arg.to_string());
            (name, path)
        }
    }
}

fn load_systems(preds: &[String], format: LabelFormat) -> Result<Vec<SystemEntry>> {
    preds
        .iter()
        .map(|arg| {
            let (name, path) = split_pred(arg);
            Ok(SystemEntry::new(name, read_labels(&path, format)?))
        })
        .collect()
}

struct Outcome {
    output: String,
    exit: i32,
    warnings: Vec<String>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            output,
            exit: EXIT_OK,
            warnings: Vec::new(),
        }
    }
}

fn load_gold(common: &Common) -> Result<(LabelSchema, LabeledSet)> {
    let schema = LabelSchema::parse_list(&common.schema)?;
    let gold = read_labels(&common.gold, common.gold_format)?;
    Ok((schema, gold))
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Score {
            common,
            scoring,
            pred,
            pred_format,
        } => {
            let (schema, gold) = load_gold(common)?;
            let config = scoring.config(&schema)?;
            let system = load_systems(std::slice::from_ref(pred), *pred_format)?.remove(0);
            // Surface alignment failures as errors rather than as a dropped row.
            let aligned = align(&gold, &system.predictions, &schema, config.mode)?;
            let table = evaluate_all(&gold, &[system], &config)?;
            if let Some(d) = table.dropped.first() {
                return Err(EvalError::config(format!("{}: {}", d.name, d.reason)));
            }
            let mut outcome = Outcome::ok(table.render(common.format)?);
            if !aligned.dropped.missing_in_pred.is_empty() || !aligned.dropped.extra_in_pred.is_empty() {
                outcome.warnings.push(format!(
                    "evaluated on {} shared ids; {}",
                    aligned.len(),
                    aligned.dropped
                ));
            }
            Ok(outcome)
        }
        Command::Rank {
            common,
            scoring,
            pred,
            pred_format,
        } => {
            let (schema, gold) = load_gold(common)?;
            let config = scoring.config(&schema)?;
            let systems = load_systems(pred, *pred_format)?;
            let table = evaluate_all(&gold, &systems, &config)?;
            let mut outcome = Outcome::ok(table.render(common.format)?);
            for d in &table.dropped {
                outcome.warnings.push(format!("dropped {}: {}", d.name, d.reason));
            }
            if !table.dropped.is_empty() {
                outcome.exit = EXIT_PARTIAL;
            }
            Ok(outcome)
        }
        Command::Baselines { common, scoring } => {
            let (schema, gold) = load_gold(common)?;
            let config = scoring.config(&schema)?;
            let suite = baseline_suite(&gold, &schema)?;
            let mut notes = Vec::new();
            let systems: Vec<SystemEntry> = suite
                .into_iter()
                .map(|b| {
                    if !b.tied.is_empty() {
                        notes.push(format!(
                            "majority class tie between {}; picked {}",
                            b.tied.join(", "),
                            b.tied[0]
                        ));
                    }
                    SystemEntry::new(b.name(), b.predictions)
                })
                .collect();
            let mut table = evaluate_all(&gold, &systems, &config)?;
            table.notes = notes;
            Ok(Outcome::ok(table.render(common.format)?))
        }
        Command::Confmat {
            common,
            pred,
            pred_format,
            mode,
            normalize,
        } => {
            let (schema, gold) = load_gold(common)?;
            let reports = load_systems(pred, *pred_format)?
                .iter()
                .map(|s| confmat_report(&gold, s, &schema, *mode, *normalize))
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::ok(reports.render(common.format)?))
        }
        Command::Dist { common } => {
            let (schema, gold) = load_gold(common)?;
            let dist = class_distribution(&gold, &schema)?;
            Ok(Outcome::ok(dist.render(common.format)?))
        }
    }
}

fn out_path(command: &Command) -> Option<&Path> {
    let common = match command {
        Command::Score { common, .. }
        | Command::Rank { common, .. }
        | Command::Baselines { common, .. }
        | Command::Confmat { common, .. }
        | Command::Dist { common } => common,
    };
    common.out.as_deref()
}

fn report_error(stderr: &mut dyn Write, color: bool, msg: &str) {
    if color {
        let _ = writeln!(stderr, "\x1b[1;31merror:\x1b[0m {msg}");
    } else {
        let _ = writeln!(stderr, "error: {msg}");
    }
}

/// Runs the CLI with explicit streams and returns the process exit code.
/// `color` enables ANSI styling of diagnostics.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    crate::error::ErrorKind::Configuration.exit_code()
                }
            };
        }
    };

    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            report_error(stderr, color, &e.to_string());
            return e.exit_code();
        }
    };
    for w in &outcome.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let written = match out_path(&cli.command) {
        Some(path) => fs::write(path, outcome.output.as_bytes()),
        None => stdout.write_all(outcome.output.as_bytes()),
    };
    if let Err(e) = written {
        report_error(stderr, color, &format!("cannot write output: {e}"));
        return crate::error::ErrorKind::Configuration.exit_code();
    }
    outcome.exit
}
