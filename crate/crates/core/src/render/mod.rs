//! Text renderings of tables, confusion matrices and class distributions.
//!
//! Markdown, csv and LaTeX show values at three decimals (`0.784 (1)` style
//! cells for ranked tables). Json keeps full precision. Every renderer is a
//! pure function of its input.

mod svg;

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{EvalError, Result};
use crate::labels::ClassDistribution;
use crate::metrics::{BetaScores, ClassRate, Metric};
use crate::suite::{ConfusionReport, RankedTable};

pub use svg::{heatmap_document, Heatmap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Latex,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markdown" | "md" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "latex" | "tex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(EvalError::config(format!(
                "unsupported output format `{other}` (expected markdown, csv, latex, json or svg)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Markdown => "markdown",
            Format::Csv => "csv",
            Format::Latex => "latex",
            Format::Json => "json",
            Format::Svg => "svg",
        })
    }
}

/// Something that can be written out in one of the [`Format`]s.
pub trait Render {
    fn render(&self, format: Format) -> Result<String>;
}

fn unsupported(what: &str, format: Format) -> EvalError {
    EvalError::config(format!("{what} cannot be rendered as {format}"))
}

fn fixed3(v: f64) -> String {
    format!("{v:.3}")
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\textbackslash{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            _ => out.push(ch),
        }
    }
    out
}

fn csv_finish(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr
        .into_inner()
        .map_err(|e| EvalError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is built from UTF-8 strings"))
}

fn csv_err(e: csv::Error) -> EvalError {
    EvalError::Io(std::io::Error::other(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| EvalError::Io(std::io::Error::other(e.to_string())))?;
    s.push('\n');
    Ok(s)
}

// ---------------------------------------------------------------------------
// Ranked tables

#[derive(Serialize)]
struct JsonTable<'a> {
    meta: JsonMeta<'a>,
    systems: Vec<JsonSystem<'a>>,
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    gold: &'a str,
    scheme: &'a str,
    weights: Vec<(&'a str, f64)>,
    mode: String,
    classes: &'a [String],
    dropped: Vec<JsonDropped<'a>>,
    notes: &'a [String],
}

#[derive(Serialize)]
struct JsonDropped<'a> {
    name: &'a str,
    reason: &'a str,
}

#[derive(Serialize)]
struct JsonMetrics {
    acc: f64,
    macro_f1: f64,
    gmr: f64,
    wauc: f64,
    wf1: f64,
    wf2: f64,
}

#[derive(Serialize)]
struct JsonRanks {
    acc: usize,
    macro_f1: usize,
    gmr: usize,
    wauc: usize,
    wf1: usize,
    wf2: usize,
}

#[derive(Serialize)]
struct JsonConfusion<'a> {
    counts: &'a [Vec<u64>],
    row_normalized: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct JsonAlignment<'a> {
    pairs: u64,
    missing_in_pred: &'a [String],
    extra_in_pred: &'a [String],
}

#[derive(Serialize)]
struct JsonSystem<'a> {
    name: &'a str,
    metrics: JsonMetrics,
    ranks: JsonRanks,
    confusion: JsonConfusion<'a>,
    per_class: &'a [ClassRate],
    by_beta: &'a [BetaScores],
    alignment: JsonAlignment<'a>,
}

impl RankedTable {
    fn to_json_value(&self) -> JsonTable<'_> {
        JsonTable {
            meta: JsonMeta {
                gold: &self.gold,
                scheme: self.scheme.name(),
                weights: self
                    .schema
                    .classes()
                    .iter()
                    .map(|c| (c.as_str(), self.scheme.get(c).unwrap_or(0.0)))
                    .collect(),
                mode: self.mode.to_string(),
                classes: self.schema.classes(),
                dropped: self
                    .dropped
                    .iter()
                    .map(|d| JsonDropped {
                        name: &d.name,
                        reason: &d.reason,
                    })
                    .collect(),
                notes: &self.notes,
            },
            systems: self
                .rows
                .iter()
                .map(|row| {
                    let r = &row.report;
                    JsonSystem {
                        name: &r.system,
                        metrics: JsonMetrics {
                            acc: r.accuracy,
                            macro_f1: r.macro_f1,
                            gmr: r.gmr,
                            wauc: r.wauc,
                            wf1: r.wf1,
                            wf2: r.wf2,
                        },
                        ranks: JsonRanks {
                            acc: row.rank(Metric::Accuracy),
                            macro_f1: row.rank(Metric::MacroF1),
                            gmr: row.rank(Metric::Gmr),
                            wauc: row.rank(Metric::WeightedAuc),
                            wf1: row.rank(Metric::WeightedF1),
                            wf2: row.rank(Metric::WeightedF2),
                        },
                        confusion: JsonConfusion {
                            counts: r.confusion.counts(),
                            row_normalized: Some(r.confusion.row_normalized()),
                        },
                        per_class: &r.per_class.classes,
                        by_beta: &r.by_beta,
                        alignment: JsonAlignment {
                            pairs: r.confusion.n(),
                            missing_in_pred: &row.alignment.missing_in_pred,
                            extra_in_pred: &row.alignment.extra_in_pred,
                        },
                    }
                })
                .collect(),
        }
    }

    fn markdown(&self) -> String {
        let mut out = String::from("| System |");
        for m in Metric::ALL {
            let _ = write!(out, " {} |", m.label());
        }
        out.push_str("\n|:--|");
        out.push_str(&"--:|".repeat(Metric::ALL.len()));
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "| {} |", md_escape(row.name()));
            for m in Metric::ALL {
                let _ = write!(out, " {} ({}) |", fixed3(row.report.value(m)), row.rank(m));
            }
            out.push('\n');
        }
        if !self.dropped.is_empty() {
            out.push_str("\nDropped systems:\n\n");
            for d in &self.dropped {
                let _ = writeln!(out, "- {}: {}", md_escape(&d.name), d.reason);
            }
        }
        if !self.notes.is_empty() {
            out.push_str("\nNotes:\n\n");
            for n in &self.notes {
                let _ = writeln!(out, "- {n}");
            }
        }
        out
    }

    fn csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["name".to_string()];
        for m in Metric::ALL {
            header.push(m.key().to_string());
            header.push(format!("{}_rank", m.key()));
        }
        wtr.write_record(&header).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec = vec![row.name().to_string()];
            for m in Metric::ALL {
                rec.push(fixed3(row.report.value(m)));
                rec.push(row.rank(m).to_string());
            }
            wtr.write_record(&rec).map_err(csv_err)?;
        }
        csv_finish(wtr)
    }

    fn latex(&self) -> String {
        let mut out = String::from("\\begin{tabular}{l|cccccc}\n\\hline\n");
        out.push_str(" & $ACC$ & macro-$F1$ & $GMR$ & $wAUC$ & $wF1$ & $wF2$ \\\\ \\hline\n");
        for row in &self.rows {
            out.push_str(&latex_escape(row.name()));
            for m in Metric::ALL {
                let _ = write!(out, " & {} ({})", fixed3(row.report.value(m)), row.rank(m));
            }
            out.push_str(" \\\\\n");
        }
        out.push_str("\\hline\n\\end{tabular}\n");
        out
    }
}

impl Render for RankedTable {
    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Markdown => Ok(self.markdown()),
            Format::Csv => self.csv(),
            Format::Latex => Ok(self.latex()),
            Format::Json => to_json(&self.to_json_value()),
            Format::Svg => {
                let maps: Vec<Heatmap<'_>> = self
                    .rows
                    .iter()
                    .map(|r| Heatmap::new(r.name(), &r.report.confusion))
                    .collect();
                Ok(heatmap_document(&maps))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Confusion matrices

#[derive(Serialize)]
struct JsonConfusionDoc<'a> {
    gold: &'a str,
    reports: Vec<JsonConfusionReport<'a>>,
}

#[derive(Serialize)]
struct JsonConfusionReport<'a> {
    system: &'a str,
    classes: &'a [String],
    confusion: JsonConfusion<'a>,
}

fn confusion_cells(report: &ConfusionReport, g: usize) -> Vec<String> {
    match &report.row_normalized {
        Some(rows) => rows[g].iter().map(|&v| fixed3(v)).collect(),
        None => report.matrix.counts()[g].iter().map(u64::to_string).collect(),
    }
}

fn confusion_markdown(reports: &[ConfusionReport]) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let classes = r.matrix.schema().classes();
        let _ = writeln!(out, "### {}\n", md_escape(&r.system));
        out.push_str("| gold \\ predicted |");
        for c in classes {
            let _ = write!(out, " {c} |");
        }
        out.push_str(" total |\n|:--|");
        out.push_str(&"--:|".repeat(classes.len() + 1));
        out.push('\n');
        for (g, class) in classes.iter().enumerate() {
            let _ = write!(out, "| {class} |");
            for cell in confusion_cells(r, g) {
                let _ = write!(out, " {cell} |");
            }
            let _ = writeln!(out, " {} |", r.matrix.row_sum(g));
        }
    }
    out
}

fn confusion_csv(reports: &[ConfusionReport]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let classes = match reports.first() {
        Some(r) => r.matrix.schema().classes().to_vec(),
        None => Vec::new(),
    };
    let mut header = vec!["system".to_string(), "gold".to_string()];
    header.extend(classes.iter().cloned());
    header.push("total".into());
    wtr.write_record(&header).map_err(csv_err)?;
    for r in reports {
        for (g, class) in r.matrix.schema().classes().iter().enumerate() {
            let mut rec = vec![r.system.clone(), class.clone()];
            rec.extend(confusion_cells(r, g));
            rec.push(r.matrix.row_sum(g).to_string());
            wtr.write_record(&rec).map_err(csv_err)?;
        }
    }
    csv_finish(wtr)
}

fn confusion_latex(reports: &[ConfusionReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let classes = r.matrix.schema().classes();
        let _ = writeln!(out, "% {}", latex_escape(&r.system));
        let _ = writeln!(out, "\\begin{{tabular}}{{l|{}|r}}\n\\hline", "c".repeat(classes.len()));
        out.push_str("gold $\\backslash$ predicted");
        for c in classes {
            let _ = write!(out, " & {}", latex_escape(c));
        }
        out.push_str(" & total \\\\ \\hline\n");
        for (g, class) in classes.iter().enumerate() {
            out.push_str(&latex_escape(class));
            for cell in confusion_cells(r, g) {
                let _ = write!(out, " & {cell}");
            }
            let _ = writeln!(out, " & {} \\\\", r.matrix.row_sum(g));
        }
        out.push_str("\\hline\n\\end{tabular}\n");
    }
    out
}

impl Render for [ConfusionReport] {
    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Markdown => Ok(confusion_markdown(self)),
            Format::Csv => confusion_csv(self),
            Format::Latex => Ok(confusion_latex(self)),
            Format::Json => to_json(&JsonConfusionDoc {
                gold: self.first().map(|r| r.gold.as_str()).unwrap_or(""),
                reports: self
                    .iter()
                    .map(|r| JsonConfusionReport {
                        system: &r.system,
                        classes: r.matrix.schema().classes(),
                        confusion: JsonConfusion {
                            counts: r.matrix.counts(),
                            row_normalized: r.row_normalized.clone(),
                        },
                    })
                    .collect(),
            }),
            Format::Svg => {
                let maps: Vec<Heatmap<'_>> = self.iter().map(|r| Heatmap::new(&r.system, &r.matrix)).collect();
                Ok(heatmap_document(&maps))
            }
        }
    }
}

impl Render for ConfusionReport {
    fn render(&self, format: Format) -> Result<String> {
        std::slice::from_ref(self).render(format)
    }
}

// ---------------------------------------------------------------------------
// Class distributions

fn percent(f: f64) -> String {
    format!("{:.0}%", f * 100.0)
}

impl Render for ClassDistribution {
    fn render(&self, format: Format) -> Result<String> {
        let rows = self.classes.iter().zip(&self.counts).zip(&self.fractions);
        match format {
            Format::Markdown => {
                let mut out = String::from("| Class | Count | Fraction | Share |\n|:--|--:|--:|--:|\n");
                for ((class, n), f) in rows {
                    let _ = writeln!(out, "| {class} | {n} | {} | {} |", fixed3(*f), percent(*f));
                }
                let _ = writeln!(out, "| total | {} | 1.000 | 100% |", self.total);
                Ok(out)
            }
            Format::Csv => {
                let mut wtr = csv::Writer::from_writer(Vec::new());
                wtr.write_record(["class", "count", "fraction", "percent"])
                    .map_err(csv_err)?;
                for ((class, n), f) in rows {
                    wtr.write_record([class.clone(), n.to_string(), fixed3(*f), percent(*f)])
                        .map_err(csv_err)?;
                }
                csv_finish(wtr)
            }
            Format::Latex => {
                let mut out = String::from("\\begin{tabular}{l|r}\n\\hline\n & count \\\\ \\hline\n");
                for ((class, n), f) in rows {
                    let _ = writeln!(
                        out,
                        "{} & {} ({}\\%) \\\\",
                        latex_escape(class),
                        n,
                        percent(*f).trim_end_matches('%')
                    );
                }
                let _ = writeln!(out, "\\hline\ntotal & {} \\\\\n\\hline\n\\end{{tabular}}", self.total);
                Ok(out)
            }
            Format::Json => to_json(self),
            Format::Svg => Err(unsupported("a class distribution", format)),
        }
    }
}
