//! Gold and prediction label files.
//!
//! Three input formats are understood:
//!
//! * `tsv`: one `id<TAB>label` record per line. Blank lines and lines
//!   starting with `#` are skipped; CRLF line endings are accepted.
//! * `json-map`: a single object mapping id strings to label strings.
//! * `rumoureval2019`: an object whose `subtaskaenglish` member is such a
//!   map. Other members are ignored.
//!
//! Labels are canonicalized (trimmed, lowercased) on the way in. Ids are
//! trimmed but otherwise kept verbatim.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::{Deserialize, Serialize};

use crate::error::{EvalError, IdDiff, Result};
use crate::schema::{canonicalize, LabelSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelFormat {
    Tsv,
    JsonMap,
    RumourEval2019,
}

impl FromStr for LabelFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(LabelFormat::Tsv),
            "json-map" | "json" => Ok(LabelFormat::JsonMap),
            "rumoureval2019" => Ok(LabelFormat::RumourEval2019),
            other => Err(EvalError::config(format!(
                "unknown label format `{other}` (expected tsv, json-map or rumoureval2019)"
            ))),
        }
    }
}

impl fmt::Display for LabelFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelFormat::Tsv => "tsv",
            LabelFormat::JsonMap => "json-map",
            LabelFormat::RumourEval2019 => "rumoureval2019",
        })
    }
}

/// Instance id to class label, with ids kept in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSet {
    source: String,
    entries: BTreeMap<String, String>,
}

impl LabeledSet {
    pub fn new<I, A, B>(source: impl Into<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let source = source.into();
        let mut map = BTreeMap::new();
        for (id, label) in entries {
            let id = id.as_ref().trim().to_string();
            if id.is_empty() {
                return Err(EvalError::Degenerate(format!("{source}: empty instance id")));
            }
            if map.insert(id.clone(), canonicalize(label.as_ref())).is_some() {
                return Err(EvalError::DuplicateId {
                    source_name: source,
                    id,
                });
            }
        }
        if map.is_empty() {
            return Err(EvalError::Degenerate(format!("{source}: no labelled instances")));
        }
        Ok(Self { source, entries: map })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&str> {
        self.entries.get(id).map(String::as_str)
    }

    /// `(id, label)` pairs in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Same ids, every label replaced by `label`.
    pub fn relabel_all(&self, source: impl Into<String>, label: &str) -> Self {
        let label = canonicalize(label);
        Self {
            source: source.into(),
            entries: self.entries.keys().map(|id| (id.clone(), label.clone())).collect(),
        }
    }

    /// Fails on the first label that is not a class of `schema`.
    pub fn check_schema(&self, schema: &LabelSchema) -> Result<()> {
        for (id, label) in self.iter() {
            schema.require_index(label, || format!("id `{id}` in {}", self.source))?;
        }
        Ok(())
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (id, label) in self.iter() {
            writeln!(out, "{id}\t{label}")?;
        }
        Ok(())
    }

    pub fn to_json_map(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("string map always serializes")
    }
}

/// Ordered `(key, value)` list read from a JSON object without losing
/// duplicate keys.
struct PairList(Vec<(String, String)>);

impl<'de> Deserialize<'de> for PairList {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PairVisitor;

        impl<'de> Visitor<'de> for PairVisitor {
            type Value = PairList;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping instance ids to label strings")
            }

            fn visit_map<M: MapAccess<'de>>(self, mut map: M) -> std::result::Result<PairList, M::Error> {
                let mut pairs = Vec::new();
                while let Some(entry) = map.next_entry::<String, String>()? {
                    pairs.push(entry);
                }
                Ok(PairList(pairs))
            }
        }

        deserializer.deserialize_map(PairVisitor)
    }
}

#[derive(Deserialize)]
struct Submission {
    subtaskaenglish: PairList,
}

fn decode_utf8(bytes: Vec<u8>, source: &str) -> Result<String> {
    String::from_utf8(bytes).map_err(|e| {
        let valid = &e.as_bytes()[..e.utf8_error().valid_up_to()];
        EvalError::Parse {
            source_name: source.to_string(),
            line: valid.iter().filter(|&&b| b == b'\n').count() + 1,
            message: "input is not valid UTF-8".into(),
        }
    })
}

fn parse_tsv(text: &str, source: &str) -> Result<Vec<(String, String)>> {
    let parse_err = |line: usize, message: String| EvalError::Parse {
        source_name: source.to_string(),
        line,
        message,
    };
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(parse_err(
                i + 1,
                format!("expected `id<TAB>label`, found {} tab separator(s)", fields.len() - 1),
            ));
        }
        let (id, label) = (fields[0].trim(), fields[1].trim());
        if id.is_empty() {
            return Err(parse_err(i + 1, "empty instance id".into()));
        }
        if label.is_empty() {
            return Err(parse_err(i + 1, format!("empty label for id `{id}`")));
        }
        pairs.push((id.to_string(), label.to_string()));
    }
    Ok(pairs)
}

fn json_err(source: &str, e: serde_json::Error) -> EvalError {
    EvalError::Parse {
        source_name: source.to_string(),
        line: e.line(),
        message: e.to_string(),
    }
}

/// Parses a label document from `reader`. `source` names the input in errors.
pub fn parse_labels<R: Read>(mut reader: R, format: LabelFormat, source: &str) -> Result<LabeledSet> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let text = decode_utf8(bytes, source)?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(&text);
    let pairs = match format {
        LabelFormat::Tsv => parse_tsv(text, source)?,
        LabelFormat::JsonMap => {
            serde_json::from_str::<PairList>(text)
                .map_err(|e| json_err(source, e))?
                .0
        }
        LabelFormat::RumourEval2019 => {
            serde_json::from_str::<Submission>(text)
                .map_err(|e| json_err(source, e))?
                .subtaskaenglish
                .0
        }
    };
    for (id, label) in &pairs {
        if canonicalize(label).is_empty() {
            return Err(EvalError::Parse {
                source_name: source.to_string(),
                line: 0,
                message: format!("empty label for id `{id}`"),
            });
        }
    }
    LabeledSet::new(source, pairs)
}

pub fn read_labels(path: &Path, format: LabelFormat) -> Result<LabeledSet> {
    let source = path.display().to_string();
    let file = fs::File::open(path).map_err(|e| EvalError::Parse {
        source_name: source.clone(),
        line: 0,
        message: format!("cannot open: {e}"),
    })?;
    parse_labels(file, format, &source)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlignMode {
    /// Id sets must be identical.
    #[default]
    Strict,
    /// Score the id intersection and report what was dropped.
    Intersect,
}

impl FromStr for AlignMode {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(AlignMode::Strict),
            "intersect" => Ok(AlignMode::Intersect),
            other => Err(EvalError::config(format!(
                "unknown alignment mode `{other}` (expected strict or intersect)"
            ))),
        }
    }
}

impl fmt::Display for AlignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlignMode::Strict => "strict",
            AlignMode::Intersect => "intersect",
        })
    }
}

/// Gold and predicted labels paired by id, in ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub ids: Vec<String>,
    pub gold: Vec<String>,
    pub pred: Vec<String>,
    pub dropped: IdDiff,
}

impl Alignment {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

pub fn align(gold: &LabeledSet, pred: &LabeledSet, schema: &LabelSchema, mode: AlignMode) -> Result<Alignment> {
    gold.check_schema(schema)?;
    pred.check_schema(schema)?;

    let diff = IdDiff {
        missing_in_pred: gold
            .ids()
            .filter(|id| pred.get(id).is_none())
            .map(str::to_string)
            .collect(),
        extra_in_pred: pred
            .ids()
            .filter(|id| gold.get(id).is_none())
            .map(str::to_string)
            .collect(),
    };
    let mismatched = !diff.missing_in_pred.is_empty() || !diff.extra_in_pred.is_empty();
    if mode == AlignMode::Strict && mismatched {
        return Err(EvalError::IdMismatch(diff));
    }

    let mut out = Alignment {
        ids: Vec::new(),
        gold: Vec::new(),
        pred: Vec::new(),
        dropped: IdDiff::default(),
    };
    for (id, g) in gold.iter() {
        if let Some(p) = pred.get(id) {
            out.ids.push(id.to_string());
            out.gold.push(g.to_string());
            out.pred.push(p.to_string());
        }
    }
    if out.is_empty() {
        return Err(EvalError::IdMismatch(diff));
    }
    out.dropped = diff;
    Ok(out)
}

/// Per-class counts and fractions of a label set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassDistribution {
    pub source: String,
    pub classes: Vec<String>,
    pub counts: Vec<u64>,
    pub fractions: Vec<f64>,
    pub total: u64,
}

pub fn class_distribution(labels: &LabeledSet, schema: &LabelSchema) -> Result<ClassDistribution> {
    let mut counts = vec![0u64; schema.len()];
    for (id, label) in labels.iter() {
        let c = schema.require_index(label, || format!("id `{id}` in {}", labels.source()))?;
        counts[c] += 1;
    }
    let total: u64 = counts.iter().sum();
    Ok(ClassDistribution {
        source: labels.source().to_string(),
        classes: schema.classes().to_vec(),
        fractions: counts.iter().map(|&c| c as f64 / total as f64).collect(),
        counts,
        total,
    })
}
