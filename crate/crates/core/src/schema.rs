//! Ordered class inventories.

use std::fmt;

use crate::error::{EvalError, Result};

/// Canonical form of a class label: surrounding whitespace removed, lowercased.
pub fn canonicalize(label: &str) -> String {
    label.trim().to_lowercase()
}

/// The ordered list of classes of a task. The order fixes the row and column
/// order of every confusion matrix built against the schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelSchema {
    classes: Vec<String>,
}

impl LabelSchema {
    pub const RUMOUREVAL: [&'static str; 4] = ["support", "deny", "query", "comment"];

    pub fn new<I, S>(classes: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<String> = Vec::new();
        for raw in classes {
            let class = canonicalize(raw.as_ref());
            if class.is_empty() {
                return Err(EvalError::config("schema contains an empty class name"));
            }
            if out.contains(&class) {
                return Err(EvalError::config(format!(
                    "schema lists class `{class}` more than once"
                )));
            }
            out.push(class);
        }
        if out.len() < 2 {
            return Err(EvalError::config(format!(
                "a schema needs at least two classes, got {}",
                out.len()
            )));
        }
        Ok(Self { classes: out })
    }

    /// The four-class support/deny/query/comment inventory.
    pub fn rumoureval() -> Self {
        Self {
            classes: Self::RUMOUREVAL.iter().map(|c| c.to_string()).collect(),
        }
    }

    /// Parses a comma-separated class list such as `support,deny,query,comment`.
    pub fn parse_list(list: &str) -> Result<Self> {
        Self::new(list.split(','))
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of a label after canonicalization.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        let label = canonicalize(label);
        self.classes.iter().position(|c| *c == label)
    }

    pub(crate) fn require_index(&self, label: &str, location: impl FnOnce() -> String) -> Result<usize> {
        self.index_of(label).ok_or_else(|| EvalError::UnknownLabel {
            label: label.to_string(),
            location: location(),
            classes: self.to_string(),
        })
    }
}

impl fmt::Display for LabelSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.classes.join(","))
    }
}
