#![allow(dead_code)]

//! Test support: a brute-force metric oracle that never builds a confusion
//! matrix, plus fixture writers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const RUMOUREVAL: [&str; 4] = ["support", "deny", "query", "comment"];
pub const PAPER_WEIGHTS: [f64; 4] = [0.40, 0.40, 0.15, 0.05];

/// Metric values recomputed straight from (gold, pred) index pairs.
#[derive(Debug, Clone)]
pub struct OracleScores {
    pub accuracy: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub fpr: Vec<f64>,
    pub auc: Vec<f64>,
    pub gmr: f64,
    /// (β, per-class Fβ, macro-Fβ, weighted Fβ)
    pub fbeta: Vec<(f64, Vec<f64>, f64, f64)>,
    pub wauc: f64,
}

impl OracleScores {
    pub fn macro_f(&self, beta: f64) -> f64 {
        self.fbeta.iter().find(|f| f.0 == beta).unwrap().2
    }

    pub fn weighted_f(&self, beta: f64) -> f64 {
        self.fbeta.iter().find(|f| f.0 == beta).unwrap().3
    }
}

/// Shoelace area of a simple polygon.
fn polygon_area(points: &[(f64, f64)]) -> f64 {
    let mut twice = 0.0;
    for i in 0..points.len() {
        let (x1, y1) = points[i];
        let (x2, y2) = points[(i + 1) % points.len()];
        twice += x1 * y2 - x2 * y1;
    }
    twice.abs() / 2.0
}

/// Absent gold classes get recall 0 (lenient convention).
pub fn oracle(gold: &[usize], pred: &[usize], k: usize, weights: &[f64], betas: &[f64]) -> OracleScores {
    assert_eq!(gold.len(), pred.len());
    let n = gold.len() as f64;
    let correct = gold.iter().zip(pred).filter(|(g, p)| g == p).count() as f64;

    let mut tp = vec![0.0; k];
    let mut fp = vec![0.0; k];
    let mut fn_ = vec![0.0; k];
    let mut tn = vec![0.0; k];
    for (&g, &p) in gold.iter().zip(pred) {
        for c in 0..k {
            match (g == c, p == c) {
                (true, true) => tp[c] += 1.0,
                (false, true) => fp[c] += 1.0,
                (true, false) => fn_[c] += 1.0,
                (false, false) => tn[c] += 1.0,
            }
        }
    }
    let safe = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };
    let precision: Vec<f64> = (0..k).map(|c| safe(tp[c], tp[c] + fp[c])).collect();
    let recall: Vec<f64> = (0..k).map(|c| safe(tp[c], tp[c] + fn_[c])).collect();
    let fpr: Vec<f64> = (0..k).map(|c| safe(fp[c], fp[c] + tn[c])).collect();
    let auc: Vec<f64> = (0..k)
        .map(|c| polygon_area(&[(0.0, 0.0), (fpr[c], recall[c]), (1.0, 1.0), (1.0, 0.0)]))
        .collect();
    let gmr = if recall.contains(&0.0) {
        0.0
    } else {
        (recall.iter().map(|r| r.ln()).sum::<f64>() / k as f64).exp()
    };
    // Count form: (1+β²)TP / ((1+β²)TP + β²FN + FP).
    let fbeta = betas
        .iter()
        .map(|&b| {
            let b2 = b * b;
            let per: Vec<f64> = (0..k)
                .map(|c| safe((1.0 + b2) * tp[c], (1.0 + b2) * tp[c] + b2 * fn_[c] + fp[c]))
                .collect();
            let mac = per.iter().sum::<f64>() / k as f64;
            let w = per.iter().zip(weights).map(|(f, w)| f * w).sum();
            (b, per, mac, w)
        })
        .collect();
    OracleScores {
        accuracy: correct / n,
        wauc: auc.iter().zip(weights).map(|(a, w)| a * w).sum(),
        precision,
        recall,
        fpr,
        auc,
        gmr,
        fbeta,
    }
}

/// Expands a count grid into (gold, pred) label pairs with zero-padded ids.
pub fn pairs_from_counts(classes: &[&str], counts: &[Vec<u64>]) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for (g, row) in counts.iter().enumerate() {
        for (p, &n) in row.iter().enumerate() {
            for _ in 0..n {
                out.push((
                    format!("t{:06}", out.len()),
                    classes[g].to_string(),
                    classes[p].to_string(),
                ));
            }
        }
    }
    out
}

pub fn m20_counts() -> Vec<Vec<u64>> {
    vec![vec![3, 0, 0, 1], vec![0, 2, 0, 2], vec![0, 0, 4, 0], vec![1, 0, 1, 6]]
}

/// Gold-only TSV with `counts[c]` instances of each class.
pub fn gold_tsv(classes: &[&str], counts: &[u64]) -> String {
    let mut out = String::from("# id\tlabel\n");
    let mut i = 0;
    for (class, &n) in classes.iter().zip(counts) {
        for _ in 0..n {
            out.push_str(&format!("t{i:06}\t{class}\n"));
            i += 1;
        }
    }
    out
}

/// Writes gold and prediction TSV files for a count grid; returns their paths.
pub fn write_pair_files(dir: &Path, stem: &str, counts: &[Vec<u64>]) -> (PathBuf, PathBuf) {
    let pairs = pairs_from_counts(&RUMOUREVAL, counts);
    let gold: String = pairs.iter().map(|(id, g, _)| format!("{id}\t{g}\n")).collect();
    let pred: String = pairs.iter().map(|(id, _, p)| format!("{id}\t{p}\n")).collect();
    let gp = dir.join(format!("{stem}_gold.tsv"));
    let pp = dir.join(format!("{stem}_pred.tsv"));
    fs::write(&gp, gold).unwrap();
    fs::write(&pp, pred).unwrap();
    (gp, pp)
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_stance-eval")
}

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Metric values of every system in a json table rendering, keyed by name.
pub fn json_metrics(doc: &str) -> Vec<(String, [f64; 6], [u64; 6])> {
    let v: serde_json::Value = serde_json::from_str(doc).unwrap();
    let keys = ["acc", "macro_f1", "gmr", "wauc", "wf1", "wf2"];
    v["systems"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            let mut vals = [0.0; 6];
            let mut ranks = [0; 6];
            for (i, k) in keys.iter().enumerate() {
                vals[i] = s["metrics"][k].as_f64().unwrap();
                ranks[i] = s["ranks"][k].as_u64().unwrap();
            }
            (s["name"].as_str().unwrap().to_string(), vals, ranks)
        })
        .collect()
}
