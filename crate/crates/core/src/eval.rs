//! Exact-match accuracy, mean Levenshtein distance, full-paradigm accuracy,
//! per-language macro averages, and the ensemble and feature-combination
//! oracles.
//!
//! Strings are compared as sequences of Unicode scalar values with no
//! normalization or case folding.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::types::{Paradigm, Triple};

/// Unit-cost edit distance over Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = diag + usize::from(ca != cb);
            diag = row[j + 1];
            row[j + 1] = sub.min(row[j] + 1).min(diag + 1);
        }
    }
    row[b.len()]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalReport {
    pub per_form_accuracy: f64,
    pub mean_levenshtein: f64,
    pub full_paradigm_accuracy: Option<f64>,
    pub n_items: usize,
}

impl EvalReport {
    /// The `key=value` line printed by the command line tool.
    pub fn key_values(&self) -> String {
        let mut s = format!(
            "accuracy={:.4} lev={:.4}",
            self.per_form_accuracy, self.mean_levenshtein
        );
        if let Some(full) = self.full_paradigm_accuracy {
            s.push_str(&format!(" full={full:.4}"));
        }
        s.push_str(&format!(" n={}", self.n_items));
        s
    }
}

/// Scores `(gold, predicted)` pairs.
pub fn score_forms<G, P>(pairs: &[(G, P)]) -> Result<EvalReport>
where
    G: AsRef<str>,
    P: AsRef<str>,
{
    if pairs.is_empty() {
        return Err(Error::Evaluation("nothing to score".into()));
    }
    let mut correct = 0usize;
    let mut distance = 0usize;
    for (gold, pred) in pairs {
        let (gold, pred) = (gold.as_ref(), pred.as_ref());
        if gold == pred {
            correct += 1;
        } else {
            distance += levenshtein(gold, pred);
        }
    }
    let n = pairs.len() as f64;
    Ok(EvalReport {
        per_form_accuracy: correct as f64 / n,
        mean_levenshtein: distance as f64 / n,
        full_paradigm_accuracy: None,
        n_items: pairs.len(),
    })
}

fn check_aligned(gold: &[Triple], predicted: &[Triple], what: &str) -> Result<()> {
    for (i, (g, p)) in gold.iter().zip(predicted).enumerate() {
        if g.lemma() != p.lemma() || g.bundle() != p.bundle() {
            return Err(Error::Evaluation(format!(
                "{what} item {}: expected ({}, {}), found ({}, {})",
                i + 1,
                g.lemma(),
                g.bundle(),
                p.lemma(),
                p.bundle()
            )));
        }
    }
    match predicted.len().cmp(&gold.len()) {
        std::cmp::Ordering::Less => {
            let g = &gold[predicted.len()];
            Err(Error::Evaluation(format!(
                "{what}: missing prediction for item {} ({}, {})",
                predicted.len() + 1,
                g.lemma(),
                g.bundle()
            )))
        }
        std::cmp::Ordering::Greater => {
            let p = &predicted[gold.len()];
            Err(Error::Evaluation(format!(
                "{what}: surplus prediction at item {} ({}, {})",
                gold.len() + 1,
                p.lemma(),
                p.bundle()
            )))
        }
        std::cmp::Ordering::Equal => Ok(()),
    }
}

/// Scores prediction triples against gold triples. Items are matched by
/// position and must agree on lemma and bundle.
pub fn score_predictions(gold: &[Triple], predicted: &[Triple]) -> Result<EvalReport> {
    check_aligned(gold, predicted, "predictions")?;
    let pairs: Vec<(&str, &str)> = gold
        .iter()
        .zip(predicted)
        .map(|(g, p)| (g.form(), p.form()))
        .collect();
    score_forms(&pairs)
}

/// Scores completed paradigms.
///
/// Only cells left unfilled in `input` are scored (every cell when `input`
/// is `None`). Full-paradigm accuracy is the fraction of paradigms, among
/// those with at least one scored cell, whose scored cells are all exact.
pub fn score_paradigms(
    gold: &[Paradigm],
    input: Option<&[Paradigm]>,
    predicted: &[Paradigm],
) -> Result<EvalReport> {
    if gold.len() != predicted.len() || input.is_some_and(|i| i.len() != gold.len()) {
        return Err(Error::Evaluation(format!(
            "{} gold paradigms, {} predicted{}",
            gold.len(),
            predicted.len(),
            input
                .map(|i| format!(", {} input", i.len()))
                .unwrap_or_default()
        )));
    }
    let mut pairs: Vec<(&str, &str)> = Vec::new();
    let mut scored_paradigms = 0usize;
    let mut fully_correct = 0usize;
    for (k, (g, p)) in gold.iter().zip(predicted).enumerate() {
        let shape_error = |detail: String| {
            Error::Evaluation(format!("paradigm {} ({}): {detail}", k + 1, g.lemma()))
        };
        if g.lemma() != p.lemma() || g.cells().len() != p.cells().len() {
            return Err(shape_error(format!(
                "predicted paradigm for {:?} with {} cells, gold has {}",
                p.lemma(),
                p.cells().len(),
                g.cells().len()
            )));
        }
        let masked = input.map(|i| &i[k]);
        let mut any = false;
        let mut all_exact = true;
        for (gc, pc) in g.cells().iter().zip(p.cells()) {
            if gc.bundle != pc.bundle {
                return Err(shape_error(format!(
                    "cell {} predicted where gold has {}",
                    pc.bundle, gc.bundle
                )));
            }
            let scored = match masked {
                None => true,
                Some(m) => match m.cell(&gc.bundle) {
                    Some(cell) => !cell.is_filled(),
                    None => {
                        return Err(shape_error(format!(
                            "cell {} missing from input",
                            gc.bundle
                        )))
                    }
                },
            };
            if !scored {
                continue;
            }
            let gold_form = gc
                .form
                .as_deref()
                .ok_or_else(|| shape_error(format!("gold cell {} is empty", gc.bundle)))?;
            let pred_form = pc
                .form
                .as_deref()
                .ok_or_else(|| shape_error(format!("no prediction for cell {}", gc.bundle)))?;
            any = true;
            all_exact &= gold_form == pred_form;
            pairs.push((gold_form, pred_form));
        }
        if any {
            scored_paradigms += 1;
            fully_correct += usize::from(all_exact);
        }
    }
    let mut report = score_forms(&pairs)?;
    report.full_paradigm_accuracy = Some(fully_correct as f64 / scored_paradigms as f64);
    Ok(report)
}

/// Unweighted mean over languages. Full-paradigm accuracy is averaged only
/// when every report has one; `n_items` is the total.
pub fn macro_average(reports: &[EvalReport]) -> Result<EvalReport> {
    if reports.is_empty() {
        return Err(Error::Evaluation("no reports to average".into()));
    }
    let n = reports.len() as f64;
    let mean = |f: fn(&EvalReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    let full = reports
        .iter()
        .map(|r| r.full_paradigm_accuracy)
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.iter().sum::<f64>() / n);
    Ok(EvalReport {
        per_form_accuracy: mean(|r| r.per_form_accuracy),
        mean_levenshtein: mean(|r| r.mean_levenshtein),
        full_paradigm_accuracy: full,
        n_items: reports.iter().map(|r| r.n_items).sum(),
    })
}

/// Fraction of gold items that at least one system predicted exactly.
pub fn oracle_ensemble(systems: &[Vec<Triple>], gold: &[Triple]) -> Result<f64> {
    if systems.is_empty() {
        return Err(Error::Evaluation("oracle needs at least one system".into()));
    }
    if gold.is_empty() {
        return Err(Error::Evaluation("nothing to score".into()));
    }
    for (i, system) in systems.iter().enumerate() {
        check_aligned(gold, system, &format!("system {}", i + 1))?;
    }
    let hits = (0..gold.len())
        .filter(|&i| systems.iter().any(|s| s[i].form() == gold[i].form()))
        .count();
    Ok(hits as f64 / gold.len() as f64)
}

/// Fraction of test triples whose exact bundle occurs in training. An
/// empty test set scores 0.
pub fn oracle_feature_combination(train: &[Triple], test: &[Triple]) -> f64 {
    if test.is_empty() {
        return 0.0;
    }
    let seen: HashSet<&str> = train.iter().map(|t| t.bundle().key()).collect();
    let hits = test
        .iter()
        .filter(|t| seen.contains(t.bundle().key()))
        .count();
    hits as f64 / test.len() as f64
}
