use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::genes::GeneMap;
use super::terms::TermLabel;
use crate::error::{QmlaError, Result};

/// Term-classification counts of a candidate against the true term set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct F1Metrics {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub sensitivity: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1_score(candidate: &BTreeSet<TermLabel>, truth: &BTreeSet<TermLabel>) -> F1Metrics {
    let tp = candidate.intersection(truth).count();
    let fp = candidate.len() - tp;
    let fn_ = truth.len() - tp;
    let f1 = if tp == 0 {
        0.0
    } else {
        tp as f64 / (tp as f64 + 0.5 * (fp + fn_) as f64)
    };
    F1Metrics {
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
        precision: ratio(tp, tp + fp),
        sensitivity: ratio(tp, tp + fn_),
        f1,
    }
}

/// As `f1_score`, but both sets must lie inside `alphabet`.
pub fn f1_metrics(
    candidate: &BTreeSet<TermLabel>,
    truth: &BTreeSet<TermLabel>,
    alphabet: &GeneMap,
) -> Result<F1Metrics> {
    if let Some(l) = candidate.iter().chain(truth).find(|l| !alphabet.contains(l)) {
        return Err(QmlaError::NotInAlphabet(l.to_string()));
    }
    Ok(f1_score(candidate, truth))
}
