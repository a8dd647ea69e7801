use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets::{DataItem, Dataset, Label};
use crate::error::{Error, Result};
use crate::models::{estimate_with_shots, Model, ModelInput};
use crate::rng::stream_rng;

/// `P(0|c) = P(c|0)/(1 + P(c|0))`: chance that a value landing in the label-1
/// window actually came from class 0, with balanced priors.
pub fn misclassification_probability(p_c_given_0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_c_given_0) {
        return Err(Error::InvalidArgument(format!("probability {p_c_given_0} outside [0, 1]")));
    }
    Ok(p_c_given_0 / (1.0 + p_c_given_0))
}

/// One-sided Cantelli bound `Var/(Var + δ²)` on `P(X − E[X] ≥ δ)`.
pub fn cantelli_bound(variance: f64, delta: f64) -> Result<f64> {
    if !(variance >= 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need variance >= 0 and delta > 0, got {variance}, {delta}"
        )));
    }
    Ok(variance / (variance + delta * delta))
}

/// How model values are turned into labels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ClassificationRule {
    /// Label 1 when the value lies in `[c − ε, c + ε]`.
    Threshold { c: f64, eps: f64 },
    /// Cut halfway between the two class means.
    Midpoint,
    /// Label of the closer class mean.
    NearestClassMean,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub true0_pred0: usize,
    pub true0_pred1: usize,
    pub true1_pred0: usize,
    pub true1_pred1: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.true0_pred0 + self.true0_pred1 + self.true1_pred0 + self.true1_pred1
    }

    pub fn correct(&self) -> usize {
        self.true0_pred0 + self.true1_pred1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub rule: ClassificationRule,
    /// Decision boundary used by the midpoint and nearest-mean rules.
    pub boundary: Option<f64>,
    pub mean_0: f64,
    pub mean_1: f64,
    pub var_0: f64,
    pub var_1: f64,
    pub confusion: Confusion,
    pub accuracy: f64,
    /// Fraction of label-0 items assigned label 1.
    pub p_c_given_0: f64,
    pub misclassification: f64,
    /// Cantelli bound on `P(c|0)` from the class-0 variance, when defined.
    pub cantelli: Option<f64>,
    /// Shots per estimate; 0 for exact evaluation.
    pub shots: usize,
}

fn class_stats(values: &[f64], labels: &[Label], which: Label) -> (f64, f64, usize) {
    let xs: Vec<f64> = values
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l == which)
        .map(|(&v, _)| v)
        .collect();
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN, 0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    (mean, var, n)
}

/// Classifies precomputed model values.
pub fn classify_values(values: &[f64], labels: &[Label], rule: ClassificationRule) -> Result<ClassificationReport> {
    if values.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            found: values.len(),
        });
    }
    if values.is_empty() {
        return Err(Error::InvalidArgument("nothing to classify".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("model value {v}")));
    }
    let (mean_0, var_0, n0) = class_stats(values, labels, Label::Zero);
    let (mean_1, var_1, n1) = class_stats(values, labels, Label::One);
    let needs_means = !matches!(rule, ClassificationRule::Threshold { .. });
    if needs_means && (n0 == 0 || n1 == 0) {
        return Err(Error::InvalidArgument("both classes must be present".into()));
    }
    let boundary = needs_means.then_some(0.5 * (mean_0 + mean_1));
    let predict = |v: f64| -> Label {
        let one = match rule {
            ClassificationRule::Threshold { c, eps } => (v - c).abs() <= eps,
            ClassificationRule::Midpoint => {
                let t = boundary.unwrap_or(0.0);
                if mean_1 >= mean_0 {
                    v > t
                } else {
                    v < t
                }
            }
            ClassificationRule::NearestClassMean => (v - mean_1).abs() < (v - mean_0).abs(),
        };
        if one {
            Label::One
        } else {
            Label::Zero
        }
    };
    let mut confusion = Confusion::default();
    for (&v, &l) in values.iter().zip(labels) {
        match (l, predict(v)) {
            (Label::Zero, Label::Zero) => confusion.true0_pred0 += 1,
            (Label::Zero, Label::One) => confusion.true0_pred1 += 1,
            (Label::One, Label::Zero) => confusion.true1_pred0 += 1,
            (Label::One, Label::One) => confusion.true1_pred1 += 1,
        }
    }
    let p_c_given_0 = if n0 > 0 {
        confusion.true0_pred1 as f64 / n0 as f64
    } else {
        0.0
    };
    let delta = match rule {
        ClassificationRule::Threshold { c, eps } => (c - mean_0).abs() - eps,
        _ => boundary.map(|b| (b - mean_0).abs()).unwrap_or(f64::NAN),
    };
    let cantelli = if n0 > 0 && delta > 0.0 {
        Some(cantelli_bound(var_0, delta)?)
    } else {
        None
    };
    Ok(ClassificationReport {
        rule,
        boundary,
        mean_0,
        mean_1,
        var_0,
        var_1,
        accuracy: confusion.correct() as f64 / confusion.total() as f64,
        confusion,
        p_c_given_0,
        misclassification: misclassification_probability(p_c_given_0)?,
        cantelli,
        shots: 0,
    })
}

fn item_input(item: &DataItem) -> ModelInput<'_> {
    match item {
        DataItem::State(s) => ModelInput::State(&s.state),
        DataItem::Unitary(u) => ModelInput::Unitary(&u.unitary),
    }
}

/// Exact model values for every item.
pub fn model_values(dataset: &Dataset, model: &Model) -> Result<Vec<f64>> {
    dataset.items.par_iter().map(|it| model.value(item_input(it))).collect()
}

/// Finite-shot estimates for every item; item `i` uses random stream `i`.
pub fn shot_values(dataset: &Dataset, model: &Model, shots: usize, seed: u64) -> Result<Vec<f64>> {
    model.shot_estimator()?;
    dataset
        .items
        .par_iter()
        .enumerate()
        .map(|(i, it)| {
            let mut rng = stream_rng(seed, i as u64);
            Ok(estimate_with_shots(model, item_input(it), shots, &mut rng)?.estimate)
        })
        .collect()
}

/// Classifies a dataset with exact model values.
pub fn classify(dataset: &Dataset, model: &Model, rule: ClassificationRule) -> Result<ClassificationReport> {
    classify_values(&model_values(dataset, model)?, &dataset.labels(), rule)
}

/// Classifies a dataset from `shots`-shot estimates.
pub fn classify_with_shots(
    dataset: &Dataset,
    model: &Model,
    rule: ClassificationRule,
    shots: usize,
    seed: u64,
) -> Result<ClassificationReport> {
    let mut report = classify_values(&shot_values(dataset, model, shots, seed)?, &dataset.labels(), rule)?;
    report.shots = shots;
    Ok(report)
}
