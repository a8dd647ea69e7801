use std::time::Instant;

use ginv::analysis::{
    classify_values, concentration_experiment, model_values, shot_values, ClassificationReport, ClassificationRule,
    ConcentrationTable,
};
use ginv::datasets::{
    entanglement_dataset, graph_dataset, graph_state, purity_dataset, time_reversal_dynamics_dataset,
    time_reversal_state_dataset, Dataset, Label, LabeledState,
};
use ginv::groups::{commutant_of_group, CommutantReport};
use ginv::models::{swap_test_unitary, HypothesisClass, Model};
use ginv::observables::{bell_projector, pauli_string, swap_operator, Observable, ObservableTag};
use ginv::tensor::gates;
use ginv::train::{train_graph_classifier, LossKind, TrainConfig};
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, ExperimentConfig, Variant};
use crate::CliError;

pub const SCHEMA: u32 = 1;

/// `v` plus the crate version, in the style of `git describe`.
pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Classification(ClassificationReport),
    Graph {
        classification: ClassificationReport,
        theta: [f64; 3],
        loss_trace: Vec<f64>,
    },
    Commutant(CommutantReport),
    /// Label 0 samples the unitary group, label 1 the orthogonal group.
    Concentration {
        unitary: ConcentrationTable,
        orthogonal: ConcentrationTable,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentResult {
    pub schema: u32,
    pub version: String,
    pub experiment: Experiment,
    /// The resolved config, defaults filled in.
    pub config: ExperimentConfig,
    pub values: Vec<f64>,
    pub labels: Vec<Label>,
    pub report: Report,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time: f64,
}

impl ExperimentResult {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let r: Self = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("result: {e}")))?;
        if r.schema != SCHEMA {
            return Err(CliError::Validation(format!("unsupported schema {}", r.schema)));
        }
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }
}

fn values_for(data: &Dataset, model: &Model, shots: usize, seed: u64) -> ginv::Result<Vec<f64>> {
    if shots == 0 {
        model_values(data, model)
    } else {
        shot_values(data, model, shots, seed.wrapping_add(1))
    }
}

fn classified(
    data: &Dataset,
    model: &Model,
    rule: ClassificationRule,
    shots: usize,
    seed: u64,
) -> ginv::Result<(Vec<f64>, Vec<Label>, Report)> {
    let values = values_for(data, model, shots, seed)?;
    let labels = data.labels();
    let mut report = classify_values(&values, &labels, rule)?;
    report.shots = shots;
    Ok((values, labels, Report::Classification(report)))
}

/// Mean of the two-copy Bell model over Haar-random inputs.
fn haar_bell_mean(d: f64) -> f64 {
    2.0 / (d * (d + 1.0))
}

/// Runs a config that has already passed [`ExperimentConfig::resolved`].
pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult, CliError> {
    let start = Instant::now();
    let experiment = config.experiment.ok_or_else(|| CliError::Validation("no experiment given".into()))?;
    let (values, labels, report) = execute(experiment, config).map_err(CliError::Runtime)?;
    Ok(ExperimentResult {
        schema: SCHEMA,
        version: version(),
        experiment,
        config: config.clone(),
        values,
        labels,
        report,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn execute(experiment: Experiment, c: &ExperimentConfig) -> ginv::Result<(Vec<f64>, Vec<Label>, Report)> {
    let n = c.n.unwrap_or(1);
    let d = (1usize << n) as f64;
    let samples = c.samples.unwrap_or(2);
    let shots = c.shots.unwrap_or(0);
    let seed = c.seed.unwrap_or(0);
    match experiment {
        Experiment::Purity | Experiment::Ancilla => {
            let b = c.b.unwrap_or(0.5);
            let data = purity_dataset(n, samples, b, seed)?;
            let model = if experiment == Experiment::Purity {
                Model::linear(swap_operator(n)?, 2)?
            } else {
                let z = Observable::new(gates::pauli_z(), 1, ObservableTag::Custom)?;
                Model::from_parts(HypothesisClass::H3, 2, n, Some(swap_test_unitary(n)?), z, None)?
            };
            let rule = ClassificationRule::Threshold { c: 1.0, eps: (1.0 - b) / 2.0 };
            classified(&data, &model, rule, shots, seed)
        }
        Experiment::TimeReversalStates => {
            let data = time_reversal_state_dataset(n, samples, seed)?;
            let (model, rule) = match c.variant.unwrap_or(Variant::Conventional) {
                Variant::Conventional => {
                    let y = pauli_string(&format!("Y{}", "I".repeat(n - 1)))?.observable;
                    // Label-1 values are exactly 0; shot noise widens the window.
                    let eps = if shots == 0 { 1e-9 } else { 2.0 / (shots as f64).sqrt() };
                    (Model::linear(y, 1)?, ClassificationRule::Threshold { c: 0.0, eps })
                }
                Variant::Enhanced => {
                    // Exact label-1 values sit at 1/d; with shots the window
                    // reaches halfway to the Haar mean.
                    let eps = if shots == 0 { 1e-9 } else { (1.0 / d - haar_bell_mean(d)) / 2.0 };
                    (Model::linear(bell_projector(n)?, 2)?, ClassificationRule::Threshold { c: 1.0 / d, eps })
                }
            };
            classified(&data, &model, rule, shots, seed)
        }
        Experiment::TimeReversalDynamics => {
            let data = time_reversal_dynamics_dataset(n, samples, seed)?;
            let model = Model::from_parts(HypothesisClass::H2, 2, n, None, bell_projector(n)?, None)?;
            let rule = ClassificationRule::Threshold { c: 1.0, eps: (1.0 - haar_bell_mean(d)) / 2.0 };
            classified(&data, &model, rule, shots, seed)
        }
        Experiment::Entanglement => {
            let b = c.b.unwrap_or(0.5);
            let measure = c.entanglement_measure().map_err(|e| ginv::Error::InvalidArgument(e.to_string()))?;
            let data = entanglement_dataset(n, samples, b, &measure, seed)?;
            let obs = measure.observable(n)?;
            let copies = obs.copies();
            let model = Model::linear(obs, copies)?;
            classified(&data, &model, ClassificationRule::Threshold { c: b, eps: b / 2.0 }, shots, seed)
        }
        Experiment::Graph => graph(c, samples, shots, seed),
        Experiment::Commutant => {
            let kind = c.group_kind().map_err(|e| ginv::Error::InvalidArgument(e.to_string()))?;
            let report = commutant_of_group(kind, c.k.unwrap_or(1), seed)?;
            Ok((Vec::new(), Vec::new(), Report::Commutant(report)))
        }
        Experiment::Concentration => {
            let family = c.family.unwrap_or(ginv::analysis::ConcentrationFamily::Conventional);
            let ns = c.n_values.clone().unwrap_or_default();
            let unitary = concentration_experiment(family, &ns, samples, seed, Label::Zero)?;
            let orthogonal = concentration_experiment(family, &ns, samples, seed.wrapping_add(1 << 32), Label::One)?;
            Ok((Vec::new(), Vec::new(), Report::Concentration { unitary, orthogonal }))
        }
    }
}

/// Trains on one representative graph state per class, then classifies
/// `samples` randomly relabeled graphs with a cut halfway between the
/// trained class values.
fn graph(c: &ExperimentConfig, samples: usize, shots: usize, seed: u64) -> ginv::Result<(Vec<f64>, Vec<Label>, Report)> {
    let (g0, g1) = c.graphs().map_err(|e| ginv::Error::InvalidArgument(e.to_string()))?;
    let t = c.t.unwrap_or(1.0);
    let reps = vec![
        LabeledState { state: graph_state(&g0, t)?.density(), label: Label::Zero },
        LabeledState { state: graph_state(&g1, t)?.density(), label: Label::One },
    ];
    let train = TrainConfig {
        learning_rate: c.learning_rate.unwrap_or(0.5),
        iterations: c.iterations.unwrap_or(100),
        seed,
        loss: c.loss.unwrap_or(LossKind::MseLabels),
        ..TrainConfig::default()
    };
    let (trained, result) = train_graph_classifier(&reps, &train, None)?;
    let h0 = trained.evaluate(&reps[0].state)?;
    let h1 = trained.evaluate(&reps[1].state)?;
    let data = graph_dataset(&g0, &g1, samples, t, seed.wrapping_add(1))?;
    let values = values_for(&data, trained.model(), shots, seed)?;
    let labels = data.labels();
    let rule = ClassificationRule::Threshold { c: h1, eps: (h1 - h0).abs() / 2.0 };
    let mut classification = classify_values(&values, &labels, rule)?;
    classification.shots = shots;
    Ok((
        values,
        labels,
        Report::Graph { classification, theta: trained.theta(), loss_trace: result.loss_trace },
    ))
}
