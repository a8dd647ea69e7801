use std::path::PathBuf;

use clap::ValueEnum;
use ginv::analysis::ConcentrationFamily;
use ginv::datasets::{is_isomorphic, purity_mixing_weight, solve_interpolation_angle, Graph};
use ginv::groups::{GroupKind, MAX_COMMUTANT_DIM};
use ginv::observables::EntanglementMeasure;
use ginv::train::LossKind;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Experiment {
    Purity,
    TimeReversalStates,
    TimeReversalDynamics,
    Entanglement,
    Graph,
    Commutant,
    Concentration,
    Ancilla,
}

/// Model used for the time-reversal state task.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Variant {
    /// One copy, odd-`Y` Pauli observable.
    Conventional,
    /// Two copies, Bell projector.
    Enhanced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GroupName {
    Unitary,
    Orthogonal,
    LocalUnitary,
    Symmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum MeasureName {
    MeyerWallach,
    Concentratable,
    Impurity,
    Ntangle,
}

/// Graph given by name (`path:3`, `cycle:4`, `star:4`, `complete:3`,
/// `empty:2`) or as `{"n":..,"edges":[[a,b],..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphArg {
    Explicit(Graph),
    Named(String),
}

impl GraphArg {
    pub fn parse(text: &str) -> Result<Self, String> {
        let t = text.trim();
        if t.starts_with('{') {
            serde_json::from_str(t).map(GraphArg::Explicit).map_err(|e| e.to_string())
        } else {
            let arg = GraphArg::Named(t.to_string());
            arg.build().map_err(|e| e.to_string())?;
            Ok(arg)
        }
    }

    pub fn build(&self) -> ginv::Result<Graph> {
        match self {
            GraphArg::Explicit(g) => Ok(g.clone()),
            GraphArg::Named(s) => {
                let bad = || ginv::Error::Parse(format!("graph `{s}`: expected kind:n such as path:3"));
                let (kind, n) = s.split_once(':').ok_or_else(bad)?;
                let n: usize = n.trim().parse().map_err(|_| bad())?;
                match kind.trim() {
                    "path" => Graph::path(n),
                    "cycle" => Graph::cycle(n),
                    "star" => Graph::star(n),
                    "complete" => Graph::complete(n),
                    "empty" => Graph::empty(n),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// Everything an experiment run needs. Fields left out take the
/// per-experiment defaults from [`ExperimentConfig::resolved`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// 0 evaluates models exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Purity of mixed states, or target entanglement value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0: Option<GraphArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1: Option<GraphArg>,
    /// Graph evolution time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss: Option<LossKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<ConcentrationFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<usize>>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))
    }

    /// `other`'s set fields win.
    pub fn merged(mut self, other: &ExperimentConfig) -> Self {
        overlay!(self, other; experiment, n, samples, shots, seed, output, b, variant, measure, q_set, j,
            group, d, k, g0, g1, t, iterations, learning_rate, loss, family, n_values);
        self
    }

    /// Fills defaults and checks every field, so that running cannot fail
    /// on bad input.
    pub fn resolved(&self) -> Result<Self, CliError> {
        let experiment = self.experiment.ok_or_else(|| invalid("no experiment given"))?;
        let mut c = self.clone();
        c.seed.get_or_insert(0);
        c.shots.get_or_insert(0);
        match experiment {
            Experiment::Purity => {
                c.n.get_or_insert(2);
                c.samples.get_or_insert(100);
                c.b.get_or_insert(0.5);
            }
            Experiment::TimeReversalStates => {
                c.n.get_or_insert(2);
                c.samples.get_or_insert(200);
                c.variant.get_or_insert(Variant::Conventional);
            }
            Experiment::TimeReversalDynamics => {
                c.n.get_or_insert(3);
                c.samples.get_or_insert(200);
            }
            Experiment::Entanglement => {
                c.n.get_or_insert(3);
                c.samples.get_or_insert(100);
                c.b.get_or_insert(0.5);
                c.measure.get_or_insert(MeasureName::MeyerWallach);
            }
            Experiment::Graph => {
                c.samples.get_or_insert(100);
                c.g0.get_or_insert(GraphArg::Named("complete:3".into()));
                c.g1.get_or_insert(GraphArg::Named("path:3".into()));
                c.t.get_or_insert(1.0);
                c.iterations.get_or_insert(100);
                c.learning_rate.get_or_insert(0.5);
                c.loss.get_or_insert(LossKind::MseLabels);
            }
            Experiment::Commutant => {
                c.group.get_or_insert(GroupName::Unitary);
                c.k.get_or_insert(2);
                if matches!(c.group, Some(GroupName::Unitary | GroupName::Orthogonal)) {
                    if c.d.is_none() {
                        c.d = Some(1 << c.n.unwrap_or(1));
                    }
                } else {
                    c.n.get_or_insert(2);
                }
            }
            Experiment::Concentration => {
                let family = *c.family.get_or_insert(ConcentrationFamily::Conventional);
                c.samples.get_or_insert(5000);
                c.n_values.get_or_insert_with(|| match family {
                    ConcentrationFamily::Conventional => (1..=5).collect(),
                    ConcentrationFamily::Enhanced => (1..=4).collect(),
                });
            }
            Experiment::Ancilla => {
                c.n.get_or_insert(2);
                c.samples.get_or_insert(100);
                c.b.get_or_insert(0.5);
            }
        }
        c.validate(experiment)?;
        Ok(c)
    }

    fn validate(&self, experiment: Experiment) -> Result<(), CliError> {
        let n_max = match experiment {
            Experiment::Purity | Experiment::TimeReversalStates | Experiment::Ancilla => 5,
            Experiment::TimeReversalDynamics | Experiment::Concentration => 5,
            Experiment::Entanglement => 5,
            Experiment::Graph | Experiment::Commutant => 6,
        };
        if let Some(n) = self.n {
            if n == 0 || n > n_max {
                return Err(invalid(format!("n must be in 1..={n_max}")));
            }
        }
        if let Some(s) = self.samples {
            if s < 2 {
                return Err(invalid("samples must be at least 2"));
            }
        }
        let n = self.n.unwrap_or(1);
        match experiment {
            Experiment::Purity | Experiment::Ancilla => {
                let b = self.b.unwrap_or(0.5);
                purity_mixing_weight(b, 1 << n).map_err(|e| invalid(e.to_string()))?;
            }
            Experiment::TimeReversalStates | Experiment::TimeReversalDynamics => {}
            Experiment::Entanglement => {
                if n < 2 {
                    return Err(invalid("entanglement needs n ≥ 2"));
                }
                let measure = self.entanglement_measure()?;
                let b = self.b.unwrap_or(0.5);
                solve_interpolation_angle(n, b, &measure).map_err(|e| invalid(e.to_string()))?;
            }
            Experiment::Graph => {
                let g0 = self.graph(&self.g0)?;
                let g1 = self.graph(&self.g1)?;
                if g0.n() != g1.n() {
                    return Err(invalid("g0 and g1 must have the same node count"));
                }
                if g0.n() > n_max {
                    return Err(invalid(format!("graphs may have at most {n_max} nodes")));
                }
                if is_isomorphic(&g0, &g1).map_err(|e| invalid(e.to_string()))? {
                    return Err(invalid("g0 and g1 are isomorphic"));
                }
                if !self.t.is_some_and(f64::is_finite) {
                    return Err(invalid("t must be finite"));
                }
                ginv::train::TrainConfig {
                    learning_rate: self.learning_rate.unwrap_or(0.5),
                    iterations: self.iterations.unwrap_or(1),
                    fd_step: 1e-4,
                    seed: 0,
                    loss: LossKind::MseLabels,
                }
                .validate()
                .map_err(|e| invalid(e.to_string()))?;
            }
            Experiment::Commutant => {
                let kind = self.group_kind()?;
                let k = self.k.unwrap_or(0);
                if k == 0 {
                    return Err(invalid("k must be at least 1"));
                }
                let big = (kind.dim() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
                if big > MAX_COMMUTANT_DIM as u128 {
                    return Err(invalid(format!("d^k = {big} exceeds {MAX_COMMUTANT_DIM}")));
                }
            }
            Experiment::Concentration => {
                let ns = self.n_values.as_deref().unwrap_or(&[]);
                if ns.len() < 2 {
                    return Err(invalid("n_values needs at least two sizes"));
                }
                if ns.iter().any(|&m| m == 0 || m > n_max) {
                    return Err(invalid(format!("n_values must lie in 1..={n_max}")));
                }
            }
        }
        Ok(())
    }

    fn graph(&self, g: &Option<GraphArg>) -> Result<Graph, CliError> {
        g.as_ref()
            .ok_or_else(|| invalid("missing graph"))?
            .build()
            .map_err(|e| invalid(e.to_string()))
    }

    pub fn graphs(&self) -> Result<(Graph, Graph), CliError> {
        Ok((self.graph(&self.g0)?, self.graph(&self.g1)?))
    }

    pub fn entanglement_measure(&self) -> Result<EntanglementMeasure, CliError> {
        let n = self.n.unwrap_or(2);
        Ok(match self.measure.unwrap_or(MeasureName::MeyerWallach) {
            MeasureName::MeyerWallach => EntanglementMeasure::MeyerWallach,
            MeasureName::Concentratable => EntanglementMeasure::Concentratable {
                q_set: self.q_set.clone().unwrap_or_else(|| (0..n).collect()),
            },
            MeasureName::Impurity => EntanglementMeasure::Impurity { j: self.j.unwrap_or(0) },
            MeasureName::Ntangle => EntanglementMeasure::NTangle,
        })
    }

    pub fn group_kind(&self) -> Result<GroupKind, CliError> {
        let group = self.group.ok_or_else(|| invalid("missing group"))?;
        let d = self.d.unwrap_or(2);
        let n = self.n.unwrap_or(1);
        if d == 0 {
            return Err(invalid("d must be at least 1"));
        }
        Ok(match group {
            GroupName::Unitary => GroupKind::Unitary { d },
            GroupName::Orthogonal => GroupKind::Orthogonal { d },
            GroupName::LocalUnitary => GroupKind::LocalUnitary { n },
            GroupName::Symmetric => GroupKind::Symmetric { n },
        })
    }
}
