use rand::Rng;
use rayon::prelude::*;

use super::{loss, optimize, TrainConfig, TrainResult};
use crate::datasets::LabeledState;
use crate::error::{Error, Result};
use crate::models::Model;
use crate::observables::{Observable, ObservableTag};
use crate::rng::stream_rng;
use crate::tensor::{expm_hermitian, gates, ComplexMatrix, DensityMatrix};

/// `A(θ) = e^{−iθ·σ} Z e^{iθ·σ}` with `θ·σ = θ₁X + θ₂Y + θ₃Z`.
pub fn rotated_z(theta: &[f64; 3]) -> Result<ComplexMatrix> {
    let generator = &(&gates::pauli_x().scale_real(theta[0]) + &gates::pauli_y().scale_real(theta[1]))
        + &gates::pauli_z().scale_real(theta[2]);
    let u = expm_hermitian(&generator, 1.0)?;
    Ok(gates::pauli_z().conjugate_by(&u))
}

/// The permutation-invariant model `Tr[ρ A(θ)^⊗n]`.
#[derive(Clone, Debug)]
pub struct GraphObservableModel {
    n: usize,
    theta: [f64; 3],
    model: Model,
}

impl GraphObservableModel {
    pub fn new(n: usize, theta: [f64; 3]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one qubit".into()));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite(format!("θ = {theta:?}")));
        }
        let a = gates::tensor_repeat(&rotated_z(&theta)?, n);
        let observable = Observable::new(a, 1, ObservableTag::Custom)?;
        Ok(Self {
            n,
            theta,
            model: Model::linear(observable, 1)?,
        })
    }

    pub fn from_slice(n: usize, theta: &[f64]) -> Result<Self> {
        let t: [f64; 3] = theta
            .try_into()
            .map_err(|_| Error::InvalidArgument(format!("expected 3 angles, got {}", theta.len())))?;
        Self::new(n, t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> [f64; 3] {
        self.theta
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        self.model.evaluate_state(rho)
    }
}

/// Trains the three angles of [`GraphObservableModel`] on labeled graph
/// states. One representative per class suffices because the model is
/// constant on each permutation orbit. Without `theta0` the start is drawn
/// uniformly from `[−π, π)³` using `config.seed`.
pub fn train_graph_classifier(
    states: &[LabeledState],
    config: &TrainConfig,
    theta0: Option<[f64; 3]>,
) -> Result<(GraphObservableModel, TrainResult)> {
    config.validate()?;
    let first = states.first().ok_or_else(|| Error::InvalidArgument("no training states".into()))?;
    let n = first.state.qubits();
    if states.iter().any(|s| s.state.qubits() != n) {
        return Err(Error::InputMismatch("training states differ in size".into()));
    }
    let start = theta0.unwrap_or_else(|| {
        let mut rng = stream_rng(config.seed, 0);
        std::array::from_fn(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
    });
    let labels: Vec<_> = states.iter().map(|s| s.label).collect();
    let objective = |theta: &[f64]| -> Result<f64> {
        let m = GraphObservableModel::from_slice(n, theta)?;
        let values = states
            .par_iter()
            .map(|s| m.evaluate(&s.state))
            .collect::<Result<Vec<f64>>>()?;
        loss(&values, &labels, config.loss)
    };
    let result = optimize(objective, &start, config)?;
    let model = GraphObservableModel::from_slice(n, &result.theta)?;
    Ok((model, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{graph_state, Graph, Label};
    use crate::groups::{permutation_operator, PermutationTarget};
    use crate::train::LossKind;

    fn reps() -> Vec<LabeledState> {
        let tri = Graph::complete(3).unwrap();
        let path = Graph::path(3).unwrap();
        vec![
            LabeledState {
                state: graph_state(&tri, 1.0).unwrap().density(),
                label: Label::Zero,
            },
            LabeledState {
                state: graph_state(&path, 1.0).unwrap().density(),
                label: Label::One,
            },
        ]
    }

    #[test]
    fn rotated_z_at_zero_is_z() {
        let a = rotated_z(&[0.0; 3]).unwrap();
        assert!(a.distance(&gates::pauli_z()) < 1e-14);
        let b = rotated_z(&[0.3, -0.7, 1.1]).unwrap();
        assert!(b.hermitian_deviation() < 1e-13);
        assert!((b.trace().norm()) < 1e-13);
        assert!(b.try_matmul(&b).unwrap().distance(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn model_is_permutation_invariant() {
        let m = GraphObservableModel::new(3, [0.4, 0.1, -0.9]).unwrap();
        let rho = reps()[1].state.clone();
        let base = m.evaluate(&rho).unwrap();
        let p = permutation_operator(&[1, 2, 0], PermutationTarget::Qubits { n: 3 }).unwrap();
        let moved = rho.evolve(p.matrix()).unwrap();
        assert!((m.evaluate(&moved).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn training_separates_triangle_and_path() {
        let cfg = TrainConfig {
            iterations: 60,
            seed: 3,
            loss: LossKind::MseLabels,
            ..TrainConfig::default()
        };
        let data = reps();
        let (m, trace) = train_graph_classifier(&data, &cfg, None).unwrap();
        assert!(trace.loss_trace.windows(2).all(|w| w[1] <= w[0]));
        let h0 = m.evaluate(&data[0].state).unwrap();
        let h1 = m.evaluate(&data[1].state).unwrap();
        assert!((h1 - h0).abs() > 0.05, "gap {}", (h1 - h0).abs());
    }

    #[test]
    fn same_seed_same_trace() {
        let cfg = TrainConfig {
            iterations: 5,
            seed: 9,
            ..TrainConfig::default()
        };
        let a = train_graph_classifier(&reps(), &cfg, None).unwrap().1;
        let b = train_graph_classifier(&reps(), &cfg, None).unwrap().1;
        assert_eq!(a, b);
    }
}
