//! Finite-difference gradient descent with backtracking, and the
//! permutation-invariant graph classifier.

mod graph;

pub use graph::{rotated_z, train_graph_classifier, GraphObservableModel};

use serde::{Deserialize, Serialize};

use crate::datasets::Label;
use crate::error::{Error, Result};

/// Training objective over model values and labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    /// `mean (h − y)²`.
    MseLabels,
    /// `−(mean₁ h − mean₀ h)² / (var₁ + var₀ + 1e-12)`.
    MarginSeparation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub loss: LossKind,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            iterations: 100,
            fd_step: 1e-4,
            seed: 0,
            loss: LossKind::MseLabels,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument("learning rate must be positive".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(Error::InvalidArgument("finite-difference step must be positive".into()));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidArgument("need at least one iteration".into()));
        }
        Ok(())
    }
}

/// Loss of model values against labels.
pub fn loss(values: &[f64], labels: &[Label], kind: LossKind) -> Result<f64> {
    if values.len() != labels.len() || values.is_empty() {
        return Err(Error::InvalidArgument("values and labels must be nonempty and equal in length".into()));
    }
    match kind {
        LossKind::MseLabels => {
            Ok(values.iter().zip(labels).map(|(h, y)| (h - y.as_f64()).powi(2)).sum::<f64>() / values.len() as f64)
        }
        LossKind::MarginSeparation => {
            let stats = |which: Label| {
                let xs: Vec<f64> = values.iter().zip(labels).filter(|(_, &l)| l == which).map(|(&v, _)| v).collect();
                let m = xs.iter().sum::<f64>() / xs.len() as f64;
                let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
                (m, v, xs.len())
            };
            let (m0, v0, n0) = stats(Label::Zero);
            let (m1, v1, n1) = stats(Label::One);
            if n0 == 0 || n1 == 0 {
                return Err(Error::InvalidArgument("margin loss needs both classes".into()));
            }
            Ok(-(m1 - m0).powi(2) / (v1 + v0 + 1e-12))
        }
    }
}

/// Loss against real-valued targets, `mean (h − t)²`.
pub fn mse(values: &[f64], targets: &[f64]) -> f64 {
    values.iter().zip(targets).map(|(h, t)| (h - t).powi(2)).sum::<f64>() / values.len().max(1) as f64
}

/// Central-difference gradient of `f` at `theta`.
pub fn finite_diff_gradient(f: impl Fn(&[f64]) -> Result<f64>, theta: &[f64], step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let mut x = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for i in 0..theta.len() {
        x[i] = theta[i] + step;
        let up = f(&x)?;
        x[i] = theta[i] - step;
        let down = f(&x)?;
        x[i] = theta[i];
        let g = (up - down) / (2.0 * step);
        if !g.is_finite() {
            return Err(Error::NonFinite(format!("gradient component {i}")));
        }
        grad.push(g);
    }
    Ok(grad)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub theta: Vec<f64>,
    /// Loss before the first step and after every iteration.
    pub loss_trace: Vec<f64>,
    /// Parameters matching each entry of `loss_trace`.
    pub theta_trace: Vec<Vec<f64>>,
}

impl TrainResult {
    /// `iteration,loss,theta_0,…` rows.
    pub fn to_csv(&self) -> String {
        let p = self.theta.len();
        let mut out = String::from("iteration,loss");
        for i in 0..p {
            out.push_str(&format!(",theta_{i}"));
        }
        out.push('\n');
        for (it, (l, th)) in self.loss_trace.iter().zip(&self.theta_trace).enumerate() {
            out.push_str(&format!("{it},{l}"));
            for t in th {
                out.push_str(&format!(",{t}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Maximum step halvings tried when a step does not decrease the loss.
pub const MAX_HALVINGS: usize = 20;

/// Gradient descent; a step that raises the loss is retried with half the
/// learning rate up to [`MAX_HALVINGS`] times, and skipped if none helps, so
/// the trace never increases.
pub fn optimize(f: impl Fn(&[f64]) -> Result<f64>, theta0: &[f64], config: &TrainConfig) -> Result<TrainResult> {
    config.validate()?;
    let checked = |theta: &[f64]| -> Result<f64> {
        let v = f(theta)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("loss {v} at θ = {theta:?}")))
        }
    };
    let mut theta = theta0.to_vec();
    let mut current = checked(&theta)?;
    let mut loss_trace = vec![current];
    let mut theta_trace = vec![theta.clone()];
    for _ in 0..config.iterations {
        let grad = finite_diff_gradient(checked, &theta, config.fd_step)?;
        let mut lr = config.learning_rate;
        for _ in 0..=MAX_HALVINGS {
            let cand: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t - lr * g).collect();
            let value = checked(&cand)?;
            if value <= current {
                theta = cand;
                current = value;
                break;
            }
            lr *= 0.5;
        }
        loss_trace.push(current);
        theta_trace.push(theta.clone());
    }
    Ok(TrainResult {
        theta,
        loss_trace,
        theta_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_square() {
        let g = finite_diff_gradient(|t| Ok(t[0] * t[0]), &[1.0], 1e-4).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-7);
        let g = finite_diff_gradient(|_| Ok(3.0), &[1.0, 2.0], 1e-4).unwrap();
        assert_eq!(g, vec![0.0, 0.0]);
    }

    #[test]
    fn loss_examples() {
        let labels = [Label::Zero, Label::One, Label::Zero, Label::One];
        assert!((loss(&[0.5; 4], &labels, LossKind::MseLabels).unwrap() - 0.25).abs() < 1e-15);
        let sep = loss(&[0.0, 1.0, 0.0, 1.0], &labels, LossKind::MarginSeparation).unwrap();
        assert!(sep < -1e11);
        assert!(loss(&[0.0], &[], LossKind::MseLabels).is_err());
    }

    #[test]
    fn optimize_decreases_and_is_monotone() {
        let cfg = TrainConfig {
            learning_rate: 5.0,
            iterations: 30,
            ..TrainConfig::default()
        };
        let r = optimize(|t| Ok((t[0] - 3.0).powi(2) + (t[1] + 1.0).powi(4)), &[0.0, 0.0], &cfg).unwrap();
        assert!(r.loss_trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.loss_trace.last().unwrap() < &1e-3);
        assert_eq!(r.loss_trace.len(), 31);
    }

    #[test]
    fn optimal_start_stays_flat() {
        let r = optimize(|t| Ok((t[0] - 1.0).powi(2)), &[1.0], &TrainConfig::default()).unwrap();
        let first = r.loss_trace[0];
        assert!(r.loss_trace.iter().all(|l| (l - first).abs() < 1e-12));
    }

    #[test]
    fn non_finite_loss_aborts() {
        let err = optimize(|t| Ok(1.0 / (t[0] - 1.0)), &[1.0], &TrainConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn config_validation() {
        let mut c = TrainConfig::default();
        c.learning_rate = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let r = optimize(|t| Ok(t[0] * t[0]), &[1.0], &TrainConfig { iterations: 2, ..Default::default() }).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("iteration,loss,theta_0\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
