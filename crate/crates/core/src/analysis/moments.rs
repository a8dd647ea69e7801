use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GroupKind, GroupSampler};
use crate::models::{HypothesisClass, Model, ModelInput};
use crate::observables::{bell_projector, Observable};
use crate::rng::stream_rng;
use crate::tensor::{DensityMatrix, StateVector};

/// Haar average `Tr[O]/d` of `Tr[VρV† O]`.
pub fn haar_mean_conventional(obs: &Observable) -> f64 {
    obs.trace() / obs.dim() as f64
}

/// Haar second moment `E[Tr[VρV† O]²]` from the two-copy twirl:
/// `((Tr O)² + Tr ρ² Tr O²)/(d²−1) − (Tr O² + Tr ρ² (Tr O)²)/(d(d²−1))`.
pub fn haar_second_moment_conventional(obs: &Observable, rho_in: &DensityMatrix) -> Result<f64> {
    let d = obs.dim();
    if rho_in.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho_in.dim(),
        });
    }
    if d < 2 {
        let x = obs.trace() * rho_in.matrix().trace().re;
        return Ok(x * x);
    }
    let df = d as f64;
    let (t1, t2, p) = (obs.trace(), obs.trace_square(), rho_in.purity());
    Ok((t1 * t1 + p * t2) / (df * df - 1.0) - (t2 + p * t1 * t1) / (df * (df * df - 1.0)))
}

/// Haar variance of `Tr[VρV† O]` for any `O`.
pub fn haar_var_conventional(obs: &Observable, rho_in: &DensityMatrix) -> Result<f64> {
    let m = haar_mean_conventional(obs);
    Ok(haar_second_moment_conventional(obs, rho_in)? - m * m)
}

/// `Tr[O²](Tr[ρ²]/(d²−1) − 1/(d(d²−1)))`, the variance for traceless `O`.
pub fn haar_var_time_reversal(obs: &Observable, rho_in: &DensityMatrix) -> Result<f64> {
    if obs.trace().abs() >= 1e-10 {
        return Err(Error::InvalidArgument(format!("observable must be traceless, Tr O = {}", obs.trace())));
    }
    let d = obs.dim();
    if rho_in.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho_in.dim(),
        });
    }
    let df = d as f64;
    Ok(obs.trace_square() * (rho_in.purity() / (df * df - 1.0) - 1.0 / (df * (df * df - 1.0))))
}

/// Haar mean of `Tr[(VρV†)^⊗2 |Φ+⟩⟨Φ+|] = |uᵀu|²/d` for pure `ρ` and
/// `u = V|ψ⟩`: `2/(d(d+1))`. The two-copy dynamics model
/// `|Tr[W Wᵀ]|²/d²` has the same mean.
pub fn haar_mean_enhanced_bell(d: usize) -> f64 {
    let d = d as f64;
    2.0 / (d * (d + 1.0))
}

/// Haar variance of `|uᵀu|²/d` for a Haar-random unit vector `u`:
/// `4(d−1)/(d²(d+1)²(d+3))`, from `E|uᵀu|⁴ = 8/((d+1)(d+3))`.
pub fn haar_var_enhanced_bell(d: usize) -> f64 {
    let d = d as f64;
    4.0 * (d - 1.0) / (d * d * (d + 1.0) * (d + 1.0) * (d + 3.0))
}

/// Haar variance of `|Tr[W Wᵀ]|²/d²`: `4(d−1)(d+2)²/(d⁴(d+1)²(d+3))`, from
/// `E|Tr[W Wᵀ]|⁴ = 8(d²+2d−2)/((d+1)(d+3))`.
pub fn haar_var_bell_dynamics(d: usize) -> f64 {
    let d = d as f64;
    4.0 * (d - 1.0) * (d + 2.0) * (d + 2.0) / (d.powi(4) * (d + 1.0) * (d + 1.0) * (d + 3.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub analytic_mean: Option<f64>,
    pub analytic_var: Option<f64>,
    pub empirical_mean: f64,
    /// Unbiased sample variance.
    pub empirical_var: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    /// Standard error of the sample variance, `√((m₄ − s⁴)/N)`.
    pub var_stderr: f64,
    pub samples: usize,
}

impl MomentReport {
    pub fn from_values(values: &[f64], analytic_mean: Option<f64>, analytic_var: Option<f64>) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::InvalidArgument("need at least two samples".into()));
        }
        let nf = n as f64;
        let mean = values.iter().sum::<f64>() / nf;
        let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
        let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / nf;
        let var = m2 * nf / (nf - 1.0);
        Ok(Self {
            analytic_mean,
            analytic_var,
            empirical_mean: mean,
            empirical_var: var,
            stderr: (var / nf).sqrt(),
            var_stderr: ((m4 - m2 * m2).max(0.0) / nf).sqrt(),
            samples: n,
        })
    }

    /// `|empirical − analytic| ≤ z·stderr` for the mean.
    pub fn mean_within(&self, z: f64) -> Option<bool> {
        self.analytic_mean
            .map(|a| (self.empirical_mean - a).abs() <= z * self.stderr)
    }

    pub fn var_within(&self, z: f64) -> Option<bool> {
        self.analytic_var
            .map(|a| (self.empirical_var - a).abs() <= z * self.var_stderr)
    }
}

fn is_bell_observable(model: &Model) -> bool {
    bell_projector(model.n())
        .map(|b| b.matrix().distance(model.conjugated_observable().matrix()) < 1e-10)
        .unwrap_or(false)
}

fn is_pure(rho: Option<&DensityMatrix>) -> bool {
    rho.is_some_and(|r| (r.purity() - 1.0).abs() < 1e-10)
}

fn is_bell_model(model: &Model) -> bool {
    let phi = StateVector::phi_plus(model.n());
    let input_ok = model
        .psi_in()
        .is_some_and(|p| (p.inner(&phi).norm() - 1.0).abs() < 1e-12);
    input_ok && is_bell_observable(model)
}

/// Closed forms known for a (model, group) pair, as `(mean, variance)`.
pub fn analytic_moments(
    model: &Model,
    group: GroupKind,
    rho_in: Option<&DensityMatrix>,
) -> Option<(f64, Option<f64>)> {
    let d = model.input_dim();
    match (model.class(), group) {
        (HypothesisClass::H1, GroupKind::Unitary { d: gd }) if model.k() == 1 && gd == d => {
            let o = model.conjugated_observable();
            let var = rho_in.and_then(|r| haar_var_conventional(o, r).ok());
            Some((haar_mean_conventional(o), var))
        }
        (HypothesisClass::H1, GroupKind::Unitary { d: gd })
            if model.k() == 2 && gd == d && is_bell_observable(model) && is_pure(rho_in) =>
        {
            Some((haar_mean_enhanced_bell(d), Some(haar_var_enhanced_bell(d))))
        }
        (HypothesisClass::H1, GroupKind::Orthogonal { d: gd })
            if model.k() == 2
                && gd == d
                && is_bell_observable(model)
                && is_pure(rho_in)
                && rho_in.is_some_and(|r| r.matrix().max_imag() < 1e-12) =>
        {
            Some((1.0 / d as f64, Some(0.0)))
        }
        (HypothesisClass::H1, GroupKind::LocalUnitary { n }) if model.k() == 1 && n == model.n() => {
            Some((haar_mean_conventional(model.conjugated_observable()), None))
        }
        (HypothesisClass::H1, GroupKind::Orthogonal { d: gd }) if model.k() == 1 && gd == d => {
            let o = model.conjugated_observable().matrix();
            let imaginary_obs = o.max_real() < 1e-12;
            let real_state = rho_in.is_some_and(|r| r.matrix().max_imag() < 1e-12);
            (imaginary_obs && real_state).then_some((0.0, Some(0.0)))
        }
        (HypothesisClass::H2, GroupKind::Unitary { d: gd }) if gd == d && is_bell_model(model) => {
            Some((haar_mean_enhanced_bell(d), Some(haar_var_bell_dynamics(d))))
        }
        (HypothesisClass::H2, GroupKind::Orthogonal { d: gd }) if gd == d && is_bell_model(model) => {
            Some((1.0, Some(0.0)))
        }
        _ => None,
    }
}

/// Model values on `samples` group-random inputs: `VρV†` for state models,
/// `V` itself for `H2`. Item `i` uses random stream `i`.
pub fn sample_model_values(
    model: &Model,
    group: GroupKind,
    rho_in: Option<&DensityMatrix>,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if group.dim() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            found: group.dim(),
        });
    }
    let is_h2 = model.class() == HypothesisClass::H2;
    let template = match (is_h2, rho_in) {
        (true, _) => None,
        (false, Some(r)) => Some(r),
        (false, None) => return Err(Error::InvalidArgument("state models need an input template".into())),
    };
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let v = GroupSampler::sample_with(group, &mut rng);
            match template {
                None => model.value(ModelInput::Unitary(&v)),
                Some(r) => model.value(ModelInput::State(&r.evolve(&v)?)),
            }
        })
        .collect()
}

/// Monte-Carlo moments, with closed forms attached when registered.
pub fn empirical_moments(
    model: &Model,
    group: GroupKind,
    rho_in: Option<&DensityMatrix>,
    samples: usize,
    seed: u64,
) -> Result<MomentReport> {
    let values = sample_model_values(model, group, rho_in, samples, seed)?;
    let analytic = analytic_moments(model, group, rho_in);
    MomentReport::from_values(&values, analytic.map(|a| a.0), analytic.and_then(|a| a.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::pauli_string;
    use crate::tensor::gates;

    #[test]
    fn closed_form_examples() {
        let z = Observable::new(gates::pauli_z(), 1, crate::observables::ObservableTag::Custom).unwrap();
        assert_eq!(haar_mean_conventional(&z), 0.0);
        let id = crate::observables::identity_observable(2, 1).unwrap();
        assert_eq!(haar_mean_conventional(&id), 1.0);
        assert!((haar_mean_enhanced_bell(2) - 1.0 / 3.0).abs() < 1e-15);
        assert!((haar_mean_enhanced_bell(4) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn time_reversal_variance_values() {
        let y = pauli_string("Y").unwrap().observable;
        let zero = StateVector::zeros(1).density();
        assert!((haar_var_time_reversal(&y, &zero).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        for n in 2..=4 {
            let o = pauli_string(&format!("Y{}", "Z".repeat(n - 1))).unwrap().observable;
            let d = (1 << n) as f64;
            let v = haar_var_time_reversal(&o, &StateVector::zeros(n).density()).unwrap();
            assert!((v - 1.0 / (d + 1.0)).abs() < 1e-14);
        }
        let id = crate::observables::identity_observable(1, 1).unwrap();
        assert!(haar_var_time_reversal(&id, &zero).is_err());
    }

    #[test]
    fn general_second_moment_reduces_for_traceless() {
        let y = pauli_string("YI").unwrap().observable;
        let rho = DensityMatrix::diagonal(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let a = haar_var_conventional(&y, &rho).unwrap();
        let b = haar_var_time_reversal(&y, &rho).unwrap();
        assert!((a - b).abs() < 1e-15);
        // constant observable has zero variance
        let id = crate::observables::identity_observable(2, 1).unwrap();
        assert!(haar_var_conventional(&id, &rho).unwrap().abs() < 1e-14);
    }

    #[test]
    fn moment_report_statistics() {
        let r = MomentReport::from_values(&[1.0, 2.0, 3.0, 4.0], None, None).unwrap();
        assert!((r.empirical_mean - 2.5).abs() < 1e-15);
        assert!((r.empirical_var - 5.0 / 3.0).abs() < 1e-15);
        assert!((r.stderr - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(MomentReport::from_values(&[1.0], None, None).is_err());
    }

    #[test]
    fn bell_variances_match_monte_carlo() {
        for n in 1..=2 {
            let d = 1 << n;
            let state = Model::linear(bell_projector(n).unwrap(), 2).unwrap();
            let zero = StateVector::zeros(n).density();
            let r = empirical_moments(&state, GroupKind::Unitary { d }, Some(&zero), 20_000, 11).unwrap();
            assert_eq!(r.analytic_var, Some(haar_var_enhanced_bell(d)));
            assert_eq!(r.mean_within(4.0), Some(true), "{r:?}");
            assert_eq!(r.var_within(4.0), Some(true), "{r:?}");

            let dynamics =
                Model::from_parts(HypothesisClass::H2, 2, n, None, bell_projector(n).unwrap(), None).unwrap();
            let r = empirical_moments(&dynamics, GroupKind::Unitary { d }, None, 20_000, 12).unwrap();
            assert_eq!(r.analytic_var, Some(haar_var_bell_dynamics(d)));
            assert_eq!(r.mean_within(4.0), Some(true), "{r:?}");
            assert_eq!(r.var_within(4.0), Some(true), "{r:?}");
        }
    }

    #[test]
    fn bell_variance_values() {
        assert!((haar_var_enhanced_bell(2) - 1.0 / 45.0).abs() < 1e-15);
        assert!((haar_var_bell_dynamics(2) - 4.0 / 45.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        let y = pauli_string("Y").unwrap().observable;
        let m = Model::linear(y, 1).unwrap();
        let rho = StateVector::zeros(1).density();
        let g = GroupKind::Unitary { d: 2 };
        let a = sample_model_values(&m, g, Some(&rho), 50, 3).unwrap();
        assert_eq!(a, sample_model_values(&m, g, Some(&rho), 50, 3).unwrap());
    }
}
