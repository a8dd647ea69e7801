use std::sync::OnceLock;

use rand::Rng;

use super::ansatz::AnsatzSpec;
use super::shots::{ShotEstimate, ShotEstimator};
use super::spec::{HypothesisClass, ModelSpec};
use crate::error::{Error, Result};
use crate::observables::{Observable, ObservableTag};
use crate::tensor::{check_operator_dim, kron, tensor_power, ComplexMatrix, DensityMatrix, StateVector};

/// What a model is evaluated on.
#[derive(Clone, Copy, Debug)]
pub enum ModelInput<'a> {
    State(&'a DensityMatrix),
    Unitary(&'a ComplexMatrix),
}

/// A compiled model `h`, holding `U`, `O` and `Õ = U† O U` on the full register.
#[derive(Clone, Debug)]
pub struct Model {
    class: HypothesisClass,
    k: usize,
    n: usize,
    unitary: Option<ComplexMatrix>,
    observable: Observable,
    conjugated: Observable,
    psi_in: Option<StateVector>,
    spec: Option<ModelSpec>,
    estimator: OnceLock<ShotEstimator>,
}

fn full_dim(class: HypothesisClass, k: usize, n: usize) -> Result<usize> {
    let qubits = match class {
        HypothesisClass::H1 => n.checked_mul(k),
        HypothesisClass::H2 => n.checked_mul(2),
        HypothesisClass::H3 => n.checked_mul(2).map(|q| q + 1),
    }
    .filter(|&q| q < 63)
    .ok_or_else(|| Error::InvalidArgument("register too large".into()))?;
    let dim = 1usize << qubits;
    check_operator_dim(dim)?;
    Ok(dim)
}

impl Model {
    /// Compiles a [`ModelSpec`]: builds the observable, realizes the ansatz and
    /// checks all dimensions.
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let observable = spec.observable.build()?;
        let unitary = spec.ansatz.unitary()?;
        let psi_in = spec.psi_in.as_ref().map(|s| s.build()).transpose()?;
        let mut model = Self::from_parts(spec.class, spec.k, spec.n, unitary, observable, psi_in)?;
        model.spec = Some(spec);
        Ok(model)
    }

    /// Builds a model from explicit parts. For `H3` a single-qubit observable
    /// `A` is expanded to `A ⊗ I ⊗ I`; it must have `|0⟩` as an eigenvector.
    pub fn from_parts(
        class: HypothesisClass,
        k: usize,
        n: usize,
        unitary: Option<ComplexMatrix>,
        observable: Observable,
        psi_in: Option<StateVector>,
    ) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument("n and k must be positive".into()));
        }
        if class != HypothesisClass::H1 && k != 2 {
            return Err(Error::InvalidArgument(format!("{class:?} always uses k = 2")));
        }
        let dim = full_dim(class, k, n)?;
        let observable = match class {
            HypothesisClass::H3 if observable.dim() == 2 => {
                let a = observable.matrix();
                if a[(1, 0)].norm() > 1e-10 {
                    return Err(Error::InvalidArgument(
                        "ancilla observable must have |0⟩ as an eigenvector".into(),
                    ));
                }
                let tag = observable.tag().clone();
                Observable::from_parts(kron(a, &ComplexMatrix::identity(dim / 2)), 1, 2 * n + 1, tag)
            }
            _ => observable,
        };
        if observable.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: observable.dim(),
            });
        }
        if let Some(u) = &unitary {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.rows(),
                });
            }
            let dev = u.unitarity_deviation();
            if dev > 1e-9 {
                return Err(Error::NotUnitary { deviation: dev });
            }
        }
        let psi_in = match (class, psi_in) {
            (HypothesisClass::H2, None) => Some(StateVector::phi_plus(n)),
            (HypothesisClass::H2, Some(p)) if p.dim() != dim => {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                })
            }
            (HypothesisClass::H2, Some(p)) => Some(p),
            (_, Some(_)) => {
                return Err(Error::InvalidArgument("psi_in is only used by H2 models".into()));
            }
            (_, None) => None,
        };
        let conjugated = match &unitary {
            None => observable.clone(),
            Some(u) => {
                let m = observable.matrix().conjugate_by(&u.adjoint());
                let herm = (&m + &m.adjoint()).scale_real(0.5);
                Observable::from_parts(herm, observable.copies(), observable.qubits_per_copy(), ObservableTag::Custom)
            }
        };
        Ok(Self {
            class,
            k,
            n,
            unitary,
            observable,
            conjugated,
            psi_in,
            spec: None,
            estimator: OnceLock::new(),
        })
    }

    /// `H1` model `Tr[(ρ^⊗k) O]` with no ansatz.
    pub fn linear(observable: Observable, k: usize) -> Result<Self> {
        let total = observable.dim().trailing_zeros() as usize;
        if k == 0 || !total.is_multiple_of(k) {
            return Err(Error::InvalidArgument("observable does not split into k copies".into()));
        }
        Self::from_parts(HypothesisClass::H1, k, total / k, None, observable, None)
    }

    pub fn class(&self) -> HypothesisClass {
        self.class
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Qubits per input register.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn input_dim(&self) -> usize {
        1 << self.n
    }

    pub fn spec(&self) -> Option<&ModelSpec> {
        self.spec.as_ref()
    }

    pub fn unitary(&self) -> Option<&ComplexMatrix> {
        self.unitary.as_ref()
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn psi_in(&self) -> Option<&StateVector> {
        self.psi_in.as_ref()
    }

    /// `Õ = U† O U` on the full register.
    pub fn conjugated_observable(&self) -> &Observable {
        &self.conjugated
    }

    /// Replaces the ansatz parameters, keeping everything else.
    pub fn with_params(&self, theta: &[f64]) -> Result<Self> {
        let spec = self
            .spec
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("model was not built from a ModelSpec".into()))?;
        let mut s = spec.clone();
        s.ansatz = spec.ansatz.with_params(theta);
        Self::new(s)
    }

    pub fn ansatz(&self) -> Option<&AnsatzSpec> {
        self.spec.as_ref().map(|s| &s.ansatz)
    }

    fn check_state(&self, rho: &DensityMatrix) -> Result<()> {
        if self.class == HypothesisClass::H2 {
            return Err(Error::InputMismatch("H2 models take a unitary, not a state".into()));
        }
        if rho.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: rho.dim(),
            });
        }
        Ok(())
    }

    fn check_unitary(&self, w: &ComplexMatrix) -> Result<()> {
        if self.class != HypothesisClass::H2 {
            return Err(Error::InputMismatch(format!("{:?} models take a state, not a unitary", self.class)));
        }
        if w.rows() != self.input_dim() || w.cols() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: w.rows(),
            });
        }
        Ok(())
    }

    /// Input to the circuit as a density matrix on the full register:
    /// `ρ^⊗k` for `H1`, `|0⟩⟨0| ⊗ ρ ⊗ ρ` for `H3`.
    fn register_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self.class {
            HypothesisClass::H1 => tensor_power(rho, self.k),
            HypothesisClass::H3 => Ok(StateVector::zeros(1).density().kron(&tensor_power(rho, 2)?)),
            HypothesisClass::H2 => unreachable!("checked by caller"),
        }
    }

    /// `(W ⊗ W)|Ψ_in⟩`, computed as `vec(W M Wᵀ)` with `M` the reshaped input.
    fn twin_image(&self, w: &ComplexMatrix) -> Result<StateVector> {
        let psi = self.psi_in.as_ref().expect("H2 models carry an input state");
        let d = w.rows();
        let m = ComplexMatrix::from_vec(d, d, psi.amplitudes().to_vec())?;
        let out = &(w * &m) * &w.transpose();
        StateVector::normalized(out.into_vec())
    }

    /// Evaluates by literally applying `U` to the input and measuring `O`.
    pub fn evaluate(&self, input: ModelInput<'_>) -> Result<f64> {
        match input {
            ModelInput::State(rho) => {
                self.check_state(rho)?;
                let mut sigma = self.register_state(rho)?;
                if let Some(u) = &self.unitary {
                    sigma = sigma.evolve(u)?;
                }
                Ok(sigma.matrix().trace_product(self.observable.matrix())?.re)
            }
            ModelInput::Unitary(w) => {
                self.check_unitary(w)?;
                let mut phi = self.twin_image(w)?;
                if let Some(u) = &self.unitary {
                    phi = phi.apply(u)?;
                }
                phi.expectation(self.observable.matrix())
            }
        }
    }

    /// Same value as [`Model::evaluate`], through the conjugated observable.
    pub fn value(&self, input: ModelInput<'_>) -> Result<f64> {
        let o = self.conjugated.matrix();
        match input {
            ModelInput::State(rho) => {
                self.check_state(rho)?;
                match (self.class, self.k) {
                    (HypothesisClass::H1, 1) => Ok(rho.matrix().trace_product(o)?.re),
                    (HypothesisClass::H3, _) => {
                        // only the ancilla-|0⟩ block of Õ contributes
                        let half = o.rows() / 2;
                        let block = ComplexMatrix::from_fn(half, half, |i, j| o[(i, j)]);
                        Ok(tensor_power(rho, 2)?.matrix().trace_product(&block)?.re)
                    }
                    _ => Ok(self.register_state(rho)?.matrix().trace_product(o)?.re),
                }
            }
            ModelInput::Unitary(w) => {
                self.check_unitary(w)?;
                self.twin_image(w)?.expectation(o)
            }
        }
    }

    pub fn evaluate_state(&self, rho: &DensityMatrix) -> Result<f64> {
        self.evaluate(ModelInput::State(rho))
    }

    /// Cached eigen-decomposition of `Õ` used for shot sampling.
    pub fn shot_estimator(&self) -> Result<&ShotEstimator> {
        if let Some(e) = self.estimator.get() {
            return Ok(e);
        }
        let e = ShotEstimator::new(self.conjugated.matrix())?;
        Ok(self.estimator.get_or_init(|| e))
    }

    /// Born probabilities of each eigenvalue of `Õ` for this input.
    pub fn outcome_probabilities(&self, input: ModelInput<'_>) -> Result<Vec<f64>> {
        let est = self.shot_estimator()?;
        match input {
            ModelInput::State(rho) => {
                self.check_state(rho)?;
                Ok(est.probabilities(&self.register_state(rho)?))
            }
            ModelInput::Unitary(w) => {
                self.check_unitary(w)?;
                Ok(est.probabilities_pure(&self.twin_image(w)?))
            }
        }
    }
}

/// Finite-shot estimate of `h(input)`: eigenvalues of `Õ` are sampled with
/// their Born probabilities.
pub fn estimate_with_shots<R: Rng + ?Sized>(
    model: &Model,
    input: ModelInput<'_>,
    shots: usize,
    rng: &mut R,
) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let probs = model.outcome_probabilities(input)?;
    Ok(model.shot_estimator()?.sample(&probs, shots, rng))
}
