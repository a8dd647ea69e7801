use serde::{Deserialize, Serialize};

use super::ansatz::AnsatzSpec;
use crate::datasets::{graph_hamiltonian, Graph};
use crate::error::{Error, Result};
use crate::observables::{
    bell_projector, concentratable_observable, identity_observable, impurity_observable, meyer_wallach_observable,
    ntangle_observable, pauli_string, swap_j, swap_operator, Observable, ObservableTag,
};
use crate::tensor::{ComplexMatrix, MatrixJson, StateVector, VectorJson};

/// Hypothesis class: `H1` measures `k` copies of a state, `H2` applies a
/// unitary twice to a fixed two-register input, `H3` adds an ancilla qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypothesisClass {
    H1,
    H2,
    H3,
}

/// Observable by name, or as an explicit matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    Identity { n: usize, copies: usize },
    Swap { n: usize },
    SwapJ { j: usize, n: usize },
    BellProjector { n: usize },
    Impurity { j: usize, n: usize },
    MeyerWallach { n: usize },
    Concentratable { q_set: Vec<usize>, n: usize },
    Ntangle { n: usize },
    Pauli { string: String },
    GraphHamiltonian { graph: Graph },
    Matrix { copies: usize, matrix: MatrixJson },
}

impl ObservableSpec {
    pub fn build(&self) -> Result<Observable> {
        match self {
            ObservableSpec::Identity { n, copies } => identity_observable(*n, *copies),
            ObservableSpec::Swap { n } => swap_operator(*n),
            ObservableSpec::SwapJ { j, n } => swap_j(*j, *n),
            ObservableSpec::BellProjector { n } => bell_projector(*n),
            ObservableSpec::Impurity { j, n } => impurity_observable(*j, *n),
            ObservableSpec::MeyerWallach { n } => meyer_wallach_observable(*n),
            ObservableSpec::Concentratable { q_set, n } => concentratable_observable(q_set, *n),
            ObservableSpec::Ntangle { n } => ntangle_observable(*n),
            ObservableSpec::Pauli { string } => Ok(pauli_string(string)?.observable),
            ObservableSpec::GraphHamiltonian { graph } => Ok(graph_hamiltonian(graph)),
            ObservableSpec::Matrix { copies, matrix } => {
                Observable::new(ComplexMatrix::try_from(matrix)?, *copies, ObservableTag::Custom)
            }
        }
    }
}

/// Named or explicit pure state for the `H2` input register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Zero { qubits: usize },
    Plus { qubits: usize },
    Ghz { qubits: usize },
    /// Unit-norm `Σ_j |jj⟩/√d` on two `n`-qubit registers.
    PhiPlus { n: usize },
    Amplitudes { amplitudes: VectorJson },
}

impl StateSpec {
    pub fn build(&self) -> Result<StateVector> {
        let small = |q: usize| {
            if q == 0 || q > 20 {
                Err(Error::InvalidArgument(format!("state qubit count {q} out of range")))
            } else {
                Ok(())
            }
        };
        match self {
            StateSpec::Zero { qubits } => small(*qubits).map(|_| StateVector::zeros(*qubits)),
            StateSpec::Plus { qubits } => small(*qubits).map(|_| StateVector::plus(*qubits)),
            StateSpec::Ghz { qubits } => small(*qubits).map(|_| StateVector::ghz(*qubits)),
            StateSpec::PhiPlus { n } => small(2 * n).map(|_| StateVector::phi_plus(*n)),
            StateSpec::Amplitudes { amplitudes } => StateVector::new(amplitudes.to_vec()?),
        }
    }
}

/// Serializable model description; compile it with [`super::Model::new`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub class: HypothesisClass,
    /// Copies of the input consumed per evaluation (2 for `H2` and `H3`).
    pub k: usize,
    /// Qubits per input register.
    pub n: usize,
    pub ansatz: AnsatzSpec,
    pub observable: ObservableSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_in: Option<StateSpec>,
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model spec serializes")
    }
}
