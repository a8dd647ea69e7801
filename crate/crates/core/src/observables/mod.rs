//! Invariant measurement operators and reduced-purity reference evaluators.

mod entanglement;
mod pauli;

pub use entanglement::{
    concentratable_observable, impurity_observable, meyer_wallach_observable, ntangle_observable, oracle,
    swap_j, swap_subset, EntanglementMeasure,
};
pub use pauli::{pauli_string, PauliString};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{brauer_basis_k2, swap_copies};
use crate::tensor::{check_operator_dim, ComplexMatrix, StateVector, HERMITIAN_TOL, C64};

/// What an [`Observable`] was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservableTag {
    Identity,
    Swap,
    SwapJ { j: usize },
    BellProjector,
    Impurity { j: usize },
    MeyerWallach,
    Concentratable { q_set: Vec<usize> },
    NTangle,
    Pauli { string: String },
    HermitianPart,
    AntiHermitianPart,
    GraphHamiltonian,
    Custom,
}

/// Hermitian operator on `copies` copies of an `qubits_per_copy`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
    copies: usize,
    qubits_per_copy: usize,
    tag: ObservableTag,
}

impl Observable {
    /// Validates Hermiticity (1e-10) and that the dimension is `(2^n)^copies`.
    pub fn new(matrix: ComplexMatrix, copies: usize, tag: ObservableTag) -> Result<Self> {
        let dim = matrix.square_dim()?;
        if copies == 0 {
            return Err(Error::InvalidArgument("copies must be at least 1".into()));
        }
        check_operator_dim(dim)?;
        if !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { dim });
        }
        let total = dim.trailing_zeros() as usize;
        if !total.is_multiple_of(copies) {
            return Err(Error::InvalidArgument(format!(
                "dimension {dim} is not a {copies}-fold power of a qubit register"
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self {
            matrix,
            copies,
            qubits_per_copy: total / copies,
            tag,
        })
    }

    pub(crate) fn from_parts(matrix: ComplexMatrix, copies: usize, qubits_per_copy: usize, tag: ObservableTag) -> Self {
        Self {
            matrix,
            copies,
            qubits_per_copy,
            tag,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn qubits_per_copy(&self) -> usize {
        self.qubits_per_copy
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn tag(&self) -> &ObservableTag {
        &self.tag
    }

    pub fn with_tag(mut self, tag: ObservableTag) -> Self {
        self.tag = tag;
        self
    }

    /// `Tr[O]`, real part.
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr[O²]`.
    pub fn trace_square(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    Ok(())
}

pub fn identity_observable(n: usize, copies: usize) -> Result<Observable> {
    let dim = 1usize
        .checked_shl((n * copies) as u32)
        .ok_or_else(|| Error::InvalidArgument("register too large".into()))?;
    check_operator_dim(dim)?;
    Ok(Observable::from_parts(ComplexMatrix::identity(dim), copies, n, ObservableTag::Identity))
}

/// SWAP between two copies; `Tr[(ρ⊗ρ) SWAP] = Tr[ρ²]`.
pub fn swap_operator(n: usize) -> Result<Observable> {
    check_qubits(n)?;
    check_operator_dim(1 << (2 * n))?;
    Ok(Observable::from_parts(swap_copies(n), 2, n, ObservableTag::Swap))
}

/// `|Φ+⟩⟨Φ+|` with unit-norm `|Φ+⟩ = Σ_j |jj⟩/√d`.
pub fn bell_projector(n: usize) -> Result<Observable> {
    check_qubits(n)?;
    check_operator_dim(1 << (2 * n))?;
    let m = StateVector::phi_plus(n).density().into_matrix();
    Ok(Observable::from_parts(m, 2, n, ObservableTag::BellProjector))
}

/// The three Brauer elements as observables.
pub fn brauer_observables(n: usize) -> Result<Vec<Observable>> {
    check_qubits(n)?;
    check_operator_dim(1 << (2 * n))?;
    Ok(brauer_basis_k2(n)
        .into_iter()
        .zip([ObservableTag::Identity, ObservableTag::Swap, ObservableTag::BellProjector])
        .map(|(m, tag)| Observable::from_parts(m, 2, n, tag))
        .collect())
}

/// Splits `A` into `((A + A†)/2, i(A − A†)/2)`, so `A = H₁ − i H₂`.
pub fn hermitize(a: &ComplexMatrix, copies: usize) -> Result<(Observable, Observable)> {
    let adj = a.adjoint();
    let h1 = (a + &adj).scale_real(0.5);
    let h2 = (a - &adj).scale(C64::new(0.0, 0.5));
    Ok((
        Observable::new(h1, copies, ObservableTag::HermitianPart)?,
        Observable::new(h2, copies, ObservableTag::AntiHermitianPart)?,
    ))
}
