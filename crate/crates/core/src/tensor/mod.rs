//! Dense complex linear algebra on qubit registers.
//!
//! Qubit 0 is the most significant tensor factor everywhere in this crate.

mod json;
mod linalg;
mod matrix;
mod state;

pub use json::{MatrixJson, VectorJson};
pub use linalg::{expm_hermitian, hermitian_eigen, hermitian_eigenvalues, qr, singular_values, HermitianEigen};
pub use matrix::{gates, kron, kron_all, kron_vec, ComplexMatrix, C64};
pub use state::{
    expectation, partial_trace, product_state, tensor_power, tensor_power_with_cap, DensityMatrix, StateVector,
};


/// Tolerance for Hermiticity, trace and positivity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Tolerance on state-vector norms.
pub const NORM_TOL: f64 = 1e-12;

/// Default cap on the size of a single dense operator, in bytes (2 GiB).
pub const DEFAULT_MEMORY_CAP: u128 = 2 << 30;

/// Largest operator dimension built for density-matrix work.
pub const MAX_OPERATOR_DIM: usize = 1 << 12;

pub(crate) fn qubits_for_dim(dim: usize) -> crate::Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(crate::Error::NotPowerOfTwo { dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

pub fn check_operator_dim(dim: usize) -> crate::Result<()> {
    let bytes = (dim as u128) * (dim as u128) * 16;
    if dim > MAX_OPERATOR_DIM || bytes > DEFAULT_MEMORY_CAP {
        return Err(crate::Error::MemoryCap {
            dim,
            bytes,
            cap: DEFAULT_MEMORY_CAP,
        });
    }
    Ok(())
}
