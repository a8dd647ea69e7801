use serde::{Deserialize, Serialize};

use super::haar::GroupAction;
use crate::error::{Error, Result};
use crate::models::Model;
use crate::tensor::{kron_all, ComplexMatrix, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub max_deviation: f64,
    pub trials: usize,
    pub tol: f64,
    pub pass: bool,
}

impl SymmetryReport {
    fn new(max_deviation: f64, trials: usize, tol: f64) -> Self {
        Self {
            max_deviation,
            trials,
            tol,
            pass: max_deviation < tol,
        }
    }
}

/// Largest `|h(VρV†) − h(ρ)|` over `trials` group elements.
pub fn check_invariance(
    model: &Model,
    source: &mut dyn GroupAction,
    probe: &DensityMatrix,
    trials: usize,
    tol: f64,
) -> Result<SymmetryReport> {
    check_invariance_with(|rho| model.evaluate_state(rho), source, probe, trials, tol)
}

/// [`check_invariance`] for an arbitrary state functional.
pub fn check_invariance_with(
    h: impl Fn(&DensityMatrix) -> Result<f64>,
    source: &mut dyn GroupAction,
    probe: &DensityMatrix,
    trials: usize,
    tol: f64,
) -> Result<SymmetryReport> {
    if source.dim() != probe.dim() {
        return Err(Error::DimensionMismatch {
            expected: probe.dim(),
            found: source.dim(),
        });
    }
    let base = h(probe)?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let v = source.next_element();
        let moved = probe.evolve(&v)?;
        worst = worst.max((h(&moved)? - base).abs());
    }
    Ok(SymmetryReport::new(worst, trials, tol))
}

/// Largest `‖[U, V^⊗k]‖_F` over `trials` group elements.
pub fn check_equivariance(
    u: &ComplexMatrix,
    source: &mut dyn GroupAction,
    k: usize,
    trials: usize,
    tol: f64,
) -> Result<SymmetryReport> {
    let dim = u.square_dim()?;
    let expected = (source.dim() as u128).pow(k as u32);
    if expected != dim as u128 {
        return Err(Error::DimensionMismatch {
            expected: usize::try_from(expected).unwrap_or(usize::MAX),
            found: dim,
        });
    }
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let v = source.next_element();
        let vk = kron_all(std::iter::repeat_n(&v, k));
        worst = worst.max(u.commutator(&vk).frobenius_norm());
    }
    Ok(SymmetryReport::new(worst, trials, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{haar_unitary, swap_copies, GroupKind, GroupSampler};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn swap_is_equivariant_for_unitaries() {
        let mut s = GroupSampler::new(GroupKind::Unitary { d: 4 }, 1);
        let rep = check_equivariance(&swap_copies(2), &mut s, 2, 20, 1e-9).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn random_unitary_is_not_equivariant() {
        let u = haar_unitary(4, &mut ChaCha8Rng::seed_from_u64(2));
        let mut s = GroupSampler::new(GroupKind::Unitary { d: 2 }, 3);
        let rep = check_equivariance(&u, &mut s, 2, 5, 1e-9).unwrap();
        assert!(rep.max_deviation > 1e-3);
    }

    #[test]
    fn equivariance_dimension_mismatch() {
        let mut s = GroupSampler::new(GroupKind::Unitary { d: 2 }, 3);
        assert!(check_equivariance(&ComplexMatrix::identity(8), &mut s, 2, 1, 1e-9).is_err());
    }
}
