//! Symmetry groups: Haar samplers, subsystem permutations, commutants and
//! invariance checks.

mod checks;
mod commutant;
mod haar;
mod permutation;

pub use checks::{check_equivariance, check_invariance, check_invariance_with, SymmetryReport};
pub use commutant::{
    commutant_dimension, commutant_from_elements, commutant_of_group, CommutantReport, DEFAULT_COMMUTANT_SAMPLES,
    MAX_COMMUTANT_DIM, RANK_CUTOFF,
};
pub use haar::{haar_orthogonal, haar_state, haar_unitary, random_permutation, FiniteSet, GroupAction, GroupKind, GroupSampler};
pub use permutation::{brauer_basis_k2, permutation_operator, swap_copies, PermutationOp, PermutationTarget};

pub(crate) use permutation::validate_permutation;
