use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{check_operator_dim, ComplexMatrix, StateVector, C64};

/// What a permutation acts on: `k` copies of an `n`-qubit register, or the
/// `n` qubits of a single register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum PermutationTarget {
    Copies { k: usize, n: usize },
    Qubits { n: usize },
}

impl PermutationTarget {
    fn slots(&self) -> usize {
        match *self {
            PermutationTarget::Copies { k, .. } => k,
            PermutationTarget::Qubits { n } => n,
        }
    }

    fn local_dim(&self) -> usize {
        match *self {
            PermutationTarget::Copies { n, .. } => 1 << n,
            PermutationTarget::Qubits { .. } => 2,
        }
    }
}

/// Matrix representation of a subsystem permutation.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationOp {
    permutation: Vec<usize>,
    target: PermutationTarget,
    matrix: ComplexMatrix,
}

impl PermutationOp {
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn target(&self) -> PermutationTarget {
        self.target
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

pub(crate) fn validate_permutation(perm: &[usize], len: usize) -> Result<()> {
    if perm.len() != len {
        return Err(Error::InvalidPermutation(format!(
            "expected {len} entries, got {}",
            perm.len()
        )));
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection on 0..{len}")));
        }
    }
    Ok(())
}

/// Builds `P` with `P (ψ_0 ⊗ … ⊗ ψ_{m-1}) = ψ_{π⁻¹(0)} ⊗ … ⊗ ψ_{π⁻¹(m-1)}`:
/// the factor in slot `j` moves to slot `perm[j]`. Composition follows
/// `P(σ) P(τ) = P(σ ∘ τ)`.
pub fn permutation_operator(perm: &[usize], target: PermutationTarget) -> Result<PermutationOp> {
    let m = target.slots();
    let l = target.local_dim();
    validate_permutation(perm, m)?;
    let dim = l
        .checked_pow(m as u32)
        .ok_or_else(|| Error::InvalidArgument("permutation operator dimension overflows".into()))?;
    check_operator_dim(dim)?;
    let mut matrix = ComplexMatrix::zeros(dim, dim);
    let mut digits = vec![0usize; m];
    for x in 0..dim {
        let mut rest = x;
        for j in (0..m).rev() {
            digits[j] = rest % l;
            rest /= l;
        }
        let mut y = 0usize;
        let mut out = vec![0usize; m];
        for j in 0..m {
            out[perm[j]] = digits[j];
        }
        for d in out {
            y = y * l + d;
        }
        matrix[(y, x)] = C64::new(1.0, 0.0);
    }
    Ok(PermutationOp {
        permutation: perm.to_vec(),
        target,
        matrix,
    })
}

/// SWAP of two `n`-qubit copies.
pub fn swap_copies(n: usize) -> ComplexMatrix {
    permutation_operator(&[1, 0], PermutationTarget::Copies { k: 2, n })
        .expect("two-copy swap")
        .into_matrix()
}

/// `{I⊗I, SWAP, |Φ+⟩⟨Φ+|}` on two `n`-qubit copies, with unit-norm `|Φ+⟩`.
/// These span the commutant of `V⊗V` over the orthogonal group.
pub fn brauer_basis_k2(n: usize) -> Vec<ComplexMatrix> {
    assert!(n >= 1, "need at least one qubit per copy");
    let d = 1usize << n;
    vec![
        ComplexMatrix::identity(d * d),
        swap_copies(n),
        StateVector::phi_plus(n).density().into_matrix(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{haar_orthogonal, haar_unitary};
    use crate::tensor::{kron, StateVector};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_permutation() {
        let p = permutation_operator(&[0, 1, 2], PermutationTarget::Qubits { n: 3 }).unwrap();
        assert_eq!(p.matrix(), &ComplexMatrix::identity(8));
    }

    #[test]
    fn swap_maps_01_to_10() {
        let s = swap_copies(1);
        let v01 = StateVector::basis(4, 0b01).unwrap();
        let out = v01.apply(&s).unwrap();
        assert_eq!(out, StateVector::basis(4, 0b10).unwrap());
    }

    #[test]
    fn three_cycle_cubes_to_identity() {
        let p = permutation_operator(&[1, 2, 0], PermutationTarget::Copies { k: 3, n: 1 })
            .unwrap()
            .into_matrix();
        assert_ne!(p, ComplexMatrix::identity(8));
        assert_eq!(p.pow(3), ComplexMatrix::identity(8));
    }

    #[test]
    fn factor_moves_to_permuted_slot() {
        // slot 0 holds |1⟩, slots 1 and 2 hold |0⟩; perm sends slot 0 to slot 2.
        let p = permutation_operator(&[2, 0, 1], PermutationTarget::Qubits { n: 3 }).unwrap();
        let out = StateVector::basis(8, 0b100).unwrap().apply(p.matrix()).unwrap();
        assert_eq!(out, StateVector::basis(8, 0b001).unwrap());
    }

    #[test]
    fn rejects_non_bijections() {
        let t = PermutationTarget::Qubits { n: 3 };
        assert!(matches!(permutation_operator(&[0, 0, 1], t), Err(Error::InvalidPermutation(_))));
        assert!(permutation_operator(&[0, 1], t).is_err());
        assert!(permutation_operator(&[0, 1, 3], t).is_err());
    }

    #[test]
    fn brauer_elements_commute_with_orthogonal_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..=2 {
            let basis = brauer_basis_k2(n);
            for _ in 0..50 {
                let v = haar_orthogonal(1 << n, &mut rng);
                let vv = kron(&v, &v);
                for e in &basis {
                    assert!(e.commutator(&vv).frobenius_norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn bell_projector_breaks_unitary_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v = haar_unitary(2, &mut rng);
        let bell = &brauer_basis_k2(1)[2];
        assert!(bell.commutator(&kron(&v, &v)).frobenius_norm() > 1e-3);
    }

    #[test]
    fn ricochet_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let phi = StateVector::phi_plus(2);
        for _ in 0..20 {
            let a = haar_unitary(4, &mut rng).scale_real(1.7);
            let id = ComplexMatrix::identity(4);
            let left = kron(&a, &id).matvec(phi.amplitudes()).unwrap();
            let right = kron(&id, &a.transpose()).matvec(phi.amplitudes()).unwrap();
            let diff: f64 = left.iter().zip(&right).map(|(x, y)| (x - y).norm_sqr()).sum();
            assert!(diff.sqrt() < 1e-12);
        }
    }
}
