use serde::{Deserialize, Serialize};

use super::{check_qubits, Observable, ObservableTag};
use crate::error::{Error, Result};
use crate::tensor::{check_operator_dim, ComplexMatrix, C64};

/// Basis index of `x` after swapping qubit `j` of copy A with qubit `j` of
/// copy B for every `j` in the bitmask `alpha`.
fn swapped_index(x: usize, alpha: usize, n: usize) -> usize {
    let mut y = x;
    for j in 0..n {
        if alpha >> j & 1 == 1 {
            let a = 2 * n - 1 - j;
            let b = n - 1 - j;
            let (ba, bb) = (x >> a & 1, x >> b & 1);
            if ba != bb {
                y ^= (1 << a) | (1 << b);
            }
        }
    }
    y
}

fn mask_of(set: &[usize], n: usize) -> Result<usize> {
    let mut mask = 0usize;
    for &j in set {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, bound: n });
        }
        mask |= 1 << j;
    }
    Ok(mask)
}

/// `Σ_α c(α) SWAP_α` over sub-masks `α` of `mask`, plus `base·I`.
fn swap_combination(n: usize, mask: usize, base: f64, coeff: impl Fn(usize) -> f64) -> Result<ComplexMatrix> {
    check_qubits(n)?;
    let dim = 1usize << (2 * n);
    check_operator_dim(dim)?;
    let mut m = ComplexMatrix::identity(dim).scale_real(base);
    let mut alpha = mask;
    loop {
        let c = coeff(alpha);
        if c != 0.0 {
            for x in 0..dim {
                m[(swapped_index(x, alpha, n), x)] += C64::new(c, 0.0);
            }
        }
        if alpha == 0 {
            break;
        }
        alpha = (alpha - 1) & mask;
    }
    Ok(m)
}

/// `SWAP_α` exchanging the qubits in `alpha` between two `n`-qubit copies.
pub fn swap_subset(alpha: &[usize], n: usize) -> Result<ComplexMatrix> {
    let mask = mask_of(alpha, n)?;
    swap_combination(n, mask, 0.0, |a| if a == mask { 1.0 } else { 0.0 })
}

/// Swaps qubit `j` between two copies; measures the purity of the `j`-th marginal.
pub fn swap_j(j: usize, n: usize) -> Result<Observable> {
    let m = swap_subset(&[j], n)?;
    Ok(Observable::from_parts(m, 2, n, ObservableTag::SwapJ { j }))
}

/// `2(I − SWAP_j)`, whose two-copy value is `2(1 − Tr[ρ_j²])`.
pub fn impurity_observable(j: usize, n: usize) -> Result<Observable> {
    let mask = mask_of(&[j], n)?;
    let m = swap_combination(n, mask, 2.0, |a| if a == mask { -2.0 } else { 0.0 })?;
    Ok(Observable::from_parts(m, 2, n, ObservableTag::Impurity { j }))
}

/// `(2/n) Σ_j (I − SWAP_j)`.
pub fn meyer_wallach_observable(n: usize) -> Result<Observable> {
    check_qubits(n)?;
    let dim = 1usize << (2 * n);
    check_operator_dim(dim)?;
    let mut m = ComplexMatrix::identity(dim).scale_real(2.0);
    let c = C64::new(-2.0 / n as f64, 0.0);
    for j in 0..n {
        for x in 0..dim {
            m[(swapped_index(x, 1 << j, n), x)] += c;
        }
    }
    Ok(Observable::from_parts(m, 2, n, ObservableTag::MeyerWallach))
}

/// `I − 2^{−|Q|} Σ_{α⊆Q} SWAP_α`.
pub fn concentratable_observable(q_set: &[usize], n: usize) -> Result<Observable> {
    if q_set.is_empty() {
        return Err(Error::InvalidArgument("qubit set must be nonempty".into()));
    }
    let mask = mask_of(q_set, n)?;
    let w = -1.0 / (1u64 << mask.count_ones()) as f64;
    let m = swap_combination(n, mask, 1.0, |_| w)?;
    let mut q: Vec<usize> = q_set.to_vec();
    q.sort_unstable();
    q.dedup();
    Ok(Observable::from_parts(m, 2, n, ObservableTag::Concentratable { q_set: q }))
}

/// `I − 2^{−n} Σ_{α⊆S} (−1)^{|α|} SWAP_α`.
pub fn ntangle_observable(n: usize) -> Result<Observable> {
    check_qubits(n)?;
    let mask = (1usize << n) - 1;
    let w = 1.0 / (1u64 << n) as f64;
    let m = swap_combination(n, mask, 1.0, |a| if a.count_ones() % 2 == 0 { -w } else { w })?;
    Ok(Observable::from_parts(m, 2, n, ObservableTag::NTangle))
}

/// Entanglement quantity that can label a dataset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "measure", rename_all = "snake_case")]
pub enum EntanglementMeasure {
    MeyerWallach,
    Concentratable { q_set: Vec<usize> },
    Impurity { j: usize },
    NTangle,
}

impl EntanglementMeasure {
    pub fn observable(&self, n: usize) -> Result<Observable> {
        match self {
            EntanglementMeasure::MeyerWallach => meyer_wallach_observable(n),
            EntanglementMeasure::Concentratable { q_set } => concentratable_observable(q_set, n),
            EntanglementMeasure::Impurity { j } => impurity_observable(*j, n),
            EntanglementMeasure::NTangle => ntangle_observable(n),
        }
    }

    /// Value on a pure state, through reduced purities.
    pub fn evaluate(&self, psi: &crate::tensor::StateVector) -> Result<f64> {
        let rho = psi.density();
        match self {
            EntanglementMeasure::MeyerWallach => oracle::meyer_wallach(&rho),
            EntanglementMeasure::Concentratable { q_set } => oracle::concentratable(&rho, q_set),
            EntanglementMeasure::Impurity { j } => oracle::impurity(&rho, *j),
            EntanglementMeasure::NTangle => oracle::ntangle(&rho),
        }
    }
}

/// Reference values computed from partial traces, independent of the
/// two-copy operators above.
pub mod oracle {
    use crate::error::{Error, Result};
    use crate::tensor::{partial_trace, DensityMatrix};

    /// `Tr[ρ_α²]`, with the empty set giving `Tr[ρ]² = 1`.
    pub fn reduced_purity(rho: &DensityMatrix, subset: &[usize]) -> Result<f64> {
        if subset.is_empty() {
            return Ok(1.0);
        }
        Ok(partial_trace(rho, subset)?.purity())
    }

    fn subsets(set: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..1usize << set.len()).map(move |m| {
            set.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &q)| q)
                .collect()
        })
    }

    pub fn impurity(rho: &DensityMatrix, j: usize) -> Result<f64> {
        Ok(2.0 * (1.0 - reduced_purity(rho, &[j])?))
    }

    pub fn meyer_wallach(rho: &DensityMatrix) -> Result<f64> {
        let n = rho.qubits();
        let mut s = 0.0;
        for j in 0..n {
            s += 1.0 - reduced_purity(rho, &[j])?;
        }
        Ok(2.0 * s / n as f64)
    }

    pub fn concentratable(rho: &DensityMatrix, q_set: &[usize]) -> Result<f64> {
        if q_set.is_empty() {
            return Err(Error::InvalidArgument("qubit set must be nonempty".into()));
        }
        let mut q = q_set.to_vec();
        q.sort_unstable();
        q.dedup();
        let mut s = 0.0;
        for a in subsets(&q) {
            s += reduced_purity(rho, &a)?;
        }
        Ok(1.0 - s / (1u64 << q.len()) as f64)
    }

    pub fn ntangle(rho: &DensityMatrix) -> Result<f64> {
        let all: Vec<usize> = (0..rho.qubits()).collect();
        let mut s = 0.0;
        for a in subsets(&all) {
            let sign = if a.len() % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * reduced_purity(rho, &a)?;
        }
        Ok(1.0 - s / (1u64 << all.len()) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{expectation, tensor_power, StateVector};

    fn two_copy(obs: &Observable, psi: &StateVector) -> f64 {
        expectation(&tensor_power(&psi.density(), 2).unwrap(), obs.matrix()).unwrap()
    }

    #[test]
    fn swap_j_marginal_purities() {
        let prod = StateVector::plus(3);
        assert!((two_copy(&swap_j(1, 3).unwrap(), &prod) - 1.0).abs() < 1e-12);
        assert!((two_copy(&swap_j(0, 2).unwrap(), &StateVector::ghz(2)) - 0.5).abs() < 1e-12);
        assert!((two_copy(&swap_j(2, 3).unwrap(), &StateVector::ghz(3)) - 0.5).abs() < 1e-12);
        assert!(swap_j(3, 3).is_err());
    }

    #[test]
    fn impurity_values() {
        assert!(two_copy(&impurity_observable(0, 2).unwrap(), &StateVector::zeros(2)).abs() < 1e-12);
        assert!((two_copy(&impurity_observable(0, 2).unwrap(), &StateVector::ghz(2)) - 1.0).abs() < 1e-12);
        assert!((two_copy(&impurity_observable(1, 3).unwrap(), &StateVector::ghz(3)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn meyer_wallach_values() {
        assert!(two_copy(&meyer_wallach_observable(3).unwrap(), &StateVector::plus(3)).abs() < 1e-12);
        for n in 2..=4 {
            let v = two_copy(&meyer_wallach_observable(n).unwrap(), &StateVector::ghz(n));
            assert!((v - 1.0).abs() < 1e-12);
        }
        let v = two_copy(&meyer_wallach_observable(3).unwrap(), &StateVector::w(3));
        assert!((v - 8.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn concentratable_values() {
        let c = concentratable_observable(&[0, 1], 2).unwrap();
        assert!(two_copy(&c, &StateVector::zeros(2)).abs() < 1e-12);
        assert!((two_copy(&c, &StateVector::phi_plus(1)) - 0.25).abs() < 1e-12);
        let c3 = concentratable_observable(&[0, 1, 2], 3).unwrap();
        assert!((two_copy(&c3, &StateVector::ghz(3)) - 0.375).abs() < 1e-12);
        assert!(concentratable_observable(&[], 2).is_err());
    }

    #[test]
    fn ntangle_values() {
        let t2 = ntangle_observable(2).unwrap();
        assert!((two_copy(&t2, &StateVector::phi_plus(1)) - 0.75).abs() < 1e-12);
        assert!((two_copy(&t2, &StateVector::zeros(2)) - 1.0).abs() < 1e-12);
        assert!((two_copy(&ntangle_observable(1).unwrap(), &StateVector::plus(1)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swapped_index_is_involution() {
        for x in 0..64 {
            for a in 0..8 {
                assert_eq!(swapped_index(swapped_index(x, a, 3), a, 3), x);
            }
        }
    }

    #[test]
    fn measures_match_oracles_on_references() {
        let psi = StateVector::w(3);
        for m in [
            EntanglementMeasure::MeyerWallach,
            EntanglementMeasure::Concentratable { q_set: vec![0, 2] },
            EntanglementMeasure::Impurity { j: 1 },
            EntanglementMeasure::NTangle,
        ] {
            let a = two_copy(&m.observable(3).unwrap(), &psi);
            let b = m.evaluate(&psi).unwrap();
            assert!((a - b).abs() < 1e-12, "{m:?}");
        }
    }
}
