use std::f64::consts::FRAC_1_SQRT_2;

use super::linalg::hermitian_eigenvalues;
use super::matrix::{kron, kron_vec, ComplexMatrix, C64, ONE, ZERO};
use super::{check_operator_dim, qubits_for_dim, HERMITIAN_TOL, NORM_TOL};
use crate::error::{Error, Result};

/// Normalized pure state on `log2(dim)` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized (within 1e-12).
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        qubits_for_dim(dim)?;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, bound: dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amplitudes: amps })
    }

    /// `|0⟩^⊗n`.
    pub fn zeros(n: usize) -> Self {
        Self::basis(1 << n, 0).expect("valid basis state")
    }

    /// `|+⟩^⊗n`.
    pub fn plus(n: usize) -> Self {
        let d = 1usize << n;
        let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        Self {
            amplitudes: vec![a; d],
        }
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n: usize) -> Self {
        let d = 1usize << n;
        let mut amps = vec![ZERO; d];
        amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
        amps[d - 1] += C64::new(FRAC_1_SQRT_2, 0.0);
        if n == 0 {
            amps[0] = ONE;
        }
        Self { amplitudes: amps }
    }

    /// Equal superposition of all single-excitation basis states.
    pub fn w(n: usize) -> Self {
        assert!(n >= 1);
        let d = 1usize << n;
        let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        let mut amps = vec![ZERO; d];
        for q in 0..n {
            amps[1 << q] = a;
        }
        Self { amplitudes: amps }
    }

    /// Unit-norm maximally entangled state `Σ_j |j⟩|j⟩ / √d` on two `n`-qubit registers.
    pub fn phi_plus(n: usize) -> Self {
        let d = 1usize << n;
        let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        let mut amps = vec![ZERO; d * d];
        for j in 0..d {
            amps[j * d + j] = a;
        }
        Self { amplitudes: amps }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// `U|ψ⟩`; the result is renormalized to absorb round-off.
    pub fn apply(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != u.cols() {
            return Err(Error::NotSquare {
                rows: u.rows(),
                cols: u.cols(),
            });
        }
        Self::normalized(u.matvec(&self.amplitudes)?)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            qubits: self.qubits(),
        }
    }

    /// `⟨ψ|O|ψ⟩` (real part).
    pub fn expectation(&self, obs: &ComplexMatrix) -> Result<f64> {
        let ov = obs.matvec(&self.amplitudes)?;
        Ok(self.amplitudes.iter().zip(&ov).map(|(a, b)| (a.conj() * b).re).sum())
    }

    pub fn max_imag(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.im.abs()).fold(0.0, f64::max)
    }
}

/// Mixed or pure state on `qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    qubits: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.square_dim()?;
        let qubits = qubits_for_dim(dim)?;
        check_operator_dim(dim)?;
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = hermitian_eigenvalues(&matrix)?[0];
        if min_eig < -HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { matrix, qubits })
    }

    /// Skips validation; callers guarantee the invariants hold.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        let qubits = matrix.rows().trailing_zeros() as usize;
        Self { matrix, qubits }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1usize << n;
        Self::new_unchecked(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(
            &probs.iter().map(|&p| C64::new(p, 0.0)).collect::<Vec<_>>(),
        ))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.rows(),
            });
        }
        Ok(Self::new_unchecked(self.matrix.conjugate_by(u)))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            matrix: kron(&self.matrix, &other.matrix),
            qubits: self.qubits + other.qubits,
        }
    }
}

/// `ρ^⊗k` under the default memory cap.
pub fn tensor_power(rho: &DensityMatrix, k: usize) -> Result<DensityMatrix> {
    tensor_power_with_cap(rho, k, super::DEFAULT_MEMORY_CAP)
}

pub fn tensor_power_with_cap(rho: &DensityMatrix, k: usize, cap_bytes: u128) -> Result<DensityMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("copy count k must be at least 1".into()));
    }
    let dim = (rho.dim() as u128)
        .checked_pow(k as u32)
        .filter(|&d| d <= usize::MAX as u128)
        .ok_or(Error::MemoryCap {
            dim: usize::MAX,
            bytes: u128::MAX,
            cap: cap_bytes,
        })?;
    let bytes = dim * dim * 16;
    if bytes > cap_bytes {
        return Err(Error::MemoryCap {
            dim: dim as usize,
            bytes,
            cap: cap_bytes,
        });
    }
    let mut out = rho.clone();
    for _ in 1..k {
        out = out.kron(rho);
    }
    Ok(out)
}

/// Reduced state on the qubits in `keep` (qubit 0 is the most significant
/// tensor factor). Duplicates in `keep` are ignored; an empty set yields the
/// 1×1 matrix holding the trace.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let m = rho.qubits();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&q| q >= m) {
        return Err(Error::IndexOutOfRange { index: bad, bound: m });
    }
    if kept.len() == m {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..m).filter(|q| !kept.contains(q)).collect();
    let place = |bits: usize, qubits: &[usize]| -> usize {
        qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
            let bit = (bits >> (qubits.len() - 1 - pos)) & 1;
            acc | (bit << (m - 1 - q))
        })
    };
    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let kept_idx: Vec<usize> = (0..dk).map(|a| place(a, &kept)).collect();
    let traced_idx: Vec<usize> = (0..dt).map(|t| place(t, &traced)).collect();
    let full = rho.matrix();
    let out = ComplexMatrix::from_fn(dk, dk, |a, b| {
        traced_idx
            .iter()
            .map(|&t| full[(kept_idx[a] | t, kept_idx[b] | t)])
            .sum()
    });
    Ok(DensityMatrix::new_unchecked(out))
}

/// `Tr[ρ O]`, real part. Errors on dimension mismatch.
pub fn expectation(rho: &DensityMatrix, obs: &ComplexMatrix) -> Result<f64> {
    if obs.rows() != rho.dim() || obs.cols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: obs.rows(),
        });
    }
    Ok(rho.matrix().trace_product(obs)?.re)
}

/// Product state from single-qubit state vectors, qubit 0 first.
pub fn product_state(factors: &[StateVector]) -> StateVector {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kron(f))
}
