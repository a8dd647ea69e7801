use serde::{Deserialize, Serialize};

use super::haar::{GroupAction, GroupKind, GroupSampler};
use crate::error::{Error, Result};
use crate::tensor::{kron, qr, singular_values, ComplexMatrix};

/// Largest `d^k` accepted, so the system has at most `64² = 4096` unknowns.
pub const MAX_COMMUTANT_DIM: usize = 64;

/// Relative singular-value cutoff used to decide the rank.
pub const RANK_CUTOFF: f64 = 1e-8;

/// Group elements drawn when no exact generators are available.
pub const DEFAULT_COMMUTANT_SAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutantReport {
    pub dimension: usize,
    /// Singular values of the stacked constraint system, descending.
    pub singular_values: Vec<f64>,
    pub cutoff: f64,
    /// Smallest kept singular value over largest discarded one.
    pub rank_gap: f64,
    /// A singular value lies within a factor of ten of the cutoff.
    pub ambiguous: bool,
}

/// Constraint block `M⊗I − I⊗Mᵀ` acting on row-major `vec(W)`; its kernel is
/// `{W : MW = WM}`.
fn constraint_block(m: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(m.rows());
    &kron(m, &id) - &kron(&id, &m.transpose())
}

fn tensor_power_matrix(v: &ComplexMatrix, k: usize) -> ComplexMatrix {
    (1..k).fold(v.clone(), |acc, _| kron(&acc, v))
}

/// Dimension of `{W : [W, V^⊗k] = 0}` for all supplied `V`.
pub fn commutant_from_elements(elements: &[ComplexMatrix], k: usize) -> Result<CommutantReport> {
    if elements.is_empty() {
        return Err(Error::InvalidArgument("need at least one group element".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("copy count k must be at least 1".into()));
    }
    let d = elements[0].square_dim()?;
    let big = (d as u128).pow(k as u32);
    if big > MAX_COMMUTANT_DIM as u128 {
        let unknowns = usize::try_from(big * big).unwrap_or(usize::MAX);
        return Err(Error::SystemTooLarge {
            unknowns,
            limit: MAX_COMMUTANT_DIM * MAX_COMMUTANT_DIM,
        });
    }
    let unknowns = (big * big) as usize;
    // Keep only the triangular factor of the growing stack.
    let mut r: Option<ComplexMatrix> = None;
    for v in elements {
        if v.rows() != d || v.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.rows(),
            });
        }
        let block = constraint_block(&tensor_power_matrix(v, k));
        let stacked = match r.take() {
            None => block,
            Some(prev) => {
                let mut data = prev.into_vec();
                data.extend_from_slice(block.as_slice());
                ComplexMatrix::from_vec(data.len() / unknowns, unknowns, data)?
            }
        };
        r = Some(qr(&stacked).1);
    }
    let r = r.expect("at least one element");
    let mut sv = singular_values(&r);
    sv.resize(unknowns, 0.0);
    Ok(rank_report(sv))
}

fn rank_report(sv: Vec<f64>) -> CommutantReport {
    let smax = sv.first().copied().unwrap_or(0.0);
    let cutoff = RANK_CUTOFF * smax;
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    let kept_min = if rank > 0 { sv[rank - 1] } else { f64::NAN };
    let dropped_max = sv.get(rank).copied();
    let rank_gap = match dropped_max {
        None => f64::INFINITY,
        Some(x) if x <= 0.0 => f64::INFINITY,
        Some(x) if rank == 0 => 0.0 / x,
        Some(x) => kept_min / x,
    };
    let ambiguous = sv.iter().any(|&s| s > cutoff / 10.0 && s < cutoff * 10.0);
    CommutantReport {
        dimension: sv.len() - rank,
        singular_values: sv,
        cutoff,
        rank_gap,
        ambiguous,
    }
}

/// Commutant dimension of `V^⊗k` over a group: exact generators when the
/// group is finite, otherwise `samples` draws from `source`.
pub fn commutant_dimension(source: &mut dyn GroupAction, samples: usize, k: usize) -> Result<CommutantReport> {
    let elements: Vec<ComplexMatrix> = (0..samples.max(1)).map(|_| source.next_element()).collect();
    commutant_from_elements(&elements, k)
}

/// Convenience wrapper choosing generators or seeded samples by group kind.
pub fn commutant_of_group(kind: GroupKind, k: usize, seed: u64) -> Result<CommutantReport> {
    match kind.generators() {
        Some(gens) => commutant_from_elements(&gens, k),
        None => {
            let mut sampler = GroupSampler::new(kind, seed);
            commutant_dimension(&mut sampler, DEFAULT_COMMUTANT_SAMPLES, k)
        }
    }
}
