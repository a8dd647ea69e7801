use serde::{Deserialize, Serialize};

use super::moments::{analytic_moments, sample_model_values, MomentReport};
use crate::datasets::Label;
use crate::error::{Error, Result};
use crate::groups::GroupKind;
use crate::models::Model;
use crate::observables::{bell_projector, pauli_string};
use crate::tensor::{DensityMatrix, StateVector};

/// Model families whose Haar variance is tracked against system size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConcentrationFamily {
    /// `Tr[VρV† (Y⊗I⊗…⊗I)]` with `ρ = |0…0⟩⟨0…0|`; label 1 draws orthogonal `V`.
    Conventional,
    /// `Tr[(VρV†)^⊗2 |Φ+⟩⟨Φ+|]` with `ρ = |0…0⟩⟨0…0|`; label 1 draws orthogonal `V`.
    Enhanced,
}

impl ConcentrationFamily {
    /// The model and input template at `n` qubits.
    pub fn model(&self, n: usize) -> Result<(Model, Option<DensityMatrix>)> {
        match self {
            ConcentrationFamily::Conventional => {
                let o = pauli_string(&format!("Y{}", "I".repeat(n.saturating_sub(1))))?.observable;
                Ok((Model::linear(o, 1)?, Some(StateVector::zeros(n).density())))
            }
            ConcentrationFamily::Enhanced => {
                let m = Model::linear(bell_projector(n)?, 2)?;
                Ok((m, Some(StateVector::zeros(n).density())))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub d: usize,
    pub empirical_mean: f64,
    pub empirical_var: f64,
    pub var_stderr: f64,
    pub analytic_var: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationTable {
    pub family: ConcentrationFamily,
    pub label: Label,
    pub samples: usize,
    pub rows: Vec<ConcentrationRow>,
    /// Least-squares slope of `log₂(empirical_var)` against `n`.
    pub empirical_slope: Option<f64>,
    pub analytic_slope: Option<f64>,
}

/// Slope of the least-squares line through `(x, log₂ y)`; `None` if any `y ≤ 0`
/// or fewer than two points.
pub fn log2_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() || ys.iter().any(|&y| !(y > 0.0)) {
        return None;
    }
    let ly: Vec<f64> = ys.iter().map(|y| y.log2()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Haar-sampled variance of a family for each `n`. Label 0 samples the
/// unitary group, label 1 the orthogonal group.
pub fn concentration_experiment(
    family: ConcentrationFamily,
    n_values: &[usize],
    samples: usize,
    seed: u64,
    label: Label,
) -> Result<ConcentrationTable> {
    if n_values.is_empty() {
        return Err(Error::InvalidArgument("no system sizes given".into()));
    }
    let mut rows = Vec::with_capacity(n_values.len());
    for (idx, &n) in n_values.iter().enumerate() {
        if n == 0 || n > 6 {
            return Err(Error::InvalidArgument(format!("n = {n} outside 1..=6")));
        }
        let d = 1usize << n;
        let (model, rho) = family.model(n)?;
        let group = match label {
            Label::Zero => GroupKind::Unitary { d },
            Label::One => GroupKind::Orthogonal { d },
        };
        let sub_seed = seed.wrapping_add(idx as u64);
        let values = sample_model_values(&model, group, rho.as_ref(), samples, sub_seed)?;
        let analytic = analytic_moments(&model, group, rho.as_ref());
        let rep = MomentReport::from_values(&values, analytic.map(|a| a.0), analytic.and_then(|a| a.1))?;
        rows.push(ConcentrationRow {
            n,
            d,
            empirical_mean: rep.empirical_mean,
            empirical_var: rep.empirical_var,
            var_stderr: rep.var_stderr,
            analytic_var: rep.analytic_var,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let emp: Vec<f64> = rows.iter().map(|r| r.empirical_var).collect();
    let ana: Option<Vec<f64>> = rows.iter().map(|r| r.analytic_var).collect();
    Ok(ConcentrationTable {
        family,
        label,
        samples,
        empirical_slope: log2_slope(&xs, &emp),
        analytic_slope: ana.and_then(|a| log2_slope(&xs, &a)),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_powers() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [0.5, 0.25, 0.125];
        assert!((log2_slope(&xs, &ys).unwrap() + 1.0).abs() < 1e-12);
        assert!(log2_slope(&xs, &[0.5, 0.0, 0.1]).is_none());
        assert!(log2_slope(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn label_one_columns_vanish() {
        for fam in [ConcentrationFamily::Conventional, ConcentrationFamily::Enhanced] {
            let t = concentration_experiment(fam, &[1, 2], 200, 1, Label::One).unwrap();
            for r in &t.rows {
                assert!(r.empirical_var < 1e-18, "{fam:?} {r:?}");
            }
            if fam == ConcentrationFamily::Conventional {
                assert!(t.empirical_slope.is_none());
            }
        }
    }
}
