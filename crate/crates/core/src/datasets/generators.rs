use rayon::prelude::*;
use serde_json::json;

use super::{balanced_labels, DataItem, Dataset, Label, LabeledState, LabeledUnitary};
use crate::error::{Error, Result};
use crate::groups::{haar_orthogonal, haar_state, haar_unitary, GroupKind, GroupSampler};
use crate::observables::EntanglementMeasure;
use crate::rng::stream_rng;
use crate::tensor::{ComplexMatrix, DensityMatrix, StateVector, C64};

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::InvalidArgument(format!("qubit count must be in 1..={max}, got {n}")));
    }
    Ok(())
}

/// Weight `p` such that `p|ψ⟩⟨ψ| + (1−p) I/d` has purity `b`, from
/// `p²(1 − 1/d) + 1/d = b`. Accepts `b ∈ [1/d, 1)`.
pub fn purity_mixing_weight(b: f64, d: usize) -> Result<f64> {
    let inv = 1.0 / d as f64;
    if !b.is_finite() || b < inv - 1e-12 || b >= 1.0 {
        return Err(Error::InvalidArgument(format!("purity {b} outside [{inv}, 1)")));
    }
    Ok(((b - inv).max(0.0) / (1.0 - inv)).sqrt())
}

/// Label 1: Haar-random pure states. Label 0: depolarized Haar states of purity `b`.
pub fn purity_dataset(n: usize, count: usize, b: f64, seed: u64) -> Result<Dataset> {
    check_n(n, 10)?;
    let d = 1usize << n;
    let p = purity_mixing_weight(b, d)?;
    let labels = balanced_labels(count, seed);
    let items = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let psi = haar_state(d, &mut rng).density();
            let state = match labels[i] {
                Label::One => psi,
                Label::Zero => {
                    let mut m = psi.into_matrix().scale_real(p);
                    m.add_assign_scaled(&ComplexMatrix::identity(d), C64::new((1.0 - p) / d as f64, 0.0));
                    DensityMatrix::new(m).expect("convex combination of states")
                }
            };
            DataItem::State(LabeledState {
                state,
                label: labels[i],
            })
        })
        .collect();
    Ok(Dataset {
        generator: "purity".into(),
        params: json!({"n": n, "count": count, "b": b, "mixing_weight": p, "mixed_family": "depolarized_haar"}),
        seed,
        items,
    })
}

/// Label 1: `V|0…0⟩` with Haar-orthogonal `V` (real amplitudes). Label 0: Haar-unitary `V`.
pub fn time_reversal_state_dataset(n: usize, count: usize, seed: u64) -> Result<Dataset> {
    check_n(n, 10)?;
    let d = 1usize << n;
    let labels = balanced_labels(count, seed);
    let items = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let v = match labels[i] {
                Label::One => haar_orthogonal(d, &mut rng),
                Label::Zero => haar_unitary(d, &mut rng),
            };
            let psi = StateVector::normalized(v.column(0)).expect("unitary column");
            DataItem::State(LabeledState {
                state: psi.density(),
                label: labels[i],
            })
        })
        .collect();
    Ok(Dataset {
        generator: "time_reversal_states".into(),
        params: json!({"n": n, "count": count, "fiducial": "zero"}),
        seed,
        items,
    })
}

/// Label 1: Haar-orthogonal unitaries. Label 0: Haar unitaries.
pub fn time_reversal_dynamics_dataset(n: usize, count: usize, seed: u64) -> Result<Dataset> {
    check_n(n, 10)?;
    let d = 1usize << n;
    let labels = balanced_labels(count, seed);
    let items = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let unitary = match labels[i] {
                Label::One => haar_orthogonal(d, &mut rng),
                Label::Zero => haar_unitary(d, &mut rng),
            };
            DataItem::Unitary(LabeledUnitary {
                unitary,
                label: labels[i],
            })
        })
        .collect();
    Ok(Dataset {
        generator: "time_reversal_dynamics".into(),
        params: json!({"n": n, "count": count}),
        seed,
        items,
    })
}

/// `cos α |0…0⟩ + sin α |GHZ⟩`, normalized.
pub fn ghz_interpolation(n: usize, alpha: f64) -> StateVector {
    let zero = StateVector::zeros(n);
    let ghz = StateVector::ghz(n);
    let amps = zero
        .amplitudes()
        .iter()
        .zip(ghz.amplitudes())
        .map(|(a, g)| a * alpha.cos() + g * alpha.sin())
        .collect();
    StateVector::normalized(amps).expect("nonzero interpolation")
}

/// Angle `α ∈ [0, π/2]` with `measure(ψ(α)) = b` within `1e-6`, by bisection.
pub fn solve_interpolation_angle(n: usize, b: f64, measure: &EntanglementMeasure) -> Result<f64> {
    let f = |a: f64| measure.evaluate(&ghz_interpolation(n, a));
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo.abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "{measure:?} does not vanish on product states (value {flo})"
        )));
    }
    if !(b > 0.0 && b <= fhi + 1e-12) {
        return Err(Error::Unattainable {
            target: b,
            reason: format!("attainable range along the GHZ family is (0, {fhi}]"),
        });
    }
    if (fhi - b).abs() <= 1e-9 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if (fm - b).abs() < 1e-9 {
            return Ok(mid);
        }
        if fm < b {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Label 0: products of Haar-random single-qubit states. Label 1: a GHZ
/// interpolation with measure value `b`, conjugated by a random local unitary.
pub fn entanglement_dataset(
    n: usize,
    count: usize,
    b: f64,
    measure: &EntanglementMeasure,
    seed: u64,
) -> Result<Dataset> {
    check_n(n, 6)?;
    if n < 2 {
        return Err(Error::InvalidArgument("entanglement needs at least two qubits".into()));
    }
    let alpha = solve_interpolation_angle(n, b, measure)?;
    let target = ghz_interpolation(n, alpha);
    let labels = balanced_labels(count, seed);
    let local = GroupKind::LocalUnitary { n };
    let items = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let psi = match labels[i] {
                Label::One => target.apply(&GroupSampler::sample_with(local, &mut rng)).expect("dims match"),
                Label::Zero => {
                    let factors: Vec<StateVector> = (0..n).map(|_| haar_state(2, &mut rng)).collect();
                    crate::tensor::product_state(&factors)
                }
            };
            DataItem::State(LabeledState {
                state: psi.density(),
                label: labels[i],
            })
        })
        .collect();
    Ok(Dataset {
        generator: "entanglement".into(),
        params: json!({"n": n, "count": count, "b": b, "measure": measure, "alpha": alpha}),
        seed,
        items,
    })
}
