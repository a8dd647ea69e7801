use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tensor::{hermitian_eigen, ComplexMatrix, DensityMatrix, StateVector, C64};

/// Eigenvalues closer than this (relative to the spectral scale) share an eigenspace.
const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub estimate: f64,
    /// Sample standard deviation over `√shots`; zero for a single shot.
    pub stderr: f64,
    pub shots: usize,
}

/// Projective measurement in the eigenbasis of an observable.
#[derive(Clone, Debug)]
pub struct ShotEstimator {
    values: Vec<f64>,
    /// One entry per eigenspace; `None` for the largest one, whose weight is
    /// one minus the rest.
    bases: Vec<Option<Eigenspace>>,
}

/// Eigenspaces up to this many dimensions keep their vectors; larger ones
/// are stored as a dense projector.
const MAX_VECTORS: usize = 8;

#[derive(Clone, Debug)]
enum Eigenspace {
    Vectors(Vec<Vec<C64>>),
    Projector(ComplexMatrix),
}

impl Eigenspace {
    fn build(vectors: Vec<Vec<C64>>) -> Self {
        if vectors.len() <= MAX_VECTORS {
            return Eigenspace::Vectors(vectors);
        }
        let dim = vectors[0].len();
        let mut p = ComplexMatrix::zeros(dim, dim);
        for v in &vectors {
            p.add_assign_scaled(&ComplexMatrix::outer(v, v), C64::new(1.0, 0.0));
        }
        Eigenspace::Projector(p)
    }

    fn weight(&self, sigma: &ComplexMatrix) -> f64 {
        match self {
            Eigenspace::Vectors(vs) => vs
                .iter()
                .map(|v| {
                    let sv = sigma.matvec(v).expect("dims match");
                    v.iter().zip(&sv).map(|(a, b)| (a.conj() * b).re).sum::<f64>()
                })
                .sum(),
            // Tr[σP] = Σ σ_ij conj(P_ij) for Hermitian P, read row by row
            Eigenspace::Projector(p) => sigma
                .as_slice()
                .iter()
                .zip(p.as_slice())
                .map(|(a, b)| (a * b.conj()).re)
                .sum(),
        }
    }

    fn weight_pure(&self, psi: &[C64]) -> f64 {
        match self {
            Eigenspace::Vectors(vs) => vs
                .iter()
                .map(|v| v.iter().zip(psi).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr())
                .sum(),
            Eigenspace::Projector(p) => {
                let pv = p.matvec(psi).expect("dims match");
                psi.iter().zip(&pv).map(|(a, b)| (a.conj() * b).re).sum()
            }
        }
    }
}

impl ShotEstimator {
    pub fn new(observable: &ComplexMatrix) -> Result<Self> {
        let eig = hermitian_eigen(observable)?;
        let scale = eig.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, &v) in eig.values.iter().enumerate() {
            match groups.last_mut() {
                Some(idx) if (v - eig.values[*idx.last().unwrap()]).abs() <= DEGENERACY_TOL * scale => idx.push(i),
                _ => groups.push(vec![i]),
            }
        }
        let largest = (0..groups.len()).max_by_key(|&g| groups[g].len()).unwrap_or(0);
        let values = groups
            .iter()
            .map(|idx| idx.iter().map(|&i| eig.values[i]).sum::<f64>() / idx.len() as f64)
            .collect();
        let bases = groups
            .iter()
            .enumerate()
            .map(|(g, idx)| {
                (g != largest).then(|| Eigenspace::build(idx.iter().map(|&c| eig.vectors.column(c)).collect()))
            })
            .collect();
        Ok(Self { values, bases })
    }

    /// Distinct eigenvalues, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn finish(&self, mut probs: Vec<f64>) -> Vec<f64> {
        let rest: f64 = probs.iter().sum();
        if let Some(g) = self.bases.iter().position(Option::is_none) {
            probs[g] = (1.0 - rest).max(0.0);
        }
        let total: f64 = probs.iter().sum();
        probs.iter().map(|p| p / total).collect()
    }

    /// Born probability of each eigenvalue for `σ`.
    pub fn probabilities(&self, sigma: &DensityMatrix) -> Vec<f64> {
        let probs = self
            .bases
            .iter()
            .map(|b| b.as_ref().map_or(0.0, |e| e.weight(sigma.matrix()).max(0.0)))
            .collect();
        self.finish(probs)
    }

    pub fn probabilities_pure(&self, psi: &StateVector) -> Vec<f64> {
        let probs = self
            .bases
            .iter()
            .map(|b| b.as_ref().map_or(0.0, |e| e.weight_pure(psi.amplitudes()).max(0.0)))
            .collect();
        self.finish(probs)
    }

    /// Exact expectation implied by `probs`.
    pub fn mean(&self, probs: &[f64]) -> f64 {
        probs.iter().zip(&self.values).map(|(p, v)| p * v).sum()
    }

    /// Draws `shots` outcomes and averages them.
    pub fn sample<R: Rng + ?Sized>(&self, probs: &[f64], shots: usize, rng: &mut R) -> ShotEstimate {
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in probs {
            acc += p;
            cumulative.push(acc);
        }
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * acc;
            let g = cumulative.partition_point(|&c| c <= u).min(probs.len() - 1);
            let v = self.values[g];
            sum += v;
            sum_sq += v * v;
        }
        let nf = shots as f64;
        let mean = sum / nf;
        let stderr = if shots > 1 {
            ((sum_sq - nf * mean * mean).max(0.0) / (nf - 1.0)).sqrt() / nf.sqrt()
        } else {
            0.0
        };
        ShotEstimate {
            estimate: mean,
            stderr,
            shots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{haar_state, haar_unitary};
    use crate::rng::stream_rng;
    use crate::tensor::{expectation, gates};

    fn exact_mean_matches(obs: &ComplexMatrix, seed: u64) {
        let mut rng = stream_rng(seed, 0);
        let d = obs.rows();
        let est = ShotEstimator::new(obs).unwrap();
        let psi = haar_state(d, &mut rng);
        let pure = est.probabilities_pure(&psi);
        let mixed = est.probabilities(&psi.density());
        assert!((pure.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (a, b) in pure.iter().zip(&mixed) {
            assert!((a - b).abs() < 1e-10);
        }
        let want = expectation(&psi.density(), obs).unwrap();
        assert!((est.mean(&pure) - want).abs() < 1e-10);
    }

    #[test]
    fn probabilities_reproduce_expectation() {
        // eigenspaces of size 8 (vector form) and 16 (projector form)
        exact_mean_matches(&gates::pauli_z(), 1);
        let z_first = |n| crate::tensor::gates::embed(&gates::pauli_z(), 0, n);
        exact_mean_matches(&z_first(4), 2);
        exact_mean_matches(&z_first(5), 3);
        let mut rng = stream_rng(4, 0);
        let u = haar_unitary(8, &mut rng);
        let diag = ComplexMatrix::from_diagonal(
            &[0.0, 0.0, 1.0, 1.0, 1.0, 2.5, 2.5, -1.0].map(|x| C64::new(x, 0.0)),
        );
        exact_mean_matches(&diag.conjugate_by(&u), 5);
    }

    #[test]
    fn degenerate_values_are_grouped() {
        let est = ShotEstimator::new(&gates::embed(&gates::pauli_z(), 1, 3)).unwrap();
        assert_eq!(est.values().len(), 2);
        assert!((est.values()[0] + 1.0).abs() < 1e-12 && (est.values()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_statistics() {
        let est = ShotEstimator::new(&gates::pauli_z()).unwrap();
        let probs = est.probabilities_pure(&StateVector::plus(1));
        let mut rng = stream_rng(6, 0);
        let one = est.sample(&probs, 1, &mut rng);
        assert_eq!(one.stderr, 0.0);
        assert!(one.estimate.abs() == 1.0);
        let many = est.sample(&probs, 100_000, &mut rng);
        assert!(many.estimate.abs() < 4.0 * many.stderr);
        assert!((many.stderr - (1.0f64 / 100_000.0).sqrt()).abs() < 1e-4);
        // a deterministic outcome never fluctuates
        let certain = est.probabilities_pure(&StateVector::zeros(1));
        let s = est.sample(&certain, 50, &mut rng);
        assert_eq!((s.estimate, s.stderr), (1.0, 0.0));
    }
}
