use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::permutation::{permutation_operator, PermutationTarget};
use crate::tensor::{kron_all, ComplexMatrix, StateVector, C64};

/// Haar-random element of U(d): QR of a complex Ginibre matrix with the
/// phases of `diag(R)` folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let z = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    ComplexMatrix::from_fn(d, d, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// Haar-random element of O(d), stored with zero imaginary parts.
pub fn haar_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let z = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    ComplexMatrix::from_fn(d, d, |i, j| {
        let s = if r[(j, j)] < 0.0 { -1.0 } else { 1.0 };
        C64::new(q[(i, j)] * s, 0.0)
    })
}

/// Haar-random pure state in dimension `d` (normalized complex Gaussian vector).
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> StateVector {
    let amps = (0..d)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps).expect("nonzero Gaussian vector")
}

/// Uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// One of the symmetry groups acting on an `n`-qubit register by conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "snake_case")]
pub enum GroupKind {
    /// U(d) on the full register.
    Unitary { d: usize },
    /// O(d) on the full register.
    Orthogonal { d: usize },
    /// `⊗_j U(2)` on `n` qubits.
    LocalUnitary { n: usize },
    /// Qubit permutations S_n on `n` qubits.
    Symmetric { n: usize },
}

impl GroupKind {
    /// Dimension of the matrices representing the group.
    pub fn dim(&self) -> usize {
        match *self {
            GroupKind::Unitary { d } | GroupKind::Orthogonal { d } => d,
            GroupKind::LocalUnitary { n } | GroupKind::Symmetric { n } => 1 << n,
        }
    }

    /// Exact generating set, for the finite groups.
    pub fn generators(&self) -> Option<Vec<ComplexMatrix>> {
        match *self {
            GroupKind::Symmetric { n } => {
                let target = PermutationTarget::Qubits { n };
                let mut gens = Vec::new();
                for i in 0..n.saturating_sub(1) {
                    let mut p: Vec<usize> = (0..n).collect();
                    p.swap(i, i + 1);
                    gens.push(permutation_operator(&p, target).expect("transposition").into_matrix());
                }
                if gens.is_empty() {
                    gens.push(ComplexMatrix::identity(1 << n));
                }
                Some(gens)
            }
            _ => None,
        }
    }
}

/// Source of group elements, all of one fixed dimension.
pub trait GroupAction {
    fn dim(&self) -> usize;
    fn next_element(&mut self) -> ComplexMatrix;
}

/// Seeded sampler for one [`GroupKind`]. Equal seeds give equal sequences.
#[derive(Clone, Debug)]
pub struct GroupSampler {
    kind: GroupKind,
    seed: u64,
    rng: ChaCha8Rng,
}

impl GroupSampler {
    pub fn new(kind: GroupKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Draws one element using an external stream.
    pub fn sample_with<R: Rng + ?Sized>(kind: GroupKind, rng: &mut R) -> ComplexMatrix {
        match kind {
            GroupKind::Unitary { d } => haar_unitary(d, rng),
            GroupKind::Orthogonal { d } => haar_orthogonal(d, rng),
            GroupKind::LocalUnitary { n } => {
                let factors: Vec<ComplexMatrix> = (0..n).map(|_| haar_unitary(2, rng)).collect();
                if factors.is_empty() {
                    ComplexMatrix::identity(1)
                } else {
                    kron_all(&factors)
                }
            }
            GroupKind::Symmetric { n } => {
                let p = random_permutation(n, rng);
                permutation_operator(&p, PermutationTarget::Qubits { n })
                    .expect("random permutation is valid")
                    .into_matrix()
            }
        }
    }

    pub fn sample(&mut self) -> ComplexMatrix {
        Self::sample_with(self.kind, &mut self.rng)
    }
}

impl GroupAction for GroupSampler {
    fn dim(&self) -> usize {
        self.kind.dim()
    }

    fn next_element(&mut self) -> ComplexMatrix {
        self.sample()
    }
}

/// A fixed list of elements, cycled in order.
#[derive(Clone, Debug)]
pub struct FiniteSet {
    elements: Vec<ComplexMatrix>,
    next: usize,
}

impl FiniteSet {
    pub fn new(elements: Vec<ComplexMatrix>) -> Self {
        assert!(!elements.is_empty(), "finite set needs at least one element");
        Self { elements, next: 0 }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// The cyclic rotations `j -> j + s mod n` acting on qubits.
    pub fn cyclic_rotations(n: usize) -> Self {
        let elements = (0..n)
            .map(|s| {
                let p: Vec<usize> = (0..n).map(|j| (j + s) % n).collect();
                permutation_operator(&p, PermutationTarget::Qubits { n })
                    .expect("rotation")
                    .into_matrix()
            })
            .collect();
        Self::new(elements)
    }
}

impl GroupAction for FiniteSet {
    fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    fn next_element(&mut self) -> ComplexMatrix {
        let e = self.elements[self.next % self.elements.len()].clone();
        self.next += 1;
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::gates;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn unitary_samples_are_unitary() {
        let mut r = rng(1);
        for d in [1, 2, 3, 4, 8, 16] {
            for _ in 0..10 {
                assert!(haar_unitary(d, &mut r).unitarity_deviation() < 1e-9);
            }
        }
    }

    #[test]
    fn d1_is_a_phase() {
        let u = haar_unitary(1, &mut rng(3));
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
        let o = haar_orthogonal(1, &mut rng(3));
        assert!((o[(0, 0)].re.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_samples_are_real_orthogonal() {
        let mut r = rng(2);
        for _ in 0..1000 {
            let v = haar_orthogonal(2, &mut r);
            assert!(v.max_imag() < 1e-12);
            let vvt = &v * &v.transpose();
            assert!(vvt.distance(&ComplexMatrix::identity(2)) < 1e-9);
        }
    }

    #[test]
    fn orthogonal_determinant_splits_evenly() {
        let mut r = rng(5);
        let n = 10_000;
        let neg = (0..n)
            .filter(|_| {
                let v = haar_orthogonal(2, &mut r);
                (v[(0, 0)] * v[(1, 1)] - v[(0, 1)] * v[(1, 0)]).re < 0.0
            })
            .count();
        let f = neg as f64 / n as f64;
        assert!((f - 0.5).abs() < 0.02, "fraction {f}");
    }

    #[test]
    fn unitary_first_moments() {
        let n = 20_000;
        let mut r = rng(11);
        let z = gates::pauli_z();
        let mut s2 = 0.0;
        let mut s4 = 0.0;
        for _ in 0..n {
            let v = haar_unitary(2, &mut r);
            s2 += z.conjugate_by(&v)[(0, 0)].re;
            s4 += haar_unitary(4, &mut r)[(0, 0)].norm_sqr();
        }
        let tol = 3.0 / (n as f64).sqrt();
        assert!((s2 / n as f64).abs() < tol);
        assert!((s4 / n as f64 - 0.25).abs() < tol);
    }

    #[test]
    fn seeded_sampler_is_reproducible() {
        for kind in [
            GroupKind::Unitary { d: 4 },
            GroupKind::Orthogonal { d: 4 },
            GroupKind::LocalUnitary { n: 2 },
            GroupKind::Symmetric { n: 3 },
        ] {
            let mut a = GroupSampler::new(kind, 42);
            let mut b = GroupSampler::new(kind, 42);
            for _ in 0..5 {
                let (x, y) = (a.sample(), b.sample());
                assert_eq!(x.as_slice(), y.as_slice());
                assert!(x.unitarity_deviation() < 1e-9);
                assert_eq!(x.rows(), kind.dim());
            }
        }
    }

    #[test]
    fn left_invariance_of_entry_means() {
        let n = 10_000;
        let f = haar_unitary(3, &mut rng(99));
        let mut r = rng(100);
        let (mut a, mut a2, mut b, mut b2) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let v = haar_unitary(3, &mut r);
            let x = v[(1, 2)].re;
            let y = (&f * &v)[(1, 2)].re;
            a += x;
            a2 += x * x;
            b += y;
            b2 += y * y;
        }
        let nf = n as f64;
        let (ma, mb) = (a / nf, b / nf);
        let se = ((a2 / nf - ma * ma) / nf + (b2 / nf - mb * mb) / nf).sqrt();
        assert!((ma - mb).abs() < 4.0 * se);
    }

    #[test]
    fn cyclic_rotations_cycle() {
        let mut set = FiniteSet::cyclic_rotations(4);
        assert_eq!(set.elements().len(), 4);
        assert_eq!(set.next_element(), ComplexMatrix::identity(16));
        assert_eq!(set.dim(), 16);
    }
}
