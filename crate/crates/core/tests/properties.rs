use ginv::analysis::{cantelli_bound, misclassification_probability};
use ginv::datasets::{graph_state, Dataset, Graph};
use ginv::groups::{haar_state, haar_unitary, permutation_operator, random_permutation, PermutationTarget};
use ginv::models::Model;
use ginv::observables::{pauli_string, swap_operator};
use ginv::rng::stream_rng;
use ginv::tensor::{
    expm_hermitian, kron, partial_trace, ComplexMatrix, DensityMatrix, MatrixJson, C64,
};
use proptest::prelude::*;
use rand::Rng;

fn random_matrix(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = stream_rng(seed, 0);
    ComplexMatrix::from_fn(d, d, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

fn random_hermitian(d: usize, seed: u64) -> ComplexMatrix {
    let a = random_matrix(d, seed);
    (&a + &a.adjoint()).scale_real(0.5)
}

fn random_state(n: usize, seed: u64) -> DensityMatrix {
    let mut rng = stream_rng(seed, 1);
    let d = 1 << n;
    let a = haar_state(d, &mut rng).density();
    let b = haar_state(d, &mut rng).density();
    let w = rng.random::<f64>();
    let mut m = a.matrix().scale_real(w);
    m.add_assign_scaled(b.matrix(), C64::new(1.0 - w, 0.0));
    DensityMatrix::new(m).unwrap()
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&j| a[j]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_is_associative(seed in any::<u64>(), da in 1usize..4, db in 1usize..4, dc in 1usize..4) {
        let a = random_matrix(da, seed);
        let b = random_matrix(db, seed ^ 1);
        let c = random_matrix(dc, seed ^ 2);
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.distance(&right) < 1e-14);
    }

    #[test]
    fn kron_mixed_product(seed in any::<u64>()) {
        let (a, b, c, d) = (random_matrix(2, seed), random_matrix(3, seed ^ 1), random_matrix(2, seed ^ 2), random_matrix(3, seed ^ 3));
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn expm_of_hermitian_is_unitary(seed in any::<u64>(), d in 1usize..9, t in -5.0f64..5.0) {
        let h = random_hermitian(d, seed);
        let u = expm_hermitian(&h, t).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-10);
        // exp(−itH) exp(+itH) = I
        let back = expm_hermitian(&h, -t).unwrap();
        prop_assert!((&u * &back).distance(&ComplexMatrix::identity(d)) < 1e-10);
    }

    #[test]
    fn partial_trace_keeps_unit_trace(seed in any::<u64>(), n in 1usize..5, mask in any::<u8>()) {
        let rho = random_state(n, seed);
        let keep: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let red = partial_trace(&rho, &keep).unwrap();
        let tr = red.matrix().trace();
        prop_assert!((tr.re - 1.0).abs() < 1e-12 && tr.im.abs() < 1e-12);
        prop_assert!(red.matrix().hermitian_deviation() < 1e-12);
    }

    #[test]
    fn purity_model_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..4) {
        let model = Model::linear(swap_operator(n).unwrap(), 2).unwrap();
        let rho = random_state(n, seed);
        let mut rng = stream_rng(seed, 2);
        let v = haar_unitary(1 << n, &mut rng);
        let a = model.evaluate_state(&rho).unwrap();
        let b = model.evaluate_state(&rho.evolve(&v).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!((a - rho.purity()).abs() < 1e-10);
    }

    #[test]
    fn permutation_operators_are_orthogonal_and_compose(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = stream_rng(seed, 3);
        let s = random_permutation(n, &mut rng);
        let t = random_permutation(n, &mut rng);
        let target = PermutationTarget::Qubits { n };
        let ps = permutation_operator(&s, target).unwrap().into_matrix();
        let pt = permutation_operator(&t, target).unwrap().into_matrix();
        prop_assert!(ps.unitarity_deviation() < 1e-14);
        prop_assert!(ps.max_imag() == 0.0);
        let pst = permutation_operator(&compose(&s, &t), target).unwrap().into_matrix();
        prop_assert!((&ps * &pt).distance(&pst) < 1e-14);
    }

    #[test]
    fn relabeled_graph_state_is_permuted_state(seed in any::<u64>(), mask in any::<u8>()) {
        let n = 4;
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e).collect();
        let g = Graph::new(n, edges).unwrap();
        let mut rng = stream_rng(seed, 4);
        let p = random_permutation(n, &mut rng);
        let moved = graph_state(&g.relabel(&p).unwrap(), 0.8).unwrap();
        let op = permutation_operator(&p, PermutationTarget::Qubits { n }).unwrap();
        let expected = graph_state(&g, 0.8).unwrap().apply(op.matrix()).unwrap();
        prop_assert!((moved.inner(&expected).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pauli_strings_square_to_identity(s in "[IXYZ]{1,5}") {
        let p = pauli_string(&s).unwrap();
        let m = p.observable.matrix();
        prop_assert!((m * m).distance(&ComplexMatrix::identity(m.rows())) < 1e-14);
        let odd = s.chars().filter(|&c| c == 'Y').count() % 2 == 1;
        prop_assert_eq!(p.purely_imaginary, odd);
        prop_assert_eq!(m.max_real() == 0.0, odd);
    }

    #[test]
    fn pauli_parser_never_panics(s in ".{0,20}") {
        let _ = pauli_string(&s);
    }

    #[test]
    fn misclassification_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let pl = misclassification_probability(lo).unwrap();
        let ph = misclassification_probability(hi).unwrap();
        prop_assert!(pl <= ph + 1e-15);
        prop_assert!((0.0..=0.5).contains(&ph));
    }

    #[test]
    fn cantelli_is_a_probability_decreasing_in_delta(var in 0.0f64..10.0, d1 in 1e-3f64..10.0, d2 in 1e-3f64..10.0) {
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let bl = cantelli_bound(var, lo).unwrap();
        let bh = cantelli_bound(var, hi).unwrap();
        prop_assert!((0.0..1.0).contains(&bl));
        prop_assert!(bh <= bl + 1e-15);
    }

    #[test]
    fn matrix_json_round_trips(seed in any::<u64>(), d in 1usize..6) {
        let m = random_matrix(d, seed);
        let text = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        let m2 = ComplexMatrix::try_from(&back).unwrap();
        prop_assert_eq!(m, m2);
    }

    #[test]
    fn dataset_parser_never_panics(s in ".{0,64}") {
        let _ = Dataset::from_json(&s);
    }
}
