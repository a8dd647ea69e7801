use serde::{Deserialize, Serialize};

use crate::datasets::{graph_hamiltonian, Graph};
use crate::error::{Error, Result};
use crate::tensor::{expm_hermitian, gates, kron, ComplexMatrix, MatrixJson, C64};

/// One gate of a layered circuit. Rotations consume one parameter each, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    Rx { qubit: usize },
    Ry { qubit: usize },
    Rz { qubit: usize },
    H { qubit: usize },
    Cnot { control: usize, target: usize },
    Cz { control: usize, target: usize },
}

impl Gate {
    fn is_rotation(&self) -> bool {
        matches!(self, Gate::Rx { .. } | Gate::Ry { .. } | Gate::Rz { .. })
    }

    fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rx { qubit } | Gate::Ry { qubit } | Gate::Rz { qubit } | Gate::H { qubit } => vec![qubit],
            Gate::Cnot { control, target } | Gate::Cz { control, target } => vec![control, target],
        }
    }

    fn matrix(&self, n: usize, theta: f64) -> ComplexMatrix {
        let rot = |p: ComplexMatrix| {
            let mut m = gates::pauli_i().scale_real((theta / 2.0).cos());
            m.add_assign_scaled(&p, C64::new(0.0, -(theta / 2.0).sin()));
            m
        };
        match *self {
            Gate::Rx { qubit } => gates::embed(&rot(gates::pauli_x()), qubit, n),
            Gate::Ry { qubit } => gates::embed(&rot(gates::pauli_y()), qubit, n),
            Gate::Rz { qubit } => gates::embed(&rot(gates::pauli_z()), qubit, n),
            Gate::H { qubit } => gates::embed(&gates::hadamard(), qubit, n),
            Gate::Cnot { control, target } | Gate::Cz { control, target } => {
                let dim = 1usize << n;
                let cbit = 1usize << (n - 1 - control);
                let tbit = 1usize << (n - 1 - target);
                let cz = matches!(self, Gate::Cz { .. });
                let mut m = ComplexMatrix::zeros(dim, dim);
                for x in 0..dim {
                    if x & cbit == 0 {
                        m[(x, x)] = C64::new(1.0, 0.0);
                    } else if cz {
                        let s = if x & tbit == 0 { 1.0 } else { -1.0 };
                        m[(x, x)] = C64::new(s, 0.0);
                    } else {
                        m[(x ^ tbit, x)] = C64::new(1.0, 0.0);
                    }
                }
                m
            }
        }
    }
}

/// Parameterized unitary `U(θ)`.
///
/// QGCNN parameters are laid out as `(W_q, B_q)` for each generator `q`,
/// followed by `η_pq` in layer-major order; the circuit is
/// `Π_p Π_q exp(−i η_pq H_q)` with `H_q = W_q Σ_E Z_j Z_k + B_q Σ_V X_v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnsatzSpec {
    Identity {},
    Fixed {
        matrix: MatrixJson,
    },
    SwapTest {
        n: usize,
    },
    Layered {
        qubits: usize,
        gates: Vec<Gate>,
        #[serde(default)]
        params: Vec<f64>,
    },
    Qgcnn {
        graph: Graph,
        layers: usize,
        generators: usize,
        #[serde(default)]
        params: Vec<f64>,
    },
}

impl AnsatzSpec {
    /// Number of free parameters.
    pub fn parameter_count(&self) -> usize {
        match self {
            AnsatzSpec::Identity {} | AnsatzSpec::Fixed { .. } | AnsatzSpec::SwapTest { .. } => 0,
            AnsatzSpec::Layered { gates, .. } => gates.iter().filter(|g| g.is_rotation()).count(),
            AnsatzSpec::Qgcnn { layers, generators, .. } => 2 * generators + layers * generators,
        }
    }

    /// Stored parameters (empty for fixed kinds).
    pub fn params(&self) -> &[f64] {
        match self {
            AnsatzSpec::Layered { params, .. } | AnsatzSpec::Qgcnn { params, .. } => params,
            _ => &[],
        }
    }

    /// Copy with the parameter vector replaced.
    pub fn with_params(&self, theta: &[f64]) -> Self {
        let mut out = self.clone();
        match &mut out {
            AnsatzSpec::Layered { params, .. } | AnsatzSpec::Qgcnn { params, .. } => *params = theta.to_vec(),
            _ => {}
        }
        out
    }

    /// Matrix dimension, or `None` for the identity (which fits anything).
    pub fn dim(&self) -> Option<usize> {
        match self {
            AnsatzSpec::Identity {} => None,
            AnsatzSpec::Fixed { matrix } => Some(matrix.dim),
            AnsatzSpec::SwapTest { n } => Some(1 << (2 * n + 1)),
            AnsatzSpec::Layered { qubits, .. } => Some(1 << qubits),
            AnsatzSpec::Qgcnn { graph, .. } => Some(1 << graph.n()),
        }
    }

    /// `U(θ)` at the stored parameters.
    pub fn unitary(&self) -> Result<Option<ComplexMatrix>> {
        realize(self, self.params())
    }
}

/// Unitary realized at `theta`; `None` means the identity.
pub fn realize(ansatz: &AnsatzSpec, theta: &[f64]) -> Result<Option<ComplexMatrix>> {
    let expected = ansatz.parameter_count();
    if theta.len() != expected {
        return Err(Error::InvalidArgument(format!(
            "ansatz takes {expected} parameters, got {}",
            theta.len()
        )));
    }
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("ansatz parameter".into()));
    }
    match ansatz {
        AnsatzSpec::Identity {} => Ok(None),
        AnsatzSpec::Fixed { matrix } => {
            let m = ComplexMatrix::try_from(matrix)?;
            let dev = m.unitarity_deviation();
            if dev > 1e-9 {
                return Err(Error::NotUnitary { deviation: dev });
            }
            Ok(Some(m))
        }
        AnsatzSpec::SwapTest { n } => Ok(Some(swap_test_unitary(*n)?)),
        AnsatzSpec::Layered { qubits, gates, .. } => {
            let n = *qubits;
            if n == 0 || n > 12 {
                return Err(Error::InvalidArgument("layered ansatz needs 1..=12 qubits".into()));
            }
            let mut u = ComplexMatrix::identity(1 << n);
            let mut slot = 0;
            for g in gates {
                let qs = g.qubits();
                if let Some(&q) = qs.iter().find(|&&q| q >= n) {
                    return Err(Error::IndexOutOfRange { index: q, bound: n });
                }
                if qs.len() == 2 && qs[0] == qs[1] {
                    return Err(Error::InvalidArgument("two-qubit gate on a single qubit".into()));
                }
                let angle = if g.is_rotation() {
                    slot += 1;
                    theta[slot - 1]
                } else {
                    0.0
                };
                u = &g.matrix(n, angle) * &u;
            }
            Ok(Some(u))
        }
        AnsatzSpec::Qgcnn {
            graph,
            layers,
            generators,
            ..
        } => {
            let n = graph.n();
            let q_count = *generators;
            let h = graph_hamiltonian(graph).into_matrix();
            let hx = graph_hamiltonian(&Graph::empty(n)?).into_matrix();
            let hzz = &h - &hx;
            let mut u = ComplexMatrix::identity(1 << n);
            for p in 0..*layers {
                for q in 0..q_count {
                    let (w, b) = (theta[2 * q], theta[2 * q + 1]);
                    let eta = theta[2 * q_count + p * q_count + q];
                    let mut hq = hzz.scale_real(w);
                    hq.add_assign_scaled(&hx, C64::new(b, 0.0));
                    u = &expm_hermitian(&hq, eta)? * &u;
                }
            }
            Ok(Some(u))
        }
    }
}

/// `(H ⊗ I)·CSWAP·(H ⊗ I)` on an ancilla (qubit 0) and two `n`-qubit registers.
/// It satisfies `U†(Z⊗I⊗I)U = Z⊗SWAP`.
pub fn swap_test_unitary(n: usize) -> Result<ComplexMatrix> {
    if n == 0 || 2 * n + 1 > 12 {
        return Err(Error::InvalidArgument("swap test needs 1..=5 qubits per register".into()));
    }
    let reg = 1usize << (2 * n);
    let swap = crate::groups::swap_copies(n);
    let p0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0])?;
    let p1 = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0])?;
    let cswap = &kron(&p0, &ComplexMatrix::identity(reg)) + &kron(&p1, &swap);
    let h = kron(&gates::hadamard(), &ComplexMatrix::identity(reg));
    Ok(&(&h * &cswap) * &h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn identity_kind() {
        assert!(realize(&AnsatzSpec::Identity {}, &[]).unwrap().is_none());
        assert!(realize(&AnsatzSpec::Identity {}, &[1.0]).is_err());
    }

    fn qgcnn(graph: Graph, layers: usize, generators: usize) -> AnsatzSpec {
        AnsatzSpec::Qgcnn {
            graph,
            layers,
            generators,
            params: vec![],
        }
    }

    #[test]
    fn qgcnn_zero_times_is_identity() {
        let a = qgcnn(Graph::cycle(4).unwrap(), 2, 2);
        let theta = [0.3, -1.2, 0.7, 0.4, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(a.parameter_count(), 8);
        let u = realize(&a, &theta).unwrap().unwrap();
        assert!(u.distance(&ComplexMatrix::identity(16)) < 1e-12);
    }

    #[test]
    fn qgcnn_edgeless_layer_is_product_of_x_rotations() {
        let a = qgcnn(Graph::empty(2).unwrap(), 1, 1);
        let u = realize(&a, &[0.9, 1.0, FRAC_PI_4]).unwrap().unwrap();
        let single = expm_hermitian(&gates::pauli_x(), FRAC_PI_4).unwrap();
        assert!(u.distance(&kron(&single, &single)) < 1e-12);
    }

    #[test]
    fn layered_circuit_is_unitary() {
        let a = AnsatzSpec::Layered {
            qubits: 3,
            gates: vec![
                Gate::Rx { qubit: 0 },
                Gate::H { qubit: 1 },
                Gate::Cnot { control: 1, target: 2 },
                Gate::Rz { qubit: 2 },
                Gate::Cz { control: 0, target: 2 },
                Gate::Ry { qubit: 1 },
            ],
            params: vec![],
        };
        assert_eq!(a.parameter_count(), 3);
        let u = realize(&a, &[0.1, 2.0, -0.5]).unwrap().unwrap();
        assert!(u.unitarity_deviation() < 1e-9);
        assert!(realize(&a, &[0.1]).is_err());
    }

    #[test]
    fn cnot_truth_table() {
        let m = Gate::Cnot { control: 0, target: 1 }.matrix(2, 0.0);
        for (x, y) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            assert_eq!(m[(y, x)], C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let m = Gate::Rx { qubit: 0 }.matrix(1, std::f64::consts::PI);
        assert!(m.distance(&gates::pauli_x().scale(C64::new(0.0, -1.0))) < 1e-12);
    }

    #[test]
    fn swap_test_conjugation_identity() {
        for n in 1..=2 {
            let u = swap_test_unitary(n).unwrap();
            let reg = ComplexMatrix::identity(1 << (2 * n));
            let za = kron(&gates::pauli_z(), &reg);
            let lhs = za.conjugate_by(&u.adjoint());
            let rhs = kron(&gates::pauli_z(), &crate::groups::swap_copies(n));
            assert!(lhs.distance(&rhs) < 1e-10);
        }
    }

    #[test]
    fn ansatz_json() {
        let text = r#"{"kind":"qgcnn","graph":{"n":3,"edges":[[0,1]]},"layers":1,"generators":1,"params":[1,1,0.5]}"#;
        let a: AnsatzSpec = serde_json::from_str(text).unwrap();
        assert_eq!(a.parameter_count(), 3);
        assert!(a.unitary().unwrap().is_some());
        assert!(serde_json::from_str::<AnsatzSpec>(r#"{"kind":"identity","x":1}"#).is_err());
    }
}
