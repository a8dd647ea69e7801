use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{balanced_labels, DataItem, Dataset, Label, LabeledState};
use crate::error::{Error, Result};
use crate::groups::{permutation_operator, random_permutation, validate_permutation, PermutationTarget};
use crate::observables::{Observable, ObservableTag};
use crate::rng::stream_rng;
use crate::tensor::{expm_hermitian, ComplexMatrix, StateVector, C64};

/// Largest node count for exhaustive isomorphism testing.
pub const MAX_ISOMORPHISM_NODES: usize = 8;

/// Largest node count for which the Hamiltonian is built densely.
pub const MAX_GRAPH_NODES: usize = 12;

/// Simple undirected graph. Edges are stored as sorted `(low, high)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        Graph::new(g.n, g.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl Graph {
    /// Rejects self-loops and out-of-range endpoints; duplicate edges collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 || n > MAX_GRAPH_NODES {
            return Err(Error::InvalidArgument(format!("node count must be in 1..={MAX_GRAPH_NODES}")));
        }
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange {
                    index: a.max(b),
                    bound: n,
                });
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self { n, edges: out })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|j| (j, (j + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|j| (j - 1, j)))
    }

    pub fn star(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|j| (0, j)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Graph with node `j` renamed to `perm[j]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        validate_permutation(perm, self.n)?;
        Self::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    /// All node permutations mapping the graph onto itself.
    pub fn automorphisms(&self) -> Result<Vec<Vec<usize>>> {
        check_iso_size(self.n)?;
        let mut out = Vec::new();
        for_each_permutation(self.n, |p| {
            if self.relabel(p).expect("valid permutation") == *self {
                out.push(p.to_vec());
            }
            false
        });
        Ok(out)
    }
}

fn check_iso_size(n: usize) -> Result<()> {
    if n > MAX_ISOMORPHISM_NODES {
        return Err(Error::InvalidArgument(format!(
            "exhaustive search limited to {MAX_ISOMORPHISM_NODES} nodes"
        )));
    }
    Ok(())
}

/// Heap's algorithm; stops early when `f` returns true.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    if f(&p) {
        return true;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            if f(&p) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// Exhaustive isomorphism test over all `n!` relabelings.
pub fn is_isomorphic(g0: &Graph, g1: &Graph) -> Result<bool> {
    check_iso_size(g0.n.max(g1.n))?;
    if g0.n != g1.n || g0.edges.len() != g1.edges.len() {
        return Ok(false);
    }
    Ok(for_each_permutation(g0.n, |p| g0.relabel(p).expect("valid permutation") == *g1))
}

/// `H(G) = Σ_{(j,k)∈E} Z_j Z_k + Σ_v X_v`.
pub fn graph_hamiltonian(g: &Graph) -> Observable {
    let n = g.n;
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        let z = |q: usize| if x >> (n - 1 - q) & 1 == 0 { 1.0 } else { -1.0 };
        let diag: f64 = g.edges.iter().map(|&(a, b)| z(a) * z(b)).sum();
        m[(x, x)] = C64::new(diag, 0.0);
        for q in 0..n {
            m[(x ^ (1 << (n - 1 - q)), x)] += C64::new(1.0, 0.0);
        }
    }
    Observable::from_parts(m, 1, n, ObservableTag::GraphHamiltonian)
}

/// `e^{−itH(G)} |+⟩^⊗n`.
pub fn graph_state(g: &Graph, t: f64) -> Result<StateVector> {
    let w = expm_hermitian(graph_hamiltonian(g).matrix(), t)?;
    StateVector::plus(g.n).apply(&w)
}

/// Tolerance on the Frobenius distance between the two reference orbits.
pub const ORBIT_TOL: f64 = 1e-6;

/// Smallest `‖ρ(g1) − P ρ(g0) P†‖_F` over node permutations `P`.
fn orbit_distance(g0: &Graph, g1: &Graph, t: f64) -> Result<f64> {
    let s0 = graph_state(g0, t)?;
    let s1 = graph_state(g1, t)?;
    let target = PermutationTarget::Qubits { n: g0.n };
    let mut best = f64::INFINITY;
    let mut err = None;
    for_each_permutation(g0.n, |p| {
        match permutation_operator(p, target).and_then(|op| s0.apply(op.matrix())) {
            Ok(moved) => {
                let f = s1.inner(&moved).norm_sqr();
                best = best.min((2.0 * (1.0 - f)).max(0.0).sqrt());
            }
            Err(e) => err = Some(e),
        }
        best < ORBIT_TOL || err.is_some()
    });
    match err {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

/// Items: a random relabeling of `g_y`, evolved from `|+⟩^⊗n` for time `t`.
pub fn graph_dataset(g0: &Graph, g1: &Graph, count: usize, t: f64, seed: u64) -> Result<Dataset> {
    if g0.n != g1.n {
        return Err(Error::InvalidArgument("reference graphs must have equal node counts".into()));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time".into()));
    }
    if is_isomorphic(g0, g1)? {
        return Err(Error::Indistinguishable("reference graphs are isomorphic".into()));
    }
    let gap = orbit_distance(g0, g1, t)?;
    if gap < ORBIT_TOL {
        return Err(Error::Indistinguishable(format!(
            "evolved orbits coincide at t = {t} (distance {gap:.2e})"
        )));
    }
    let labels = balanced_labels(count, seed);
    let items = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let base = match labels[i] {
                Label::Zero => g0,
                Label::One => g1,
            };
            let perm = random_permutation(base.n, &mut rng);
            let g = base.relabel(&perm)?;
            Ok(DataItem::State(LabeledState {
                state: graph_state(&g, t)?.density(),
                label: labels[i],
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        generator: "graph".into(),
        params: json!({"g0": g0, "g1": g1, "count": count, "t": t, "orbit_distance": gap}),
        seed,
        items,
    })
}
