//! Decompositions backed by `nalgebra`, plus the Hermitian matrix exponential.

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, C64};
use super::HERMITIAN_TOL;
use crate::error::{Error, Result};

pub(crate) fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Diagonal shifts tried in turn, in units of `1 + ‖H‖_F`. The nalgebra
/// solver can return NaN on highly degenerate inputs with zero blocks (a
/// rank-one projector, say); a shift of the diagonal avoids that.
const SHIFTS: [f64; 4] = [0.0, 0.371, 1.618, -0.853];

fn solve_shifted<T>(sym: &ComplexMatrix, solve: impl Fn(DMatrix<C64>) -> Option<T>) -> Result<(T, f64)> {
    let scale = 1.0 + sym.frobenius_norm();
    for s in SHIFTS {
        let shift = s * scale;
        let mut m = to_nalgebra(sym);
        for i in 0..m.nrows() {
            m[(i, i)] += C64::new(shift, 0.0);
        }
        if let Some(out) = solve(m) {
            return Ok((out, shift));
        }
    }
    Err(Error::NonFinite("Hermitian eigensolver did not converge".into()))
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    h.square_dim()?;
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL * (1.0 + h.frobenius_norm()) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    // Symmetrize so round-off in the input does not leak into the solver.
    let sym = (h + &h.adjoint()).scale_real(0.5);
    let eig = solve_shifted(&sym, |m| {
        let e = m.symmetric_eigen();
        let finite = e.eigenvalues.iter().all(|v| v.is_finite()) && e.eigenvectors.iter().all(|z| z.is_finite());
        finite.then_some(e)
    })
    .map(|(mut e, shift)| {
        e.eigenvalues.iter_mut().for_each(|v| *v -= shift);
        e
    })?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = sym.rows();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    h.square_dim()?;
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL * (1.0 + h.frobenius_norm()) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let sym = (h + &h.adjoint()).scale_real(0.5);
    let (vals, shift) = solve_shifted(&sym, |m| {
        let v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        v.iter().all(|x| x.is_finite()).then_some(v)
    })?;
    let mut vals: Vec<f64> = vals.into_iter().map(|v| v - shift).collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// `exp(−i t H)` for Hermitian `H`, via a full eigendecomposition.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = h.square_dim()?;
    if t == 0.0 {
        if !h.is_hermitian(HERMITIAN_TOL * (1.0 + h.frobenius_norm())) {
            return Err(Error::NotHermitian {
                deviation: h.hermitian_deviation(),
            });
        }
        return Ok(ComplexMatrix::identity(n));
    }
    let eig = hermitian_eigen(h)?;
    let phases: Vec<C64> = eig
        .values
        .iter()
        .map(|&l| C64::from_polar(1.0, -l * t))
        .collect();
    // V diag(phases) V†
    let v = &eig.vectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (k, p) in phases.iter().enumerate() {
                acc += v[(i, k)] * p * v[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Householder QR; returns `(Q, R)` with `Q` of size rows×min and `R` min×cols.
pub fn qr(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let qr = to_nalgebra(m).qr();
    (from_nalgebra(&qr.q()), from_nalgebra(&qr.r()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::matrix::gates::*;
    use std::f64::consts::PI;

    #[test]
    fn degenerate_rank_one_projector_is_finite() {
        for d in [8usize, 16, 32] {
            let mut v = vec![C64::new(0.0, 0.0); d * d];
            for i in 0..d {
                v[i * d + i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
            }
            let p = ComplexMatrix::outer(&v, &v);
            let eig = hermitian_eigen(&p).unwrap();
            assert!(eig.values.iter().all(|x| x.is_finite()));
            assert!((eig.values[d * d - 1] - 1.0).abs() < 1e-10);
            assert!(eig.values[..d * d - 1].iter().all(|x| x.abs() < 1e-10));
            let top = eig.vectors.column(d * d - 1);
            let overlap: C64 = top.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-10);
            let vals = hermitian_eigenvalues(&p).unwrap();
            assert!(vals.iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn expm_at_zero_is_identity() {
        let h = pauli_x();
        assert_eq!(expm_hermitian(&h, 0.0).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn expm_of_z() {
        let u = expm_hermitian(&pauli_z(), PI / 2.0).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[
            C64::from_polar(1.0, -PI / 2.0),
            C64::from_polar(1.0, PI / 2.0),
        ]);
        assert!(u.distance(&expected) < 1e-12);
    }

    #[test]
    fn expm_of_x_matches_closed_form() {
        // e^{-iθX} = cos θ I − i sin θ X
        let t = PI / 4.0;
        let u = expm_hermitian(&pauli_x(), t).unwrap();
        let mut expected = ComplexMatrix::identity(2).scale_real(t.cos());
        expected.add_assign_scaled(&pauli_x(), C64::new(0.0, -t.sin()));
        assert!(u.distance(&expected) < 1e-12);
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(expm_hermitian(&a, 1.0), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigen_reconstructs() {
        let h = &kron_xz() + &kron_zx();
        let eig = hermitian_eigen(&h).unwrap();
        let d = ComplexMatrix::from_diagonal(&eig.values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>());
        let rebuilt = &(&eig.vectors * &d) * &eig.vectors.adjoint();
        assert!(rebuilt.distance(&h) < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    fn kron_xz() -> ComplexMatrix {
        crate::tensor::kron(&pauli_x(), &pauli_z())
    }

    fn kron_zx() -> ComplexMatrix {
        crate::tensor::kron(&pauli_z(), &pauli_y())
    }

    #[test]
    fn singular_values_of_diag() {
        let m = ComplexMatrix::from_real(2, 2, &[3.0, 0.0, 0.0, -2.0]).unwrap();
        let sv = singular_values(&m);
        assert!((sv[0] - 3.0).abs() < 1e-12 && (sv[1] - 2.0).abs() < 1e-12);
    }
}
