use super::{Observable, ObservableTag};
use crate::error::{Error, Result};
use crate::tensor::{gates, kron_all, ComplexMatrix, MAX_OPERATOR_DIM};

/// A parsed tensor product of Pauli operators.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    pub observable: Observable,
    /// Every entry is purely imaginary; holds exactly when the number of `Y`s is odd.
    pub purely_imaginary: bool,
}

/// Parses a string over `{I, X, Y, Z}`, qubit 0 first. Surrounding
/// whitespace is ignored; anything else is rejected.
pub fn pauli_string(spec: &str) -> Result<PauliString> {
    let s = spec.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty Pauli string".into()));
    }
    let max_len = MAX_OPERATOR_DIM.trailing_zeros() as usize;
    if s.chars().count() > max_len {
        return Err(Error::Parse(format!("Pauli string longer than {max_len} qubits")));
    }
    let mut factors: Vec<ComplexMatrix> = Vec::with_capacity(s.len());
    let mut ys = 0usize;
    for (pos, c) in s.chars().enumerate() {
        factors.push(match c {
            'I' => gates::pauli_i(),
            'X' => gates::pauli_x(),
            'Y' => {
                ys += 1;
                gates::pauli_y()
            }
            'Z' => gates::pauli_z(),
            other => return Err(Error::Parse(format!("unexpected {other:?} at position {pos}"))),
        });
    }
    let n = factors.len();
    let m = kron_all(&factors);
    Ok(PauliString {
        observable: Observable::from_parts(m, 1, n, ObservableTag::Pauli { string: s.to_string() }),
        purely_imaginary: ys % 2 == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries_imaginary(m: &ComplexMatrix) -> bool {
        m.as_slice().iter().all(|z| z.re.abs() < 1e-15)
    }

    #[test]
    fn y_parity_flag() {
        for (s, flag) in [("Y", true), ("YY", false), ("YZX", true), ("IZ", false), ("YYY", true)] {
            let p = pauli_string(s).unwrap();
            assert_eq!(p.purely_imaginary, flag, "{s}");
            assert_eq!(entries_imaginary(p.observable.matrix()), flag, "{s}");
        }
    }

    #[test]
    fn squares_to_identity() {
        let p = pauli_string("YZX").unwrap();
        let m = p.observable.matrix();
        assert_eq!(m.pow(2), ComplexMatrix::identity(8));
        assert_eq!(p.observable.qubits_per_copy(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(pauli_string("").is_err());
        assert!(pauli_string("XQ").is_err());
        assert!(pauli_string("x").is_err());
        assert!(pauli_string(&"I".repeat(13)).is_err());
        assert!(pauli_string(" XZ ").is_ok());
    }
}
