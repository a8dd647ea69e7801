use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use super::{check_operator_dim, MAX_OPERATOR_DIM};
use crate::error::{Error, Result};

/// Square complex matrix as `{dim, re, im}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "only square matrices are serialized");
        Self {
            dim: m.rows(),
            re: m.as_slice().iter().map(|z| z.re).collect(),
            im: m.as_slice().iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Self> {
        if j.dim == 0 || j.dim > MAX_OPERATOR_DIM {
            return Err(Error::Parse(format!("matrix dimension {} out of range", j.dim)));
        }
        check_operator_dim(j.dim)?;
        let len = j.dim * j.dim;
        if j.re.len() != len || j.im.len() != len {
            return Err(Error::Parse(format!(
                "expected {len} entries, got re={} im={}",
                j.re.len(),
                j.im.len()
            )));
        }
        if j.re.iter().chain(&j.im).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entry".into()));
        }
        let data = j.re.iter().zip(&j.im).map(|(&r, &i)| C64::new(r, i)).collect();
        ComplexMatrix::from_vec(j.dim, j.dim, data)
    }
}

/// Complex vector as `{re, im}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl VectorJson {
    pub fn from_slice(v: &[C64]) -> Self {
        Self {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_vec(&self) -> Result<Vec<C64>> {
        if self.re.len() != self.im.len() {
            return Err(Error::Parse("re and im lengths differ".into()));
        }
        if self.re.iter().chain(&self.im).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("vector entry".into()));
        }
        Ok(self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::gates;

    #[test]
    fn round_trip() {
        let y = gates::pauli_y();
        let j = MatrixJson::from(&y);
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(ComplexMatrix::try_from(&back).unwrap(), y);
    }

    #[test]
    fn rejects_wrong_lengths() {
        let j = MatrixJson {
            dim: 2,
            re: vec![0.0; 3],
            im: vec![0.0; 4],
        };
        assert!(ComplexMatrix::try_from(&j).is_err());
        let j = MatrixJson {
            dim: 0,
            re: vec![],
            im: vec![],
        };
        assert!(ComplexMatrix::try_from(&j).is_err());
    }
}
