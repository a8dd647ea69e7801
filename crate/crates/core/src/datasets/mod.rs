//! Labeled datasets of states and unitaries, and their JSON form.

mod generators;
mod graph;

pub use generators::{
    entanglement_dataset, ghz_interpolation, purity_dataset, purity_mixing_weight, solve_interpolation_angle,
    time_reversal_dynamics_dataset, time_reversal_state_dataset,
};
pub use graph::{graph_dataset, graph_hamiltonian, graph_state, is_isomorphic, Graph, MAX_ISOMORPHISM_NODES};

use rand::seq::SliceRandom;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, CONTROL_STREAM};
use crate::tensor::{ComplexMatrix, DensityMatrix, MatrixJson};

/// Binary class label, serialized as `0` or `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn as_f64(self) -> f64 {
        match self {
            Label::Zero => 0.0,
            Label::One => 1.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl TryFrom<u8> for Label {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Label::Zero),
            1 => Ok(Label::One),
            other => Err(Error::Parse(format!("label must be 0 or 1, got {other}"))),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(*self as u8)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = u8::deserialize(d)?;
        Label::try_from(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledState {
    pub state: DensityMatrix,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledUnitary {
    pub unitary: ComplexMatrix,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DataItem {
    State(LabeledState),
    Unitary(LabeledUnitary),
}

impl DataItem {
    pub fn label(&self) -> Label {
        match self {
            DataItem::State(s) => s.label,
            DataItem::Unitary(u) => u.label,
        }
    }
}

/// Generated items plus the generator name, parameters and seed.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub items: Vec<DataItem>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.items.iter().map(DataItem::label).collect()
    }

    /// The state items, or an error if any item is a unitary.
    pub fn states(&self) -> Result<Vec<&LabeledState>> {
        self.items
            .iter()
            .map(|it| match it {
                DataItem::State(s) => Ok(s),
                DataItem::Unitary(_) => Err(Error::InputMismatch("dataset holds unitaries".into())),
            })
            .collect()
    }

    pub fn unitaries(&self) -> Result<Vec<&LabeledUnitary>> {
        self.items
            .iter()
            .map(|it| match it {
                DataItem::Unitary(u) => Ok(u),
                DataItem::State(_) => Err(Error::InputMismatch("dataset holds states".into())),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DatasetJson::from(self)).expect("dataset serializes")
    }

    /// Parses and validates every item (density-matrix and unitarity checks).
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DatasetJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Dataset::try_from(raw)
    }
}

/// Tolerance on `‖UU† − I‖_F` for unitaries read from files.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemJson {
    label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unitary: Option<MatrixJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetJson {
    generator: String,
    params: serde_json::Value,
    seed: u64,
    items: Vec<ItemJson>,
}

impl From<&Dataset> for DatasetJson {
    fn from(d: &Dataset) -> Self {
        let items = d
            .items
            .iter()
            .map(|it| match it {
                DataItem::State(s) => ItemJson {
                    label: s.label,
                    state: Some(MatrixJson::from(s.state.matrix())),
                    unitary: None,
                },
                DataItem::Unitary(u) => ItemJson {
                    label: u.label,
                    state: None,
                    unitary: Some(MatrixJson::from(&u.unitary)),
                },
            })
            .collect();
        Self {
            generator: d.generator.clone(),
            params: d.params.clone(),
            seed: d.seed,
            items,
        }
    }
}

impl TryFrom<DatasetJson> for Dataset {
    type Error = Error;

    fn try_from(raw: DatasetJson) -> Result<Self> {
        let mut items = Vec::with_capacity(raw.items.len());
        for (i, it) in raw.items.into_iter().enumerate() {
            let item = match (it.state, it.unitary) {
                (Some(s), None) => DataItem::State(LabeledState {
                    state: DensityMatrix::new(ComplexMatrix::try_from(&s)?)?,
                    label: it.label,
                }),
                (None, Some(u)) => {
                    let m = ComplexMatrix::try_from(&u)?;
                    let dev = m.unitarity_deviation();
                    if dev > UNITARY_TOL {
                        return Err(Error::NotUnitary { deviation: dev });
                    }
                    DataItem::Unitary(LabeledUnitary {
                        unitary: m,
                        label: it.label,
                    })
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "item {i} must have exactly one of `state` or `unitary`"
                    )))
                }
            };
            items.push(item);
        }
        Ok(Dataset {
            generator: raw.generator,
            params: raw.params,
            seed: raw.seed,
            items,
        })
    }
}

/// Balanced labels in a seed-determined order.
pub(crate) fn balanced_labels(count: usize, seed: u64) -> Vec<Label> {
    let mut labels: Vec<Label> = (0..count)
        .map(|i| if i % 2 == 0 { Label::One } else { Label::Zero })
        .collect();
    labels.shuffle(&mut stream_rng(seed, CONTROL_STREAM));
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_serde() {
        assert_eq!(serde_json::to_string(&Label::One).unwrap(), "1");
        assert_eq!(serde_json::from_str::<Label>("0").unwrap(), Label::Zero);
        assert!(serde_json::from_str::<Label>("2").is_err());
    }

    #[test]
    fn balanced_and_seed_stable() {
        let a = balanced_labels(10, 3);
        assert_eq!(a, balanced_labels(10, 3));
        assert_eq!(a.iter().filter(|&&l| l == Label::One).count(), 5);
    }

    #[test]
    fn dataset_round_trip() {
        let d = purity_dataset(1, 6, 0.625, 5).unwrap();
        let back = Dataset::from_json(&d.to_json()).unwrap();
        assert_eq!(back.labels(), d.labels());
        assert_eq!(back.generator, "purity");
        let u = time_reversal_dynamics_dataset(1, 4, 5).unwrap();
        let back = Dataset::from_json(&u.to_json()).unwrap();
        assert_eq!(back.items.len(), 4);
    }

    #[test]
    fn rejects_malformed_items() {
        let both = r#"{"generator":"x","params":{},"seed":0,"items":[{"label":1}]}"#;
        assert!(Dataset::from_json(both).is_err());
        let bad_state = r#"{"generator":"x","params":{},"seed":0,"items":[{"label":0,"state":{"dim":1,"re":[2.0],"im":[0.0]}}]}"#;
        assert!(Dataset::from_json(bad_state).is_err());
        let extra = r#"{"generator":"x","params":{},"seed":0,"items":[],"oops":1}"#;
        assert!(Dataset::from_json(extra).is_err());
    }
}
