//! Hypothesis classes, parameterized ansätze and finite-shot estimation.

mod ansatz;
mod model;
mod shots;
mod spec;

pub use ansatz::{realize, swap_test_unitary, AnsatzSpec, Gate};
pub use model::{estimate_with_shots, Model, ModelInput};
pub use shots::{ShotEstimate, ShotEstimator};
pub use spec::{HypothesisClass, ModelSpec, ObservableSpec, StateSpec};
