//! Haar moments, concentration with system size, and threshold classification.

mod classify;
mod concentration;
mod moments;

pub use classify::{
    cantelli_bound, classify, classify_values, classify_with_shots, misclassification_probability, model_values,
    shot_values, ClassificationReport, ClassificationRule, Confusion,
};
pub use concentration::{concentration_experiment, log2_slope, ConcentrationFamily, ConcentrationRow, ConcentrationTable};
pub use moments::{
    analytic_moments, empirical_moments, haar_var_bell_dynamics, haar_mean_conventional, haar_mean_enhanced_bell, haar_second_moment_conventional,
    haar_var_conventional, haar_var_enhanced_bell, haar_var_time_reversal, sample_model_values, MomentReport,
};
