//! Correlation and regression analysis.

pub mod correlation;
pub mod regression;
pub mod special;
mod table;

pub use correlation::{correlogram, pearson, Correlation, Correlogram, CorrelogramCell};
pub use regression::{ols_fit, select_model, CandidateFit, CoefficientRow, ModelSelection, RegressionReport};
pub use table::FeatureTable;

use crate::error::{Error, Result};

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub fn sample_sd(values: &[f64]) -> f64 {
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    (ss / (values.len() as f64 - 1.0)).sqrt()
}

pub(crate) fn is_constant(values: &[f64]) -> bool {
    values.iter().all(|v| *v == values[0])
}

/// Rescales to mean 0 and sample SD 1.
pub fn standardize(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::invalid("standardize needs at least two values"));
    }
    if is_constant(values) {
        return Err(Error::ZeroVariance("standardize input".into()));
    }
    let m = mean(values);
    let sd = sample_sd(values);
    Ok(values.iter().map(|v| (v - m) / sd).collect())
}
