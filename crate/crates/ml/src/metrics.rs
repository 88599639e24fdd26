//! Evaluation metrics.

use crate::{MlError, Result};

/// Mean squared error between predictions and labels.
pub fn mse(predictions: &[f64], labels: &[f64]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(MlError::LengthMismatch {
            left: predictions.len(),
            right: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(MlError::EmptyInput("mse of zero samples".into()));
    }
    let sum: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(p, y)| (p - y) * (p - y))
        .sum();
    Ok(sum / predictions.len() as f64)
}

/// Population variance; the "predict the mean" baseline MSE.
pub fn variance(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(MlError::EmptyInput("variance of zero samples".into()));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions_score_zero() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn unit_residuals_score_one() {
        assert_eq!(mse(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            mse(&[1.0], &[1.0, 2.0]),
            Err(MlError::LengthMismatch { .. })
        ));
        assert!(matches!(mse(&[], &[]), Err(MlError::EmptyInput(_))));
    }
}
