//! Approximation-error and classification metrics.

use crate::error::{Error, Result};

/// Fraction of variance unexplained: `sum (pred - truth)^2 / sum (truth - mean)^2`.
pub fn fvu(predictions: &[f64], truths: &[f64]) -> Result<f64> {
    if predictions.len() != truths.len() {
        return Err(Error::input(format!(
            "length mismatch: {} predictions vs {} truths",
            predictions.len(),
            truths.len()
        )));
    }
    if truths.len() < 2 {
        return Err(Error::input("fvu needs at least two points"));
    }
    let mean = truths.iter().sum::<f64>() / truths.len() as f64;
    let denom: f64 = truths.iter().map(|y| (y - mean).powi(2)).sum();
    if denom == 0.0 {
        return Err(Error::Metric("truths are constant, variance is zero".into()));
    }
    let num: f64 = predictions
        .iter()
        .zip(truths)
        .map(|(p, y)| (p - y).powi(2))
        .sum();
    Ok(num / denom)
}

/// Fraction of exact label matches.
pub fn accuracy(predicted: &[f64], truth: &[f64]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::input(format!(
            "length mismatch: {} predictions vs {} truths",
            predicted.len(),
            truth.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::input("accuracy needs at least one point"));
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / predicted.len() as f64)
}
