use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::grid::MIN_GRID;

/// Outcome of a constancy test on sampled values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstancyVerdict {
    pub is_constant: bool,
    pub mean: f64,
    /// Population standard deviation divided by `1 + |mean|`.
    pub residual: f64,
}

/// Decides whether `samples` are constant to within `tol`.
///
/// The residual is normalized by `1 + |mean|`, so values near zero are
/// judged absolutely and large values relatively.
pub fn is_constant(samples: &[f64], tol: f64) -> Result<ConstancyVerdict> {
    if samples.len() < MIN_GRID {
        return Err(Error::GridTooShort {
            count: samples.len(),
            min: MIN_GRID,
        });
    }
    if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let residual = var.sqrt() / (1.0 + mean.abs());
    Ok(ConstancyVerdict {
        is_constant: residual < tol,
        mean,
        residual,
    })
}
