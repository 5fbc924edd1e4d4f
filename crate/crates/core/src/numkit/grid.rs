use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Vec3;

/// Minimum sample count: room for fourth-order stencils up to the third
/// derivative plus an interior margin.
pub const MIN_GRID: usize = 9;

/// Samples excluded at each end of a grid by every classification statistic.
pub const TRIM_MARGIN: usize = 4;

/// `count` equally spaced samples `start + i * step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if count < MIN_GRID {
            return Err(Error::GridTooShort { count, min: MIN_GRID });
        }
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "start {start}, step {step}: step must be positive and finite"
            )));
        }
        Ok(UniformGrid { start, step, count })
    }

    /// `count` samples spanning `[a, b]` inclusive.
    pub fn spanning(a: f64, b: f64, count: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidGrid(format!("empty range [{a}, {b}]")));
        }
        if count < MIN_GRID {
            return Err(Error::GridTooShort { count, min: MIN_GRID });
        }
        UniformGrid::new(a, (b - a) / (count - 1) as f64, count)
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.at(self.count - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.at(i))
    }

    /// Indices that survive a trim of `margin` samples at each end.
    pub fn interior(&self, margin: usize) -> std::ops::Range<usize> {
        let m = margin.min(self.count / 2);
        m..self.count - m
    }

    pub fn same_as(&self, other: &UniformGrid, rel_tol: f64) -> bool {
        let span = (self.end() - self.start).abs().max(f64::MIN_POSITIVE);
        self.count == other.count
            && (self.start - other.start).abs() <= rel_tol * span
            && (self.step - other.step).abs() <= rel_tol * self.step
    }
}

/// A scalar sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledScalar {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
    /// Samples at each end whose values came from one-sided stencils.
    pub trim: usize,
}

impl SampledScalar {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(SampledScalar { grid, values, trim: 0 })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        SampledScalar::new(grid, grid.points().map(f).collect())
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[self.grid.interior(self.trim)]
    }
}

/// A vector field sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledVecField {
    pub grid: UniformGrid,
    pub values: Vec<Vec3>,
    pub trim: usize,
}

impl SampledVecField {
    pub fn new(grid: UniformGrid, values: Vec<Vec3>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some(index) = values.iter().position(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(SampledVecField { grid, values, trim: 0 })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> Vec3) -> Result<Self> {
        SampledVecField::new(grid, grid.points().map(f).collect())
    }

    pub fn interior(&self) -> &[Vec3] {
        &self.values[self.grid.interior(self.trim)]
    }
}

fn check_len(grid: &UniformGrid, len: usize) -> Result<()> {
    if grid.count != len {
        return Err(Error::InvalidGrid(format!(
            "grid has {} samples but {} values were supplied",
            grid.count, len
        )));
    }
    Ok(())
}
