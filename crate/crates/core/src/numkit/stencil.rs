//! Finite-difference derivatives on uniform grids.
//!
//! Interior samples use centred stencils (5 points for first and second
//! derivatives, 7 for the third), all fourth-order accurate. Near the ends
//! the same order of accuracy is kept with one-sided stencils of
//! `order + 4` points. Weights come from Fornberg's recursion, which is also
//! used for local polynomial interpolation in [`super::interp`].

use std::ops::{Add, Mul};

use super::grid::{SampledScalar, SampledVecField, UniformGrid, TRIM_MARGIN};
use crate::error::{Error, Result};

/// Fornberg weights: `w[k][j]` is the weight of node `j` in the
/// approximation of the `k`-th derivative at `z`, for `k = 0..=max_order`.
pub fn fornberg_weights(nodes: &[f64], z: f64, max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

fn central_width(order: usize) -> usize {
    if order == 3 {
        7
    } else {
        5
    }
}

fn one_sided_width(order: usize) -> usize {
    order + 4
}

/// Stencil windows (start index and weights) for an `n`-sample grid. The
/// centred weights are shared; only the `half` samples at each end get
/// their own one-sided stencils.
struct Plan {
    n: usize,
    half: usize,
    interior: Vec<f64>,
    left: Vec<(usize, Vec<f64>)>,
    right: Vec<(usize, Vec<f64>)>,
    scale: f64,
}

impl Plan {
    fn new(n: usize, step: f64, order: usize) -> Result<Plan> {
        if !(1..=3).contains(&order) {
            return Err(Error::Domain(format!("derivative order {order} not supported (1..=3)")));
        }
        let need = one_sided_width(order)
            .max(central_width(order))
            .max(super::grid::MIN_GRID);
        if n < need {
            return Err(Error::GridTooShort { count: n, min: need });
        }
        let w = central_width(order);
        let half = w / 2;
        let nodes: Vec<f64> = (0..w).map(|j| j as f64 - half as f64).collect();
        let interior = fornberg_weights(&nodes, 0.0, order).swap_remove(order);
        let ow = one_sided_width(order);
        let one_sided = |i: usize, start: usize| {
            let nodes: Vec<f64> = (start..start + ow).map(|j| j as f64 - i as f64).collect();
            (start, fornberg_weights(&nodes, 0.0, order).swap_remove(order))
        };
        let left = (0..half).map(|i| one_sided(i, 0)).collect();
        let right = (n - half..n).map(|i| one_sided(i, n - ow)).collect();
        Ok(Plan {
            n,
            half,
            interior,
            left,
            right,
            scale: step.powi(order as i32).recip(),
        })
    }

    fn window(&self, i: usize) -> (usize, &[f64]) {
        if i < self.half {
            let (s, w) = &self.left[i];
            (*s, w)
        } else if i + self.half >= self.n {
            let (s, w) = &self.right[i - (self.n - self.half)];
            (*s, w)
        } else {
            (i - self.half, &self.interior)
        }
    }

    fn apply<T>(&self, values: &[T]) -> Vec<T>
    where
        T: Copy + Add<Output = T> + Mul<f64, Output = T>,
    {
        (0..self.n)
            .map(|i| {
                let (start, w) = self.window(i);
                let mut acc = values[start] * w[0];
                for (k, wk) in w.iter().enumerate().skip(1) {
                    acc = acc + values[start + k] * *wk;
                }
                acc * self.scale
            })
            .collect()
    }
}

/// Raw derivative of `values` sampled with spacing `step`.
pub fn derive_slice<T>(values: &[T], step: f64, order: usize) -> Result<Vec<T>>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    Ok(Plan::new(values.len(), step, order)?.apply(values))
}

/// Derivative of a sampled scalar; the result carries a trim margin of at
/// least [`TRIM_MARGIN`].
pub fn derive(field: &SampledScalar, order: usize) -> Result<SampledScalar> {
    let values = derive_slice(&field.values, field.grid.step, order)?;
    Ok(SampledScalar {
        grid: field.grid,
        values,
        trim: field.trim.max(TRIM_MARGIN),
    })
}

/// Component-wise derivative of a sampled vector field.
pub fn derive_vec(field: &SampledVecField, order: usize) -> Result<SampledVecField> {
    let values = derive_slice(&field.values, field.grid.step, order)?;
    Ok(SampledVecField {
        grid: field.grid,
        values,
        trim: field.trim.max(TRIM_MARGIN),
    })
}

/// Convenience for tests and callers holding a bare grid.
pub fn derive_on(grid: &UniformGrid, values: &[f64], order: usize) -> Result<Vec<f64>> {
    if values.len() != grid.count {
        return Err(Error::InvalidGrid("length does not match grid".into()));
    }
    derive_slice(values, grid.step, order)
}
