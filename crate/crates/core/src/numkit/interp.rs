//! Local polynomial interpolation on uniform grids.
//!
//! Each query uses the degree-7 polynomial through the eight nearest
//! samples. High degree matters here: resampled data is later fed to
//! third-derivative stencils, which amplify interpolation error by `h^-3`.

use std::ops::{Add, Mul};

use super::grid::UniformGrid;
use super::stencil::fornberg_weights;

pub const INTERP_POINTS: usize = 8;

/// Value and derivatives up to `max_order` (≤ 3) at `x` of the local
/// interpolant through `values` on `grid`. `x` may lie slightly outside the
/// grid; the end windows extrapolate.
pub fn interpolate<T>(grid: &UniformGrid, values: &[T], x: f64, max_order: usize) -> Vec<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    debug_assert_eq!(grid.count, values.len());
    let n = values.len();
    let w = INTERP_POINTS.min(n);
    let t = (x - grid.start) / grid.step;
    let cell = t.floor().clamp(0.0, (n - 1) as f64) as usize;
    let start = (cell + 1).saturating_sub(w / 2).min(n - w);
    let nodes: Vec<f64> = (start..start + w).map(|j| j as f64).collect();
    let weights = fornberg_weights(&nodes, t, max_order);
    weights
        .iter()
        .enumerate()
        .map(|(k, wk)| {
            let mut acc = values[start] * wk[0];
            for (j, c) in wk.iter().enumerate().skip(1) {
                acc = acc + values[start + j] * *c;
            }
            acc * grid.step.powi(k as i32).recip()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_degree_seven_polynomials() {
        let g = UniformGrid::spanning(-1.0, 2.0, 31).unwrap();
        let p = |x: f64| x.powi(7) - 3.0 * x.powi(4) + x - 2.0;
        let dp = |x: f64| 7.0 * x.powi(6) - 12.0 * x.powi(3) + 1.0;
        let d2p = |x: f64| 42.0 * x.powi(5) - 36.0 * x * x;
        let vals: Vec<f64> = g.points().map(p).collect();
        for x in [-1.0, -0.987, 0.0333, 0.5, 1.2345, 1.999, 2.0] {
            let r = interpolate(&g, &vals, x, 2);
            assert!((r[0] - p(x)).abs() < 1e-11, "value at {x}");
            assert!((r[1] - dp(x)).abs() < 1e-9, "slope at {x}");
            assert!((r[2] - d2p(x)).abs() < 1e-7, "curvature at {x}");
        }
    }

    #[test]
    fn exact_at_nodes() {
        let g = UniformGrid::spanning(0.0, 1.0, 17).unwrap();
        let vals: Vec<f64> = g.points().map(|x| (3.0 * x).sin()).collect();
        for (i, x) in g.points().enumerate() {
            let r = interpolate(&g, &vals, x, 0);
            assert!((r[0] - vals[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn smooth_function_accuracy() {
        let g = UniformGrid::spanning(0.0, 1.0, 201).unwrap();
        let vals: Vec<f64> = g.points().map(|x| (7.0 * x).cos()).collect();
        let mut worst: f64 = 0.0;
        for k in 0..1000 {
            let x = k as f64 / 999.0;
            let r = interpolate(&g, &vals, x, 1);
            worst = worst.max((r[0] - (7.0 * x).cos()).abs());
            worst = worst.max((r[1] + 7.0 * (7.0 * x).sin()).abs() / 7.0);
        }
        assert!(worst < 1e-10, "{worst}");
    }
}
