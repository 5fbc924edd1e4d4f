//! Arc-length tables and reparametrization of space curves.

use crate::error::{Error, Result};
use crate::Vec3;

use super::grid::UniformGrid;

/// Speed below which a curve is treated as singular.
pub const REGULARITY_EPS: f64 = 1e-9;

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// A curve that can be evaluated, with its derivative, at any parameter in
/// its range.
pub trait ParametricCurve {
    fn point(&self, u: f64) -> Result<Vec3>;
    fn velocity(&self, u: f64) -> Result<Vec3>;
}

impl<P, V> ParametricCurve for (P, V)
where
    P: Fn(f64) -> Vec3,
    V: Fn(f64) -> Vec3,
{
    fn point(&self, u: f64) -> Result<Vec3> {
        Ok((self.0)(u))
    }
    fn velocity(&self, u: f64) -> Result<Vec3> {
        Ok((self.1)(u))
    }
}

/// Five-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

/// Cumulative length at `panels + 1` equally spaced parameters.
#[derive(Debug, Clone)]
pub struct LengthTable {
    pub u0: f64,
    pub width: f64,
    pub cumulative: Vec<f64>,
}

impl LengthTable {
    pub fn build<C: ParametricCurve + ?Sized>(curve: &C, ua: f64, ub: f64, panels: usize) -> Result<Self> {
        if !(ub > ua) || panels == 0 {
            return Err(Error::InvalidGrid(format!("empty parameter range [{ua}, {ub}]")));
        }
        let width = (ub - ua) / panels as f64;
        let mut cumulative = Vec::with_capacity(panels + 1);
        cumulative.push(0.0);
        let mut total = 0.0;
        for j in 0..panels {
            let a = ua + j as f64 * width;
            let seg = gauss_legendre(|u| regular_speed(curve, u), a, a + width)?;
            let next = total + seg;
            if !(next > total) {
                return Err(Error::NonMonotoneLength { u: a });
            }
            total = next;
            cumulative.push(total);
        }
        Ok(LengthTable {
            u0: ua,
            width,
            cumulative,
        })
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().expect("non-empty table")
    }

    fn param(&self, j: usize) -> f64 {
        self.u0 + j as f64 * self.width
    }

    /// Length from the start of the table to `u`.
    pub fn length_at<C: ParametricCurve + ?Sized>(&self, curve: &C, u: f64) -> Result<f64> {
        let panels = self.cumulative.len() - 1;
        let j = (((u - self.u0) / self.width).floor().max(0.0) as usize).min(panels - 1);
        let a = self.param(j);
        if u == a {
            return Ok(self.cumulative[j]);
        }
        let part = gauss_legendre(|t| Ok(curve.velocity(t)?.norm()), a, u)?;
        Ok(self.cumulative[j] + part)
    }
}

fn regular_speed<C: ParametricCurve + ?Sized>(curve: &C, u: f64) -> Result<f64> {
    let speed = curve.velocity(u)?.norm();
    if !(speed > REGULARITY_EPS) {
        return Err(Error::NonRegularCurve {
            u,
            speed,
            threshold: REGULARITY_EPS,
        });
    }
    Ok(speed)
}

/// Fritsch–Carlson monotone cubic interpolant of `ys` over increasing `xs`.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && n == ys.len());
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = delta[0];
        slopes[n - 1] = delta[n - 2];
        for i in 1..n - 1 {
            slopes[i] = if delta[i - 1] * delta[i] <= 0.0 {
                0.0
            } else {
                0.5 * (delta[i - 1] + delta[i])
            };
        }
        for i in 0..n - 1 {
            if delta[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let a = slopes[i] / delta[i];
            let b = slopes[i + 1] / delta[i];
            let r = a * a + b * b;
            if r > 9.0 {
                let t = 3.0 / r.sqrt();
                slopes[i] = t * a * delta[i];
                slopes[i + 1] = t * b * delta[i];
            }
        }
        MonotoneCubic { xs, ys, slopes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

/// A curve resampled at equal arc-length spacing.
#[derive(Debug, Clone)]
pub struct ArcLengthSamples {
    /// Arc length, offset so that `s = u_a` at the first sample.
    pub grid: UniformGrid,
    /// Original parameter at each sample.
    pub params: Vec<f64>,
    pub points: Vec<Vec3>,
    pub total_length: f64,
}

const NEWTON_TOL: f64 = 1e-12;

/// Resamples `curve` over `[ua, ub]` at `count` points equally spaced in
/// arc length.
///
/// The length table uses 5-point Gauss–Legendre on `4 * count` panels. Each
/// target length is inverted with a monotone cubic guess and Newton steps
/// until the length residual is below `1e-12` (relative to the total when
/// that exceeds one), followed by one polishing step.
pub fn arc_length_reparam<C: ParametricCurve + ?Sized>(
    curve: &C,
    ua: f64,
    ub: f64,
    count: usize,
) -> Result<ArcLengthSamples> {
    let panels = 4 * count;
    let table = LengthTable::build(curve, ua, ub, panels)?;
    let total = table.total();
    let grid = UniformGrid::spanning(ua, ua + total, count)?;
    let guess = MonotoneCubic::new(table.cumulative.clone(), (0..=panels).map(|j| table.param(j)).collect());
    let tol = NEWTON_TOL * total.max(1.0);
    let mut params = Vec::with_capacity(count);
    for i in 0..count {
        let target = if i + 1 == count {
            total
        } else {
            i as f64 * total / (count - 1) as f64
        };
        let u = if i == 0 {
            ua
        } else if i + 1 == count {
            ub
        } else {
            invert(curve, &table, target, guess.eval(target).clamp(ua, ub), tol)?
        };
        params.push(u);
    }
    let points = params.iter().map(|&u| curve.point(u)).collect::<Result<Vec<_>>>()?;
    Ok(ArcLengthSamples {
        grid,
        params,
        points,
        total_length: total,
    })
}

fn invert<C: ParametricCurve + ?Sized>(
    curve: &C,
    table: &LengthTable,
    target: f64,
    mut u: f64,
    tol: f64,
) -> Result<f64> {
    // bracket from the table, then Newton with a bisection fallback
    let panels = table.cumulative.len() - 1;
    let j = table.cumulative.partition_point(|&l| l <= target).clamp(1, panels);
    let (mut lo, mut hi) = (table.param(j - 1), table.param(j));
    u = u.clamp(lo, hi);
    for _ in 0..100 {
        let r = table.length_at(curve, u)? - target;
        let speed = regular_speed(curve, u)?;
        let newton = u - r / speed;
        if r.abs() < tol {
            // one more step removes the remaining residual to round-off
            return Ok(newton.clamp(lo, hi));
        }
        if r > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        u = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * u.abs().max(1.0) {
            return Ok(u);
        }
    }
    Err(Error::NonMonotoneLength { u })
}
