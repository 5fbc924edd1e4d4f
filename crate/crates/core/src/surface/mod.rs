//! Ruled-surface input model and its striction apparatus: distribution
//! parameter, unit normal, asymptotic normal, striction curve and
//! strictional distance.

use nalgebra::Matrix3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{BinOp, Expr, Node};
use crate::numkit::arclength::ParametricCurve;
use crate::numkit::grid::{UniformGrid, MIN_GRID};
use crate::numkit::interp::interpolate;
use crate::numkit::jet::Jet;
use crate::Vec3;

/// Directors shorter than this are rejected on ingest.
pub const DIRECTOR_EPS: f64 = 1e-9;
/// Below this `|q'|` the striction point is numerically meaningless.
pub const EPS_CYL: f64 = 1e-7;
/// Relative threshold, against the surface scale, for a vanishing
/// distribution parameter.
pub const DEV_REL_TOL: f64 = 1e-6;
/// Below this fraction of the largest `|q'|` the striction quotient is
/// smoothly damped, keeping isolated stationary rulings finite.
pub const STRICTION_REG: f64 = 1e-4;
/// Largest striction displacement, relative to the surface's length scale,
/// that sample noise may cause near a stationary ruling.
pub const NOISE_DISPLACEMENT: f64 = 1e-9;
/// Denominator threshold for the unit normal.
pub const SINGULAR_EPS: f64 = 1e-12;
/// Upper bound on any sample count, to keep hostile inputs bounded.
pub const MAX_SAMPLES: usize = 1 << 20;

/// Base curve and director sampled on a uniform parameter grid. Directors
/// are stored normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTable {
    grid: UniformGrid,
    f: Vec<Vec3>,
    q: Vec<Vec3>,
}

impl SampleTable {
    /// Builds a table from explicit parameter values, which must be equally
    /// spaced to a relative accuracy of `1e-9`.
    pub fn new(u: &[f64], f: Vec<Vec3>, q: Vec<Vec3>) -> Result<Self> {
        if u.len() < MIN_GRID {
            return Err(Error::GridTooShort {
                count: u.len(),
                min: MIN_GRID,
            });
        }
        let grid = UniformGrid::spanning(u[0], u[u.len() - 1], u.len())?;
        let span = grid.end() - grid.start;
        for (i, &x) in u.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if (x - grid.at(i)).abs() > 1e-9 * span.max(grid.step) {
                return Err(Error::InvalidGrid(format!(
                    "parameter values must be equally spaced; sample {i} is at {x}, expected {}",
                    grid.at(i)
                )));
            }
        }
        SampleTable::on_grid(grid, f, q)
    }

    pub fn on_grid(grid: UniformGrid, f: Vec<Vec3>, q: Vec<Vec3>) -> Result<Self> {
        if grid.count > MAX_SAMPLES {
            return Err(Error::InvalidGrid(format!(
                "{} samples exceed the limit of {MAX_SAMPLES}",
                grid.count
            )));
        }
        if f.len() != grid.count || q.len() != grid.count {
            return Err(Error::InvalidGrid(format!(
                "grid has {} samples but {} base points and {} directors were supplied",
                grid.count,
                f.len(),
                q.len()
            )));
        }
        for (i, v) in f.iter().chain(&q).enumerate() {
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite { index: i % grid.count });
            }
        }
        let q = q
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let norm = v.norm();
                if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
                    // already unit: keep the bits so tables round-trip exactly
                    Ok(v)
                } else if norm > DIRECTOR_EPS {
                    Ok(v / norm)
                } else {
                    Err(Error::DegenerateDirector { u: grid.at(i), norm })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampleTable { grid, f, q })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// Estimated noise in the directors: the RMS of eighth differences,
    /// scaled to a single sample. Smooth data gives a value near round-off.
    pub fn noise_level(&self) -> f64 {
        const BINOM: [f64; 9] = [1.0, -8.0, 28.0, -56.0, 70.0, -56.0, 28.0, -8.0, 1.0];
        const NORM: f64 = 12870.0;
        if self.q.len() < BINOM.len() {
            return 0.0;
        }
        let (mut acc, mut count) = (0.0, 0usize);
        for w in self.q.windows(BINOM.len()) {
            let d = w.iter().zip(BINOM).fold(Vec3::zeros(), |a, (v, b)| a + v * b);
            acc += d.norm_squared();
            count += 3;
        }
        (acc / (count as f64 * NORM)).sqrt()
    }

    pub fn base(&self) -> &[Vec3] {
        &self.f
    }

    pub fn director(&self) -> &[Vec3] {
        &self.q
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Geometry {
    Analytic { base: [Expr; 3], director: [Expr; 3] },
    Sampled(SampleTable),
}

/// Input surface `r(u, v) = f(u) + v q(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RuledSurfaceSpec {
    geometry: Geometry,
    range: (f64, f64),
    samples: usize,
    name: Option<String>,
}

/// Base curve and unit director at one parameter, each with its first three
/// derivatives in `u`.
#[derive(Debug, Clone, Copy)]
pub struct LocalJet {
    pub f: [Vec3; 4],
    pub q: [Vec3; 4],
}

fn to_jets(v: &[Vec3]) -> [Jet; 3] {
    std::array::from_fn(|k| Jet {
        d: [v[0][k], v[1][k], v[2][k], v[3][k]],
    })
}

fn from_jets(j: [Jet; 3]) -> [Vec3; 4] {
    std::array::from_fn(|o| Vec3::new(j[0].d[o], j[1].d[o], j[2].d[o]))
}

fn normalize_jet(q: [Jet; 3], u: f64) -> Result<[Vec3; 4]> {
    let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    if !(n.value() > DIRECTOR_EPS) {
        return Err(Error::DegenerateDirector { u, norm: n.value() });
    }
    let inv = n.recip();
    Ok(from_jets([q[0] * inv, q[1] * inv, q[2] * inv]))
}

impl RuledSurfaceSpec {
    /// An analytic surface. Every sample of the native grid is evaluated up
    /// front so domain errors and vanishing directors surface here.
    pub fn analytic(base: [Expr; 3], director: [Expr; 3], range: (f64, f64), samples: usize) -> Result<Self> {
        let spec = RuledSurfaceSpec {
            geometry: Geometry::Analytic { base, director },
            range,
            samples,
            name: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses the six component expressions in the variable `var`.
    pub fn from_strings(
        var: &str,
        base: [&str; 3],
        director: [&str; 3],
        range: (f64, f64),
        samples: usize,
    ) -> Result<Self> {
        let p = |t: &str| Expr::parse_in(t, var).map_err(Error::from);
        RuledSurfaceSpec::analytic(
            [p(base[0])?, p(base[1])?, p(base[2])?],
            [p(director[0])?, p(director[1])?, p(director[2])?],
            range,
            samples,
        )
    }

    /// A sampled surface over the table's full range. The resampling count
    /// defaults to the table length.
    pub fn sampled(table: SampleTable) -> Self {
        let g = *table.grid();
        RuledSurfaceSpec {
            geometry: Geometry::Sampled(table),
            range: (g.start, g.end()),
            samples: g.count,
            name: None,
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = self.range;
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidGrid(format!("empty or non-finite range [{a}, {b}]")));
        }
        if self.samples > MAX_SAMPLES {
            return Err(Error::InvalidGrid(format!(
                "{} samples exceed the limit of {MAX_SAMPLES}",
                self.samples
            )));
        }
        for u in self.native_grid()?.points() {
            self.local(u)?;
        }
        Ok(())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Changes the resampling count used by the Frenet pipeline.
    pub fn with_samples(mut self, samples: usize) -> Result<Self> {
        if samples > MAX_SAMPLES {
            return Err(Error::InvalidGrid(format!(
                "{samples} samples exceed the limit of {MAX_SAMPLES}"
            )));
        }
        self.samples = samples;
        if let Geometry::Analytic { .. } = self.geometry {
            self.native_grid()?;
        }
        Ok(self)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Grid on which surface-level quantities (distribution parameter,
    /// strictional distance) are reported: the table grid for sampled
    /// input, `samples` points over the range otherwise.
    pub fn native_grid(&self) -> Result<UniformGrid> {
        match &self.geometry {
            Geometry::Sampled(t) => Ok(*t.grid()),
            Geometry::Analytic { .. } => UniformGrid::spanning(self.range.0, self.range.1, self.samples),
        }
    }

    /// Base curve and unit director with derivatives at `u`. Analytic input
    /// is differentiated exactly; sampled input through the local degree-7
    /// interpolant.
    pub fn local(&self, u: f64) -> Result<LocalJet> {
        match &self.geometry {
            Geometry::Analytic { base, director } => {
                let f: [Jet; 3] = [base[0].eval_jet(u)?, base[1].eval_jet(u)?, base[2].eval_jet(u)?];
                let q: [Jet; 3] = [
                    director[0].eval_jet(u)?,
                    director[1].eval_jet(u)?,
                    director[2].eval_jet(u)?,
                ];
                Ok(LocalJet {
                    f: from_jets(f),
                    q: normalize_jet(q, u)?,
                })
            }
            Geometry::Sampled(t) => {
                let f = interpolate(&t.grid, &t.f, u, 3);
                let q = interpolate(&t.grid, &t.q, u, 3);
                Ok(LocalJet {
                    f: [f[0], f[1], f[2], f[3]],
                    q: normalize_jet(to_jets(&q), u)?,
                })
            }
        }
    }

    pub fn point(&self, u: f64, v: f64) -> Result<Vec3> {
        let j = self.local(u)?;
        Ok(j.f[0] + j.q[0] * v)
    }

    /// Applies `x -> rotation * (scale * x) + translation` to the base curve
    /// and `rotation` to the director.
    pub fn transformed(&self, rotation: &Matrix3<f64>, translation: Vec3, scale: f64) -> Result<Self> {
        let geometry = match &self.geometry {
            Geometry::Analytic { base, director } => {
                let var = base[0].var().to_string();
                let combine = |exprs: &[Expr; 3], m: Matrix3<f64>, t: Vec3| -> [Expr; 3] {
                    std::array::from_fn(|row| {
                        let mut node = Node::num(t[row]);
                        for (col, e) in exprs.iter().enumerate() {
                            let term = Node::bin(BinOp::Mul, Node::num(m[(row, col)]), e.root().clone());
                            node = Node::bin(BinOp::Add, node, term);
                        }
                        Expr::from_node(node, &var)
                    })
                };
                Geometry::Analytic {
                    base: combine(base, rotation * scale, translation),
                    director: combine(director, *rotation, Vec3::zeros()),
                }
            }
            Geometry::Sampled(t) => Geometry::Sampled(SampleTable::on_grid(
                t.grid,
                t.f.iter().map(|p| rotation * (p * scale) + translation).collect(),
                t.q.iter().map(|d| rotation * d).collect(),
            )?),
        };
        let spec = RuledSurfaceSpec {
            geometry,
            ..self.clone()
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The same surface in the parameter `w` with `u = slope * w + shift`.
    pub fn reparametrized(&self, slope: f64, shift: f64) -> Result<Self> {
        if !(slope > 0.0 && slope.is_finite() && shift.is_finite()) {
            return Err(Error::Domain("reparametrization slope must be positive".into()));
        }
        let map = |u: f64| (u - shift) / slope;
        let geometry = match &self.geometry {
            Geometry::Analytic { base, director } => {
                let sub = Node::bin(
                    BinOp::Add,
                    Node::bin(BinOp::Mul, Node::num(slope), Node::Var),
                    Node::num(shift),
                );
                Geometry::Analytic {
                    base: std::array::from_fn(|k| base[k].substitute(&sub)),
                    director: std::array::from_fn(|k| director[k].substitute(&sub)),
                }
            }
            Geometry::Sampled(t) => Geometry::Sampled(SampleTable {
                grid: UniformGrid::new(map(t.grid.start), t.grid.step / slope, t.grid.count)?,
                ..t.clone()
            }),
        };
        let spec = RuledSurfaceSpec {
            geometry,
            range: (map(self.range.0), map(self.range.1)),
            ..self.clone()
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Samples the surface on `count` equally spaced parameters of its range.
    pub fn to_table(&self, count: usize) -> Result<SampleTable> {
        let grid = UniformGrid::spanning(self.range.0, self.range.1, count)?;
        let mut f = Vec::with_capacity(count);
        let mut q = Vec::with_capacity(count);
        for u in grid.points() {
            let j = self.local(u)?;
            f.push(j.f[0]);
            q.push(j.q[0]);
        }
        SampleTable::on_grid(grid, f, q)
    }
}

fn det(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a.dot(&b.cross(c))
}

fn director_speed_checked(j: &LocalJet) -> Result<f64> {
    let speed = j.q[1].norm();
    if !(speed > EPS_CYL) {
        return Err(Error::Cylindrical { min_speed: speed });
    }
    Ok(speed)
}

/// Smallest `|q'|` over the native grid.
pub fn min_director_speed(spec: &RuledSurfaceSpec) -> Result<f64> {
    let mut min = f64::INFINITY;
    for u in spec.native_grid()?.points() {
        min = min.min(spec.local(u)?.q[1].norm());
    }
    Ok(min)
}

fn ensure_non_cylindrical(spec: &RuledSurfaceSpec) -> Result<()> {
    let min_speed = min_director_speed(spec)?;
    if !(min_speed > EPS_CYL) {
        return Err(Error::Cylindrical { min_speed });
    }
    Ok(())
}

/// `det(f', q, q') / <q', q'>` over the native grid.
pub fn distribution_parameter(spec: &RuledSurfaceSpec) -> Result<Vec<f64>> {
    ensure_non_cylindrical(spec)?;
    spec.native_grid()?
        .points()
        .map(|u| {
            let j = spec.local(u)?;
            Ok(det(&j.f[1], &j.q[0], &j.q[1]) / j.q[1].norm_squared())
        })
        .collect()
}

/// Unit normal `r_u x r_v / |r_u x r_v|` at `(u, v)`.
pub fn surface_normal(spec: &RuledSurfaceSpec, u: f64, v: f64) -> Result<Vec3> {
    let j = spec.local(u)?;
    let n = (j.f[1] + j.q[1] * v).cross(&j.q[0]);
    let norm = n.norm();
    if !(norm > SINGULAR_EPS) {
        return Err(Error::SingularPoint { u, v });
    }
    Ok(n / norm)
}

/// Central tangent `q x q' / |q'|`.
pub fn asymptotic_normal(spec: &RuledSurfaceSpec, u: f64) -> Result<Vec3> {
    let j = spec.local(u)?;
    let speed = director_speed_checked(&j)?;
    Ok(j.q[0].cross(&j.q[1]) / speed)
}

/// Largest `|q'|` over the native grid.
pub fn max_director_speed(spec: &RuledSurfaceSpec) -> Result<f64> {
    let mut max: f64 = 0.0;
    for u in spec.native_grid()?.points() {
        max = max.max(spec.local(u)?.q[1].norm());
    }
    Ok(max)
}

/// Gain of the interpolant's first derivative on white sample noise.
const DERIVATIVE_GAIN: f64 = 4.0;

/// Damping floor for [`striction_point`] on this surface.
///
/// Where `q'` vanishes, noise `eta` in `<q', f'>` moves the striction point
/// by up to `eta / (2 floor^2)`. Sampled input raises the floor until that
/// stays below [`NOISE_DISPLACEMENT`] times the surface's length scale.
pub fn striction_floor(spec: &RuledSurfaceSpec) -> Result<f64> {
    let grid = spec.native_grid()?;
    let (mut qmax, mut fmax): (f64, f64) = (0.0, 0.0);
    for u in grid.points() {
        let j = spec.local(u)?;
        qmax = qmax.max(j.q[1].norm());
        fmax = fmax.max(j.f[1].norm());
    }
    let base = STRICTION_REG * qmax;
    let Geometry::Sampled(t) = &spec.geometry else {
        return Ok(base);
    };
    let eta = t.noise_level() * DERIVATIVE_GAIN / t.grid.step * fmax;
    let length = fmax * (spec.range.1 - spec.range.0);
    if !(eta > 0.0 && length > 0.0) {
        return Ok(base);
    }
    Ok(base.max((eta / (2.0 * NOISE_DISPLACEMENT * length)).sqrt()))
}

/// Striction point, its `u`-derivative and the strictional distance.
///
/// The quotient `<q', f'> / |q'|^2` is evaluated as
/// `<q', f'> |q'|^2 / (|q'|^4 + floor^4)`, which agrees with it to relative
/// order `(floor / |q'|)^4` and stays bounded where `q'` vanishes.
pub fn striction_point(j: &LocalJet, floor: f64) -> Result<(Vec3, Vec3, f64)> {
    let [f, f1, f2, _] = j.f;
    let [q, q1, q2, _] = j.q;
    let p = q1.norm_squared();
    let dp = 2.0 * q1.dot(&q2);
    let t4 = floor.powi(4);
    let den = p * p + t4;
    if !(den > 0.0) {
        return Err(Error::Cylindrical { min_speed: p.sqrt() });
    }
    let w = p / den;
    let dw = dp * (t4 - p * p) / (den * den);
    let n = q1.dot(&f1);
    let dn = q2.dot(&f1) + q1.dot(&f2);
    let mu = n * w;
    let dmu = dn * w + n * dw;
    let c = f - q * mu;
    let dc = f1 - q * dmu - q1 * mu;
    Ok((c, dc, -mu))
}

/// The striction line as a curve in the surface parameter.
pub struct StrictionCurve<'a> {
    spec: &'a RuledSurfaceSpec,
    floor: f64,
}

impl<'a> StrictionCurve<'a> {
    pub fn new(spec: &'a RuledSurfaceSpec) -> Result<Self> {
        Ok(StrictionCurve {
            spec,
            floor: striction_floor(spec)?,
        })
    }
}

impl ParametricCurve for StrictionCurve<'_> {
    fn point(&self, u: f64) -> Result<Vec3> {
        Ok(striction_point(&self.spec.local(u)?, self.floor)?.0)
    }
    fn velocity(&self, u: f64) -> Result<Vec3> {
        Ok(striction_point(&self.spec.local(u)?, self.floor)?.1)
    }
}

/// Striction apparatus on the native grid.
#[derive(Debug, Clone, Serialize)]
pub struct StrictionData {
    pub grid: UniformGrid,
    pub c: Vec<Vec3>,
    pub v0: Vec<f64>,
    pub d: Vec<f64>,
    pub developable: bool,
    pub cylindrical: bool,
    /// Largest `|f'|`, the length scale for developability.
    pub scale: f64,
    pub tol_dev: f64,
    /// Largest `<c', q'> / (|c'| |q'|)`; zero up to round-off.
    pub striction_residual: f64,
}

impl StrictionData {
    pub fn max_abs_d(&self) -> f64 {
        self.d.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Parameter windows where `|d| < tol_dev`, as inclusive `(start, end)`.
    pub fn torsal_windows(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut open: Option<usize> = None;
        for (i, x) in self.d.iter().enumerate() {
            let torsal = x.abs() < self.tol_dev;
            match (torsal, open) {
                (true, None) => open = Some(i),
                (false, Some(s)) => {
                    out.push((self.grid.at(s), self.grid.at(i - 1)));
                    open = None;
                }
                _ => {}
            }
        }
        if let Some(s) = open {
            out.push((self.grid.at(s), self.grid.end()));
        }
        out
    }
}

/// `c = f - (<q', f'> / <q', q'>) q` with `v0`, `d` and the developability
/// flag.
pub fn striction_curve(spec: &RuledSurfaceSpec) -> Result<StrictionData> {
    ensure_non_cylindrical(spec)?;
    let grid = spec.native_grid()?;
    let floor = striction_floor(spec)?;
    let n = grid.count;
    let (mut c, mut v0, mut d) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut scale: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for u in grid.points() {
        let j = spec.local(u)?;
        let (p, dp, dist) = striction_point(&j, floor)?;
        c.push(p);
        v0.push(dist);
        d.push(det(&j.f[1], &j.q[0], &j.q[1]) / j.q[1].norm_squared());
        scale = scale.max(j.f[1].norm());
        let denom = dp.norm() * j.q[1].norm();
        if denom > 0.0 {
            residual = residual.max(dp.dot(&j.q[1]).abs() / denom);
        }
    }
    let tol_dev = DEV_REL_TOL * scale;
    let developable = d.iter().all(|x| x.abs() < tol_dev);
    Ok(StrictionData {
        grid,
        c,
        v0,
        d,
        developable,
        cylindrical: false,
        scale,
        tol_dev,
        striction_residual: residual,
    })
}

/// True when the director is (numerically) constant.
pub fn is_cylindrical(spec: &RuledSurfaceSpec) -> Result<bool> {
    Ok(!(min_director_speed(spec)? > EPS_CYL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Rotation3;

    fn helicoid() -> RuledSurfaceSpec {
        RuledSurfaceSpec::from_strings("u", ["0", "0", "u"], ["cos(u)", "sin(u)", "0"], (0.0, 3.0), 64).unwrap()
    }

    fn root_developable() -> RuledSurfaceSpec {
        RuledSurfaceSpec::from_strings(
            "s",
            ["1/3*(1+s)^(3/2)", "1/3*(1-s)^(3/2)", "s/sqrt(2)"],
            ["1/2*sqrt(1+s)", "-1/2*sqrt(1-s)", "1/sqrt(2)"],
            (-0.5, 0.5),
            128,
        )
        .unwrap()
    }

    #[test]
    fn helicoid_distribution_parameter_is_one() {
        let d = distribution_parameter(&helicoid()).unwrap();
        assert!(d.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn helicoid_normals() {
        let spec = helicoid();
        let m = surface_normal(&spec, 0.0, 0.0).unwrap();
        // r_u x r_v = z x x = y
        assert!((m - Vec3::y()).norm() < 1e-15, "{m}");
        for u in [0.0, 0.7, 2.9] {
            let a = asymptotic_normal(&spec, u).unwrap();
            assert!((a - Vec3::z()).norm() < 1e-14);
            assert!(a.dot(&spec.local(u).unwrap().q[0]).abs() < 1e-12);
            for v in [1e6, -1e6] {
                let m = surface_normal(&spec, u, v).unwrap();
                assert!((m.cross(&a)).norm() < 1e-4);
            }
        }
    }

    #[test]
    fn helicoid_striction_is_the_axis() {
        let sd = striction_curve(&helicoid()).unwrap();
        assert!(sd.v0.iter().all(|v| v.abs() < 1e-15));
        for (i, c) in sd.c.iter().enumerate() {
            assert!((c - Vec3::new(0.0, 0.0, sd.grid.at(i))).norm() < 1e-15);
        }
        assert!(!sd.developable);
    }

    #[test]
    fn normal_is_unit_and_tangent_orthogonal() {
        let spec = root_developable();
        for (u, v) in [(-0.3, 0.5), (0.0, -1.0), (0.4, 2.0)] {
            let m = surface_normal(&spec, u, v).unwrap();
            let j = spec.local(u).unwrap();
            assert!((m.norm() - 1.0).abs() < 1e-12);
            assert!(m.dot(&(j.f[1] + j.q[1] * v)).abs() < 1e-10);
            assert!(m.dot(&j.q[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn developable_normals_are_constant_along_rulings() {
        let spec = root_developable();
        for u in [-0.4, 0.1, 0.45] {
            // v = 0 lies on the edge of regression, so use nearby values
            let m0 = surface_normal(&spec, u, 1.0).unwrap();
            for v in [-1.0, 0.25] {
                let m = surface_normal(&spec, u, v).unwrap();
                assert!(m.cross(&m0).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn root_developable_has_c_equal_f() {
        let spec = root_developable();
        let sd = striction_curve(&spec).unwrap();
        assert!(sd.developable);
        assert!(sd.max_abs_d() < 1e-14);
        assert!(sd.v0.iter().all(|v| v.abs() < 1e-9));
        for u in sd.grid.points() {
            let j = spec.local(u).unwrap();
            let (_, dc, _) = striction_point(&j, 0.0).unwrap();
            assert!((dc - j.q[0]).norm() < 1e-9);
        }
    }

    #[test]
    fn cylinder_is_rejected() {
        let spec =
            RuledSurfaceSpec::from_strings("u", ["cos(u)", "sin(u)", "0"], ["0", "0", "1"], (0.0, 6.0), 64).unwrap();
        assert!(is_cylindrical(&spec).unwrap());
        assert!(matches!(striction_curve(&spec), Err(Error::Cylindrical { .. })));
        assert!(matches!(distribution_parameter(&spec), Err(Error::Cylindrical { .. })));
        assert!(matches!(asymptotic_normal(&spec, 1.0), Err(Error::Cylindrical { .. })));
        let msg = striction_curve(&spec).unwrap_err().to_string();
        assert!(msg.starts_with("cylindrical: striction curve undefined (Eq. 4)"));
    }

    #[test]
    fn director_is_normalized_on_ingest() {
        let spec = RuledSurfaceSpec::from_strings("u", ["u", "0", "0"], ["0", "3*cos(u)", "3*sin(u)"], (0.0, 1.0), 16)
            .unwrap();
        assert!((spec.local(0.3).unwrap().q[0].norm() - 1.0).abs() < 1e-15);
        let bad = RuledSurfaceSpec::from_strings("u", ["u", "0", "0"], ["u", "0", "0"], (0.0, 1.0), 16);
        assert!(matches!(bad, Err(Error::DegenerateDirector { .. })));
    }

    #[test]
    fn striction_property_on_a_generic_surface() {
        let spec =
            RuledSurfaceSpec::from_strings("u", ["u", "u^2", "sin(u)"], ["1", "cos(2*u)", "u"], (-1.0, 1.0), 101)
                .unwrap();
        let sd = striction_curve(&spec).unwrap();
        assert!(sd.striction_residual < 1e-10, "{}", sd.striction_residual);
    }

    #[test]
    fn sampled_matches_analytic() {
        let spec =
            RuledSurfaceSpec::from_strings("u", ["u", "u^2", "sin(u)"], ["1", "cos(2*u)", "u"], (-1.0, 1.0), 401)
                .unwrap();
        let s = RuledSurfaceSpec::sampled(spec.to_table(401).unwrap());
        for u in [-0.93, -0.1, 0.377, 0.99] {
            let a = spec.local(u).unwrap();
            let b = s.local(u).unwrap();
            for k in 0..3 {
                assert!((a.f[k] - b.f[k]).norm() < 1e-9, "f order {k} at {u}");
                assert!((a.q[k] - b.q[k]).norm() < 1e-7, "q order {k} at {u}");
            }
        }
    }

    #[test]
    fn transformations_preserve_distribution_parameter() {
        let spec = helicoid();
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 2.0).into_inner();
        let moved = spec.transformed(&rot, Vec3::new(1.0, -2.0, 0.5), 1.0).unwrap();
        let d = distribution_parameter(&moved).unwrap();
        assert!(d.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let scaled = spec.transformed(&Matrix3::identity(), Vec3::zeros(), 10.0).unwrap();
        let d = distribution_parameter(&scaled).unwrap();
        assert!(d.iter().all(|x| (x - 10.0).abs() < 1e-12));
        let re = spec.reparametrized(2.0, 1.0).unwrap();
        assert_eq!(re.range(), (-0.5, 1.0));
        let p = re.point(0.25, 0.7).unwrap();
        let q = spec.point(1.5, 0.7).unwrap();
        assert!((p - q).norm() < 1e-14);
    }

    #[test]
    fn uneven_tables_are_rejected() {
        let u = [0.0, 0.1, 0.2, 0.3, 0.45, 0.5, 0.6, 0.7, 0.8, 0.9];
        let f = vec![Vec3::zeros(); 10];
        let q = vec![Vec3::x(); 10];
        assert!(matches!(SampleTable::new(&u, f, q), Err(Error::InvalidGrid(_))));
    }
}
