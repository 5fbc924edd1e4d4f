//! The surface Frenet frame `{q, h, a}` with invariants `k1`, `k2` along
//! the arc-length parametrized striction line, and the classical Frenet
//! frame of a space curve.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::arclength::arc_length_reparam;
use crate::numkit::constancy::{is_constant, ConstancyVerdict};
use crate::numkit::grid::{UniformGrid, TRIM_MARGIN};
use crate::numkit::interp::interpolate;
use crate::numkit::stencil::derive_slice;
use crate::surface::{min_director_speed, RuledSurfaceSpec, StrictionCurve, EPS_CYL};
use crate::Vec3;

/// Curvatures below `EPS_CURV / L`, for a striction line of length `L`,
/// count as zero.
pub const EPS_CURV: f64 = 1e-8;

/// Per-sample frame and invariants along the striction line.
#[derive(Debug, Clone, Serialize)]
pub struct StrictionFrameField {
    /// Arc length of the striction line, starting at the surface's `u_a`.
    pub grid: UniformGrid,
    pub c: Vec<Vec3>,
    pub q: Vec<Vec3>,
    pub h: Vec<Vec3>,
    pub a: Vec<Vec3>,
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    /// Samples at each end excluded from statistics.
    pub trim: usize,
    /// Surface parameter `u` of each sample.
    pub param: Vec<f64>,
    /// Largest `|<a', h> + k2|` over the interior.
    pub consistency: f64,
}

impl StrictionFrameField {
    pub(crate) fn with_capacity(grid: UniformGrid, n: usize) -> Self {
        StrictionFrameField {
            grid,
            c: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            h: Vec::with_capacity(n),
            a: Vec::with_capacity(n),
            k1: Vec::with_capacity(n),
            k2: Vec::with_capacity(n),
            trim: 0,
            param: Vec::with_capacity(n),
            consistency: 0.0,
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn push(&mut self, c: Vec3, q: Vec3, h: Vec3, a: Vec3, k1: f64, k2: f64, param: f64) {
        self.c.push(c);
        self.q.push(q);
        self.h.push(h);
        self.a.push(a);
        self.k1.push(k1);
        self.k2.push(k2);
        self.param.push(param);
    }

    pub fn len(&self) -> usize {
        self.grid.count
    }

    pub fn is_empty(&self) -> bool {
        self.grid.count == 0
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        self.grid.interior(self.trim)
    }

    pub fn length(&self) -> f64 {
        self.grid.end() - self.grid.start
    }

    /// Zero threshold for curvatures of this field.
    pub fn eps_curv(&self) -> f64 {
        EPS_CURV / self.length().max(f64::MIN_POSITIVE)
    }

    /// Frame `{q, h, a}` interpolated at arc length `s` and re-orthonormalized.
    pub fn frame_at(&self, s: f64) -> Result<[Vec3; 3]> {
        let tol = 1e-9 * self.grid.step;
        if !(s >= self.grid.start - tol && s <= self.grid.end() + tol) {
            return Err(Error::GridMismatch(format!(
                "s = {s} outside [{}, {}]",
                self.grid.start,
                self.grid.end()
            )));
        }
        let q = interpolate(&self.grid, &self.q, s, 0)[0].normalize();
        let h = interpolate(&self.grid, &self.h, s, 0)[0];
        let h = (h - q * h.dot(&q)).normalize();
        Ok([q, h, q.cross(&h)])
    }

    /// Largest deviation of the sampled derivatives from the frame
    /// equations over the interior: `(|q' - k1 h|, |h' + k1 q - k2 a|, |a' + k2 h|)`.
    pub fn frame_equation_residuals(&self) -> Result<[f64; 3]> {
        let step = self.grid.step;
        let dq = derive_slice(&self.q, step, 1)?;
        let dh = derive_slice(&self.h, step, 1)?;
        let da = derive_slice(&self.a, step, 1)?;
        let mut r = [0.0f64; 3];
        for i in self.interior() {
            let (k1, k2) = (self.k1[i], self.k2[i]);
            r[0] = r[0].max((dq[i] - self.h[i] * k1).norm());
            r[1] = r[1].max((dh[i] + self.q[i] * k1 - self.a[i] * k2).norm());
            r[2] = r[2].max((da[i] + self.h[i] * k2).norm());
        }
        Ok(r)
    }

    /// Largest `|det[q h a] - 1|` over all samples.
    pub fn handedness_deviation(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.q[i].cross(&self.h[i]).dot(&self.a[i]) - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Runs striction line, arc-length resampling and frame derivation on
/// `spec`, using `spec.samples()` arc-length samples.
pub fn ruled_apparatus(spec: &RuledSurfaceSpec) -> Result<StrictionFrameField> {
    let min_speed = min_director_speed(spec)?;
    if !(min_speed > EPS_CYL) {
        return Err(Error::Cylindrical { min_speed });
    }
    let (ua, ub) = spec.range();
    let arc = arc_length_reparam(&StrictionCurve::new(spec)?, ua, ub, spec.samples())?;
    let q = arc
        .params
        .iter()
        .map(|&u| Ok(spec.local(u)?.q[0]))
        .collect::<Result<Vec<_>>>()?;
    frame_from_samples(arc.grid, arc.points, q, arc.params)
}

/// Derives `{q, h, a}`, `k1` and `k2` from striction points and rulings
/// sampled at equal arc length.
///
/// `h` is `q'/|q'|` with its sign chosen to vary continuously, so `k1`
/// changes sign where `q'` passes through zero instead of `h` flipping.
/// The overall orientation makes `k1` positive on most of the interior.
pub fn frame_from_samples(
    grid: UniformGrid,
    c: Vec<Vec3>,
    q: Vec<Vec3>,
    param: Vec<f64>,
) -> Result<StrictionFrameField> {
    let n = grid.count;
    if c.len() != n || q.len() != n || param.len() != n {
        return Err(Error::InvalidGrid("frame samples do not match grid".into()));
    }
    let q: Vec<Vec3> = q.iter().map(|v| v.normalize()).collect();
    let dq = derive_slice(&q, grid.step, 1)?;
    let length = grid.end() - grid.start;
    let thr = EPS_CURV / length;
    let interior = grid.interior(TRIM_MARGIN);

    let mut dir: Vec<Option<Vec3>> = Vec::with_capacity(n);
    let mut k1 = vec![0.0; n];
    let mut prev: Option<Vec3> = None;
    for i in 0..n {
        let m = dq[i].norm();
        if m < thr {
            dir.push(None);
            continue;
        }
        let mut d = dq[i] / m;
        let mut k = m;
        if prev.is_some_and(|p| p.dot(&d) < 0.0) {
            d = -d;
            k = -m;
        }
        k1[i] = k;
        prev = Some(d);
        dir.push(Some(d));
    }

    // isolated zeros of q' are bridged from the neighbours; longer runs
    // inside the interior are torsal bands
    let mut i = 0;
    while i < n {
        if dir[i].is_some() {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && dir[i].is_none() {
            i += 1;
        }
        let end = i;
        let touches_interior = start < interior.end && end > interior.start;
        let left = start.checked_sub(1).and_then(|j| dir[j]);
        let right = dir.get(end).copied().flatten();
        if (end - start > 1 && touches_interior) || (left.is_none() && right.is_none()) {
            return Err(Error::TorsalBand {
                s_start: grid.at(start),
                s_end: grid.at(end - 1),
            });
        }
        let fill = left.unwrap_or(Vec3::zeros()) + right.unwrap_or(Vec3::zeros());
        for slot in dir.iter_mut().take(end).skip(start) {
            *slot = Some(fill);
        }
    }

    let mut h: Vec<Vec3> = (0..n)
        .map(|i| {
            let d = dir[i].expect("all gaps filled");
            (d - q[i] * d.dot(&q[i])).normalize()
        })
        .collect();
    for i in 0..n {
        if dq[i].norm() < thr {
            k1[i] = dq[i].dot(&h[i]);
        }
    }
    let mean: f64 = interior.clone().map(|i| k1[i]).sum();
    if mean < 0.0 {
        for i in 0..n {
            h[i] = -h[i];
            k1[i] = -k1[i];
        }
    }
    let a: Vec<Vec3> = (0..n).map(|i| q[i].cross(&h[i])).collect();
    let dh = derive_slice(&h, grid.step, 1)?;
    let k2: Vec<f64> = (0..n).map(|i| dh[i].dot(&a[i])).collect();
    let da = derive_slice(&a, grid.step, 1)?;
    let consistency = interior
        .clone()
        .map(|i| (da[i].dot(&h[i]) + k2[i]).abs())
        .fold(0.0, f64::max);

    Ok(StrictionFrameField {
        grid,
        c,
        q,
        h,
        a,
        k1,
        k2,
        trim: TRIM_MARGIN,
        param,
        consistency,
    })
}

/// Classical Frenet apparatus of a unit-speed curve.
#[derive(Debug, Clone, Serialize)]
pub struct CurveFrenetField {
    pub grid: UniformGrid,
    pub t: Vec<Vec3>,
    pub n: Vec<Vec3>,
    pub b: Vec<Vec3>,
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub trim: usize,
}

impl CurveFrenetField {
    pub fn interior(&self) -> std::ops::Range<usize> {
        self.grid.interior(self.trim)
    }
}

/// `t = c'`, `n = c''/|c''|`, `b = t x n`, `kappa = |c''|`, `tau = <n', b>`
/// from samples at equal arc length.
pub fn curve_apparatus(grid: UniformGrid, points: &[Vec3]) -> Result<CurveFrenetField> {
    if points.len() != grid.count {
        return Err(Error::InvalidGrid("curve samples do not match grid".into()));
    }
    let d1 = derive_slice(points, grid.step, 1)?;
    let d2 = derive_slice(points, grid.step, 2)?;
    let thr = EPS_CURV / (grid.end() - grid.start);
    let interior = grid.interior(TRIM_MARGIN);
    let count = grid.count;
    let mut t = Vec::with_capacity(count);
    let mut n = Vec::with_capacity(count);
    let mut kappa = Vec::with_capacity(count);
    for i in 0..count {
        let ti = d1[i].normalize();
        let normal = d2[i] - ti * d2[i].dot(&ti);
        let k = normal.norm();
        if k < thr && (interior.contains(&i) || i == 0 || i + 1 == count) {
            return Err(Error::StraightSegment { s: grid.at(i) });
        }
        t.push(ti);
        n.push(normal / k);
        kappa.push(k);
    }
    let b: Vec<Vec3> = (0..count).map(|i| t[i].cross(&n[i])).collect();
    let dn = derive_slice(&n, grid.step, 1)?;
    let tau = (0..count).map(|i| dn[i].dot(&b[i])).collect();
    Ok(CurveFrenetField {
        grid,
        t,
        n,
        b,
        kappa,
        tau,
        trim: TRIM_MARGIN,
    })
}

/// Result of a helix test: a constancy verdict, or the reason the test does
/// not apply.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum HelixCheck {
    Applicable(ConstancyVerdict),
    NotApplicable { reason: String },
}

impl HelixCheck {
    pub fn holds(&self) -> Option<bool> {
        match self {
            HelixCheck::Applicable(v) => Some(v.is_constant),
            HelixCheck::NotApplicable { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HelixVerdicts {
    /// Lancret: `kappa / tau` constant.
    pub general_helix: HelixCheck,
    /// `kappa^2 / (kappa^2 + tau^2)^(3/2) * (tau / kappa)'` constant.
    pub slant_helix: HelixCheck,
}

pub fn helix_tests(cf: &CurveFrenetField, tol: f64) -> Result<HelixVerdicts> {
    let thr = EPS_CURV / (cf.grid.end() - cf.grid.start);
    let range = cf.interior();
    let max_kappa = range.clone().map(|i| cf.kappa[i]).fold(0.0, f64::max);
    let tau_floor = thr.max(1e-6 * max_kappa);
    let general_helix = if range.clone().any(|i| cf.tau[i].abs() <= tau_floor) {
        HelixCheck::NotApplicable {
            reason: "torsion vanishes (tau ~ 0): planar".into(),
        }
    } else {
        let ratio: Vec<f64> = range.clone().map(|i| cf.kappa[i] / cf.tau[i]).collect();
        HelixCheck::Applicable(is_constant(&ratio, tol)?)
    };
    let dk = derive_slice(&cf.kappa, cf.grid.step, 1)?;
    let dt = derive_slice(&cf.tau, cf.grid.step, 1)?;
    let sigma: Vec<f64> = range
        .clone()
        .map(|i| {
            let (k, t) = (cf.kappa[i], cf.tau[i]);
            (k * dt[i] - t * dk[i]) / (k * k + t * t).powf(1.5)
        })
        .collect();
    let slant_helix = HelixCheck::Applicable(is_constant(&sigma, tol)?);
    Ok(HelixVerdicts {
        general_helix,
        slant_helix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::ode::integrate_frenet;
    use crate::surface::SampleTable;

    fn helix(a: f64, b: f64, n: usize) -> (UniformGrid, Vec<Vec3>) {
        let w = (a * a + b * b).sqrt();
        let grid = UniformGrid::spanning(0.0, 6.0, n).unwrap();
        let pts = grid
            .points()
            .map(|s| Vec3::new(a * (s / w).cos(), a * (s / w).sin(), b * s / w))
            .collect();
        (grid, pts)
    }

    #[test]
    fn circular_helix_curvatures() {
        let (g, p) = helix(1.0, 1.0, 600);
        let cf = curve_apparatus(g, &p).unwrap();
        for i in cf.interior() {
            assert!((cf.kappa[i] - 0.5).abs() < 1e-8);
            assert!((cf.tau[i] - 0.5).abs() < 1e-8);
        }
        let hv = helix_tests(&cf, 1e-3).unwrap();
        assert_eq!(hv.general_helix.holds(), Some(true));
        assert_eq!(hv.slant_helix.holds(), Some(true));
    }

    #[test]
    fn planar_circle_has_no_torsion() {
        let (g, p) = helix(1.0, 0.0, 400);
        let cf = curve_apparatus(g, &p).unwrap();
        assert!(cf.interior().all(|i| cf.tau[i].abs() < 1e-8));
        let hv = helix_tests(&cf, 1e-3).unwrap();
        assert!(matches!(hv.general_helix, HelixCheck::NotApplicable { .. }));
    }

    #[test]
    fn straight_line_is_rejected() {
        let g = UniformGrid::spanning(0.0, 1.0, 50).unwrap();
        let p: Vec<Vec3> = g.points().map(|s| Vec3::new(s, 0.0, 0.0)).collect();
        assert!(matches!(curve_apparatus(g, &p), Err(Error::StraightSegment { .. })));
    }

    fn generated(k1: f64, k2: f64) -> StrictionFrameField {
        let g = UniformGrid::spanning(0.0, 3.0, 2000).unwrap();
        integrate_frenet(
            |_| Ok(k1),
            |_| Ok(k2),
            |_| Ok(0.0),
            [Vec3::x(), Vec3::y(), Vec3::z()],
            Vec3::zeros(),
            g,
        )
        .unwrap()
    }

    #[test]
    fn round_trip_constant_curvatures() {
        let ff0 = generated(2.0, 1.0);
        let spec = RuledSurfaceSpec::sampled(SampleTable::on_grid(ff0.grid, ff0.c.clone(), ff0.q.clone()).unwrap());
        let ff = ruled_apparatus(&spec).unwrap();
        for i in ff.interior() {
            assert!((ff.k1[i] - 2.0).abs() < 1e-4, "k1 {}", ff.k1[i]);
            assert!((ff.k2[i] - 1.0).abs() < 1e-4, "k2 {}", ff.k2[i]);
        }
        assert!(ff.handedness_deviation() < 1e-8);
        assert!(ff.consistency < 1e-6);
        let r = ff.frame_equation_residuals().unwrap();
        assert!(r.iter().all(|x| *x < 1e-3 * 2.0), "{r:?}");
    }

    #[test]
    fn helicoid_is_a_conoid() {
        let spec =
            RuledSurfaceSpec::from_strings("u", ["0", "0", "u"], ["cos(u)", "sin(u)", "0"], (0.0, 3.0), 256).unwrap();
        let ff = ruled_apparatus(&spec).unwrap();
        for i in ff.interior() {
            assert!((ff.k1[i] - 1.0).abs() < 1e-9);
            assert!(ff.k2[i].abs() < 1e-9);
            assert!((ff.a[i] - Vec3::z()).norm() < 1e-12);
        }
    }

    #[test]
    fn h_stays_continuous_through_a_zero_of_k1() {
        // q' vanishes at s = 1.2 where k1 changes sign
        let g = UniformGrid::spanning(0.0, 3.0, 801).unwrap();
        let ff0 = integrate_frenet(
            |s| Ok(s - 1.2),
            |_| Ok(1.0),
            |_| Ok(0.0),
            [Vec3::x(), Vec3::y(), Vec3::z()],
            Vec3::zeros(),
            g,
        )
        .unwrap();
        let ff = frame_from_samples(ff0.grid, ff0.c.clone(), ff0.q.clone(), ff0.param.clone()).unwrap();
        for i in ff.interior() {
            assert!(
                (ff.h[i] - ff0.h[i]).norm() < 1e-6,
                "h at {i}: {} vs {}",
                ff.h[i],
                ff0.h[i]
            );
            assert!((ff.k1[i] - (g.at(i) - 1.2)).abs() < 1e-6);
            assert!((ff.k2[i] - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn torsal_band_is_reported() {
        let g = UniformGrid::spanning(0.0, 3.0, 301).unwrap();
        let ff0 = integrate_frenet(
            |s| Ok(if (1.0..2.0).contains(&s) { 0.0 } else { 1.0 }),
            |_| Ok(1.0),
            |_| Ok(0.0),
            [Vec3::x(), Vec3::y(), Vec3::z()],
            Vec3::zeros(),
            g,
        )
        .unwrap();
        // q is frozen on [1, 2]; the stencils see exact zeros well inside
        let err = frame_from_samples(ff0.grid, ff0.c.clone(), ff0.q.clone(), ff0.param.clone()).unwrap_err();
        match err {
            Error::TorsalBand { s_start, s_end } => {
                assert!(s_start > 1.0 && s_end < 2.0 && s_end - s_start > 0.5);
            }
            e => panic!("{e:?}"),
        }
    }
}
