//! Slant classifiers: q-slant (ratio, two determinant tests, third-derivative
//! expansion), h-slant (the sigma function and the closed-form second
//! curvature with its fixed axis), a-slant, and the full report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frenet::{curve_apparatus, helix_tests, ruled_apparatus, HelixCheck, StrictionFrameField};
use crate::numkit::constancy::{is_constant, ConstancyVerdict};
use crate::numkit::stencil::derive_slice;
use crate::surface::{striction_curve, RuledSurfaceSpec};
use crate::Vec3;

/// Share of interior samples that must have non-vanishing curvatures for
/// the q-slant tests to apply.
pub const MIN_SURVIVING: f64 = 0.75;
/// `max |k2| < CONOID_REL * max(1, max |k1|)` marks a conoid.
pub const CONOID_REL: f64 = 1e-6;
/// Hypothesis tolerance for "first curvature identically one".
pub const UNIT_K1_TOL: f64 = 1e-6;

/// Tolerances for every test; all are recorded in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Constancy of `k1 / k2`.
    pub ratio: f64,
    /// Constancy of the sigma function.
    pub sigma: f64,
    /// Determinants relative to their curvature scale.
    pub det: f64,
    /// Relative residual of the third-derivative expansion.
    pub expansion: f64,
    /// Axis drift and angle constancy.
    pub axis: f64,
    /// Constancy tests on the striction line's own curvatures.
    pub helix: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ratio: 1e-3,
            sigma: 1e-3,
            det: 1e-6,
            expansion: 1e-3,
            axis: 1e-3,
            helix: 1e-3,
        }
    }
}

/// Three-valued outcome; "not applicable" means a hypothesis of the test
/// failed, which is not the same as a negative answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Yes,
    No,
    NotApplicable,
}

impl Flag {
    pub fn from_bool(b: bool) -> Flag {
        if b {
            Flag::Yes
        } else {
            Flag::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Flag::Yes
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Flag::Yes => Some(true),
            Flag::No => Some(false),
            Flag::NotApplicable => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Flag::Yes => "yes",
            Flag::No => "no",
            Flag::NotApplicable => "not applicable",
        }
    }
}

/// Curvature ratio test with the reconstructed angle and axis.
#[derive(Debug, Clone, Serialize)]
pub struct QSlantTest {
    pub state: Flag,
    pub verdict: Option<ConstancyVerdict>,
    /// `atan(mean(k1 / k2))`, set when the ratio is constant.
    pub theta: Option<f64>,
    pub axis: Option<Vec3>,
    /// `max |axis - (cos theta q + sin theta a)|` over the interior.
    pub axis_drift: Option<f64>,
    /// Constancy residual of `<q, axis>`.
    pub angle_residual: Option<f64>,
    /// Share of interior samples with both curvatures non-vanishing.
    pub surviving: f64,
    pub reason: Option<String>,
}

/// A determinant test with its identity diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct DetTest {
    pub state: Flag,
    pub max_abs_det: f64,
    pub scale: f64,
    /// `max | |det| - |rhs| | / max(1, |rhs|)` where `rhs` is the curvature
    /// expression the determinant equals up to sign.
    pub identity_residual: f64,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionTest {
    pub state: Flag,
    pub max_residual: Option<f64>,
    pub reason: Option<String>,
}

/// The sigma-function test with the reconstructed h-slant axis.
#[derive(Debug, Clone, Serialize)]
pub struct HSlantTest {
    pub state: Flag,
    pub verdict: Option<ConstancyVerdict>,
    pub axis: Option<Vec3>,
    pub axis_drift: Option<f64>,
    /// `sigma / sqrt(1 + sigma^2)`, the cosine of the angle between `h` and
    /// the axis.
    pub cos_theta: Option<f64>,
    /// Constancy residual of `<h, axis>`.
    pub angle_residual: Option<f64>,
    pub reason: Option<String>,
}

fn interior_max(ff: &StrictionFrameField, v: &[f64]) -> f64 {
    ff.interior().map(|i| v[i].abs()).fold(0.0, f64::max)
}

/// True when `k2` vanishes on the whole interior relative to `k1`.
pub fn is_conoid(ff: &StrictionFrameField) -> bool {
    interior_max(ff, &ff.k2) < CONOID_REL * interior_max(ff, &ff.k1).max(1.0)
}

/// Curvature ratio test: `k1 / k2` constant.
pub fn q_slant_test(ff: &StrictionFrameField, tol: &Tolerances) -> Result<QSlantTest> {
    let eps = ff.eps_curv();
    let range = ff.interior();
    let total = range.len();
    let keep: Vec<usize> = range
        .clone()
        .filter(|&i| ff.k1[i].abs() > eps && ff.k2[i].abs() > eps)
        .collect();
    let surviving = keep.len() as f64 / total as f64;
    let not_applicable = |reason: String| QSlantTest {
        state: Flag::NotApplicable,
        verdict: None,
        theta: None,
        axis: None,
        axis_drift: None,
        angle_residual: None,
        surviving,
        reason: Some(reason),
    };
    if is_conoid(ff) {
        return Ok(not_applicable(
            "k2 vanishes identically (conoid): ratio undefined".into(),
        ));
    }
    if surviving < MIN_SURVIVING || keep.len() < crate::numkit::MIN_GRID {
        return Ok(not_applicable(format!(
            "curvatures vanish on {:.0}% of the interior: non-zero curvature hypothesis violated",
            100.0 * (1.0 - surviving)
        )));
    }
    let ratio: Vec<f64> = keep.iter().map(|&i| ff.k1[i] / ff.k2[i]).collect();
    let verdict = is_constant(&ratio, tol.ratio)?;
    let mut out = QSlantTest {
        state: Flag::from_bool(verdict.is_constant),
        verdict: Some(verdict),
        theta: None,
        axis: None,
        axis_drift: None,
        angle_residual: None,
        surviving,
        reason: None,
    };
    if verdict.is_constant {
        let theta = verdict.mean.atan();
        let (c, s) = (theta.cos(), theta.sin());
        let local: Vec<Vec3> = range.clone().map(|i| ff.q[i] * c + ff.a[i] * s).collect();
        let axis = mean_direction(&local);
        out.theta = Some(theta);
        out.axis = Some(axis);
        out.axis_drift = Some(local.iter().map(|u| (u - axis).norm()).fold(0.0, f64::max));
        let cosines: Vec<f64> = range.map(|i| ff.q[i].dot(&axis)).collect();
        out.angle_residual = Some(is_constant(&cosines, tol.axis)?.residual);
    }
    Ok(out)
}

fn mean_direction(v: &[Vec3]) -> Vec3 {
    v.iter().fold(Vec3::zeros(), |acc, x| acc + x).normalize()
}

fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a.dot(&b.cross(c))
}

/// `k1' k2 - k1 k2'` on the whole grid.
fn wronskian(ff: &StrictionFrameField) -> Result<Vec<f64>> {
    let d1 = derive_slice(&ff.k1, ff.grid.step, 1)?;
    let d2 = derive_slice(&ff.k2, ff.grid.step, 1)?;
    Ok((0..ff.len()).map(|i| d1[i] * ff.k2[i] - ff.k1[i] * d2[i]).collect())
}

fn det_test(
    ff: &StrictionFrameField,
    field: &[Vec3],
    rhs: impl Fn(usize, f64) -> f64,
    scale: f64,
    tol: f64,
) -> Result<DetTest> {
    let step = ff.grid.step;
    let d1 = derive_slice(field, step, 1)?;
    let d2 = derive_slice(field, step, 2)?;
    let d3 = derive_slice(field, step, 3)?;
    let w = wronskian(ff)?;
    let mut max_abs_det: f64 = 0.0;
    let mut identity_residual: f64 = 0.0;
    for i in ff.interior() {
        let det = det3(&d1[i], &d2[i], &d3[i]);
        let r = rhs(i, w[i]);
        max_abs_det = max_abs_det.max(det.abs());
        identity_residual = identity_residual.max((det.abs() - r.abs()).abs() / r.abs().max(1.0));
    }
    Ok(DetTest {
        state: Flag::from_bool(max_abs_det < tol * scale),
        max_abs_det,
        scale,
        identity_residual,
        reason: None,
    })
}

/// `det(q', q'', q''') = 0`, the determinant equalling
/// `k1^3 k2^2 (k1/k2)'` up to sign.
pub fn det_q_test(ff: &StrictionFrameField, tol: &Tolerances) -> Result<DetTest> {
    let k1max = interior_max(ff, &ff.k1);
    let k2max = interior_max(ff, &ff.k2);
    let scale = k1max.powi(3) * (k2max * k2max).max(1.0);
    det_test(ff, &ff.q, |i, w| ff.k1[i].powi(3) * w, scale, tol.det)
}

/// `det(a', a'', a''') = 0`, the determinant equalling `k2^5 (k1/k2)'`.
pub fn det_a_test(ff: &StrictionFrameField, tol: &Tolerances) -> Result<DetTest> {
    let k2max = interior_max(ff, &ff.k2);
    let scale = k2max.powi(5).max(1.0);
    let mut t = det_test(ff, &ff.a, |i, w| ff.k2[i].powi(3) * w, scale, tol.det)?;
    if is_conoid(ff) {
        t.state = Flag::NotApplicable;
        t.reason = Some("degenerate: k2 = 0 identically, non-zero curvature hypothesis violated".into());
    }
    Ok(t)
}

/// Residual of `q''' = m q' + 3 k1' h'` with `m = k1''/k1 - (k1^2 + k2^2)`.
pub fn expansion_residual(ff: &StrictionFrameField, tol: &Tolerances) -> Result<ExpansionTest> {
    let eps = ff.eps_curv();
    if let Some(i) = ff.interior().find(|&i| ff.k1[i].abs() <= eps) {
        return Ok(ExpansionTest {
            state: Flag::NotApplicable,
            max_residual: None,
            reason: Some(format!("k1 vanishes near s = {:.6}", ff.grid.at(i))),
        });
    }
    let step = ff.grid.step;
    let dq = derive_slice(&ff.q, step, 1)?;
    let d3q = derive_slice(&ff.q, step, 3)?;
    let dh = derive_slice(&ff.h, step, 1)?;
    let dk1 = derive_slice(&ff.k1, step, 1)?;
    let d2k1 = derive_slice(&ff.k1, step, 2)?;
    let mut worst: f64 = 0.0;
    for i in ff.interior() {
        let (k1, k2) = (ff.k1[i], ff.k2[i]);
        let m = d2k1[i] / k1 - (k1 * k1 + k2 * k2);
        let r = (d3q[i] - dq[i] * m - dh[i] * (3.0 * dk1[i])).norm() / d3q[i].norm().max(1.0);
        worst = worst.max(r);
    }
    Ok(ExpansionTest {
        state: Flag::from_bool(worst < tol.expansion),
        max_residual: Some(worst),
        reason: None,
    })
}

/// Samples of `sigma = (k1 k2' - k2 k1') / (k1^2 + k2^2)^(3/2)` over the
/// interior, which equals `k1^2 / (k1^2 + k2^2)^(3/2) (k2/k1)'` wherever
/// `k1` is non-zero.
pub fn sigma_samples(ff: &StrictionFrameField) -> Result<Vec<f64>> {
    let w = wronskian(ff)?;
    Ok(ff
        .interior()
        .map(|i| {
            let rho2 = ff.k1[i] * ff.k1[i] + ff.k2[i] * ff.k2[i];
            -w[i] / rho2.powf(1.5)
        })
        .collect())
}

/// Sigma-function test with the axis `k2/rho q + sigma h + k1/rho a`.
pub fn h_slant_test(ff: &StrictionFrameField, tol: &Tolerances) -> Result<HSlantTest> {
    let eps = ff.eps_curv();
    if let Some(i) = ff
        .interior()
        .find(|&i| ff.k1[i] * ff.k1[i] + ff.k2[i] * ff.k2[i] <= eps * eps)
    {
        return Ok(HSlantTest {
            state: Flag::NotApplicable,
            verdict: None,
            axis: None,
            axis_drift: None,
            cos_theta: None,
            angle_residual: None,
            reason: Some(format!("both curvatures vanish near s = {:.6}", ff.grid.at(i))),
        });
    }
    let sigma = sigma_samples(ff)?;
    let verdict = is_constant(&sigma, tol.sigma)?;
    let mut out = HSlantTest {
        state: Flag::from_bool(verdict.is_constant),
        verdict: Some(verdict),
        axis: None,
        axis_drift: None,
        cos_theta: None,
        angle_residual: None,
        reason: None,
    };
    if verdict.is_constant {
        let d = verdict.mean;
        let norm = (1.0 + d * d).sqrt();
        let local: Vec<Vec3> = ff
            .interior()
            .map(|i| {
                let rho = (ff.k1[i] * ff.k1[i] + ff.k2[i] * ff.k2[i]).sqrt();
                (ff.q[i] * (ff.k2[i] / rho) + ff.h[i] * d + ff.a[i] * (ff.k1[i] / rho)) / norm
            })
            .collect();
        let axis = mean_direction(&local);
        out.axis = Some(axis);
        out.axis_drift = Some(local.iter().map(|u| (u - axis).norm()).fold(0.0, f64::max));
        out.cos_theta = Some(d / norm);
        let cosines: Vec<f64> = ff.interior().map(|i| ff.h[i].dot(&axis)).collect();
        out.angle_residual = Some(is_constant(&cosines, tol.axis)?.residual);
    }
    Ok(out)
}

/// Positive branch of `k2(s) = s / sqrt(tan^2 theta - s^2)`, the second
/// curvature of an h-slant surface with `k1 = 1`.
pub fn k2_closed_form(theta: f64, s: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!(
            "theta = {theta} outside (0, pi/2); theta = pi/2 is excluded"
        )));
    }
    let t = theta.tan();
    if !(s.abs() < t) {
        return Err(Error::Domain(format!(
            "|s| = {} must be below tan(theta) = {t}",
            s.abs()
        )));
    }
    Ok(s / (t * t - s * s).sqrt())
}

/// Sign of the `k2` branch: `+1` when `k2` has the sign of `s`.
pub fn infer_branch(ff: &StrictionFrameField) -> f64 {
    let m: f64 = ff.interior().map(|i| ff.k2[i] * ff.grid.at(i)).sum();
    if m >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// For `k1 = 1`, the largest `|u'|` over the interior of
/// `u(s) = cos theta (s q + h + sign sqrt(tan^2 theta - s^2) a)`. A small
/// value certifies the axis is fixed.
pub fn unit_k1_axis_check(ff: &StrictionFrameField, theta: f64, sign: f64) -> Result<f64> {
    let dev = ff.interior().map(|i| (ff.k1[i] - 1.0).abs()).fold(0.0, f64::max);
    if !(dev < UNIT_K1_TOL) {
        return Err(Error::Hypothesis(format!(
            "first curvature must be identically 1 (max |k1 - 1| = {dev:e})"
        )));
    }
    k2_closed_form(theta, 0.0)?;
    let t2 = theta.tan().powi(2);
    let mut u = Vec::with_capacity(ff.len());
    for i in 0..ff.len() {
        let s = ff.grid.at(i);
        let x = t2 - s * s;
        if !(x > 0.0) {
            return Err(Error::Domain(format!("|s| = {} reaches tan(theta)", s.abs())));
        }
        u.push((ff.q[i] * s + ff.h[i] + ff.a[i] * (sign * x.sqrt())) * theta.cos());
    }
    let du = derive_slice(&u, ff.grid.step, 1)?;
    Ok(ff.interior().map(|i| du[i].norm()).fold(0.0, f64::max))
}

/// a-slant is equivalent to q-slant; the verdict is the q-slant one.
pub fn a_slant_test(ff: &StrictionFrameField, tol: &Tolerances) -> Result<QSlantTest> {
    q_slant_test(ff, tol)
}

/// Striction-level summary for reports.
#[derive(Debug, Clone, Serialize)]
pub struct StrictionSummary {
    pub max_abs_v0: f64,
    pub max_abs_d: f64,
    pub tol_dev: f64,
    pub scale: f64,
    /// Largest `|c'/|c'| - q|` on the native grid, zero for developables.
    pub max_tangent_deviation: f64,
    pub striction_residual: f64,
    /// Parameter windows of torsal rulings on a non-developable surface.
    pub torsal_windows: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HelixCrossCheck {
    pub general_helix: HelixCheck,
    pub slant_helix: HelixCheck,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn of(v: impl Iterator<Item = f64>) -> Range {
        v.fold(
            Range {
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            },
            |r, x| Range {
                min: r.min.min(x),
                max: r.max.max(x),
            },
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub name: Option<String>,
    pub developable: bool,
    pub cylindrical: bool,
    pub conoid: bool,
    pub q_slant: Flag,
    pub h_slant: Flag,
    pub a_slant: Flag,
    pub theta_q: Option<f64>,
    pub axis_q: Option<Vec3>,
    pub axis_h: Option<Vec3>,
    pub ratio: QSlantTest,
    pub det_q: DetTest,
    pub det_a: DetTest,
    pub expansion: ExpansionTest,
    pub sigma: HSlantTest,
    pub striction: Option<StrictionSummary>,
    pub striction_line: Option<HelixCrossCheck>,
    pub k1: Range,
    pub k2: Range,
    pub length: f64,
    pub s_start: f64,
    pub s_step: f64,
    pub samples: usize,
    pub trim: usize,
    pub frame_consistency: f64,
    pub tolerances: Tolerances,
    pub warnings: Vec<String>,
}

impl HSlantTest {
    /// Mean of sigma when the test ran.
    pub fn mean(&self) -> Option<f64> {
        self.verdict.map(|v| v.mean)
    }
}

impl ClassificationReport {
    /// Human-readable summary, one line per property.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "surface: {n}");
        }
        let yn = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(s, "developable: {}", yn(self.developable));
        let _ = writeln!(s, "cylindrical: {}", yn(self.cylindrical));
        let _ = writeln!(s, "conoid: {}", yn(self.conoid));
        let _ = write!(s, "q-slant: {}", self.q_slant.label());
        match (&self.ratio.reason, self.theta_q, &self.ratio.verdict) {
            (Some(r), _, _) => {
                let _ = write!(s, " ({r})");
            }
            (None, Some(t), _) => {
                let _ = write!(s, " (theta = {t:.6})");
            }
            (None, None, Some(v)) => {
                let _ = write!(s, " (ratio residual = {:.3e})", v.residual);
            }
            _ => {}
        }
        s.push('\n');
        let _ = writeln!(s, "a-slant: {} (equivalent to q-slant)", self.a_slant.label());
        let _ = write!(s, "h-slant: {}", self.h_slant.label());
        match (&self.sigma.reason, &self.sigma.verdict) {
            (Some(r), _) => {
                let _ = write!(s, " ({r})");
            }
            (None, Some(v)) if v.is_constant => {
                let _ = write!(s, " (sigma = {:.6})", v.mean);
            }
            (None, Some(v)) => {
                let _ = write!(s, " (sigma residual = {:.3e})", v.residual);
            }
            _ => {}
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "det(q',q'',q'''): {} (max |det| = {:.3e}, scale = {:.3e})",
            self.det_q.state.label(),
            self.det_q.max_abs_det,
            self.det_q.scale
        );
        let _ = write!(
            s,
            "det(a',a'',a'''): {} (max |det| = {:.3e}, scale = {:.3e})",
            self.det_a.state.label(),
            self.det_a.max_abs_det,
            self.det_a.scale
        );
        if let Some(r) = &self.det_a.reason {
            let _ = write!(s, " [{r}]");
        }
        s.push('\n');
        match (self.expansion.max_residual, &self.expansion.reason) {
            (Some(r), _) => {
                let _ = writeln!(
                    s,
                    "q''' expansion: {} (max residual = {r:.3e})",
                    self.expansion.state.label()
                );
            }
            (None, Some(r)) => {
                let _ = writeln!(s, "q''' expansion: not applicable ({r})");
            }
            _ => {}
        }
        if let Some(h) = &self.striction_line {
            let lbl = |c: &HelixCheck| match c {
                HelixCheck::Applicable(v) => yn(v.is_constant).to_string(),
                HelixCheck::NotApplicable { reason } => format!("not applicable ({reason})"),
            };
            let _ = writeln!(s, "striction line general helix: {}", lbl(&h.general_helix));
            let _ = writeln!(s, "striction line slant helix: {}", lbl(&h.slant_helix));
        }
        let _ = writeln!(
            s,
            "k1: [{:.6}, {:.6}]  k2: [{:.6}, {:.6}]  length: {:.6}  samples: {}",
            self.k1.min, self.k1.max, self.k2.min, self.k2.max, self.length, self.samples
        );
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

/// Full classification of a surface: striction data, frame field and every
/// test.
pub fn classify(spec: &RuledSurfaceSpec, tol: &Tolerances) -> Result<ClassificationReport> {
    let sd = striction_curve(spec)?;
    let floor = crate::surface::striction_floor(spec)?;
    let mut max_tangent_deviation: f64 = 0.0;
    for u in sd.grid.points() {
        let j = spec.local(u)?;
        let (_, dc, _) = crate::surface::striction_point(&j, floor)?;
        let n = dc.norm();
        if n > 0.0 {
            let t = dc / n;
            max_tangent_deviation = max_tangent_deviation.max((t - j.q[0]).norm().min((t + j.q[0]).norm()));
        }
    }
    let summary = StrictionSummary {
        max_abs_v0: sd.v0.iter().fold(0.0, |m, x| m.max(x.abs())),
        max_abs_d: sd.max_abs_d(),
        tol_dev: sd.tol_dev,
        scale: sd.scale,
        max_tangent_deviation,
        striction_residual: sd.striction_residual,
        torsal_windows: if sd.developable {
            Vec::new()
        } else {
            sd.torsal_windows()
        },
    };
    let ff = ruled_apparatus(spec)?;
    let mut report = classify_field(&ff, tol, sd.developable)?;
    report.name = spec.name().map(str::to_string);
    if !summary.torsal_windows.is_empty() {
        report.warnings.push(format!(
            "{} torsal ruling window(s) on a non-developable surface",
            summary.torsal_windows.len()
        ));
    }
    if sd.developable != (max_tangent_deviation < 1e-5) {
        report.warnings.push(format!(
            "developability tests disagree: max |d| = {:.3e}, max tangent deviation = {:.3e}",
            summary.max_abs_d, max_tangent_deviation
        ));
    }
    report.striction = Some(summary);
    Ok(report)
}

/// Runs every frame-level test on `ff`. `developable` enables the
/// striction-line helix cross-checks.
pub fn classify_field(ff: &StrictionFrameField, tol: &Tolerances, developable: bool) -> Result<ClassificationReport> {
    let mut warnings = Vec::new();
    let conoid = is_conoid(ff);
    let ratio = q_slant_test(ff, tol)?;
    let det_q = det_q_test(ff, tol)?;
    let det_a = det_a_test(ff, tol)?;
    let expansion = expansion_residual(ff, tol)?;
    let sigma = h_slant_test(ff, tol)?;

    let applicable: Vec<(&str, bool)> = [
        ("curvature ratio", ratio.state),
        ("det(q',q'',q''')", det_q.state),
        ("det(a',a'',a''')", det_a.state),
        ("q''' expansion", expansion.state),
    ]
    .into_iter()
    .filter_map(|(n, f)| f.as_bool().map(|b| (n, b)))
    .collect();
    if applicable.iter().any(|(_, b)| *b != applicable[0].1) {
        let parts: Vec<String> = applicable
            .iter()
            .map(|(n, b)| format!("{n}: {}", if *b { "yes" } else { "no" }))
            .collect();
        warnings.push(format!("q-slant tests disagree ({})", parts.join(", ")));
    }
    if let Some(v) = sigma.verdict {
        if sigma.state.is_yes() && v.mean.abs() < tol.sigma {
            warnings.push("sigma = 0: the h-slant axis is orthogonal to h (angle pi/2)".into());
        }
    }
    if let (Some(d), true) = (ratio.axis_drift, ratio.state.is_yes()) {
        if d > tol.axis {
            warnings.push(format!("q-slant axis drift {d:.3e} exceeds {:.1e}", tol.axis));
        }
    }
    if let (Some(d), true) = (sigma.axis_drift, sigma.state.is_yes()) {
        if d > tol.axis {
            warnings.push(format!("h-slant axis drift {d:.3e} exceeds {:.1e}", tol.axis));
        }
    }
    let kscale = interior_max(ff, &ff.k1).max(interior_max(ff, &ff.k2)).max(1.0);
    if ff.consistency > 1e-4 * kscale {
        warnings.push(format!("frame consistency <a', h> + k2 off by {:.3e}", ff.consistency));
    }
    if ff.interior().any(|i| ff.k1[i] < 0.0) {
        warnings.push("q' passes through zero: k1 changes sign along the striction line".into());
    }

    let striction_line = if developable {
        match curve_apparatus(ff.grid, &ff.c).and_then(|cf| helix_tests(&cf, tol.helix)) {
            Ok(hv) => {
                if let (Some(q), Some(g)) = (ratio.state.as_bool(), hv.general_helix.holds()) {
                    if q != g {
                        warnings.push("q-slant verdict disagrees with the striction line general-helix test".into());
                    }
                }
                if let (Some(h), Some(g)) = (sigma.state.as_bool(), hv.slant_helix.holds()) {
                    if h != g {
                        warnings.push("h-slant verdict disagrees with the striction line slant-helix test".into());
                    }
                }
                Some(HelixCrossCheck {
                    general_helix: hv.general_helix,
                    slant_helix: hv.slant_helix,
                })
            }
            Err(e) => {
                warnings.push(format!("striction line Frenet frame unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };

    let range = ff.interior();
    Ok(ClassificationReport {
        name: None,
        developable,
        cylindrical: false,
        conoid,
        q_slant: ratio.state,
        h_slant: sigma.state,
        a_slant: ratio.state,
        theta_q: ratio.theta,
        axis_q: ratio.axis,
        axis_h: sigma.axis,
        k1: Range::of(range.clone().map(|i| ff.k1[i])),
        k2: Range::of(range.map(|i| ff.k2[i])),
        ratio,
        det_q,
        det_a,
        expansion,
        sigma,
        striction: None,
        striction_line,
        length: ff.length(),
        s_start: ff.grid.start,
        s_step: ff.grid.step,
        samples: ff.len(),
        trim: ff.trim,
        frame_consistency: ff.consistency,
        tolerances: *tol,
        warnings,
    })
}
