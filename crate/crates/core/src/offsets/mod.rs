//! Bertrand and Mannheim offsets of a ruled surface.
//!
//! Both constructions work from the frame field of the first surface and
//! return a sampled surface whose parameter is the first surface's striction
//! arc length, so points correspond by equal parameter. Only the interior
//! (untrimmed) samples of the input field are used.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frenet::StrictionFrameField;
use crate::numkit::grid::UniformGrid;
use crate::surface::{RuledSurfaceSpec, SampleTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffsetKind {
    Bertrand,
    Mannheim,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetSpec {
    pub kind: OffsetKind,
    /// Director rotation towards `a` (Bertrand).
    pub alpha: f64,
    /// Striction-line displacement.
    pub r: f64,
    /// Initial director phase (Mannheim).
    pub beta0: f64,
}

impl OffsetSpec {
    pub fn apply(&self, ff: &StrictionFrameField) -> Result<RuledSurfaceSpec> {
        match self.kind {
            OffsetKind::Bertrand => bertrand_offset(ff, self.alpha, self.r),
            OffsetKind::Mannheim => mannheim_construct(ff, self.beta0, self.r),
        }
    }
}

fn interior_grid(ff: &StrictionFrameField) -> Result<UniformGrid> {
    let r = ff.interior();
    UniformGrid::new(ff.grid.at(r.start), ff.grid.step, r.len())
}

/// Fails when `g` stays below the curvature threshold on two or more
/// consecutive interior samples.
fn check_not_torsal(ff: &StrictionFrameField, g: impl Fn(usize) -> f64) -> Result<()> {
    let eps = ff.eps_curv();
    let mut run: Option<usize> = None;
    for i in ff.interior() {
        if g(i).abs() < eps {
            let start = *run.get_or_insert(i);
            if i > start {
                return Err(Error::TorsalBand {
                    s_start: ff.grid.at(start),
                    s_end: ff.grid.at(i),
                });
            }
        } else {
            run = None;
        }
    }
    Ok(())
}

/// `c2 = c1 + R h1`, `q2 = cos(alpha) q1 + sin(alpha) a1`. Then
/// `q2' = (cos(alpha) k1 - sin(alpha) k2) h1`, so both surfaces share the
/// central normal.
pub fn bertrand_offset(ff: &StrictionFrameField, alpha: f64, r: f64) -> Result<RuledSurfaceSpec> {
    if !(alpha.is_finite() && r.is_finite()) {
        return Err(Error::Domain("offset angle and distance must be finite".into()));
    }
    let (sa, ca) = alpha.sin_cos();
    if ca.abs() < 1e-12 {
        return Err(Error::Domain("alpha = +-pi/2 makes the director parallel to a1".into()));
    }
    check_not_torsal(ff, |i| ca * ff.k1[i] - sa * ff.k2[i])?;
    let range = ff.interior();
    let f = range.clone().map(|i| ff.c[i] + ff.h[i] * r).collect();
    let q = range.map(|i| ff.q[i] * ca + ff.a[i] * sa).collect();
    Ok(RuledSurfaceSpec::sampled(SampleTable::on_grid(interior_grid(ff)?, f, q)?).with_name("bertrand-offset"))
}

/// `beta(s) = beta0 - int k1` from the start of the grid, by the composite
/// trapezoid rule.
pub fn mannheim_phase(ff: &StrictionFrameField, beta0: f64) -> Vec<f64> {
    let h = ff.grid.step;
    let mut beta = Vec::with_capacity(ff.len());
    beta.push(beta0);
    for i in 1..ff.len() {
        let prev = beta[i - 1];
        beta.push(prev - 0.5 * h * (ff.k1[i - 1] + ff.k1[i]));
    }
    beta
}

/// `q2 = cos(beta) q1 + sin(beta) h1`, `c2 = c1 + R a1` with
/// `beta' = -k1`, so `q2' = sin(beta) k2 a1`: the offset's central normal is
/// the first surface's central tangent.
pub fn mannheim_construct(ff: &StrictionFrameField, beta0: f64, r: f64) -> Result<RuledSurfaceSpec> {
    if !(beta0.is_finite() && r.is_finite()) {
        return Err(Error::Domain("offset phase and distance must be finite".into()));
    }
    let beta = mannheim_phase(ff, beta0);
    check_not_torsal(ff, |i| beta[i].sin() * ff.k2[i])?;
    let range = ff.interior();
    let f = range.clone().map(|i| ff.c[i] + ff.a[i] * r).collect();
    let q = range
        .map(|i| {
            let (s, c) = beta[i].sin_cos();
            ff.q[i] * c + ff.h[i] * s
        })
        .collect();
    Ok(RuledSurfaceSpec::sampled(SampleTable::on_grid(interior_grid(ff)?, f, q)?).with_name("mannheim-offset"))
}

/// `min |<e1, h2>|` over the interior of `ff2`, where `e1` is picked from
/// the frame `{q1, h1, a1}` at the corresponding point. Points correspond
/// sample by sample when the grids agree, otherwise through `ff2.param`,
/// which must be arc length on `ff1`.
pub fn alignment(ff1: &StrictionFrameField, ff2: &StrictionFrameField, pick: usize) -> Result<f64> {
    if pick > 2 {
        return Err(Error::Domain("frame index must be 0, 1 or 2".into()));
    }
    let mut worst = f64::INFINITY;
    if ff1.grid.same_as(&ff2.grid, 1e-12) {
        for i in ff2.interior() {
            let e = [ff1.q[i], ff1.h[i], ff1.a[i]][pick];
            worst = worst.min(e.dot(&ff2.h[i]).abs());
        }
    } else {
        for i in ff2.interior() {
            let e = ff1.frame_at(ff2.param[i])?[pick];
            worst = worst.min(e.dot(&ff2.h[i]).abs());
        }
    }
    Ok(worst)
}

/// `min |<a1, h2>| > 1 - tol` at corresponding points.
pub fn mannheim_verify(ff1: &StrictionFrameField, ff2: &StrictionFrameField, tol: f64) -> Result<bool> {
    Ok(alignment(ff1, ff2, 2)? > 1.0 - tol)
}

/// `min |<h1, h2>|` at corresponding points.
pub fn bertrand_alignment(ff1: &StrictionFrameField, ff2: &StrictionFrameField) -> Result<f64> {
    alignment(ff1, ff2, 1)
}

/// Largest `|<q2, a1>|` over a Mannheim pair's samples; zero by
/// construction.
pub fn mannheim_director_residual(ff1: &StrictionFrameField, offset: &RuledSurfaceSpec) -> Result<f64> {
    let crate::surface::Geometry::Sampled(t) = offset.geometry() else {
        return Err(Error::Domain("offset surfaces are sampled".into()));
    };
    let start = ff1.interior().start;
    Ok(t.director()
        .iter()
        .enumerate()
        .map(|(j, q2)| q2.dot(&ff1.a[start + j]).abs())
        .fold(0.0, f64::max))
}
