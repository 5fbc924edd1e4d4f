//! Builtin fixtures, surface synthesis from curvatures, file formats and
//! exporters.

mod files;
mod obj;
mod report;

pub use files::{
    load_surface, read_csv, resolve_input, write_csv, write_surface_outputs, SurfaceFile, MIN_FILE_SAMPLES,
};
pub use obj::{export_obj, format_sig9, write_obj};
pub use report::{Grid, Provenance, ReportFile, REPORT_SCHEMA};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numkit::grid::UniformGrid;
use crate::numkit::ode::integrate_frenet;
use crate::slant::k2_closed_form;
use crate::surface::{RuledSurfaceSpec, SampleTable};
use crate::Vec3;

/// Names accepted by [`builtin`].
pub const BUILTINS: [&str; 6] = [
    "example-6-1",
    "example-6-2",
    "helicoid",
    "helix-tangent-developable",
    "const-k1-k2",
    "thm-4-2",
];

/// Default arc-length sample count of analytic builtins.
pub const DEFAULT_SAMPLES: usize = 1024;

fn strs(v: [&str; 3]) -> [String; 3] {
    v.map(str::to_string)
}

/// Definition of a builtin as a surface file.
pub fn builtin_file(name: &str) -> Result<SurfaceFile> {
    let analytic = |param: &str, base, director, range: [f64; 2]| SurfaceFile::Analytic {
        param: param.to_string(),
        base: strs(base),
        director: strs(director),
        range,
        samples: DEFAULT_SAMPLES,
    };
    Ok(match name {
        "example-6-1" => analytic(
            "s",
            ["1/3*(1+s)^(3/2)", "1/3*(1-s)^(3/2)", "s/sqrt(2)"],
            ["1/2*(1+s)^(1/2)", "-1/2*(1-s)^(1/2)", "1/sqrt(2)"],
            [-0.5, 0.5],
        ),
        "example-6-2" => analytic(
            "s",
            [
                "25/612*sin(18*s) - 9/1700*sin(50*s)",
                "-25/612*cos(18*s) + 9/1700*cos(50*s)",
                "15/272*sin(16*s)",
            ],
            [
                "50/68*cos(18*s) - 18/68*cos(50*s)",
                "50/68*sin(18*s) - 18/68*sin(50*s)",
                "15/17*cos(16*s)",
            ],
            [0.02, 0.18],
        ),
        "helicoid" => analytic("u", ["0", "0", "u"], ["cos(u)", "sin(u)", "0"], [0.0, 6.0]),
        "helix-tangent-developable" => analytic(
            "u",
            ["cos(u)/sqrt(2)", "sin(u)/sqrt(2)", "u/sqrt(2)"],
            ["-sin(u)/sqrt(2)", "cos(u)/sqrt(2)", "1/sqrt(2)"],
            [0.0, 6.0],
        ),
        "const-k1-k2" => SurfaceFile::Curvatures {
            param: "s".into(),
            k1: "2".into(),
            k2: "1".into(),
            phi: "0".into(),
            range: [0.0, 3.0],
            samples: 2000,
        },
        "thm-4-2" => SurfaceFile::Curvatures {
            param: "s".into(),
            k1: "1".into(),
            k2: "s/sqrt(1-s^2)".into(),
            phi: "0".into(),
            range: [-0.6, 0.6],
            samples: DEFAULT_SAMPLES,
        },
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    })
}

/// A named fixture surface.
pub fn builtin(name: &str) -> Result<RuledSurfaceSpec> {
    Ok(builtin_file(name)?.to_spec(None)?.with_name(name))
}

/// SHA-256 of a builtin's canonical JSON definition.
pub fn builtin_digest(name: &str) -> Result<String> {
    let json = serde_json::to_string(&builtin_file(name)?)?;
    Ok(hex::encode(Sha256::digest(json.as_bytes())))
}

/// Integrates the frame equations for prescribed `k1`, `k2` and striction
/// angle `phi` from the standard frame at the origin, returning the surface
/// with `f = c` and director `q`, sampled at `samples` points of arc length.
pub fn from_curvatures(
    k1: &Expr,
    k2: &Expr,
    phi: &Expr,
    range: (f64, f64),
    samples: usize,
) -> Result<RuledSurfaceSpec> {
    let grid = UniformGrid::spanning(range.0, range.1, samples)?;
    curvature_surface(|s| Ok(k1.eval(s)?), |s| Ok(k2.eval(s)?), |s| Ok(phi.eval(s)?), grid)
}

/// `k1 = 1` with the positive branch of `k2 = s / sqrt(tan^2 theta - s^2)`,
/// an h-slant surface whose central normal makes angle `theta` with a fixed
/// axis.
pub fn from_theta(theta: f64, range: (f64, f64), samples: usize) -> Result<RuledSurfaceSpec> {
    let grid = UniformGrid::spanning(range.0, range.1, samples)?;
    k2_closed_form(theta, 0.0)?;
    let t = theta.tan();
    if !(range.0.abs() < t && range.1.abs() < t) {
        return Err(Error::Domain(format!(
            "range [{}, {}] must lie inside (-tan(theta), tan(theta)) = ({}, {t})",
            range.0, range.1, -t
        )));
    }
    curvature_surface(|_| Ok(1.0), |s| k2_closed_form(theta, s), |_| Ok(0.0), grid)
}

fn curvature_surface(
    k1: impl Fn(f64) -> Result<f64>,
    k2: impl Fn(f64) -> Result<f64>,
    phi: impl Fn(f64) -> Result<f64>,
    grid: UniformGrid,
) -> Result<RuledSurfaceSpec> {
    let ff = integrate_frenet(k1, k2, phi, [Vec3::x(), Vec3::y(), Vec3::z()], Vec3::zeros(), grid)?;
    Ok(RuledSurfaceSpec::sampled(SampleTable::on_grid(grid, ff.c, ff.q)?))
}
