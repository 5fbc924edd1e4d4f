use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::surface::RuledSurfaceSpec;

/// `x` with 9 significant digits, in plain decimal notation for moderate
/// magnitudes and scientific notation otherwise. Trailing zeros are
/// dropped, and negative zero prints as `0`.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}

/// Wavefront OBJ text of the surface over its parameter range and
/// `v_range`: `nu * nv` vertices in u-major order and quad faces with
/// 1-based indices.
pub fn export_obj(spec: &RuledSurfaceSpec, v_range: (f64, f64), nu: usize, nv: usize) -> Result<String> {
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidGrid(format!("mesh needs nu, nv >= 2 (got {nu} x {nv})")));
    }
    if !(v_range.0.is_finite() && v_range.1.is_finite()) {
        return Err(Error::InvalidGrid("v range must be finite".into()));
    }
    let (ua, ub) = spec.range();
    let lerp = |a: f64, b: f64, i: usize, n: usize| {
        if i + 1 == n {
            b
        } else {
            a + (b - a) * i as f64 / (n - 1) as f64
        }
    };
    let mut out = String::new();
    if let Some(name) = spec.name() {
        let _ = writeln!(out, "o {name}");
    }
    for i in 0..nu {
        let j = spec.local(lerp(ua, ub, i, nu))?;
        for k in 0..nv {
            let p = j.f[0] + j.q[0] * lerp(v_range.0, v_range.1, k, nv);
            let _ = writeln!(out, "v {} {} {}", format_sig9(p.x), format_sig9(p.y), format_sig9(p.z));
        }
    }
    for i in 0..nu - 1 {
        for k in 0..nv - 1 {
            let a = i * nv + k + 1;
            let b = (i + 1) * nv + k + 1;
            let _ = writeln!(out, "f {a} {b} {} {}", b + 1, a + 1);
        }
    }
    Ok(out)
}

pub fn write_obj(
    spec: &RuledSurfaceSpec,
    v_range: (f64, f64),
    nu: usize,
    nv: usize,
    path: impl AsRef<Path>,
) -> Result<()> {
    let text = export_obj(spec, v_range, nu, nv)?;
    std::fs::write(path.as_ref(), text).map_err(|e| Error::io(path, e))
}
