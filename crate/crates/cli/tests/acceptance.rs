//! Acceptance criteria, one PASS/FAIL line each.

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::process::Command;

use nalgebra::{Rotation3, Unit, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ruledgeo::numkit::is_constant;
use ruledgeo::offsets::{bertrand_alignment, bertrand_offset, mannheim_construct, mannheim_verify};
use ruledgeo::slant::{
    det_a_test, det_q_test, expansion_residual, h_slant_test, infer_branch, q_slant_test, sigma_samples,
    unit_k1_axis_check, ClassificationReport, Flag,
};
use ruledgeo::surface::{striction_floor, striction_point};
use ruledgeo::workbench::{builtin, from_curvatures};
use ruledgeo::{classify, ruled_apparatus, Expr, RuledSurfaceSpec, StrictionFrameField, Tolerances};

type Outcome = Result<(bool, String), String>;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn curvature_spec(k1: &str, k2: &str, range: (f64, f64), samples: usize) -> Result<RuledSurfaceSpec, String> {
    let p = |t: &str| Expr::parse(t).map_err(err);
    from_curvatures(&p(k1)?, &p(k2)?, &p("0")?, range, samples).map_err(err)
}

/// Largest interior error against `exact`, relative to the largest exact value.
fn scaled_error(ff: &StrictionFrameField, k: &[f64], exact: impl Fn(f64) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in ff.interior() {
        let e = exact(ff.grid.at(i));
        worst = worst.max((k[i] - e).abs());
        scale = scale.max(e.abs());
    }
    worst / scale
}

fn curvature_reproduction() -> Outcome {
    let spec = builtin("example-6-2").map_err(err)?.with_samples(1024).map_err(err)?;
    let ff = ruled_apparatus(&spec).map_err(err)?;
    let amp = 510.0 / 17.0;
    let e1 = scaled_error(&ff, &ff.k1, |s| amp * (16.0 * s).sin());
    let e2 = scaled_error(&ff, &ff.k2, |s| amp * (16.0 * s).cos());
    let start_ok = (ff.grid.start - 0.02).abs() < 1e-12 && (ff.grid.end() - 0.18).abs() < 1e-9;
    Ok((
        e1 < 1e-3 && e2 < 1e-3 && start_ok,
        format!(
            "s in [{:.6}, {:.6}], max|k1 err|/max|k1| = {e1:.2e}, max|k2 err|/max|k2| = {e2:.2e}",
            ff.grid.start,
            ff.grid.end()
        ),
    ))
}

fn sigma_constant() -> Outcome {
    let r = classify(&builtin("example-6-2").map_err(err)?, &tol()).map_err(err)?;
    let v = r.sigma.verdict.ok_or("sigma test did not run")?;
    let target = -136.0 / 255.0;
    Ok((
        (v.mean - target).abs() < 1e-3 && v.residual < 1e-3 && r.h_slant == Flag::Yes,
        format!(
            "mean sigma = {:.6} (target {target:.6}), residual = {:.2e}, h-slant = {}",
            v.mean,
            v.residual,
            r.h_slant.label()
        ),
    ))
}

fn developable_example() -> Outcome {
    let spec = builtin("example-6-1").map_err(err)?;
    let r = classify(&spec, &tol()).map_err(err)?;
    let floor = striction_floor(&spec).map_err(err)?;
    let mut tangent: f64 = 0.0;
    for u in spec.native_grid().map_err(err)?.points() {
        let j = spec.local(u).map_err(err)?;
        let (_, dc, _) = striction_point(&j, floor).map_err(err)?;
        tangent = tangent.max((dc - j.q[0]).norm());
    }
    let st = r.striction.as_ref().ok_or("no striction summary")?;
    let helix = r
        .striction_line
        .as_ref()
        .and_then(|h| h.general_helix.holds())
        .unwrap_or(false);
    let det_ok = r.det_q.max_abs_det < 1e-6 * r.det_q.scale;
    let pass = det_ok
        && r.q_slant == Flag::Yes
        && r.a_slant == Flag::Yes
        && r.developable
        && st.max_abs_v0 < 1e-9
        && tangent < 1e-6
        && helix;
    Ok((
        pass,
        format!(
            "|det| = {:.2e} (bound {:.2e}), q/a-slant = {}/{}, developable = {}, max|v0| = {:.2e}, max|c' - q| = {tangent:.2e}, general helix = {helix}",
            r.det_q.max_abs_det,
            1e-6 * r.det_q.scale,
            r.q_slant.label(),
            r.a_slant.label(),
            r.developable,
            st.max_abs_v0
        ),
    ))
}

fn trig(rng: &mut ChaCha8Rng, mean: f64) -> String {
    let a = rng.random_range(0.15..0.35) * mean;
    let w = rng.random_range(0.8..2.5);
    let p = rng.random_range(0.0..6.0);
    let b = rng.random_range(0.05..0.15) * mean;
    let w2 = rng.random_range(2.5..4.0);
    format!("{mean} + {a}*sin({w}*s + {p}) + {b}*cos({w2}*s)")
}

fn slant_test_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_261_018);
    let t = tol();
    let mut failures = Vec::new();
    let mut worst_identity: f64 = 0.0;
    let mut slant = 0;
    for n in 0..20 {
        let mean1 = rng.random_range(1.5..3.0);
        let k1 = trig(&mut rng, mean1);
        let (k2, expect) = if n % 2 == 0 {
            let c = rng.random_range(0.4..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            (format!("{c}*({k1})"), Flag::Yes)
        } else {
            let mean2 = rng.random_range(1.0..2.5);
            (trig(&mut rng, mean2), Flag::No)
        };
        let spec = curvature_spec(&k1, &k2, (0.0, 3.0), 1500)?;
        let ff = ruled_apparatus(&spec).map_err(err)?;
        let ratio = q_slant_test(&ff, &t).map_err(err)?;
        let dq = det_q_test(&ff, &t).map_err(err)?;
        let da = det_a_test(&ff, &t).map_err(err)?;
        let ex = expansion_residual(&ff, &t).map_err(err)?;
        let states = [ratio.state, dq.state, da.state, ex.state];
        worst_identity = worst_identity.max(dq.identity_residual).max(da.identity_residual);
        if expect == Flag::Yes {
            slant += 1;
        }
        if states.iter().any(|s| *s != expect) || dq.identity_residual >= 1e-2 || da.identity_residual >= 1e-2 {
            failures.push(format!(
                "fixture {n}: states {:?} expected {expect:?}, identity residuals {:.2e}/{:.2e}",
                states, dq.identity_residual, da.identity_residual
            ));
        }
    }
    let mut detail = format!(
        "20 fixtures ({slant} slant), four tests agree on {}, worst identity residual = {worst_identity:.2e}",
        20 - failures.len()
    );
    for f in &failures {
        let _ = write!(detail, "; {f}");
    }
    Ok((failures.is_empty(), detail))
}

fn generator_round_trip() -> Outcome {
    let spec = curvature_spec("2", "1", (0.0, 3.0), 2000)?;
    let ff = ruled_apparatus(&spec).map_err(err)?;
    let e1 = ff.interior().map(|i| (ff.k1[i] - 2.0).abs()).fold(0.0, f64::max);
    let e2 = ff.interior().map(|i| (ff.k2[i] - 1.0).abs()).fold(0.0, f64::max);
    let q = q_slant_test(&ff, &tol()).map_err(err)?;
    let theta = q.theta.unwrap_or(f64::NAN);
    let drift = q.axis_drift.unwrap_or(f64::NAN);
    let theta_err = (theta - 2f64.atan()).abs();
    Ok((
        e1 < 1e-4 && e2 < 1e-4 && q.state == Flag::Yes && theta_err < 1e-4 && drift < 1e-3,
        format!(
            "max|k1 - 2| = {e1:.2e}, max|k2 - 1| = {e2:.2e}, q-slant = {}, |theta - atan 2| = {theta_err:.2e}, axis drift = {drift:.2e}",
            q.state.label()
        ),
    ))
}

fn unit_k1_fixture() -> Outcome {
    let ff = ruled_apparatus(&builtin("thm-4-2").map_err(err)?).map_err(err)?;
    let sigma = sigma_samples(&ff).map_err(err)?;
    let dev = sigma.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    let drift = unit_k1_axis_check(&ff, FRAC_PI_4, infer_branch(&ff)).map_err(err)?;
    let h = h_slant_test(&ff, &tol()).map_err(err)?;
    Ok((
        dev < 1e-3 && drift < 1e-3 && h.state == Flag::Yes,
        format!(
            "max|sigma - 1| = {dev:.2e}, max|du/ds| = {drift:.2e}, h-slant = {}",
            h.state.label()
        ),
    ))
}

fn bertrand_offsets() -> Outcome {
    let ff1 = ruled_apparatus(&builtin("example-6-2").map_err(err)?).map_err(err)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for (alpha, r) in [(0.3, 0.2), (-0.5, 1.0), (1.0, 0.0)] {
        let ff2 = ruled_apparatus(&bertrand_offset(&ff1, alpha, r).map_err(err)?).map_err(err)?;
        let h = h_slant_test(&ff2, &tol()).map_err(err)?;
        let residual = h.verdict.map(|v| v.residual).unwrap_or(f64::INFINITY);
        let align = bertrand_alignment(&ff1, &ff2).map_err(err)?;
        let ok = h.state == Flag::Yes && residual < 1e-2 && align > 1.0 - 1e-5;
        pass &= ok;
        parts.push(format!(
            "(alpha {alpha}, R {r}): h-slant = {}, residual = {residual:.2e}, min|<h2,h1>| = 1 - {:.2e}",
            h.state.label(),
            1.0 - align
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn mannheim_offset() -> Outcome {
    let ff1 = ruled_apparatus(&curvature_spec("2", "1", (0.0, 3.0), 2000)?).map_err(err)?;
    let axis = q_slant_test(&ff1, &tol())
        .map_err(err)?
        .axis
        .ok_or("first surface has no q-slant axis")?;
    let ff2 = ruled_apparatus(&mannheim_construct(&ff1, 1.0, 0.5).map_err(err)?).map_err(err)?;
    let verified = mannheim_verify(&ff1, &ff2, 1e-5).map_err(err)?;
    let align = ruledgeo::offsets::alignment(&ff1, &ff2, 2).map_err(err)?;
    let cosines: Vec<f64> = ff2.interior().map(|i| ff2.h[i].dot(&axis)).collect();
    let v = is_constant(&cosines, 1e-3).map_err(err)?;
    Ok((
        verified && v.residual < 1e-3,
        format!(
            "min|<a1,h2>| = 1 - {:.2e}, verify = {verified}, <h2,u_q> mean = {:.6} residual = {:.2e}",
            1.0 - align,
            v.mean,
            v.residual
        ),
    ))
}

fn flags(r: &ClassificationReport) -> [String; 6] {
    [
        r.developable.to_string(),
        r.cylindrical.to_string(),
        r.conoid.to_string(),
        r.q_slant.label().to_string(),
        r.h_slant.label().to_string(),
        r.a_slant.label().to_string(),
    ]
}

fn invariance() -> Outcome {
    let t = tol();
    let rot = *Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::new(1.0, -2.0, 0.5)), 0.83).matrix();
    let shift = Vector3::new(3.0, -1.0, 2.5);
    let mut pass = true;
    let mut parts = Vec::new();

    // analytic inputs are transformed symbolically; a transformed sample
    // table carries round-off proportional to the translation, which the
    // second differences behind k2 amplify to about 1e-9, so it is reported
    // but not gated
    let rigid_diff = |name: &str| -> Result<f64, String> {
        let spec = builtin(name).map_err(err)?;
        let ff = ruled_apparatus(&spec).map_err(err)?;
        let moved = ruled_apparatus(&spec.transformed(&rot, shift, 1.0).map_err(err)?).map_err(err)?;
        Ok(ff
            .interior()
            .map(|i| (ff.k1[i] - moved.k1[i]).abs().max((ff.k2[i] - moved.k2[i]).abs()))
            .fold(0.0, f64::max))
    };
    let mut rigid: f64 = 0.0;
    for name in ["example-6-1", "example-6-2", "helicoid", "helix-tangent-developable"] {
        rigid = rigid.max(rigid_diff(name)?);
    }
    let sampled = rigid_diff("thm-4-2")?;
    pass &= rigid < 1e-9;
    parts.push(format!(
        "rigid motion max|dk| = {rigid:.2e} on analytic inputs (sampled input: {sampled:.2e}, not gated)"
    ));

    let mut reparam_ok = true;
    for name in ["example-6-1", "example-6-2", "helicoid", "helix-tangent-developable"] {
        let spec = builtin(name).map_err(err)?;
        let a = classify(&spec, &t).map_err(err)?;
        let b = classify(&spec.reparametrized(2.5, 0.7).map_err(err)?, &t).map_err(err)?;
        if flags(&a) != flags(&b) {
            reparam_ok = false;
            parts.push(format!("{name}: flags {:?} vs {:?}", flags(&a), flags(&b)));
        }
    }
    pass &= reparam_ok;
    parts.push(format!("reparametrization flags identical = {reparam_ok}"));

    let mut ratio_err: f64 = 0.0;
    let mut scale_flags = true;
    for name in ["example-6-1", "example-6-2", "thm-4-2"] {
        let spec = builtin(name).map_err(err)?;
        let scaled = spec
            .transformed(&nalgebra::Matrix3::identity(), Vector3::zeros(), 10.0)
            .map_err(err)?;
        let (fa, fb) = (
            ruled_apparatus(&spec).map_err(err)?,
            ruled_apparatus(&scaled).map_err(err)?,
        );
        let k2max = fa.interior().map(|i| fa.k2[i].abs()).fold(0.0, f64::max);
        for i in fa.interior().filter(|&i| fa.k2[i].abs() > 0.1 * k2max) {
            let (ra, rb) = (fa.k1[i] / fa.k2[i], fb.k1[i] / fb.k2[i]);
            ratio_err = ratio_err.max((ra - rb).abs() / ra.abs().max(1.0));
        }
        let (a, b) = (classify(&spec, &t).map_err(err)?, classify(&scaled, &t).map_err(err)?);
        if flags(&a) != flags(&b) {
            scale_flags = false;
            parts.push(format!("{name} x10: flags {:?} vs {:?}", flags(&a), flags(&b)));
        }
    }
    pass &= ratio_err < 1e-6 && scale_flags;
    parts.push(format!(
        "scale x10: max k1/k2 change = {ratio_err:.2e}, flags unchanged = {scale_flags}"
    ));
    Ok((pass, parts.join("; ")))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ruledgeo"))
        .args(args)
        .output()
        .expect("run ruledgeo");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn degenerate_handling() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let cyl = dir.path().join("cylinder.json");
    std::fs::write(
        &cyl,
        r#"{"kind": "analytic", "param": "u", "base": ["cos(u)", "sin(u)", "0"],
            "director": ["0", "0", "1"], "range": [0, 6], "samples": 256}"#,
    )
    .map_err(err)?;
    let (code, _, stderr) = cli(&["classify", "--input", cyl.to_str().unwrap(), "--text"]);
    let cyl_ok = code == 2 && stderr.contains("cylindrical: striction curve undefined (Eq. 4)");

    let (hcode, text, _) = cli(&["classify", "--input", "builtin:helicoid", "--text"]);
    let conoid_ok = hcode == 0 && text.contains("q-slant: not applicable") && text.contains("conoid: yes");

    let out = dir.path().join("theta.json");
    let (tcode, _, terr) = cli(&[
        "generate",
        "--theta",
        "pi/2",
        "--range",
        "-0.5:0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    let theta_ok = tcode == 2 && terr.contains("pi/2") && !out.exists();

    Ok((
        cyl_ok && conoid_ok && theta_ok,
        format!(
            "cylinder exit {code} ({}), helicoid conoid + q-slant not applicable = {conoid_ok}, theta = pi/2 exit {tcode}",
            stderr.trim()
        ),
    ))
}

fn main() -> std::process::ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("curvature reproduction", curvature_reproduction),
        ("constant sigma", sigma_constant),
        ("developable q-slant example", developable_example),
        ("q-slant test equivalence", slant_test_equivalence),
        ("generator round trip", generator_round_trip),
        ("unit-k1 h-slant fixture", unit_k1_fixture),
        ("Bertrand offsets", bertrand_offsets),
        ("Mannheim offset", mannheim_offset),
        ("invariance", invariance),
        ("degenerate handling", degenerate_handling),
    ];
    let handles: Vec<_> = criteria
        .iter()
        .map(|&(name, f)| (name, std::thread::spawn(f)))
        .collect();
    let mut failed = Vec::new();
    for (n, (name, h)) in handles.into_iter().enumerate() {
        let outcome = h.join().unwrap_or_else(|_| Err("panicked".into()));
        let (pass, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "{} criterion {}: {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            n + 1
        );
        if !pass {
            failed.push(n + 1);
        }
    }
    if failed.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        eprintln!("failing criteria: {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
