use ruledgeo::offsets::{bertrand_alignment, mannheim_construct, mannheim_verify, OffsetKind, OffsetSpec};
use ruledgeo::slant::Flag;
use ruledgeo::surface::striction_curve;
use ruledgeo::workbench::{builtin, from_theta};
use ruledgeo::{classify, ruled_apparatus, Error, RuledSurfaceSpec, Tolerances};

#[test]
fn hyperboloid_striction_is_the_waist() {
    // one-sheeted hyperboloid x^2 + y^2 - z^2 = 1 as a ruled surface
    let spec = RuledSurfaceSpec::from_strings(
        "u",
        ["cos(u)", "sin(u)", "0"],
        ["-sin(u)", "cos(u)", "1"],
        (0.0, 6.0),
        256,
    )
    .unwrap();
    let sd = striction_curve(&spec).unwrap();
    assert!(!sd.developable);
    for (c, d) in sd.c.iter().zip(&sd.d) {
        assert!((c.norm() - 1.0).abs() < 1e-12 && c.z.abs() < 1e-12);
        assert!((d.abs() - 1.0).abs() < 1e-12);
    }
    let r = classify(&spec, &Tolerances::default()).unwrap();
    assert_eq!(r.q_slant, Flag::Yes);
    assert_eq!(r.h_slant, Flag::Yes);
}

#[test]
fn helix_tangent_developable_is_q_slant() {
    let r = classify(&builtin("helix-tangent-developable").unwrap(), &Tolerances::default()).unwrap();
    assert!(r.developable);
    assert_eq!(r.q_slant, Flag::Yes);
    assert!((r.theta_q.unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-6);
    assert_eq!(r.striction_line.unwrap().general_helix.holds(), Some(true));
}

#[test]
fn theta_surfaces_have_constant_sigma() {
    for theta in [0.4, 0.9, 1.3] {
        let t = f64::tan(theta);
        let spec = from_theta(theta, (-0.8 * t.min(1.5), 0.8 * t.min(1.5)), 800).unwrap();
        let r = classify(&spec, &Tolerances::default()).unwrap();
        assert_eq!(r.h_slant, Flag::Yes, "theta {theta}");
        assert!((r.sigma.mean().unwrap() - 1.0 / t).abs() < 1e-4, "theta {theta}");
    }
    assert!(matches!(
        from_theta(std::f64::consts::FRAC_PI_2, (-1.0, 1.0), 100),
        Err(Error::Domain(_))
    ));
}

#[test]
fn offsets_through_the_spec_type() {
    let ff1 = ruled_apparatus(&builtin("example-6-2").unwrap()).unwrap();
    let spec = OffsetSpec {
        kind: OffsetKind::Bertrand,
        alpha: 0.3,
        r: 0.2,
        beta0: 0.0,
    };
    let ff2 = ruled_apparatus(&spec.apply(&ff1).unwrap()).unwrap();
    assert!(bertrand_alignment(&ff1, &ff2).unwrap() > 1.0 - 1e-5);

    let base = ruled_apparatus(&builtin("const-k1-k2").unwrap()).unwrap();
    let m = ruled_apparatus(&mannheim_construct(&base, 0.4, 1.5).unwrap()).unwrap();
    assert!(mannheim_verify(&base, &m, 1e-5).unwrap());
}

#[test]
fn cylinder_is_a_geometric_error() {
    let spec = RuledSurfaceSpec::from_strings("u", ["u", "0", "0"], ["0", "1", "1"], (0.0, 1.0), 64).unwrap();
    let e = classify(&spec, &Tolerances::default()).unwrap_err();
    assert!(matches!(e, Error::Cylindrical { .. }));
    assert!(e.is_geometric());
    assert!(e.to_string().starts_with("cylindrical: striction curve undefined"));
}
