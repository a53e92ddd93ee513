//! Oracle tests for one-profile model spaces: closed forms for the constant
//! curvature profiles and low-dimensional sphere volumes.

use isolab::model::{space_form_warping, unit_sphere_volume, WModel};
use isolab::radial::Radial;

const PI: f64 = std::f64::consts::PI;

// High-precision reference constants.
const COTH_1: f64 = 1.313_035_285_499_331_3; // cosh(1)/sinh(1)
const TANH_HALF: f64 = 0.462_117_157_260_009_76; // tanh(1/2)

#[test]
fn eta_closed_forms() {
    // η = cot(r)·√b scaling: for b = 1 exactly cot(r)
    let sph = WModel::space_form(1.0, 2).unwrap();
    for &r in &[0.3, 1.0, 2.0] {
        let got = sph.eta(r).unwrap();
        let want = r.cos() / r.sin();
        assert!((got - want).abs() < 1e-12, "cot({r}): {got} vs {want}");
    }

    let flat = WModel::space_form(0.0, 5).unwrap();
    assert!((flat.eta(2.0).unwrap() - 0.5).abs() < 1e-14);

    let hyp = WModel::space_form(-1.0, 3).unwrap();
    assert!((hyp.eta(1.0).unwrap() - COTH_1).abs() < 1e-12);

    // scaled curvature: w = sinh(2r)/2 has η = 2·coth(2r)
    let scaled = WModel::space_form(-4.0, 2).unwrap();
    let want = 2.0 / (2.0_f64).tanh();
    assert!((scaled.eta(1.0).unwrap() - want).abs() < 1e-12);
}

#[test]
fn radial_curvature_recovers_b() {
    for &b in &[1.0, 0.5, 0.0, -1.0, -3.0] {
        let model = WModel::space_form(b, 3).unwrap();
        for &r in &[0.4, 1.1] {
            let k = model.radial_curvature(r).unwrap();
            assert!((k - b).abs() < 1e-9, "curvature at {r} for b={b}: {k}");
        }
    }
}

#[test]
fn quotient_closed_forms() {
    // flat: q(r) = r/m
    let flat2 = WModel::space_form(0.0, 2).unwrap();
    assert!((flat2.quotient(3.0).unwrap() - 1.5).abs() < 1e-12);
    let flat3 = WModel::space_form(0.0, 3).unwrap();
    assert!((flat3.quotient(3.0).unwrap() - 1.0).abs() < 1e-12);

    // hyperbolic plane: q(r) = (cosh r − 1)/sinh r = tanh(r/2)
    let hyp2 = WModel::space_form(-1.0, 2).unwrap();
    assert!(
        (hyp2.quotient(1.0).unwrap() - TANH_HALF).abs() < 1e-12,
        "q(1) = {}",
        hyp2.quotient(1.0).unwrap()
    );

    // hyperbolic 3-space: q(r) = (sinh r cosh r − r)/(2 sinh² r)
    let hyp3 = WModel::space_form(-1.0, 3).unwrap();
    let r = 1.0_f64;
    let want = (r.sinh() * r.cosh() - r) / (2.0 * r.sinh() * r.sinh());
    assert!((hyp3.quotient(r).unwrap() - want).abs() < 1e-12);

    // round sphere: q(r) = (1 − cos r)/sin r = tan(r/2)
    let sph2 = WModel::space_form(1.0, 2).unwrap();
    let got = sph2.quotient(1.0).unwrap();
    assert!((got - (0.5_f64).tan()).abs() < 1e-12, "q(1) on the sphere = {got}");

    // small-radius behaviour: q(r) → r/m
    for m in 2..=4 {
        let model = WModel::space_form(-1.0, m).unwrap();
        let q = model.quotient(1e-4).unwrap();
        assert!(
            (q - 1e-4 / m as f64).abs() < 1e-11,
            "q(1e-4) in dim {m}: {q}"
        );
    }
}

#[test]
fn volumes_match_euclidean_closed_forms() {
    let flat3 = WModel::space_form(0.0, 3).unwrap();
    let r = 1.7;
    assert!((flat3.ball_volume(r).unwrap() - 4.0 * PI * r * r * r / 3.0).abs() < 1e-10);
    assert!((flat3.sphere_volume(r).unwrap() - 4.0 * PI * r * r).abs() < 1e-12);

    let flat2 = WModel::space_form(0.0, 2).unwrap();
    assert!((flat2.ball_volume(r).unwrap() - PI * r * r).abs() < 1e-12);
    assert!((flat2.sphere_volume(r).unwrap() - 2.0 * PI * r).abs() < 1e-12);

    // hyperbolic plane: area of ball = 2π(cosh r − 1)
    let hyp2 = WModel::space_form(-1.0, 2).unwrap();
    let want = 2.0 * PI * ((1.0_f64).cosh() - 1.0);
    assert!((hyp2.ball_volume(1.0).unwrap() - want).abs() < 1e-10);
}

#[test]
fn unit_sphere_volume_table() {
    // S¹, S², S³, S⁴, S⁵, S⁶
    let want = [
        2.0 * PI,
        4.0 * PI,
        2.0 * PI * PI,
        8.0 * PI * PI / 3.0,
        PI * PI * PI,
        16.0 * PI * PI * PI / 15.0,
    ];
    for (m, &v) in (2..=7).zip(want.iter()) {
        let got = unit_sphere_volume(m);
        assert!((got - v).abs() < 1e-12 * v, "V₀ in dim {m}: {got} vs {v}");
    }
}

#[test]
fn positive_curvature_domain_is_clamped() {
    let sph = WModel::space_form(1.0, 2).unwrap();
    assert!(sph.max_radius() < PI);
    assert!(PI - sph.max_radius() < 1e-6);
    // w stays positive right up to the clamp
    assert!(sph.w_value(sph.max_radius()).unwrap() > 0.0);

    let sph4 = WModel::space_form(4.0, 2).unwrap();
    assert!((sph4.max_radius() - PI / 2.0).abs() < 1e-6);
}

#[test]
fn warping_text_round_trips() {
    let w = space_form_warping(-2.0);
    let j = w.jet(1.3).unwrap();
    let s = 2.0_f64.sqrt();
    assert!((j.v - (s * 1.3).sinh() / s).abs() < 1e-13);
    assert!((j.d1 - (s * 1.3).cosh()).abs() < 1e-13);
}
