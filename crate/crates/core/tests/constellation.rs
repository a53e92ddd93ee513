//! Oracle tests for comparison constellations: closed-form profiles,
//! quotient identities, the stretch coordinate, and balance margins.
//!
//! Each expected value comes from an independent derivation (closed form or
//! a direct quadrature along a different route than the implementation).

use isolab::constellation::Constellation;
use isolab::model::WModel;
use isolab::radial::quad::integral;
use isolab::radial::{Radial, RadialExpr};

fn expr(s: &str) -> RadialExpr {
    RadialExpr::parse(s).unwrap()
}

/// w = sinh, h = tanh(r/2), g ≡ 1, m = 2: the hyperbolic equality case.
/// Closed forms: Λ(r) = 4·tanh²(r/2)/sinh(r), q(r) = sinh(r)/2.
fn hyperbolic_equality(radius: f64) -> Constellation {
    let model = WModel::space_form(-1.0, 2).unwrap();
    Constellation::build(model, RadialExpr::constant(1.0), expr("tanh(r/2)"), radius).unwrap()
}

#[test]
fn hyperbolic_equality_profile_closed_form() {
    let c = hyperbolic_equality(6.0);
    for &r in &[0.2, 1.0, 2.7, 5.5] {
        let lam = c.lambda(r).unwrap();
        let want = 4.0 * (r / 2.0_f64).tanh().powi(2) / r.sinh();
        assert!(
            (lam - want).abs() < 1e-9 * want,
            "Λ({r}) = {lam}, closed form {want}"
        );
        // normalization: w·g·Λ = 4 tanh²(r/2), so T = 4 tanh²(1/2) at anchor 1
        let t = c.normalization();
        let t_want = 4.0 * (0.5_f64).tanh().powi(2);
        assert!((t - t_want).abs() < 1e-9, "T = {t}");
    }
}

#[test]
fn equality_cases_have_quotient_wg_over_m() {
    // Equality in the balance condition (w' − h·w ≡ 1) forces q = w·g/m,
    // whatever the stretching profile is.
    let c = hyperbolic_equality(6.0);
    for &r in &[0.05, 0.4, 1.3, 2.9, 5.0] {
        let q = c.quotient(r).unwrap();
        let want = r.sinh() / 2.0;
        assert!(
            (q - want).abs() < 1e-7 * want.max(1.0),
            "q({r}) = {q}, want sinh/2 = {want}"
        );
    }

    // Flat warping with a genuinely varying g: w = r, h = 0, g = 1/(1+r²/4).
    let model = WModel::space_form(0.0, 2).unwrap();
    let c = Constellation::build(
        model,
        expr("1/(1+r^2/4)"),
        RadialExpr::constant(0.0),
        3.0,
    )
    .unwrap();
    for &r in &[0.1, 0.9, 2.0, 3.0] {
        let q = c.quotient(r).unwrap();
        let want = r / (2.0 * (1.0 + r * r / 4.0));
        assert!(
            (q - want).abs() < 1e-8 * want.max(1.0),
            "q({r}) = {q}, want r·g/2 = {want}"
        );
    }
}

#[test]
fn stretch_has_closed_form_and_inverts() {
    // g = 1/(1+r²): s(r) = r + r³/3.
    let model = WModel::space_form(0.0, 2).unwrap();
    let c = Constellation::build(model, expr("1/(1+r^2)"), RadialExpr::constant(0.0), 2.0).unwrap();
    for &r in &[0.3, 1.0, 1.7, 2.0] {
        let s = c.stretch(r);
        let want = r + r * r * r / 3.0;
        assert!((s - want).abs() < 1e-10, "s({r}) = {s}, want {want}");
        let back = c.unstretch(s);
        assert!((back - r).abs() < 1e-10, "r(s({r})) = {back}");
    }
    assert_eq!(c.unstretch(0.0), 0.0);
    assert_eq!(c.unstretch(c.max_stretch() + 1.0), 2.0);
}

#[test]
fn quotient_agrees_with_independent_s_route() {
    // q(r) is computed from the r-side tables; recompute it from scratch in
    // the stretched coordinate: ∫₀^{s(r)} W^{m−1} dσ / W^{m−1}(s(r)).
    let model = WModel::space_form(-1.0, 2).unwrap();
    let c = Constellation::build(model, expr("1/(1+r^2/9)"), expr("tanh(r/2)"), 3.0).unwrap();
    for &r in &[0.5, 1.5, 2.8] {
        let s = c.stretch(r);
        let num = integral(|sigma| c.effective_warping(sigma).unwrap(), 0.0, s);
        let den = c.effective_warping(s).unwrap();
        let via_s = num / den;
        let via_r = c.quotient(r).unwrap();
        assert!(
            (via_s - via_r).abs() < 1e-8 * via_r.max(1.0),
            "q({r}): s-route {via_s}, r-route {via_r}"
        );
    }
}

#[test]
fn profile_ode_dual_route() {
    // d/dr (w g Λ) = m (Λ/g)(w' − h w): check the tabulated profile against
    // the right-hand side by central differences.
    let model = WModel::space_form(-1.0, 3).unwrap();
    let c = Constellation::build(model, expr("1/(1+r^2/16)"), expr("tanh(r)/2"), 4.0).unwrap();
    let m = 3.0;
    let dr = 1e-5;
    for &r in &[0.4, 1.2, 2.5, 3.7] {
        let fd = (c.lambda_wg(r + dr).unwrap() - c.lambda_wg(r - dr).unwrap()) / (2.0 * dr);
        let wj = c.model().w_jet(r).unwrap();
        let gv = c.stretching_profile().value(r).unwrap();
        let hv = c.mean_curvature_profile().value(r).unwrap();
        let rhs = m * (c.lambda(r).unwrap() / gv) * (wj.d1 - hv * wj.v);
        assert!(
            (fd - rhs).abs() < 1e-5 * rhs.abs().max(1.0),
            "at {r}: finite-difference {fd}, right-hand side {rhs}"
        );
    }
}

#[test]
fn anchor_choice_does_not_move_the_profile() {
    // anchor = min(1, R/2) differs between these two builds; Λ must not.
    let a = hyperbolic_equality(1.5); // anchor 0.75
    let b = hyperbolic_equality(6.0); // anchor 1
    assert!((a.anchor() - 0.75).abs() < 1e-12);
    assert!((b.anchor() - 1.0).abs() < 1e-12);
    for &r in &[0.1, 0.6, 1.1, 1.45] {
        let la = a.lambda(r).unwrap();
        let lb = b.lambda(r).unwrap();
        assert!(
            (la - lb).abs() < 1e-7 * la.max(1e-3),
            "Λ({r}): {la} vs {lb} under different anchors"
        );
    }
}

#[test]
fn positive_curvature_warping_is_never_balanced() {
    // w = sin, g ≡ 1, h ≡ 0, m = 2: weak margin is −tan²(r/2) < 0 for all
    // r > 0, so the report flags the very first grid radius.
    let model = WModel::space_form(1.0, 2).unwrap();
    let c = Constellation::reduced(model, 3.0).unwrap();
    let report = c.balance().unwrap();
    assert!(!report.is_balanced());
    let first = report.first_weak_violation.unwrap();
    assert!(
        (first - 3e-3).abs() < 1e-12,
        "first violation at {first}, expected the first grid point"
    );
    for row in report.rows.iter().step_by(17) {
        let want = -(row.r / 2.0).tan().powi(2);
        assert!(
            (row.weak_margin - want).abs() < 1e-6 * want.abs().max(1e-3),
            "margin({}) = {}, want −tan² = {}",
            row.r,
            row.weak_margin,
            want
        );
    }
    // strong margin = w'' = −sin r < 0 as well
    assert!(!report.is_strongly_balanced());
}

#[test]
fn equality_cases_balance_with_zero_margin() {
    let c = hyperbolic_equality(6.0);
    let report = c.balance().unwrap();
    assert!(report.is_balanced(), "weak violation at {:?}", report.first_weak_violation);
    assert!(
        report.is_strongly_balanced(),
        "strong violation at {:?}",
        report.first_strong_violation
    );
    for row in report.rows.iter().step_by(31) {
        assert!(
            row.weak_margin.abs() < 1e-7,
            "weak margin at {} = {}",
            row.r,
            row.weak_margin
        );
        assert!(
            row.strong_margin.abs() < 1e-9,
            "strong margin at {} = {}",
            row.r,
            row.strong_margin
        );
    }
}

#[test]
fn zeta_extrapolation_matches_closed_form_below_handoff() {
    let c = hyperbolic_equality(6.0);
    // ζ = 2(coth r − 1/r − tanh(r/2)) → 0 at the origin for this pair
    let at_zero = c.zeta(0.0).unwrap();
    assert!(at_zero.abs() < 1e-10, "ζ(0) = {at_zero}");
    // Below 1e-4 the implementation extrapolates; the closed form is still
    // computable directly in f64 there with ~7 significant digits.
    for &r in &[2e-5_f64, 5e-5, 9.9e-5] {
        let got = c.zeta(r).unwrap();
        let closed = 2.0 * (1.0 / r.tanh() - 1.0 / r - (r / 2.0).tanh());
        assert!(
            (got - closed).abs() < 1e-10,
            "ζ({r}) = {got}, closed form {closed}"
        );
    }
}
