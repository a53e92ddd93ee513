//! Property tests: structural laws that must hold across whole parameter
//! families, not just at pinned sample points — jet arithmetic against
//! finite differences, quadrature additivity, stretch inversion, the
//! documented decision rules of the improper-integral classifier, and the
//! strong ⇒ weak balance implication.

use proptest::prelude::*;

use isolab::constellation::Constellation;
use isolab::model::WModel;
use isolab::parabolicity::euclidean_threshold;
use isolab::radial::quad::{classify_improper, integrate, ConvergenceVerdict, ImproperOpts, QuadOpts};
use isolab::radial::{Radial, RadialExpr};

/// A bounded ten-parameter expression family that exercises every node kind
/// the parser produces (sums, products, quotients, trig, hyperbolic, exp,
/// log, powers) while staying numerically tame on (0, 4].
fn family_text(c: &[f64; 8]) -> String {
    format!(
        "({}) + ({})*r + ({})*sin(({})*r) + ({})*cosh(({})*r) \
         + ({})*exp(0 - r) + ({})*log(1 + r) + r^2/(1 + r^2)",
        c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]
    )
}

fn family_coeffs() -> impl Strategy<Value = [f64; 8]> {
    [
        -3.0..3.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
        0.1..2.5f64,
        -1.5..1.5f64,
        0.1..1.4f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
    ]
}

proptest! {
    #[test]
    fn jets_match_finite_differences(c in family_coeffs(), r in 0.05..4.0f64) {
        let f = RadialExpr::parse(&family_text(&c)).unwrap();
        let jet = f.jet(r).unwrap();
        let h1 = 1e-5;
        let fd1 = (f.value(r + h1).unwrap() - f.value(r - h1).unwrap()) / (2.0 * h1);
        prop_assert!(
            (jet.d1 - fd1).abs() <= 1e-5 * (1.0 + jet.d1.abs() + jet.v.abs()),
            "d1 = {} vs central difference {} at r = {r}",
            jet.d1,
            fd1
        );
        let h2 = 1e-4;
        let fd2 = (f.value(r + h2).unwrap() - 2.0 * jet.v + f.value(r - h2).unwrap())
            / (h2 * h2);
        prop_assert!(
            (jet.d2 - fd2).abs() <= 1e-3 * (1.0 + jet.d2.abs() + jet.v.abs()),
            "d2 = {} vs central difference {} at r = {r}",
            jet.d2,
            fd2
        );
    }

    #[test]
    fn quadrature_is_additive(
        c in family_coeffs(),
        mut cuts in [0.05..8.0f64, 0.05..8.0f64, 0.05..8.0f64],
    ) {
        cuts.sort_by(f64::total_cmp);
        let [a, b, z] = cuts;
        let f = RadialExpr::parse(&family_text(&c)).unwrap();
        let opts = QuadOpts { abs_tol: 1e-11, rel_tol: 1e-11 };
        let i_ab = integrate(|t| f.value(t).unwrap(), a, b, opts).value;
        let i_bz = integrate(|t| f.value(t).unwrap(), b, z, opts).value;
        let i_az = integrate(|t| f.value(t).unwrap(), a, z, opts).value;
        prop_assert!(
            (i_ab + i_bz - i_az).abs() <= 1e-8 * (1.0 + i_az.abs()),
            "[{a}, {b}] + [{b}, {z}] = {} vs [{a}, {z}] = {}",
            i_ab + i_bz,
            i_az
        );
    }

    #[test]
    fn euclidean_threshold_increases_toward_one(
        r in 1.0001..1e6f64,
        factor in 1.001..10.0f64,
    ) {
        let lo = euclidean_threshold(r).unwrap();
        let hi = euclidean_threshold(r * factor).unwrap();
        prop_assert!(lo < hi, "threshold({r}) = {lo} ≥ threshold({}) = {hi}", r * factor);
        prop_assert!(hi < 1.0, "threshold must stay below its limit 1, got {hi}");
    }

    #[test]
    fn classifier_follows_its_decision_rules_on_power_laws(
        p in prop_oneof![0.2..0.98f64, 1.2..1.9f64, 2.05..3.0f64],
        k in 0.5..2.0f64,
    ) {
        // ∫₁^∞ k·t^(−p): increments between doubling horizons shrink by
        // exactly 2^(1−p), so each regime of the documented rules is hit:
        // growth (p < 1) ⇒ divergent, ratios in the undecided band
        // (0.5, 0.9) ⇒ inconclusive, geometric decay (ratio ≤ 1/2) ⇒
        // convergent with an accurate limit.
        let verdict = classify_improper(
            |t| k * t.powf(-p),
            1.0,
            ImproperOpts {
                initial_horizon: 16.0,
                doublings: 10,
                decay_ratio: 0.5,
                quad: QuadOpts { abs_tol: 1e-11, rel_tol: 1e-11 },
            },
        );
        if p < 1.0 {
            prop_assert!(verdict.is_divergent(), "p = {p}: {verdict:?}");
        } else if p < 2.0 {
            prop_assert!(
                matches!(verdict, ConvergenceVerdict::Inconclusive { .. }),
                "p = {p} sits in the undecided band: {verdict:?}"
            );
        } else {
            match verdict {
                ConvergenceVerdict::Convergent { limit_estimate, .. } => {
                    let want = k / (p - 1.0);
                    prop_assert!(
                        (limit_estimate - want).abs() <= 1e-3 * want,
                        "limit {limit_estimate} vs closed form {want} at p = {p}"
                    );
                }
                other => prop_assert!(false, "p = {p} must converge: {other:?}"),
            }
        }
    }
}

// Constellation builds cost a few milliseconds each; keep these case counts
// modest so the suite stays quick.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stretch_round_trips_across_profiles(
        b in -1.0..0.0f64,
        m in 2..5usize,
        a in 0.0..0.25f64,
    ) {
        let model = WModel::space_form(b, m).unwrap();
        let g = RadialExpr::parse(&format!("1/(1 + ({a})*r^2)")).unwrap();
        let c = Constellation::build(model, g, RadialExpr::constant(0.0), 5.0).unwrap();
        for k in 1..=10 {
            let r = 0.5 * k as f64;
            let back = c.unstretch(c.stretch(r));
            prop_assert!(
                (back - r).abs() <= 1e-7 * (1.0 + r),
                "round trip r = {r} → s = {} → {back}",
                c.stretch(r)
            );
        }
    }

    #[test]
    fn strong_balance_implies_weak_balance(
        b in -1.0..0.0f64,
        m in 2..5usize,
        lam in 0.0..1.0f64,
        mu in -0.4..0.4f64,
        a in 0.0..0.25f64,
    ) {
        // h interpolates toward the equality profile (margin ≡ 0) and is
        // perturbed by a bump that can push the derivative condition
        // negative. Wherever the pointwise condition w″ − w′h − wh′ ≥ 0 has
        // held from the origin outward, the integrated margin
        // m·q·(w′/w − h) − g must be nonnegative too — the quotient q chases
        // the pointwise quantity from the same starting value, whatever g is.
        let sb = (-b).sqrt();
        let model = WModel::space_form(b, m).unwrap();
        let g = RadialExpr::parse(&format!("1/(1 + ({a})*r^2)")).unwrap();
        let h = RadialExpr::parse(&format!(
            "({lam})*({sb})*tanh(({sb})*r/2) + ({mu})*r*exp(0 - r)"
        ))
        .unwrap();
        let c = Constellation::build(model, g, h, 5.0).unwrap();
        let report = c.balance_with(200, 1e-8).unwrap();
        for row in &report.rows {
            if row.strong_margin < -1e-8 {
                break;
            }
            prop_assert!(
                row.weak_margin >= -1e-6,
                "strong balance holds through r = {} yet the weak margin is {}",
                row.r,
                row.weak_margin
            );
        }
    }
}
