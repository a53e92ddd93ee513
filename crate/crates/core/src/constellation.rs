//! Three-profile comparison spaces.
//!
//! A constellation pairs a warping model `(w, m)` with a stretching profile
//! `g` (radial metric factor, `g(0) = 1`, `0 < g ≤ 1` unless explicitly
//! allowed to exceed 1) and a mean-curvature profile `h`. Together they
//! determine an effective rotationally symmetric space whose area profile
//! `Λ(r)` solves
//!
//! ```text
//! (log (w g Λ))'(r) = X(r) = (m / g²)(w'/w − h),      (w g Λ)(r) ~ rᵐ at 0.
//! ```
//!
//! Writing `X(r) = m/r + ζ(r)` with `ζ` bounded at the origin and
//! `C(r) = ∫₀^r ζ`, the profile in closed form is
//!
//! ```text
//! Λ(r) = rᵐ · exp(C(r)) / (w(r) g(r)),
//! ```
//!
//! normalized so the effective warping `W(s) = Λ^{1/(m−1)}` has unit slope
//! in the stretched arclength `s(r) = ∫₀^r dt/g`. With `g ≡ 1`, `h ≡ 0`
//! everything collapses to the underlying model: `Λ = w^{m−1}`, `s = r`.
//!
//! Building a constellation tabulates `C`, `s` and `∫₀^r Λ/g` on a
//! Chebyshev-spaced grid once; every later query is a table lookup plus a
//! couple of profile evaluations.
//!
//! The *balance* inequalities decide whether the comparison machinery is
//! applicable on a given interval. This module reports both margins:
//!
//! * weak:   `m·q(r)·(w'/w − h) − g ≥ 0` where `q` is the quotient
//!   `∫₀^r Λ/g / Λ(r)`,
//! * strong: `w'' − w'·h − w·h' ≥ 0`,
//!
//! with strong ⇒ weak for admissible profiles, and equality exactly when
//! `w' − h·w ≡ 1`.

use std::sync::Arc;

use crate::model::{DynRadial, WModel};
use crate::radial::interp::CubicHermite;
use crate::radial::quad::{cumulative, invert_monotone, QuadOpts};
use crate::radial::{EvalError, Radial, RadialExpr};

/// Below this radius `ζ` is evaluated by quadratic extrapolation instead of
/// the direct formula, which loses digits to the `m/r` cancellation.
const ZETA_DIRECT_MIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Number of table intervals (Chebyshev-extrema spacing on [0, R]).
    pub nodes: usize,
    /// Permit `g > 1`. The comparison statements this crate computes are
    /// proved for `g ≤ 1`; lifting the cap is for exploratory use.
    pub allow_supercritical: bool,
    pub quad: QuadOpts,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            nodes: 2048,
            allow_supercritical: false,
            quad: QuadOpts::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConstellationError {
    #[error("radius must lie in [1e-3, {max}] (model domain), got {radius}")]
    BadRadius { radius: f64, max: f64 },
    #[error("stretching profile must equal 1 at the origin, extrapolated g(0) = {value}")]
    StretchingNotUnit { value: f64 },
    #[error(
        "stretching profile out of range at r = {at}: g = {value} \
         (expected 0 < g ≤ 1; set allow_supercritical to lift the upper bound)"
    )]
    StretchingOutOfRange { at: f64, value: f64 },
    /// `Λ/g` (or another tabulated quantity) left `f64` range inside the
    /// build interval. Plain tables cannot represent such profiles; shrink
    /// the radius or use the log-scaled long-horizon machinery.
    #[error("profile quantity overflows f64 range at r = {at} (value {value})")]
    ProfileOverflow { at: f64, value: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A built comparison space: profiles plus the tabulated transforms.
pub struct Constellation {
    model: WModel,
    g: DynRadial,
    h: DynRadial,
    radius: f64,
    anchor: f64,
    normalization: f64,
    /// First positive table node; below it the quotient switches to its
    /// limiting form s/m.
    r_guard: f64,
    c_tab: CubicHermite,
    s_tab: CubicHermite,
    ilg_tab: CubicHermite,
    zeta_samples: [(f64, f64); 3],
}

impl Constellation {
    /// Build with default options. `radius` fixes the tabulated interval
    /// `[0, radius]`; queries beyond it are out of contract.
    pub fn build<G, H>(
        model: WModel,
        g: G,
        h: H,
        radius: f64,
    ) -> Result<Constellation, ConstellationError>
    where
        G: Radial + Send + Sync + 'static,
        H: Radial + Send + Sync + 'static,
    {
        Constellation::build_with(model, g, h, radius, BuildOptions::default())
    }

    /// The reduction `g ≡ 1`, `h ≡ 0`: the constellation that reproduces the
    /// underlying model itself.
    pub fn reduced(model: WModel, radius: f64) -> Result<Constellation, ConstellationError> {
        Constellation::build(
            model,
            RadialExpr::constant(1.0),
            RadialExpr::constant(0.0),
            radius,
        )
    }

    pub fn build_with<G, H>(
        model: WModel,
        g: G,
        h: H,
        radius: f64,
        options: BuildOptions,
    ) -> Result<Constellation, ConstellationError>
    where
        G: Radial + Send + Sync + 'static,
        H: Radial + Send + Sync + 'static,
    {
        let g: DynRadial = Arc::new(g);
        let h: DynRadial = Arc::new(h);
        if !(radius >= 1e-3) || radius > model.max_radius() {
            return Err(ConstellationError::BadRadius {
                radius,
                max: model.max_radius(),
            });
        }

        // g(0) = 1, extrapolated from just off the origin.
        let jg = g.jet(1e-5)?;
        let g0 = jg.v - 1e-5 * jg.d1;
        if (g0 - 1.0).abs() > 1e-6 {
            return Err(ConstellationError::StretchingNotUnit { value: g0 });
        }
        // Range check for g (and finiteness for h, via `?`) on a log grid.
        for k in 0..64 {
            let r = 1e-6 * radius * (1e6_f64).powf(k as f64 / 63.0);
            let gv = g.value(r)?;
            if gv <= 0.0 || (!options.allow_supercritical && gv > 1.0 + 1e-9) {
                return Err(ConstellationError::StretchingOutOfRange { at: r, value: gv });
            }
            h.value(r)?;
        }

        let m = model.dimension() as f64;
        let zeta_direct = |t: f64| -> Result<f64, EvalError> {
            let eta = model.eta(t)?;
            let gv = g.value(t)?;
            let hv = h.value(t)?;
            Ok(m * (eta - hv) / (gv * gv) - m / t)
        };
        let zeta_samples = [
            (1.0, zeta_direct(ZETA_DIRECT_MIN)?),
            (2.0, zeta_direct(2.0 * ZETA_DIRECT_MIN)?),
            (4.0, zeta_direct(4.0 * ZETA_DIRECT_MIN)?),
        ]
        .map(|(f, z)| (f * ZETA_DIRECT_MIN, z));

        // The first evaluation failure inside a `cumulative` pass is recorded
        // and rethrown after the pass. Once poisoned, the closures return a
        // benign 0 so the remaining quadrature finishes cheaply: refining
        // panels full of infinities would otherwise drive the adaptive rule
        // through millions of pointless evaluations before the error
        // surfaces.
        let failed = std::cell::Cell::new(false);
        let first_err: std::cell::Cell<Option<ConstellationError>> = std::cell::Cell::new(None);
        let record = |e: ConstellationError| {
            if !failed.replace(true) {
                first_err.set(Some(e));
            }
        };
        let zeta = |t: f64| -> f64 {
            if failed.get() {
                return 0.0;
            }
            if t < ZETA_DIRECT_MIN {
                return lagrange3(&zeta_samples, t);
            }
            match zeta_direct(t) {
                Ok(v) if v.is_finite() => v,
                Ok(v) => {
                    record(ConstellationError::ProfileOverflow { at: t, value: v });
                    0.0
                }
                Err(e) => {
                    record(e.into());
                    0.0
                }
            }
        };

        // Chebyshev-extrema nodes on [0, R]: dense at both the origin (where
        // everything has its coordinate singularity) and the outer radius
        // (where positively curved warpings close up).
        let n = options.nodes.max(32);
        let mut nodes: Vec<f64> = (0..=n)
            .map(|j| radius / 2.0 * (1.0 - (std::f64::consts::PI * j as f64 / n as f64).cos()))
            .collect();
        nodes[0] = 0.0;
        nodes[n] = radius;

        let c_vals = cumulative(zeta, &nodes, options.quad);
        if let Some(e) = first_err.take() {
            return Err(e);
        }
        let c_slopes: Vec<f64> = nodes.iter().map(|&r| zeta(r)).collect();
        if let Some(e) = first_err.take() {
            return Err(e);
        }
        let c_tab = CubicHermite::new(nodes.clone(), c_vals, c_slopes);

        let inv_g = |t: f64| -> f64 {
            if failed.get() {
                return 0.0;
            }
            if t == 0.0 {
                return 1.0; // g(0) = 1 by validation
            }
            match g.value(t) {
                Ok(v) if (1.0 / v).is_finite() => 1.0 / v,
                Ok(v) => {
                    record(ConstellationError::ProfileOverflow {
                        at: t,
                        value: 1.0 / v,
                    });
                    0.0
                }
                Err(e) => {
                    record(e.into());
                    0.0
                }
            }
        };
        let s_vals = cumulative(inv_g, &nodes, options.quad);
        if let Some(e) = first_err.take() {
            return Err(e);
        }
        let s_slopes: Vec<f64> = nodes.iter().map(|&r| inv_g(r)).collect();
        if let Some(e) = first_err.take() {
            return Err(e);
        }
        let s_tab = CubicHermite::new(nodes.clone(), s_vals, s_slopes);

        let mi = model.dimension() as i32;
        let lambda_at = |t: f64| -> Result<f64, EvalError> {
            if t == 0.0 {
                return Ok(0.0);
            }
            let w = model.w_value(t)?;
            let gv = g.value(t)?;
            Ok(t.powi(mi) * c_tab.eval(t).exp() / (w * gv))
        };
        let lambda_over_g = |t: f64| -> f64 {
            if failed.get() {
                return 0.0;
            }
            let v = lambda_at(t).and_then(|l| g.value(t).map(|gv| l / gv));
            match v {
                Ok(v) if v.is_finite() => v,
                // Λ/g outgrows f64 range long before the log-scaled
                // machinery would struggle: refuse the build instead of
                // integrating infinities into the table.
                Ok(v) => {
                    record(ConstellationError::ProfileOverflow { at: t, value: v });
                    0.0
                }
                Err(e) => {
                    record(e.into());
                    0.0
                }
            }
        };
        let ilg_vals = cumulative(&lambda_over_g, &nodes, options.quad);
        if let Some(e) = first_err.take() {
            return Err(e);
        }
        let ilg_slopes: Vec<f64> = nodes.iter().map(|&r| if r == 0.0 { 0.0 } else { lambda_over_g(r) }).collect();
        if let Some(e) = first_err.take() {
            return Err(e);
        }
        let ilg_tab = CubicHermite::new(nodes.clone(), ilg_vals, ilg_slopes);

        let anchor = 1.0_f64.min(radius / 2.0);
        let normalization = anchor.powi(mi) * c_tab.eval(anchor).exp();

        Ok(Constellation {
            model,
            g,
            h,
            radius,
            anchor,
            normalization,
            r_guard: nodes[1],
            c_tab,
            s_tab,
            ilg_tab,
            zeta_samples,
        })
    }

    pub fn dimension(&self) -> usize {
        self.model.dimension()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn model(&self) -> &WModel {
        &self.model
    }

    pub fn stretching_profile(&self) -> &DynRadial {
        &self.g
    }

    pub fn mean_curvature_profile(&self) -> &DynRadial {
        &self.h
    }

    /// Anchor radius used for the reported normalization constant.
    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// The normalization `T = anchorᵐ · exp(C(anchor))`, i.e. the value of
    /// `w·g·Λ` at the anchor. The profile `Λ` itself does not depend on the
    /// anchor choice — `T` compensates exactly.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Area profile `Λ(r) = rᵐ e^{C(r)} / (w g)`; equals `w^{m−1}` in the
    /// reduced case and `W(s(r))^{m−1}` in general.
    pub fn lambda(&self, r: f64) -> Result<f64, EvalError> {
        if r == 0.0 {
            return Ok(0.0);
        }
        let w = self.model.w_value(r)?;
        let gv = self.g.value(r)?;
        let v = r.powi(self.model.dimension() as i32) * self.c_tab.eval(r).exp() / (w * gv);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { at: r })
        }
    }

    /// The undivided profile `(w g Λ)(r) = rᵐ e^{C(r)}`, the quantity whose
    /// logarithmic derivative is `X = (m/g²)(w'/w − h)`.
    pub fn lambda_wg(&self, r: f64) -> Result<f64, EvalError> {
        if r == 0.0 {
            return Ok(0.0);
        }
        let v = r.powi(self.model.dimension() as i32) * self.c_tab.eval(r).exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { at: r })
        }
    }

    /// `ζ(r) = X(r) − m/r`, the bounded part of the log-derivative of `wgΛ`.
    pub fn zeta(&self, r: f64) -> Result<f64, EvalError> {
        if r < ZETA_DIRECT_MIN {
            return Ok(lagrange3(&self.zeta_samples, r));
        }
        let m = self.model.dimension() as f64;
        let eta = self.model.eta(r)?;
        let gv = self.g.value(r)?;
        let hv = self.h.value(r)?;
        Ok(m * (eta - hv) / (gv * gv) - m / r)
    }

    /// Stretched arclength `s(r) = ∫₀^r dt/g(t)`.
    pub fn stretch(&self, r: f64) -> f64 {
        self.s_tab.eval(r)
    }

    /// Total stretched length of the tabulated interval, `s(R)`.
    pub fn max_stretch(&self) -> f64 {
        self.s_tab.eval(self.radius)
    }

    /// Inverse of [`Constellation::stretch`]; clamps to `[0, R]` at the ends.
    pub fn unstretch(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= self.max_stretch() {
            return self.radius;
        }
        invert_monotone(|r| self.s_tab.eval(r), s, 0.0, self.radius)
            .expect("stretch is monotone, target within range")
    }

    /// Effective warping `W(s) = Λ(r(s))^{1/(m−1)}`: the profile of the
    /// comparison space in its own arclength coordinate, with `W(0) = 0`,
    /// `W'(0) = 1`.
    pub fn effective_warping(&self, s: f64) -> Result<f64, EvalError> {
        let r = self.unstretch(s);
        let lam = self.lambda(r)?;
        Ok(lam.powf(1.0 / (self.model.dimension() as f64 - 1.0)))
    }

    /// Cumulative profile `∫₀^r Λ(t)/g(t) dt`; equals `∫₀^{s(r)} W^{m−1}`.
    pub fn integrated_lambda(&self, r: f64) -> f64 {
        self.ilg_tab.eval(r).max(0.0)
    }

    /// The isoperimetric quotient `q(r) = ∫₀^r Λ/g ÷ Λ(r)` of the effective
    /// space, i.e. ball volume over sphere volume at stretched radius
    /// `s(r)`. Tends to `s(r)/m` at the origin.
    pub fn quotient(&self, r: f64) -> Result<f64, EvalError> {
        if r <= self.r_guard {
            return Ok(self.s_tab.eval(r.max(0.0)) / self.model.dimension() as f64);
        }
        let lam = self.lambda(r)?;
        Ok(self.integrated_lambda(r) / lam)
    }

    /// Logarithmic derivative of the warping, `η(r) = w'(r)/w(r)`.
    pub fn eta(&self, r: f64) -> Result<f64, EvalError> {
        self.model.eta(r)
    }

    /// Balance margins on a default grid (256 log-spaced radii spanning
    /// `[10⁻³·R, R]`, tolerance 1e-8).
    pub fn balance(&self) -> Result<BalanceReport, EvalError> {
        self.balance_with(256, 1e-8)
    }

    /// Balance margins at `grid_points` log-spaced radii.
    ///
    /// A margin below `−tol` counts as a violation; the tolerance absorbs
    /// table interpolation error in the exactly-balanced cases.
    pub fn balance_with(&self, grid_points: usize, tol: f64) -> Result<BalanceReport, EvalError> {
        let m = self.model.dimension() as f64;
        let lo = 1e-3 * self.radius;
        let hi = self.radius;
        let n = grid_points.max(2);
        let mut rows = Vec::with_capacity(n);
        let mut first_weak = None;
        let mut first_strong = None;
        for k in 0..n {
            let r = lo * (hi / lo).powf(k as f64 / (n - 1) as f64);
            let q = self.quotient(r)?;
            let eta = self.model.eta(r)?;
            let gv = self.g.value(r)?;
            let hj = self.h.jet(r)?;
            let wj = self.model.w_jet(r)?;
            let weak = m * q * (eta - hj.v) - gv;
            let strong = wj.d2 - wj.d1 * hj.v - wj.v * hj.d1;
            if weak < -tol && first_weak.is_none() {
                first_weak = Some(r);
            }
            if strong < -tol && first_strong.is_none() {
                first_strong = Some(r);
            }
            rows.push(BalanceRow {
                r,
                weak_margin: weak,
                strong_margin: strong,
            });
        }
        Ok(BalanceReport {
            rows,
            tol,
            first_weak_violation: first_weak,
            first_strong_violation: first_strong,
        })
    }
}

/// One grid row of balance margins.
#[derive(Debug, Clone, Copy)]
pub struct BalanceRow {
    pub r: f64,
    /// `m·q·(w'/w − h) − g`; nonnegative ⟺ the comparison space is balanced
    /// at this radius.
    pub weak_margin: f64,
    /// `w'' − w'h − wh'`; nonnegative is the stronger pointwise condition.
    pub strong_margin: f64,
}

/// Balance margins over a radial grid, with the first violations flagged.
#[derive(Debug, Clone)]
pub struct BalanceReport {
    pub rows: Vec<BalanceRow>,
    pub tol: f64,
    pub first_weak_violation: Option<f64>,
    pub first_strong_violation: Option<f64>,
}

impl BalanceReport {
    pub fn is_balanced(&self) -> bool {
        self.first_weak_violation.is_none()
    }

    pub fn is_strongly_balanced(&self) -> bool {
        self.first_strong_violation.is_none()
    }
}

/// Quadratic Lagrange extrapolation through three samples.
fn lagrange3(samples: &[(f64, f64); 3], t: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        let (ti, zi) = samples[i];
        let mut li = 1.0;
        for (j, &(tj, _)) in samples.iter().enumerate() {
            if j != i {
                li *= (t - tj) / (ti - tj);
            }
        }
        acc += zi * li;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WModel;

    #[test]
    fn identity_space_has_linear_profile() {
        // w = r, g = 1, h = 0, m = 2: Λ(r) = r and T = anchor².
        let model = WModel::space_form(0.0, 2).unwrap();
        let c = Constellation::reduced(model, 4.0).unwrap();
        assert_eq!(c.anchor(), 1.0);
        assert!((c.normalization() - 1.0).abs() < 1e-10, "T = {}", c.normalization());
        for &r in &[0.1, 1.0, 2.5, 4.0] {
            let lam = c.lambda(r).unwrap();
            assert!((lam - r).abs() < 1e-9 * r.max(1.0), "Λ({r}) = {lam}");
            assert!((c.stretch(r) - r).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_case_recovers_warping_power() {
        let model = WModel::space_form(-1.0, 3).unwrap();
        let c = Constellation::reduced(model, 5.0).unwrap();
        for &r in &[0.05, 0.7, 2.0, 4.9] {
            let lam = c.lambda(r).unwrap();
            let want = r.sinh() * r.sinh();
            assert!(
                (lam - want).abs() < 1e-8 * want,
                "Λ({r}) = {lam}, want sinh² = {want}"
            );
        }
    }

    #[test]
    fn rejects_supercritical_stretching_by_default() {
        let model = WModel::space_form(0.0, 2).unwrap();
        let g = RadialExpr::parse("1 + r^2").unwrap();
        let h = RadialExpr::constant(0.0);
        match Constellation::build(model.clone(), g.clone(), h.clone(), 2.0) {
            Err(ConstellationError::StretchingOutOfRange { .. }) => {}
            other => panic!("expected range rejection, got {:?}", other.err()),
        }
        let opts = BuildOptions {
            allow_supercritical: true,
            ..BuildOptions::default()
        };
        assert!(Constellation::build_with(model, g, h, 2.0, opts).is_ok());
    }
}
