//! Derived comparison bounds on a built constellation.
//!
//! Everything here is a consumer of [`Constellation`] tables:
//!
//! * isoperimetric bounds — the reciprocal quotient `1/q` against its
//!   curvature-data bound `(m/g)(w'/w − h)`, with the equality form
//!   `m/(w·g)`;
//! * volume bounds — `V₀·∫₀^r Λ/g` for balls, `V₀·g·Λ` for their boundary
//!   spheres;
//! * two-sided quotient sandwiches under pointwise curvature ordering;
//! * mean exit-time profiles `ψ(r) = ∫_r^R q(u)/g(u) du` together with an
//!   exact-derivative residual check of the defining equation `Lψ = −1`;
//! * annulus capacities, computed along two genuinely different routes
//!   (radial coordinate and stretched coordinate) so the agreement between
//!   them is a meaningful cross-check rather than a tautology.

use crate::constellation::Constellation;
use crate::model::{unit_sphere_volume, WModel};
use crate::radial::quad::{cumulative, integral, QuadOpts};
use crate::radial::{EvalError, Radial};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("inner radius must satisfy 0 < ρ < R, got ρ = {rho}, R = {radius}")]
    BadAnnulus { rho: f64, radius: f64 },
    #[error("this bound requires h ≡ 0, but h({at}) = {value}")]
    RequiresVanishingH { at: f64, value: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Slack below which an inequality still counts as holding; absorbs table
/// interpolation error in the exact-equality cases.
const HOLD_TOL: f64 = 1e-9;

/// The isoperimetric quotient bound at one radius.
#[derive(Debug, Clone, Copy)]
pub struct IsoperimetricBound {
    pub radius: f64,
    /// `1/q(r)`: boundary area over enclosed volume, in model-normalized form.
    pub quotient_reciprocal: f64,
    /// `(m/g)(w'/w − h)`: the curvature-data side of the inequality.
    pub bound: f64,
    /// `m/(w·g)`: the value both sides take in the equality case.
    pub equality_value: f64,
    /// `bound − 1/q`; the inequality holds iff this is ≥ 0 (up to slack).
    pub margin: f64,
    pub holds: bool,
}

/// Evaluate the isoperimetric bound `1/q(r) ≤ (m/g)(w'/w − h)` at `r`.
///
/// The margin here is the weak balance margin divided by `q·g`, so `holds`
/// agrees with the balance verdict at the same radius.
pub fn isoperimetric_bound(
    c: &Constellation,
    r: f64,
) -> Result<IsoperimetricBound, AnalysisError> {
    let m = c.dimension() as f64;
    let q = c.quotient(r)?;
    let eta = c.eta(r)?;
    let g = c.stretching_profile().value(r)?;
    let h = c.mean_curvature_profile().value(r)?;
    let w = c.model().w_value(r)?;
    let reciprocal = 1.0 / q;
    let bound = (m / g) * (eta - h);
    let margin = bound - reciprocal;
    Ok(IsoperimetricBound {
        radius: r,
        quotient_reciprocal: reciprocal,
        bound,
        equality_value: m / (w * g),
        margin,
        holds: margin >= -HOLD_TOL * bound.abs().max(1.0),
    })
}

/// Volume bounds at one radius.
#[derive(Debug, Clone, Copy)]
pub struct VolumeBound {
    pub radius: f64,
    /// Upper bound for the volume of the ball of radius `r`: `V₀·∫₀^r Λ/g`.
    pub ball: f64,
    /// Upper bound for the boundary sphere volume: `V₀·g·Λ`.
    pub sphere: f64,
}

/// Volume bounds `V₀·∫₀^r Λ/g` (ball) and `V₀·g·Λ` (sphere) at `r`. In the
/// reduced case these are exactly the model ball and sphere volumes.
pub fn volume_bound(c: &Constellation, r: f64) -> Result<VolumeBound, AnalysisError> {
    let v0 = unit_sphere_volume(c.dimension());
    let lam = c.lambda(r)?;
    let g = c.stretching_profile().value(r)?;
    Ok(VolumeBound {
        radius: r,
        ball: v0 * c.integrated_lambda(r),
        sphere: v0 * g * lam,
    })
}

/// A two-sided sandwich for the reciprocal quotient.
#[derive(Debug, Clone, Copy)]
pub struct TwoSidedBound {
    pub radius: f64,
    /// `1/q_{w₁}(R)` from the lower comparison model.
    pub lower: f64,
    /// `1/q(R)` of the constellation (its effective space).
    pub upper: f64,
    /// Whether `K_{w₁} ≥ K_{w₂}` held at every sampled radius.
    pub curvature_ordering_holds: bool,
    /// `lower ≤ upper` (up to slack).
    pub consistent: bool,
}

/// Sandwich `1/q_{w₁}(R) ≤ 1/q(s(R))` for a constellation with `h ≡ 0`,
/// given a lower model `w₁` whose radial curvature dominates the
/// constellation's (`−w₁''/w₁ ≥ −w₂''/w₂` sampled on a 256-point grid).
pub fn two_sided_bound(
    lower_model: &WModel,
    c: &Constellation,
    r: f64,
) -> Result<TwoSidedBound, AnalysisError> {
    // The statement is only proved for vanishing mean-curvature profile.
    for k in 0..16 {
        let t = r * (k as f64 + 1.0) / 16.0;
        let hv = c.mean_curvature_profile().value(t)?;
        if hv.abs() > 1e-12 {
            return Err(AnalysisError::RequiresVanishingH { at: t, value: hv });
        }
    }
    let mut ordering = true;
    let lo = 1e-3 * r;
    for k in 0..256 {
        let t = lo * (r / lo).powf(k as f64 / 255.0);
        let k1 = lower_model.radial_curvature(t)?;
        let k2 = c.model().radial_curvature(t)?;
        if k1 < k2 - 1e-9 * k2.abs().max(1.0) {
            ordering = false;
            break;
        }
    }
    let lower = 1.0 / lower_model.quotient(r)?;
    let upper = 1.0 / c.quotient(r)?;
    Ok(TwoSidedBound {
        radius: r,
        lower,
        upper,
        curvature_ordering_holds: ordering,
        consistent: lower <= upper * (1.0 + 1e-9),
    })
}

/// Intrinsic quotient bound for a model sitting inside an `n`-dimensional
/// ambient space: `1/q_w(r) ≤ n·(w'/w)(r)`.
#[derive(Debug, Clone, Copy)]
pub struct IntrinsicBound {
    pub radius: f64,
    pub quotient_reciprocal: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn intrinsic_bound(
    model: &WModel,
    ambient_dimension: usize,
    r: f64,
) -> Result<IntrinsicBound, AnalysisError> {
    let q = model.quotient(r)?;
    let bound = ambient_dimension as f64 * model.eta(r)?;
    let reciprocal = 1.0 / q;
    Ok(IntrinsicBound {
        radius: r,
        quotient_reciprocal: reciprocal,
        bound,
        holds: reciprocal <= bound * (1.0 + 1e-12) + HOLD_TOL,
    })
}

/// One row of a mean exit-time profile.
#[derive(Debug, Clone, Copy)]
pub struct ExitTimeRow {
    pub r: f64,
    pub psi: f64,
}

/// Mean exit time from the ball of radius `R`, as a function of the start
/// radius: `ψ(r) = ∫_r^R q(u)/g(u) du`, so `ψ(R) = 0` and `ψ(0)` is the
/// center value.
#[derive(Debug, Clone)]
pub struct ExitTimeProfile {
    pub rows: Vec<ExitTimeRow>,
    /// `ψ(0)`: expected exit time started from the center.
    pub center: f64,
}

/// Tabulate the exit-time profile on `points` evenly spaced radii `0..=R`.
pub fn exit_time_profile(
    c: &Constellation,
    points: usize,
) -> Result<ExitTimeProfile, AnalysisError> {
    let radius = c.radius();
    let n = points.max(2);
    let nodes: Vec<f64> = (0..n)
        .map(|i| radius * i as f64 / (n - 1) as f64)
        .collect();
    let err = std::cell::Cell::new(None);
    let integrand = |u: f64| match exit_integrand(c, u) {
        Ok(v) => v,
        Err(e) => {
            err.set(Some(e));
            f64::NAN
        }
    };
    let cum = cumulative(integrand, &nodes, QuadOpts::default());
    if let Some(e) = err.take() {
        return Err(e.into());
    }
    let total = *cum.last().unwrap();
    let rows = nodes
        .iter()
        .zip(cum.iter())
        .map(|(&r, &f)| ExitTimeRow { r, psi: total - f })
        .collect();
    Ok(ExitTimeProfile {
        rows,
        center: total,
    })
}

/// `ψ(r)` at a single radius.
pub fn exit_time_at(c: &Constellation, r: f64) -> Result<f64, AnalysisError> {
    let err = std::cell::Cell::new(None);
    let v = integral(
        |u| match exit_integrand(c, u) {
            Ok(v) => v,
            Err(e) => {
                err.set(Some(e));
                f64::NAN
            }
        },
        r,
        c.radius(),
    );
    if let Some(e) = err.take() {
        return Err(e.into());
    }
    Ok(v)
}

fn exit_integrand(c: &Constellation, u: f64) -> Result<f64, EvalError> {
    let q = c.quotient(u)?;
    let g = c.stretching_profile().value(u)?;
    Ok(q / g)
}

/// Residual `Lψ + 1` of the exit-time equation under the drift operator
/// `Lf = g²·f'' + ((m − g²)·w'/w − m·h)·f'`, computed from exact derivatives
/// of the tabulated profile (no finite differencing). Zero up to quadrature
/// error when the tables are consistent.
pub fn exit_time_residual(c: &Constellation, r: f64) -> Result<f64, AnalysisError> {
    let m = c.dimension() as f64;
    let q = c.quotient(r)?;
    let eta = c.eta(r)?;
    let gj = c.stretching_profile().jet(r)?;
    let h = c.mean_curvature_profile().value(r)?;
    let x = m / r + c.zeta(r)?;
    // Λ'/Λ = X − w'/w − g'/g, hence q' = 1/g − q·(X − w'/w − g'/g).
    let dq = 1.0 / gj.v - q * (x - eta - gj.d1 / gj.v);
    let dpsi = -q / gj.v;
    let ddpsi = -dq / gj.v + q * gj.d1 / (gj.v * gj.v);
    let drift = (m - gj.v * gj.v) * eta - m * h;
    Ok(ddpsi * gj.v * gj.v + dpsi * drift + 1.0)
}

/// Small-radius expansion of the center exit time on the constant-curvature
/// model of dimension `m` and curvature `b`:
///
/// ```text
/// ψ(0) ≈ R²/(2m) + τ·R⁴/(12·m²·(m+2)),   τ = m(m−1)·b
/// ```
///
/// The truncation error is O(R⁶).
pub fn exit_time_small_radius_expansion(dimension: usize, curvature: f64, radius: f64) -> f64 {
    let m = dimension as f64;
    let tau = m * (m - 1.0) * curvature;
    radius * radius / (2.0 * m)
        + tau * radius.powi(4) / (12.0 * m * m * (m + 2.0))
}

/// Annulus capacity, reported along both computation routes.
#[derive(Debug, Clone, Copy)]
pub struct Capacity {
    pub inner: f64,
    pub outer: f64,
    /// `(∫_ρ^R dt/(g·Λ))⁻¹`, times `V₀` if requested.
    pub value: f64,
    /// The same quantity from the stretched coordinate,
    /// `(∫_{s(ρ)}^{s(R)} W^{1−m} dσ)⁻¹` — an independent route kept separate
    /// precisely so it can serve as a cross-check.
    pub s_form_value: f64,
    pub v0_applied: bool,
}

/// Capacity of the annulus `ρ < r < R` (R = the constellation radius).
///
/// `with_v0` multiplies both routes by the unit-sphere volume, turning the
/// normalized profile capacity into the geometric one.
pub fn annulus_capacity(
    c: &Constellation,
    rho: f64,
    with_v0: bool,
) -> Result<Capacity, AnalysisError> {
    let radius = c.radius();
    if !(rho > 0.0 && rho < radius) {
        return Err(AnalysisError::BadAnnulus { rho, radius });
    }
    let err = std::cell::Cell::new(None);
    let trap = |e: EvalError| {
        err.set(Some(e));
        f64::NAN
    };

    let r_route = integral(
        |t| {
            c.lambda(t)
                .and_then(|lam| c.stretching_profile().value(t).map(|g| 1.0 / (g * lam)))
                .unwrap_or_else(&trap)
        },
        rho,
        radius,
    );
    if let Some(e) = err.take() {
        return Err(e.into());
    }

    let m = c.dimension() as f64;
    let s_route = integral(
        |sigma| {
            c.effective_warping(sigma)
                .map(|w| w.powf(1.0 - m))
                .unwrap_or_else(&trap)
        },
        c.stretch(rho),
        c.stretch(radius),
    );
    if let Some(e) = err.take() {
        return Err(e.into());
    }

    let v0 = if with_v0 {
        unit_sphere_volume(c.dimension())
    } else {
        1.0
    };
    Ok(Capacity {
        inner: rho,
        outer: radius,
        value: v0 / r_route,
        s_form_value: v0 / s_route,
        v0_applied: with_v0,
    })
}
