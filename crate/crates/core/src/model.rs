//! One-profile model spaces.
//!
//! A [`WModel`] is an `m`-dimensional rotationally symmetric space described
//! by a single warping profile `w(r)` with `w(0) = 0`, `w'(0) = 1`, `w > 0`
//! on the working interval. Constant-curvature profiles come from
//! [`space_form_warping`]; anything else can be supplied as an expression or
//! closure.
//!
//! The derived quantities here are the ones single-profile comparison
//! arguments run on: the logarithmic derivative `η = w'/w`, the radial
//! sectional curvature `−w''/w`, volumes of metric balls and spheres, and
//! the ball/sphere volume quotient `q(r) = ∫₀^r w^{m−1} / w^{m−1}(r)`.

use std::sync::Arc;

use crate::radial::quad::{integral, integrate, QuadOpts};
use crate::radial::{EvalError, Jet2, Radial, RadialExpr};

/// Shared handle to a radial profile.
pub type DynRadial = Arc<dyn Radial + Send + Sync>;

/// Validation tolerance for the boundary conditions `w(0) = 0`, `w'(0) = 1`.
const BOUNDARY_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("warping profile must vanish at 0, extrapolated w(0) = {value:e}")]
    NotVanishing { value: f64 },
    #[error("warping profile must have unit slope at 0, extrapolated w'(0) = {slope}")]
    BadSlope { slope: f64 },
    #[error("warping profile is not positive at r = {at} (w = {value})")]
    NotPositive { at: f64, value: f64 },
    #[error("maximum radius must be positive and finite or +inf, got {0}")]
    BadMaxRadius(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Rotationally symmetric model space of dimension `m` with warping `w`.
#[derive(Clone)]
pub struct WModel {
    w: DynRadial,
    dimension: usize,
    max_radius: f64,
}

impl WModel {
    /// Build a model, checking the boundary conditions at the origin and
    /// positivity on a sample of radii up to `max_radius` (capped at 10³ for
    /// the sampling when unbounded).
    pub fn new<W>(w: W, dimension: usize) -> Result<WModel, ModelError>
    where
        W: Radial + Send + Sync + 'static,
    {
        WModel::with_max_radius(w, dimension, f64::INFINITY)
    }

    /// Like [`WModel::new`] with an explicit domain bound `r ∈ (0, max_radius)`.
    pub fn with_max_radius<W>(
        w: W,
        dimension: usize,
        max_radius: f64,
    ) -> Result<WModel, ModelError>
    where
        W: Radial + Send + Sync + 'static,
    {
        if dimension < 2 {
            return Err(ModelError::BadDimension(dimension));
        }
        if !(max_radius > 0.0) {
            return Err(ModelError::BadMaxRadius(max_radius));
        }
        let model = WModel {
            w: Arc::new(w),
            dimension,
            max_radius,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<(), ModelError> {
        // Taylor-step the jets at two small radii back to the origin; the
        // extrapolation error is O(r³·w''') for the value and O(r²·w''') for
        // the slope, far below the tolerance for any sane profile.
        let j = self.w.jet(1e-5)?;
        let value0 = j.v - 1e-5 * j.d1 + 0.5e-10 * j.d2;
        if value0.abs() > BOUNDARY_TOL {
            return Err(ModelError::NotVanishing { value: value0 });
        }
        let j4 = self.w.jet(1e-4)?;
        let slope0 = j4.d1 - 1e-4 * j4.d2;
        let slope0_fine = j.d1 - 1e-5 * j.d2;
        // Use the finer estimate; the coarse one guards against a profile
        // that happens to look linear only below 1e-5.
        if (slope0_fine - 1.0).abs() > BOUNDARY_TOL || (slope0 - 1.0).abs() > 1e-6 {
            return Err(ModelError::BadSlope { slope: slope0_fine });
        }
        let hi = self.max_radius.min(1e3);
        let lo = 1e-3_f64.min(hi / 2.0);
        for k in 0..16 {
            let r = lo * (hi / lo).powf(k as f64 / 15.0);
            // Sign check through the log channel, so profiles that overflow
            // f64 inside the sampled range still validate.
            let j = self.w.log_jet(r)?;
            if j.v.sign <= 0 {
                return Err(ModelError::NotPositive {
                    at: r,
                    value: j.v.to_f64(),
                });
            }
        }
        Ok(())
    }

    /// Constant-curvature model: warping profile of the simply connected
    /// space form with sectional curvature `b`. For `b > 0` the domain is
    /// clamped just short of the antipodal radius `π/√b` where `w` vanishes.
    pub fn space_form(b: f64, dimension: usize) -> Result<WModel, ModelError> {
        let r_max = if b > 0.0 {
            std::f64::consts::PI / b.sqrt() - 1e-9
        } else {
            f64::INFINITY
        };
        WModel::with_max_radius(space_form_warping(b), dimension, r_max)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    /// The warping profile itself.
    pub fn warping(&self) -> &DynRadial {
        &self.w
    }

    pub fn w_jet(&self, r: f64) -> Result<Jet2, EvalError> {
        self.w.jet(r)
    }

    pub fn w_value(&self, r: f64) -> Result<f64, EvalError> {
        self.w.value(r)
    }

    /// Logarithmic derivative `η(r) = w'(r)/w(r)`.
    ///
    /// Falls back to the log-scaled channel when `w` itself overflows, so
    /// `η` stays available arbitrarily far out (it is O(1) for the profiles
    /// of interest even when `w` is astronomically large).
    pub fn eta(&self, r: f64) -> Result<f64, EvalError> {
        match self.w.jet(r) {
            Ok(j) => Ok(j.d1 / j.v),
            Err(EvalError::NonFinite { .. }) => {
                let j = self.w.log_jet(r)?;
                Ok(j.d1.div(j.v).to_f64())
            }
            Err(e) => Err(e),
        }
    }

    /// Radial sectional curvature `K(r) = −w''(r)/w(r)`.
    pub fn radial_curvature(&self, r: f64) -> Result<f64, EvalError> {
        match self.w.jet(r) {
            Ok(j) => Ok(-j.d2 / j.v),
            Err(EvalError::NonFinite { .. }) => {
                let j = self.w.log_jet(r)?;
                Ok(j.d2.div(j.v).neg().to_f64())
            }
            Err(e) => Err(e),
        }
    }

    /// Volume of the metric sphere of radius `r`: `V₀ · w(r)^{m−1}` with
    /// `V₀` the volume of the unit `(m−1)`-sphere.
    pub fn sphere_volume(&self, r: f64) -> Result<f64, EvalError> {
        let w = self.w.value(r)?;
        Ok(unit_sphere_volume(self.dimension) * w.powi(self.dimension as i32 - 1))
    }

    /// Volume of the metric ball of radius `r`: `V₀ · ∫₀^r w^{m−1}`.
    pub fn ball_volume(&self, r: f64) -> Result<f64, EvalError> {
        let m = self.dimension as i32;
        let v = integrate(
            |t| {
                self.w
                    .value(t)
                    .map(|w| w.powi(m - 1))
                    .unwrap_or(f64::NAN)
            },
            0.0,
            r,
            QuadOpts::default(),
        )
        .value;
        if v.is_finite() {
            Ok(unit_sphere_volume(self.dimension) * v)
        } else {
            Err(EvalError::NonFinite { at: r })
        }
    }

    /// Ball/sphere volume quotient `q(r) = ∫₀^r w^{m−1} dt / w^{m−1}(r)`.
    ///
    /// `q(r) → r/m` as `r → 0`; `q(0) = 0`.
    pub fn quotient(&self, r: f64) -> Result<f64, EvalError> {
        if r == 0.0 {
            return Ok(0.0);
        }
        let m = self.dimension as i32;
        let denom = self.w.value(r)?.powi(m - 1);
        let num = integral(
            |t| {
                self.w
                    .value(t)
                    .map(|w| w.powi(m - 1))
                    .unwrap_or(f64::NAN)
            },
            0.0,
            r,
        );
        let q = num / denom;
        if q.is_finite() {
            Ok(q)
        } else {
            Err(EvalError::NonFinite { at: r })
        }
    }
}

/// Warping profile of the simply connected space form with curvature `b`:
/// `sin(√b·r)/√b`, `r`, or `sinh(√−b·r)/√−b`.
pub fn space_form_warping(b: f64) -> RadialExpr {
    let src = if b > 0.0 {
        let s = b.sqrt();
        format!("sin({s}*r)/{s}")
    } else if b < 0.0 {
        let s = (-b).sqrt();
        format!("sinh({s}*r)/{s}")
    } else {
        "r".to_string()
    };
    RadialExpr::parse(&src).expect("space-form warping text is well-formed")
}

/// Volume of the unit sphere `S^{m−1} ⊂ ℝ^m`: `2·π^{m/2}/Γ(m/2)`.
///
/// `Γ` at integer and half-integer arguments comes from the recurrence
/// `Γ(z+1) = z·Γ(z)` seeded with `Γ(1) = 1`, `Γ(1/2) = √π`, so the value is
/// exact up to rounding (no general-purpose gamma approximation involved).
pub fn unit_sphere_volume(m: usize) -> f64 {
    assert!(m >= 1, "dimension must be positive");
    2.0 * std::f64::consts::PI.powf(m as f64 / 2.0) / gamma_of_half(m)
}

/// Γ(m/2) for integer `m ≥ 1`.
fn gamma_of_half(m: usize) -> f64 {
    let (mut g, mut t) = if m % 2 == 0 {
        (1.0, 2usize) // Γ(1)
    } else {
        (std::f64::consts::PI.sqrt(), 1usize) // Γ(1/2)
    };
    while t + 2 <= m {
        g *= t as f64 / 2.0;
        t += 2;
    }
    g
}
