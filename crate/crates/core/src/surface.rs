//! Surfaces of revolution in Euclidean 3-space.
//!
//! A surface is described by a profile curve `u ↦ (x(u), z(u))` rotated about
//! the z-axis, optionally capped below by a flat disc of radius `a = x(0)`.
//! The module computes exact geometry — areas, boundary lengths, radial
//! tangency, Gauss curvature, convexity diagnostics, arclength — and checks
//! the profile-form isoperimetric inequality
//!
//! ```text
//!   L(c)/A(c) ≤ 2·√(x'² + z'²) / (x·x' + z·z')     (= 2/(r·tangency))
//! ```
//!
//! on grids of cap parameters `c`.

use crate::radial::quad::{integral, integrate, QuadOpts};
use crate::radial::{EvalError, Jet2, Radial, RadialExpr};

#[derive(Debug, thiserror::Error)]
pub enum SurfaceError {
    #[error("profile is degenerate at u = {at}: {what}")]
    Degenerate { at: f64, what: String },
    #[error("x({at}) = {value} must be positive on (0, u_max]")]
    NotPositive { at: f64, value: f64 },
    #[error("x(0) = {got} does not meet the disc radius a = {expected}")]
    DiscMismatch { got: f64, expected: f64 },
    #[error("parameter {name} = {value} out of range: {why}")]
    BadParameter {
        name: &'static str,
        value: f64,
        why: &'static str,
    },
    #[error("this diagnostic needs a graph profile with z(u) = u")]
    NotGraphProfile,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A surface of revolution with an optional flat bottom disc.
#[derive(Debug, Clone)]
pub struct RevolutionSurface {
    name: String,
    x: RadialExpr,
    z: RadialExpr,
    disc_radius: f64,
    u_max: f64,
    /// The profile continues evenly to `u < 0`: the complete surface is the
    /// double of the flank across `u = 0` (the disc is a computational cap).
    /// Total-curvature integrals then cover both halves.
    mirror: bool,
    /// The profile closes up at `u_max` (x(u_max) = 0); the surface is
    /// compact and improper integrals over `u` stop at `u_max`.
    compact: bool,
}

impl RevolutionSurface {
    /// Build and validate a surface from profile expressions in `u`.
    pub fn new(
        name: &str,
        x: RadialExpr,
        z: RadialExpr,
        disc_radius: f64,
        u_max: f64,
    ) -> Result<Self, SurfaceError> {
        if !(disc_radius >= 0.0) {
            return Err(SurfaceError::BadParameter {
                name: "a",
                value: disc_radius,
                why: "the disc radius must be ≥ 0",
            });
        }
        if !(u_max > 0.0 && u_max.is_finite()) {
            return Err(SurfaceError::BadParameter {
                name: "u_max",
                value: u_max,
                why: "the parameter range must be positive and finite",
            });
        }
        let s = RevolutionSurface {
            name: name.to_string(),
            x,
            z,
            disc_radius,
            u_max,
            mirror: false,
            compact: false,
        };
        let x0 = s.x.value(0.0)?;
        if (x0 - disc_radius).abs() > 1e-9 {
            return Err(SurfaceError::DiscMismatch {
                got: x0,
                expected: disc_radius,
            });
        }
        // Positivity and regularity on a grid of (0, u_max]. The last grid
        // point is u_max itself; compact profiles (x → 0 there) are detected
        // rather than rejected.
        let samples = 64;
        for k in 1..=samples {
            let u = u_max * k as f64 / samples as f64;
            let (xj, zj) = s.profile(u)?;
            let speed2 = xj.d1 * xj.d1 + zj.d1 * zj.d1;
            if speed2 <= 1e-15 {
                return Err(SurfaceError::Degenerate {
                    at: u,
                    what: format!("profile speed² = {speed2:e}"),
                });
            }
            if xj.v <= 0.0 && !(k == samples && xj.v.abs() < 1e-9) {
                return Err(SurfaceError::NotPositive { at: u, value: xj.v });
            }
        }
        Ok(s)
    }

    fn with_mirror(mut self) -> Self {
        self.mirror = true;
        self
    }

    fn with_compact(mut self) -> Self {
        self.compact = true;
        self
    }

    // ----- catalogue ------------------------------------------------------

    /// Catenoid flank `x = cosh u` over a unit disc; the complete catenoid
    /// doubles the flank across the neck.
    pub fn catenoid() -> Self {
        Self::new(
            "catenoid",
            RadialExpr::parse("cosh(u)").unwrap(),
            RadialExpr::parse("u").unwrap(),
            1.0,
            30.0,
        )
        .unwrap()
        .with_mirror()
    }

    /// One sheet of the hyperboloid `x = √(1+u²)` over a unit disc; the
    /// complete sheet doubles the flank across the waist.
    pub fn hyperboloid() -> Self {
        Self::new(
            "hyperboloid",
            RadialExpr::parse("sqrt(1+u^2)").unwrap(),
            RadialExpr::parse("u").unwrap(),
            1.0,
            30.0,
        )
        .unwrap()
        .with_mirror()
    }

    /// Truncated cone `x = 1 + u·cos θ, z = u·sin θ` over a unit disc.
    /// The opening parameter must satisfy `0 < θ < π/2` for a genuinely
    /// widening, non-degenerate flank (θ = π/2 gives a cylinder wall and is
    /// also accepted).
    pub fn cone(theta: f64) -> Result<Self, SurfaceError> {
        if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
            return Err(SurfaceError::BadParameter {
                name: "theta",
                value: theta,
                why: "need 0 < θ ≤ π/2",
            });
        }
        Self::new(
            "cone",
            RadialExpr::parse(&format!("1 + u*{}", theta.cos()))
                .expect("generated cone profile parses"),
            RadialExpr::parse(&format!("u*{}", theta.sin()))
                .expect("generated cone profile parses"),
            1.0,
            30.0,
        )
    }

    /// Paraboloid `x = u, z = α·u²` (no disc; the apex is the pole).
    pub fn paraboloid(alpha: f64) -> Result<Self, SurfaceError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(SurfaceError::BadParameter {
                name: "alpha",
                value: alpha,
                why: "need α > 0",
            });
        }
        Self::new(
            "paraboloid",
            RadialExpr::parse("u").expect("generated paraboloid profile parses"),
            RadialExpr::parse(&format!("{alpha}*u^2"))
                .expect("generated paraboloid profile parses"),
            0.0,
            30.0,
        )
    }

    /// Unit sphere through the printed profile `x = −sin(u−π)`,
    /// `z = 1 + cos(u−π)`, which equals `(sin u, 1 − cos u)` on `[0, π]`.
    pub fn sphere() -> Self {
        Self::new(
            "sphere",
            RadialExpr::parse("-sin(u - pi)").unwrap(),
            RadialExpr::parse("1 + cos(u - pi)").unwrap(),
            0.0,
            std::f64::consts::PI,
        )
        .unwrap()
        .with_compact()
    }

    /// The five example surfaces with default parameters θ = π/4, α = 1.
    pub fn catalog() -> Vec<RevolutionSurface> {
        vec![
            Self::catenoid(),
            Self::hyperboloid(),
            Self::cone(std::f64::consts::FRAC_PI_4).unwrap(),
            Self::paraboloid(1.0).unwrap(),
            Self::sphere(),
        ]
    }

    // ----- accessors ------------------------------------------------------

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn disc_radius(&self) -> f64 {
        self.disc_radius
    }

    /// Upper end of the verified parameter window (grid checks stop here;
    /// pointwise geometry may be evaluated beyond it).
    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Whether the complete surface doubles the flank across `u = 0`.
    pub fn is_mirror_symmetric(&self) -> bool {
        self.mirror
    }

    /// Whether the profile closes at `u_max` (compact surface).
    pub fn is_compact(&self) -> bool {
        self.compact
    }

    pub fn profile_x(&self) -> &RadialExpr {
        &self.x
    }

    pub fn profile_z(&self) -> &RadialExpr {
        &self.z
    }

    /// Second-order jets of both profile coordinates at `u`.
    pub fn profile(&self, u: f64) -> Result<(Jet2, Jet2), SurfaceError> {
        Ok((self.x.jet(u)?, self.z.jet(u)?))
    }

    // ----- geometry -------------------------------------------------------

    /// Area of the cap consisting of the bottom disc plus the flank strip
    /// `0 ≤ u ≤ c`:  `π·a² + 2π·∫₀^c x·√(x'²+z'²) du`.
    pub fn area(&self, c: f64) -> Result<f64, SurfaceError> {
        self.check_cap(c)?;
        let err = std::cell::Cell::new(None);
        let res = integrate(
            |u| match self.area_density(u) {
                Ok(v) => v,
                Err(e) => {
                    err.set(Some(e));
                    f64::NAN
                }
            },
            0.0,
            c,
            QuadOpts::default(),
        );
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(std::f64::consts::PI * self.disc_radius * self.disc_radius + res.value)
    }

    /// `2π·x·√(x'²+z'²)`: the derivative of `area` with respect to the cap
    /// parameter.
    pub fn area_density(&self, u: f64) -> Result<f64, SurfaceError> {
        let (xj, zj) = self.profile(u)?;
        let speed = (xj.d1 * xj.d1 + zj.d1 * zj.d1).sqrt();
        Ok(2.0 * std::f64::consts::PI * xj.v * speed)
    }

    /// Length of the cap boundary circle: `2π·x(c)`.
    pub fn boundary_length(&self, c: f64) -> Result<f64, SurfaceError> {
        self.check_cap(c)?;
        Ok(2.0 * std::f64::consts::PI * self.x.value(c)?)
    }

    /// Radial tangency `(x·x' + z·z')/(√(x'²+z'²)·√(x²+z²))`: the cosine of
    /// the angle between the profile direction and the extrinsic radial
    /// direction.
    pub fn tangency(&self, u: f64) -> Result<f64, SurfaceError> {
        let (xj, zj) = self.profile(u)?;
        let speed = (xj.d1 * xj.d1 + zj.d1 * zj.d1).sqrt();
        let radius = (xj.v * xj.v + zj.v * zj.v).sqrt();
        if speed * radius <= 1e-300 {
            return Err(SurfaceError::Degenerate {
                at: u,
                what: "tangency needs speed > 0 and r > 0".to_string(),
            });
        }
        Ok((xj.v * xj.d1 + zj.v * zj.d1) / (speed * radius))
    }

    /// Extrinsic distance from the rotation center: `√(x² + z²)`.
    pub fn extrinsic_radius(&self, u: f64) -> Result<f64, SurfaceError> {
        let (xj, zj) = self.profile(u)?;
        Ok((xj.v * xj.v + zj.v * zj.v).sqrt())
    }

    /// Intrinsic distance along the profile from the pole: `∫₀^u √(x'²+z'²)`.
    pub fn arclength(&self, u: f64) -> Result<f64, SurfaceError> {
        let err = std::cell::Cell::new(None);
        let v = integral(
            |t| match self.profile(t) {
                Ok((xj, zj)) => (xj.d1 * xj.d1 + zj.d1 * zj.d1).sqrt(),
                Err(e) => {
                    err.set(Some(e));
                    f64::NAN
                }
            },
            0.0,
            u,
        );
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(v)
    }

    /// Principal curvatures (meridian, parallel) at `u`.
    pub fn principal_curvatures(&self, u: f64) -> Result<(f64, f64), SurfaceError> {
        let (xj, zj) = self.profile(u)?;
        let speed2 = xj.d1 * xj.d1 + zj.d1 * zj.d1;
        if speed2 <= 1e-300 || xj.v.abs() <= 1e-300 {
            return Err(SurfaceError::Degenerate {
                at: u,
                what: "principal curvatures need speed > 0 and x > 0".to_string(),
            });
        }
        let speed = speed2.sqrt();
        let meridian = (xj.d1 * zj.d2 - zj.d1 * xj.d2) / (speed2 * speed);
        let parallel = zj.d1 / (xj.v * speed);
        Ok((meridian, parallel))
    }

    /// Gauss curvature: the product of the principal curvatures.
    pub fn gauss_curvature(&self, u: f64) -> Result<f64, SurfaceError> {
        let (meridian, parallel) = self.principal_curvatures(u)?;
        Ok(meridian * parallel)
    }

    /// `2π·|K|·x·√(x'²+z'²)`: the total-absolute-curvature density in `u`
    /// (one flank; mirror-symmetric surfaces double it for the complete
    /// surface).
    pub fn curvature_density(&self, u: f64) -> Result<f64, SurfaceError> {
        let k = self.gauss_curvature(u)?;
        Ok(k.abs() * self.area_density(u)?)
    }

    /// Radial mean convexity function
    /// `(κ_meridian + κ_parallel)·(x·z' − z·x')/(2·√(x'²+z'²)·√(x²+z²))`:
    /// non-negative iff the surface is radially mean 0-convex at `u`.
    pub fn convexity_function(&self, u: f64) -> Result<f64, SurfaceError> {
        let (xj, zj) = self.profile(u)?;
        let (meridian, parallel) = self.principal_curvatures(u)?;
        let speed = (xj.d1 * xj.d1 + zj.d1 * zj.d1).sqrt();
        let radius = (xj.v * xj.v + zj.v * zj.v).sqrt();
        Ok((meridian + parallel) * (xj.v * zj.d1 - zj.v * xj.d1) / (2.0 * speed * radius))
    }

    /// Graph-profile convexity residual `(1 + x'² − x·x'')·(x − u·x')`,
    /// defined for profiles with `z(u) = u`; its sign decides radial mean
    /// 0-convexity there. Errors for non-graph profiles.
    pub fn convexity_residual(&self, u: f64) -> Result<f64, SurfaceError> {
        for t in [0.25 * u.max(0.1), 0.5 * u.max(0.1), u.max(0.1)] {
            let zj = self.z.jet(t)?;
            if (zj.v - t).abs() > 1e-9 || (zj.d1 - 1.0).abs() > 1e-9 || zj.d2.abs() > 1e-9 {
                return Err(SurfaceError::NotGraphProfile);
            }
        }
        let xj = self.x.jet(u)?;
        Ok((1.0 + xj.d1 * xj.d1 - xj.v * xj.d2) * (xj.v - u * xj.d1))
    }

    // ----- isoperimetric check --------------------------------------------

    /// Evaluate the cap isoperimetric inequality at each grid parameter.
    pub fn isoperimetric_check(&self, c_grid: &[f64]) -> Result<Vec<SurfaceReport>, SurfaceError> {
        c_grid.iter().map(|&c| self.report_at(c)).collect()
    }

    /// One row of the isoperimetric check at cap parameter `c`.
    pub fn report_at(&self, c: f64) -> Result<SurfaceReport, SurfaceError> {
        self.check_cap(c)?;
        let area = self.area(c)?;
        let length = self.boundary_length(c)?;
        let quotient = length / area;
        let (xj, zj) = self.profile(c)?;
        let speed = (xj.d1 * xj.d1 + zj.d1 * zj.d1).sqrt();
        let radial = xj.v * xj.d1 + zj.v * zj.d1;
        let r_at_c = (xj.v * xj.v + zj.v * zj.v).sqrt();
        let tangency_at_c = radial / (speed * r_at_c);
        let (upper_bound, note) = if radial > 1e-12 {
            (2.0 * speed / radial, None)
        } else if length.abs() < 1e-9 {
            (
                f64::INFINITY,
                Some("boundary degenerates to the pole; the inequality is vacuous".to_string()),
            )
        } else {
            (
                f64::NAN,
                Some("tangency is not positive; the bound does not apply".to_string()),
            )
        };
        let inequality_holds = quotient <= upper_bound + 1e-9;
        Ok(SurfaceReport {
            c,
            area,
            length,
            quotient,
            upper_bound,
            tangency_at_c,
            r_at_c,
            inequality_holds,
            note,
        })
    }

    fn check_cap(&self, c: f64) -> Result<(), SurfaceError> {
        if !(c > 0.0 && c <= self.u_max * (1.0 + 1e-12)) {
            return Err(SurfaceError::BadParameter {
                name: "c",
                value: c,
                why: "cap parameter must lie in (0, u_max]",
            });
        }
        Ok(())
    }
}

/// One evaluation of the cap isoperimetric inequality.
#[derive(Debug, Clone)]
pub struct SurfaceReport {
    pub c: f64,
    pub area: f64,
    pub length: f64,
    /// `length/area`.
    pub quotient: f64,
    /// `2·√(x'²+z'²)/(x·x'+z·z')` = `2/(r·tangency)`.
    pub upper_bound: f64,
    pub tangency_at_c: f64,
    pub r_at_c: f64,
    pub inequality_holds: bool,
    pub note: Option<String>,
}

/// 64 logarithmically spaced cap parameters spanning `(lo, hi]`.
pub fn log_spaced_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_five_entries_with_expected_poles() {
        let cat = RevolutionSurface::catalog();
        assert_eq!(cat.len(), 5);
        let names: Vec<&str> = cat.iter().map(|s| s.name()).collect();
        assert_eq!(
            names,
            ["catenoid", "hyperboloid", "cone", "paraboloid", "sphere"]
        );
        let (xj, zj) = cat[0].profile(0.0).unwrap();
        assert_eq!((xj.v, zj.v), (1.0, 0.0));
        let (xj, zj) = cat[4].profile(std::f64::consts::PI).unwrap();
        assert!(xj.v.abs() < 1e-15 && (zj.v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cylinder_wall_area_is_linear() {
        let wall = RevolutionSurface::cone(std::f64::consts::FRAC_PI_2).unwrap();
        let a = wall.area(3.0).unwrap();
        let expected = std::f64::consts::PI * (1.0 + 2.0 * 3.0);
        assert!((a - expected).abs() < 1e-10, "area = {a}, expected {expected}");
    }

    #[test]
    fn rejects_bad_profiles() {
        // Disc radius that does not match x(0).
        let x = RadialExpr::parse("cosh(u)").unwrap();
        let z = RadialExpr::parse("u").unwrap();
        let got = RevolutionSurface::new("bad", x, z, 2.0, 5.0);
        assert!(matches!(got, Err(SurfaceError::DiscMismatch { .. })));

        // Profile that goes negative.
        let x = RadialExpr::parse("1 - u").unwrap();
        let z = RadialExpr::parse("u").unwrap();
        let got = RevolutionSurface::new("bad", x, z, 1.0, 5.0);
        assert!(matches!(got, Err(SurfaceError::NotPositive { .. })));
    }
}
