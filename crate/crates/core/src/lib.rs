//! Isoperimetric comparison analysis on radially symmetric model spaces.
//!
//! The crate builds *comparison constellations*: triples of radial profiles
//! (a warping function `w`, a metric stretching factor `g`, a radial mean
//! curvature function `h`) that together determine a weighted model space.
//! From a constellation it derives the quantities comparison geometry runs
//! on — isoperimetric profiles and quotients, volume and capacity bounds,
//! mean exit-time profiles, and parabolicity / recurrence verdicts — plus a
//! toolkit for surfaces of revolution that realize these model spaces.
//!
//! Layout:
//!
//! * [`radial`] — expression parsing, second-order forward AD (plain and
//!   log-scaled), adaptive quadrature, improper-integral classification.
//! * [`model`] — one-profile model spaces: constant-curvature warping
//!   profiles, volume of metric balls and spheres, isoperimetric quotients.
//! * [`constellation`] — the three-profile comparison spaces, their
//!   associated isoperimetric profile and balance conditions.
//! * [`analysis`] — derived bounds: isoperimetric inequalities, volume
//!   bounds, mean exit time, annulus capacity.
//! * [`parabolicity`] — divergence-type tests deciding parabolic /
//!   hyperbolic behaviour, with evidence traces.
//! * [`surface`] — surfaces of revolution: geometry, curvature, and checks
//!   of the comparison bounds on concrete profiles.

pub mod analysis;
pub mod constellation;
pub mod model;
pub mod parabolicity;
pub mod radial;
pub mod surface;
