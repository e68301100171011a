//! Local differential geometry of orthogonal projections.
//!
//! The crate has two halves. The forward half takes the Taylor coefficients of a
//! space curve (or a Monge-form surface) and computes the curvature jets of its
//! orthogonal projections (or apparent contours). The inverse half takes a
//! handful of such curvature measurements and recovers the low-order Taylor
//! coefficients of the original object.
//!
//! - [`series`]: truncated univariate power series, the substrate for all jets.
//! - [`curve`]: forward model for space curves.
//! - [`curve_recon`]: recovery of curve coefficients from two projections.
//! - [`surface`]: forward model for apparent contours of surfaces.
//! - [`surface_recon`]: recovery of second- and third-order surface coefficients.
//! - [`analysis`]: ambiguity curves and contour-conjugate directions.
//! - [`oracle`]: sampling-based numeric curvature estimators used for verification.

pub mod analysis;
pub mod curve;
pub mod curve_recon;
mod error;
pub mod linalg;
pub mod oracle;
pub mod series;
pub mod surface;
pub mod surface_recon;

pub use error::{Error, Result};
