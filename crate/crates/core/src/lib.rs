//! Numerics for random Gaussian points in the plane.
//!
//! The crate computes, by independent routes, the probability that a triangle
//! spanned by three standard Gaussian points captures a fixed location, the
//! expected probability content of Gaussian triangles and tetrahedra, the
//! variance of the median of three normals and its planar analogue, and the
//! hull statistics of four Gaussian points.
//!
//! Routes:
//!
//! * [`special_fn`]: erf, the normal distribution, Owen's T function and the
//!   erf-product integral, each with a closed form and a numeric form.
//! * [`quadrature`]: adaptive 1D quadrature and adaptive cubature over octants
//!   of R³.
//! * [`analytic`]: closed-form constants and the cubature-driven capture
//!   probability.
//! * [`monte_carlo`]: seeded, reproducible estimators with standard errors.

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod monte_carlo;
pub mod quadrature;
pub mod special_fn;
pub mod stats;

pub use error::{Error, Result};
pub use special_fn::AccuracySpec;
