//! Potential flow around multiple smooth obstacles.
//!
//! Given obstacle boundaries as trigonometric polynomials, a velocity at
//! infinity and a circulation per obstacle, the solver builds the complex
//! potential of the plane, locally sourceless, locally irrotational flow in
//! the exterior domain. The boundary condition (constant stream function on
//! every obstacle) is reduced to a second-kind integral equation for the
//! tangential density, discretized by Fourier-Galerkin truncation into a
//! dense real system over the density's Fourier coefficients, and solved by
//! pivoted LU. The potential, velocity and stream function are then
//! evaluable anywhere in the flow domain through a boundary integral plus
//! closed-form far-field and circulation terms.
//!
//! Modules follow the pipeline: [`geometry`] validates the contours,
//! [`kernels`] evaluates the integral-equation kernels and boundary data,
//! [`spectral`] provides the periodic Fourier machinery, [`assembly`]
//! builds and solves the dense system, [`potential`] evaluates the flow,
//! and [`field`] samples grids, traces streamlines and writes plot data.

pub mod assembly;
pub mod config;
pub mod error;
pub mod field;
pub mod geometry;
pub mod kernels;
pub mod potential;
pub mod spectral;

mod par;

pub use assembly::{solve_flow, BoundaryDensity, FlowSolution};
pub use config::{FlowConfig, ProblemConfig};
pub use error::{Error, Result};
pub use geometry::{Geometry, TrigCurve};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
