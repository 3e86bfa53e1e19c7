//! Thin-film lubrication with partially rough surfaces.
//!
//! The pressure `p` of a thin viscous film solves the modified Reynolds
//! equation
//!
//! ```text
//! div(h₁³ A/12 ∇p) = div(h₁ B U_b)   on ω = [0,1]²
//! ```
//!
//! where the coefficients `A` and `B` depend only on the roughness intensity
//! `N_ψ` of the upper surface and reduce to `1` and `1/2` on smooth parts.
//!
//! * [`coefficients`] evaluates `N_ψ`, `A(N)` and `B(N)`.
//! * [`geometry`] describes the gap, rough regions and grid, and parses
//!   scenario configs.
//! * [`solver`] assembles and solves the P1 finite-element system.
//! * [`postprocess`] reconstructs through-gap velocity and compares fields.
//! * [`cli`] implements the command-line front end.

pub mod cli;
pub mod coefficients;
pub mod error;
pub mod geometry;
pub mod postprocess;
pub mod quadrature;
pub mod solver;

pub use coefficients::{coeff_a, coeff_b, CoefficientPair, RoughnessIntensity};
pub use error::{Error, Result};
pub use geometry::{build_fields, load_config, CoefficientFields, GapProfile, Grid, RoughnessSpec, ScenarioConfig};
pub use solver::{solve_reynolds, PressureSolution};
