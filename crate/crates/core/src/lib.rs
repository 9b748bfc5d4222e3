//! Steering inequalities built from generalized equiangular measurements (GEAMs).
//!
//! The crate is organised around five pieces:
//!
//! - [`geam`]: the scalar parameter algebra `(d, N, M_α, γ_α, b_α)` and its admissibility rules.
//! - [`operators`]: concrete operator families (MUBs, MUMs, SIC-POVMs, `(N,M)`-POVMs) and
//!   numerical verification of the equiangular trace relations.
//! - [`steering`]: assemblages, steering functionals, the response operator `Y_λ`, the
//!   generalized Samuelson window, the analytic bounds `ξ±`, exact LHS values by
//!   deterministic-strategy enumeration, and the violation report.
//! - [`asymptotics`]: closed-form `ξ+` for the special families and dimension sweeps.
//! - [`linalg`] / [`sampling`]: dense Hermitian helpers and random test inputs.

pub mod asymptotics;
pub mod error;
pub mod geam;
pub mod linalg;
pub mod operators;
pub mod sampling;
pub mod steering;
pub mod tol;

pub use error::{Constraint, Error, Result};
pub use geam::{coincidence_index, GeamParams, ParamDocument, SettingParams, SettingSelection, SettingsView};
pub use operators::{FamilyKind, MeasurementFamily, RelationReport};
pub use tol::Tolerances;
