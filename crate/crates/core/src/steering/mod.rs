//! Assemblages, steering functionals, LHS bounds and the violation report.

mod assemblage;
mod functional;
mod lhs;
mod report;
mod spectral;
mod strategy;

pub use assemblage::{assemblage_from_state, Assemblage};
pub use functional::SteeringFunctional;
pub use lhs::{
    exact_lhs_value, heuristic_lhs_value, lhs_value, response_operator, LhsOptimum, LhsOptions, DEFAULT_ENUMERATION_CAP,
};
pub use report::{physical_quantum_value, quantum_value, violation_report, BoundsReport};
pub use spectral::{samuelson_bounds, trace_moments_closed_form, xi_bounds, SpectralWindow, XiBounds};
pub use strategy::LhsStrategy;
