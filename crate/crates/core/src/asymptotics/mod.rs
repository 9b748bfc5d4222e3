//! Closed-form `ξ+` for the special measurement families and dimension sweeps.

mod formulas;
mod sweep;

pub use formulas::{delta_d, xi_plus_etf, xi_plus_mub, xi_plus_mum, xi_plus_nm, DeltaDecomposition, SettingProfile};
pub use sweep::{
    default_d_values, sweep, write_csv, FamilySpec, Rule, SpecKind, SweepDiagnostics, SweepError, SweepResult, SweepRow,
    CSV_HEADER,
};
