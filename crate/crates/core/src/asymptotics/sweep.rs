//! Dimension sweeps of the closed-form bounds.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::formulas::{delta_d, nm_window, xi_plus_etf, xi_plus_mub, xi_plus_mum, xi_plus_nm, SettingProfile};
use crate::error::{Constraint, Error, Result};
use crate::operators::{build_mums, build_nm_povm, is_prime, MAX_DIMENSION};
use crate::tol;

pub const CSV_HEADER: [&str; 7] = ["d", "xi_plus", "xi_minus", "delta", "s_q", "violation_guarantee", "constructible"];

/// Operator families are only built to decide the `constructible` flag up to this `d`.
const CONSTRUCTION_PROBE_MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecKind {
    Mub,
    Mum,
    NmPovm,
    Dichotomic,
    Etf,
    Sic,
    /// Uniform weights `1/N` over `N` settings with `M` outcomes and `b = z/d`.
    Geam,
}

/// `constant + linear·d + inverse/d`. A bare number in JSON is a constant rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rule {
    Constant(f64),
    Affine {
        #[serde(default)]
        constant: f64,
        #[serde(default)]
        linear: f64,
        #[serde(default)]
        inverse: f64,
    },
}

impl Rule {
    pub fn eval(&self, d: usize) -> f64 {
        match *self {
            Rule::Constant(v) => v,
            Rule::Affine { constant, linear, inverse } => {
                let d = d as f64;
                constant + linear * d + inverse / d
            }
        }
    }

    fn eval_count(&self, d: usize, name: &str) -> Result<usize> {
        let v = self.eval(d);
        let rounded = v.round();
        if (v - rounded).abs() > tol::CONSTRAINT || rounded < 0.0 {
            return Err(Error::admissibility(
                Constraint::FormulaDomain,
                format!("{name}({d}) = {v} is not a nonnegative integer"),
            ));
        }
        Ok(rounded as usize)
    }
}

/// Scaling rules for one family. Which rules are required depends on `kind`:
///
/// | kind | rules |
/// |------|-------|
/// | `mub` | `L` |
/// | `mum` | `L`, `kappa` |
/// | `nm_povm` | `L`, `M`, `x` |
/// | `dichotomic` | `L`, `x` (`M = 2`) |
/// | `etf` | `L`, `M` (uniform `γ = 1/L`) |
/// | `sic` | none |
/// | `geam` | `N`, `M`, `z` |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: SpecKind,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub settings: Option<Rule>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_settings: Option<Rule>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_values: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<usize>,
    /// Violation target `V*` for the threshold diagnostic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
}

impl FamilySpec {
    pub fn new(kind: SpecKind) -> Self {
        Self {
            kind,
            settings: None,
            n_settings: None,
            outcomes: None,
            kappa: None,
            x: None,
            z: None,
            d_values: None,
            d_min: None,
            d_max: None,
            target: None,
        }
    }

    fn rule(&self, rule: Option<Rule>, name: &str) -> Result<Rule> {
        rule.ok_or_else(|| Error::admissibility(Constraint::FormulaDomain, format!("{:?} spec needs a rule for {name}", self.kind)))
    }

    /// Checks that every rule the kind needs is present.
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            SpecKind::Mub => self.rule(self.settings, "L").map(drop),
            SpecKind::Mum => self.rule(self.settings, "L").and(self.rule(self.kappa, "kappa")).map(drop),
            SpecKind::NmPovm => {
                self.rule(self.settings, "L").and(self.rule(self.outcomes, "M")).and(self.rule(self.x, "x")).map(drop)
            }
            SpecKind::Dichotomic => self.rule(self.settings, "L").and(self.rule(self.x, "x")).map(drop),
            SpecKind::Etf => self.rule(self.settings, "L").and(self.rule(self.outcomes, "M")).map(drop),
            SpecKind::Sic => Ok(()),
            SpecKind::Geam => {
                self.rule(self.n_settings, "N").and(self.rule(self.outcomes, "M")).and(self.rule(self.z, "z")).map(drop)
            }
        }
    }

    /// The swept dimensions: `d_values` if given, otherwise `d_min..=d_max` (default `2..=50`),
    /// restricted to primes for MUB specs.
    pub fn grid(&self) -> Vec<usize> {
        if let Some(values) = &self.d_values {
            return values.clone();
        }
        default_d_values(self.kind, self.d_min.unwrap_or(2), self.d_max.unwrap_or(50))
    }
}

pub fn default_d_values(kind: SpecKind, d_min: usize, d_max: usize) -> Vec<usize> {
    let all = d_min.max(2)..=d_max;
    match kind {
        SpecKind::Mub => all.filter(|&d| is_prime(d)).collect(),
        _ => all.collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub xi_plus: f64,
    pub xi_minus: f64,
    pub delta: f64,
    pub s_q: f64,
    pub violation_guarantee: f64,
    pub constructible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepError {
    pub d: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepDiagnostics {
    /// `ξ+` strictly decreasing along the successful rows.
    pub decreasing: bool,
    /// Smallest swept `d` from which every later row has `ξ+ < 1`.
    pub below_one_from: Option<usize>,
    /// First swept `d` with `S_Q/ξ+ > V*`.
    pub target_reached_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub errors: Vec<SweepError>,
    pub diagnostics: SweepDiagnostics,
}

struct Point {
    xi_plus: f64,
    profiles: Vec<SettingProfile>,
    constructible: bool,
}

fn point(spec: &FamilySpec, d: usize) -> Result<Point> {
    let d_f = d as f64;
    match spec.kind {
        SpecKind::Mub => {
            let l = spec.rule(spec.settings, "L")?.eval_count(d, "L")?;
            let xi_plus = xi_plus_mub(d, l)?;
            let constructible = d <= MAX_DIMENSION && is_prime(d);
            Ok(Point { xi_plus, profiles: uniform(l, d, d_f), constructible })
        }
        SpecKind::Mum => {
            let l = spec.rule(spec.settings, "L")?.eval_count(d, "L")?;
            let kappa = spec.rule(spec.kappa, "kappa")?.eval(d);
            let xi_plus = xi_plus_mum(d, l, kappa)?;
            let constructible = d <= CONSTRUCTION_PROBE_MAX_DIM && build_mums(d, l, kappa).is_ok();
            Ok(Point { xi_plus, profiles: uniform(l, d, d_f * kappa), constructible })
        }
        SpecKind::NmPovm | SpecKind::Dichotomic => {
            let l = spec.rule(spec.settings, "L")?.eval_count(d, "L")?;
            let m = match spec.kind {
                SpecKind::Dichotomic => 2,
                _ => spec.rule(spec.outcomes, "M")?.eval_count(d, "M")?,
            };
            let x = spec.rule(spec.x, "x")?.eval(d);
            let xi_plus = xi_plus_nm(d, l, m, x)?;
            let z = x * (m * m) as f64 / d_f;
            let constructible = d <= CONSTRUCTION_PROBE_MAX_DIM && build_nm_povm(d, l, m, x).is_ok();
            Ok(Point { xi_plus, profiles: uniform(l, m, z), constructible })
        }
        SpecKind::Etf => {
            let l = spec.rule(spec.settings, "L")?.eval_count(d, "L")?;
            let m = spec.rule(spec.outcomes, "M")?.eval_count(d, "M")?;
            if l == 0 {
                return Err(Error::admissibility(Constraint::SettingRange, "L = 0".to_string()));
            }
            let xi_plus = xi_plus_etf(d, m, &vec![1.0 / l as f64; l])?;
            // Projective families realized here: MUBs (M = d) and SICs (M = d², L = 1).
            let constructible = (m == d && d <= MAX_DIMENSION && is_prime(d) && l <= d + 1)
                || (m == d * d && l == 1 && d <= 3);
            Ok(Point { xi_plus, profiles: uniform(l, m, d_f), constructible })
        }
        SpecKind::Sic => {
            let xi_plus = xi_plus_etf(d, d * d, &[1.0])?;
            Ok(Point { xi_plus, profiles: uniform(1, d * d, d_f), constructible: d <= 3 })
        }
        SpecKind::Geam => {
            let n = spec.rule(spec.n_settings, "N")?.eval_count(d, "N")?;
            let m = spec.rule(spec.outcomes, "M")?.eval_count(d, "M")?;
            let z = spec.rule(spec.z, "z")?.eval(d);
            if n == 0 {
                return Err(Error::admissibility(Constraint::SettingRange, "N = 0".to_string()));
            }
            let profiles = uniform(n, m, z);
            let xi_plus = delta_d(d, &profiles)?.xi_plus;
            let x = z * d_f / (m * m) as f64;
            let (lo, hi) = nm_window(d, m);
            let constructible =
                d <= CONSTRUCTION_PROBE_MAX_DIM && x > lo && x <= hi && build_nm_povm(d, n, m, x).is_ok();
            Ok(Point { xi_plus, profiles, constructible })
        }
    }
}

fn uniform(count: usize, outcomes: usize, z: f64) -> Vec<SettingProfile> {
    vec![SettingProfile { count, weight: 1.0 / count as f64, outcomes, z }]
}

fn row(spec: &FamilySpec, d: usize) -> Result<SweepRow> {
    let p = point(spec, d)?;
    let dec = delta_d(d, &p.profiles)?;
    let xi_minus = 2.0 * dec.leading - p.xi_plus;
    Ok(SweepRow {
        d,
        xi_plus: p.xi_plus,
        xi_minus,
        delta: dec.delta,
        s_q: dec.total_weight,
        violation_guarantee: dec.total_weight / p.xi_plus,
        constructible: p.constructible,
    })
}

fn diagnostics(rows: &[SweepRow], target: Option<f64>) -> SweepDiagnostics {
    let decreasing = rows.windows(2).all(|w| w[1].xi_plus < w[0].xi_plus);
    let below_one_from = match rows.iter().rposition(|r| r.xi_plus >= 1.0) {
        None => rows.first().map(|r| r.d),
        Some(i) => rows.get(i + 1).map(|r| r.d),
    };
    let target_reached_at = target.and_then(|v| rows.iter().find(|r| r.violation_guarantee > v).map(|r| r.d));
    SweepDiagnostics { decreasing, below_one_from, target_reached_at }
}

/// Evaluates the family description at every `d`, in parallel, keeping the input order. Points where the
/// rules leave the admissible region are collected as errors and skipped.
pub fn sweep(spec: &FamilySpec, d_values: &[usize]) -> SweepResult {
    let outcomes: Vec<Result<SweepRow>> = d_values.par_iter().map(|&d| row(spec, d)).collect();
    let mut rows = Vec::with_capacity(outcomes.len());
    let mut errors = Vec::new();
    for (&d, outcome) in d_values.iter().zip(outcomes) {
        match outcome {
            Ok(r) => rows.push(r),
            Err(e) => errors.push(SweepError { d, message: e.to_string() }),
        }
    }
    let diagnostics = diagnostics(&rows, spec.target);
    SweepResult { rows, errors, diagnostics }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), csv::Error> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in rows {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mub_spec(l: f64) -> FamilySpec {
        FamilySpec { settings: Some(Rule::Constant(l)), ..FamilySpec::new(SpecKind::Mub) }
    }

    #[test]
    fn mub_sweep_decreases_toward_limit() {
        let spec = FamilySpec { d_max: Some(200), ..mub_spec(3.0) };
        let grid = spec.grid();
        assert_eq!(grid.len(), 46);
        let result = sweep(&spec, &grid);
        assert!(result.errors.is_empty());
        assert!(result.diagnostics.decreasing);
        let last = result.rows.last().unwrap();
        assert!(last.xi_plus > 1.0 / 3f64.sqrt());
        assert!(last.xi_plus - 1.0 / 3f64.sqrt() < 3e-3);
    }

    #[test]
    fn empty_grid_gives_empty_output() {
        let result = sweep(&mub_spec(3.0), &[]);
        assert!(result.rows.is_empty() && result.errors.is_empty());
        let mut buf = Vec::new();
        write_csv(&result.rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "d,xi_plus,xi_minus,delta,s_q,violation_guarantee,constructible\n");
    }

    #[test]
    fn inadmissible_points_are_collected() {
        // L = 4 needs d >= 3.
        let result = sweep(&mub_spec(4.0), &[2, 3, 5]);
        assert_eq!(result.rows.iter().map(|r| r.d).collect::<Vec<_>>(), vec![3, 5]);
        assert_eq!(result.errors.len(), 1);
        assert_eq!(result.errors[0].d, 2);
    }

    #[test]
    fn rules_parse_from_numbers_and_objects() {
        let spec: FamilySpec =
            serde_json::from_str(r#"{"kind": "nm_povm", "L": {"linear": 1, "constant": -1}, "M": {"linear": 1, "constant": 2}, "x": 0.5}"#)
                .unwrap();
        assert_eq!(spec.settings.unwrap().eval(7), 6.0);
        assert_eq!(spec.outcomes.unwrap().eval(7), 9.0);
        assert_eq!(spec.x.unwrap().eval(7), 0.5);
        assert!(serde_json::from_str::<FamilySpec>(r#"{"kind": "spiral"}"#).is_err());
    }

    #[test]
    fn non_integer_counts_are_rejected() {
        let spec = mub_spec(2.5);
        assert!(matches!(
            row(&spec, 5),
            Err(Error::Admissibility { constraint: Constraint::FormulaDomain, .. })
        ));
    }

    #[test]
    fn constructible_flags() {
        let rows = sweep(&mub_spec(2.0), &[2, 3, 5, 67]).rows;
        assert_eq!(rows.iter().map(|r| r.constructible).collect::<Vec<_>>(), vec![true, true, true, false]);
        let sic = sweep(&FamilySpec::new(SpecKind::Sic), &[2, 3, 4]).rows;
        assert_eq!(sic.iter().map(|r| r.constructible).collect::<Vec<_>>(), vec![true, true, false]);
    }

    #[test]
    fn csv_is_identical_across_thread_counts() {
        let spec = FamilySpec {
            settings: Some(Rule::Affine { constant: -1.0, linear: 1.0, inverse: 0.0 }),
            outcomes: Some(Rule::Affine { constant: 2.0, linear: 1.0, inverse: 0.0 }),
            x: Some(Rule::Constant(0.5)),
            ..FamilySpec::new(SpecKind::NmPovm)
        };
        let grid: Vec<usize> = (2..120).collect();
        let render = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let rows = pool.install(|| sweep(&spec, &grid).rows);
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).unwrap();
            buf
        };
        assert_eq!(render(1), render(3));
    }
}
