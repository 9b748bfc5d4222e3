use std::fmt::Write as _;

use serde::Serialize;
use steerlab::asymptotics::{self, FamilySpec};
use steerlab::linalg::vector_to_pairs;
use steerlab::operators::{build_mubs, build_mums, build_nm_povm, build_sic, infer_params, verify_relations};
use steerlab::steering::{lhs_value, violation_report, xi_bounds, BoundsReport, LhsOptions};
use steerlab::{MeasurementFamily, ParamDocument, SettingSelection, SettingsView, Tolerances};

use crate::input::{emit, read_family, read_input, read_json, to_json, Input};
use crate::{BuildArgs, BuildKind, CliError, Common, VerifyArgs};

fn selection(c: &Common, n_settings: usize) -> Result<SettingSelection, CliError> {
    match &c.select {
        None => Ok(SettingSelection::all(n_settings)),
        Some(one_based) => Ok(SettingSelection::from_one_based(one_based, n_settings)?),
    }
}

fn lhs_options(c: &Common) -> LhsOptions {
    LhsOptions { cap: c.cap, heuristic: c.heuristic, eig_tol: c.tol.tol_eig, ..LhsOptions::default() }
}

pub fn validate(c: &Common) -> Result<(), CliError> {
    let doc: ParamDocument = read_json(&c.input)?;
    let checks = doc.checks(c.tol.tol_constraint);
    let mut out = String::new();
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {}: {}", check.constraint, check.detail).unwrap();
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.constraint.to_string()).collect();
    if failed.is_empty() {
        let params = doc.derive(c.tol.tol_constraint)?;
        writeln!(out, "a = {:?}", params.trace_scale()).unwrap();
        writeln!(out, "c = {:?}", params.offdiag()).unwrap();
        writeln!(out, "f = {}", params.cross()).unwrap();
    }
    emit(c.output.as_ref(), out.as_bytes())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("admissibility violated: {}", failed.join(", "))))
    }
}

fn print_summary(report: &BoundsReport) {
    eprintln!("xi_plus = {:.9}", report.xi_plus);
    eprintln!("S_Q = {:.9}", report.quantum_value);
    eprintln!("V >= {:.9}", report.violation_guarantee);
    if let Some(lhs) = report.exact_lhs {
        let kind = if report.lhs_exact { "exact" } else { "non-exact lower bound" };
        eprintln!("S_LHS = {lhs:.9} ({kind})");
    }
}

fn family_view(fam: &MeasurementFamily, tol: &Tolerances) -> Result<SettingsView, CliError> {
    Ok(infer_params(fam, tol.relation)?.view)
}

pub fn bounds(c: &Common) -> Result<(), CliError> {
    let tol = c.tol.tolerances();
    let report = match read_input(&c.input)? {
        Input::Params(doc) => {
            let params = doc.derive(tol.constraint)?;
            let sel = selection(c, params.n_settings())?;
            BoundsReport::analytic(&params.restrict(&sel)?, &sel)
        }
        Input::Family(doc) => {
            let fam = MeasurementFamily::from_document(&doc, &tol)?;
            let view = family_view(&fam, &tol)?;
            let sel = selection(c, fam.n_settings())?;
            let sub = fam.restrict(&sel)?;
            if sub.strategy_count() > c.cap as u128 && !c.heuristic {
                eprintln!("warning: {} strategies exceed the cap {}; reporting analytic bounds only", sub.strategy_count(), c.cap);
                BoundsReport::analytic(&view.restrict(&sel)?, &sel)
            } else {
                violation_report(&fam, &view, &sel, &lhs_options(c))?
            }
        }
    };
    print_summary(&report);
    emit(c.output.as_ref(), &to_json(&report)?)
}

#[derive(Debug, Serialize)]
struct LhsReport {
    d: usize,
    selection: Vec<usize>,
    s_lhs: f64,
    exact: bool,
    status: &'static str,
    strategy: Vec<usize>,
    certificate: Vec<[f64; 2]>,
    strategy_count: u128,
    strategies_examined: u128,
    xi_plus: Option<f64>,
    gap: Option<f64>,
}

pub fn lhs(c: &Common) -> Result<(), CliError> {
    let tol = c.tol.tolerances();
    let fam = read_family(&c.input, &tol)?;
    let sel = selection(c, fam.n_settings())?;
    let sub = fam.restrict(&sel)?;
    let optimum = lhs_value(&sub, &lhs_options(c))?;
    let xi_plus = match infer_params(&fam, tol.relation) {
        Ok(inferred) => Some(xi_bounds(&inferred.view.restrict(&sel)?).plus),
        Err(e) => {
            eprintln!("warning: no analytic bound: {e}");
            None
        }
    };
    let report = LhsReport {
        d: fam.d(),
        selection: sel.one_based(),
        s_lhs: optimum.value,
        exact: optimum.exact,
        status: if optimum.exact { "exact" } else { "non-exact" },
        strategy: optimum.strategy.iter().map(|k| k + 1).collect(),
        certificate: vector_to_pairs(&optimum.certificate),
        strategy_count: sub.strategy_count(),
        strategies_examined: optimum.strategies_examined,
        xi_plus,
        gap: xi_plus.map(|x| x - optimum.value),
    };
    eprintln!("S_LHS = {:.9} ({})", report.s_lhs, report.status);
    if let Some(gap) = report.gap {
        eprintln!("gap xi_plus - S_LHS = {gap:.3e}");
    }
    emit(c.output.as_ref(), &to_json(&report)?)
}

pub fn sweep(c: &Common) -> Result<(), CliError> {
    let spec: FamilySpec = read_json(&c.input)?;
    spec.validate().map_err(|e| CliError::Parse(format!("{}: {e}", c.input.display())))?;
    let grid = spec.grid();
    let result = asymptotics::sweep(&spec, &grid);
    let mut csv = Vec::new();
    asymptotics::write_csv(&result.rows, &mut csv).map_err(|e| CliError::Io(format!("cannot write CSV: {e}")))?;
    emit(c.output.as_ref(), &csv)?;
    for err in &result.errors {
        eprintln!("warning: d = {}: {}", err.d, err.message);
    }
    let diag = &result.diagnostics;
    eprintln!("{} rows, {} warnings", result.rows.len(), result.errors.len());
    eprintln!("xi_plus decreasing: {}", diag.decreasing);
    match diag.below_one_from {
        Some(d) => eprintln!("xi_plus < 1 from d = {d}"),
        None => eprintln!("xi_plus < 1 not reached"),
    }
    if let Some(target) = spec.target {
        match diag.target_reached_at {
            Some(d) => eprintln!("violation guarantee exceeds {target} at d = {d}"),
            None => eprintln!("violation guarantee never exceeds {target}"),
        }
    }
    Ok(())
}

pub fn verify_ops(v: &VerifyArgs) -> Result<(), CliError> {
    let c = &v.common;
    let tol = c.tol.tolerances();
    let fam = read_family(&c.input, &tol)?;
    let view = match &v.params {
        Some(path) => {
            let doc: ParamDocument = read_json(path)?;
            SettingsView::partial_with_tol(doc.d, &doc.outcomes, &doc.weights, &doc.purity, tol.constraint)?
        }
        None => family_view(&fam, &tol)?,
    };
    let sel = selection(c, fam.n_settings())?;
    let report = verify_relations(&fam.restrict(&sel)?, &view.restrict(&sel)?, tol.relation)?;
    let mut out = String::new();
    let rows = [
        ("trace", report.trace),
        ("purity", report.purity),
        ("within-setting overlap", report.within),
        ("cross-setting overlap", report.cross),
        ("resolution of identity", report.resolution),
    ];
    for (name, residual) in rows {
        let status = if residual <= report.tol { "ok" } else { "FAIL" };
        writeln!(out, "{name:<24} {residual:>12.3e}  {status}").unwrap();
    }
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict} max residual {:.3e} at tolerance {:.1e}", report.max_residual(), report.tol).unwrap();
    print!("{out}");
    if let Some(path) = &c.output {
        emit(Some(path), &to_json(&report)?)?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("relations violated: max residual {:.3e}", report.max_residual())))
    }
}

pub fn build(b: &BuildArgs) -> Result<(), CliError> {
    let missing = |name: &str| CliError::Parse(format!("--{name} is required for this family"));
    let fam = match b.kind {
        BuildKind::Mub => build_mubs(b.d, b.settings)?,
        BuildKind::Mum => build_mums(b.d, b.settings, b.kappa.ok_or_else(|| missing("kappa"))?)?,
        BuildKind::Sic => build_sic(b.d)?,
        BuildKind::NmPovm => {
            build_nm_povm(b.d, b.settings, b.outcomes.ok_or_else(|| missing("outcomes"))?, b.x.ok_or_else(|| missing("x"))?)?
        }
    };
    emit(b.output.as_ref(), &to_json(&fam.to_document())?)
}
