use serde::Serialize;

use super::MeasurementFamily;
use crate::error::{Error, Result};
use crate::geam::SettingsView;
use crate::linalg::{self, real_trace_product};
use crate::tol;

/// Largest absolute residual of each defining relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationReport {
    /// `|Tr P_{α,k} − a_α|`
    pub trace: f64,
    /// `|Tr P_{α,k}² − b_α a_α²|`
    pub purity: f64,
    /// `|Tr P_{α,k} P_{α,l} − c_α a_α²|`, `k ≠ l`
    pub within: f64,
    /// `|Tr P_{α,k} P_{β,l} − f a_α a_β|`, `α ≠ β`
    pub cross: f64,
    /// `max |Σ_k P_{α,k} − γ_α I|`
    pub resolution: f64,
    pub tol: f64,
    pub passed: bool,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        [self.trace, self.purity, self.within, self.cross, self.resolution].into_iter().fold(0.0, f64::max)
    }
}

fn check_shape(fam: &MeasurementFamily, view: &SettingsView) -> Result<()> {
    if fam.d() != view.d() {
        return Err(Error::ShapeMismatch(format!("family has d = {}, parameters have d = {}", fam.d(), view.d())));
    }
    if fam.outcomes() != view.outcomes() {
        return Err(Error::ShapeMismatch(format!(
            "family outcomes {:?} differ from parameter outcomes {:?}",
            fam.outcomes(),
            view.outcomes()
        )));
    }
    Ok(())
}

/// Measures every GEAM relation of `fam` against the parameters in `view`.
pub fn verify_relations(fam: &MeasurementFamily, view: &SettingsView, tol: f64) -> Result<RelationReport> {
    check_shape(fam, view)?;
    let params = view.settings();
    let settings = fam.settings();
    let (mut trace, mut purity, mut within, mut cross) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for (alpha, ops) in settings.iter().enumerate() {
        let pa = &params[alpha];
        let a2 = pa.trace_scale * pa.trace_scale;
        for (k, p) in ops.iter().enumerate() {
            trace = trace.max((linalg::real_trace(p) - pa.trace_scale).abs());
            purity = purity.max((real_trace_product(p, p, tol::IMAGINARY)? - pa.purity * a2).abs());
            for q in &ops[k + 1..] {
                within = within.max((real_trace_product(p, q, tol::IMAGINARY)? - pa.offdiag * a2).abs());
            }
            for (beta, other) in settings.iter().enumerate().skip(alpha + 1) {
                let target = view.cross() * pa.trace_scale * params[beta].trace_scale;
                for q in other {
                    cross = cross.max((real_trace_product(p, q, tol::IMAGINARY)? - target).abs());
                }
            }
        }
    }
    let id = linalg::identity(fam.d());
    let resolution = settings
        .iter()
        .zip(params)
        .map(|(ops, pa)| {
            let sum = ops.iter().fold(linalg::zeros(fam.d()), |acc, p| acc + p);
            linalg::max_abs_diff(&sum, &id.scale(pa.weight))
        })
        .fold(0.0, f64::max);
    let mut report = RelationReport { trace, purity, within, cross, resolution, tol, passed: false };
    report.passed = report.max_residual() <= tol;
    Ok(report)
}

/// Parameters read back from a family's traces.
#[derive(Debug, Clone, PartialEq)]
pub struct InferredParams {
    pub view: SettingsView,
    /// Fitted `c_α` (mean within-setting overlap over `a_α²`).
    pub offdiag: Vec<f64>,
    /// Fitted `f` (mean cross-setting overlap over `a_α a_β`); `None` for one setting.
    pub cross: Option<f64>,
    /// Largest deviation of an individual trace from its fitted constant.
    pub max_deviation: f64,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn spread(values: &[f64], center: f64) -> f64 {
    values.iter().map(|v| (v - center).abs()).fold(0.0, f64::max)
}

/// Fits `a_α, b_α, c_α, f, γ_α` from the family's traces and fails with
/// [`Error::NotEquiangular`] when individual traces deviate from the fit by more than `tol`.
pub fn infer_params(fam: &MeasurementFamily, tol: f64) -> Result<InferredParams> {
    let d = fam.d();
    let d_f = d as f64;
    let settings = fam.settings();
    let mut deviation = 0.0_f64;
    let (mut scales, mut purities, mut offdiags, mut weights) = (vec![], vec![], vec![], vec![]);

    for ops in settings {
        let traces: Vec<f64> = ops.iter().map(linalg::real_trace).collect();
        let a = mean(&traces);
        if a <= 0.0 {
            return Err(Error::NotEquiangular { deviation: f64::INFINITY, tol });
        }
        deviation = deviation.max(spread(&traces, a));

        let squares = ops.iter().map(|p| real_trace_product(p, p, tol::IMAGINARY)).collect::<Result<Vec<_>>>()?;
        let b_a2 = mean(&squares);
        deviation = deviation.max(spread(&squares, b_a2));

        let mut overlaps = Vec::new();
        for (k, p) in ops.iter().enumerate() {
            for q in &ops[k + 1..] {
                overlaps.push(real_trace_product(p, q, tol::IMAGINARY)?);
            }
        }
        let c_a2 = if overlaps.is_empty() { 0.0 } else { mean(&overlaps) };
        deviation = deviation.max(spread(&overlaps, c_a2));

        let gamma = linalg::real_trace(&ops.iter().fold(linalg::zeros(d), |acc, p| acc + p)) / d_f;
        scales.push(a);
        purities.push(b_a2 / (a * a));
        offdiags.push(c_a2 / (a * a));
        weights.push(gamma);
    }

    // Cross overlaps must equal f a_α a_β with f = 1/d.
    let mut ratios = Vec::new();
    for (alpha, ops) in settings.iter().enumerate() {
        for (beta, other) in settings.iter().enumerate().skip(alpha + 1) {
            for p in ops {
                for q in other {
                    let t = real_trace_product(p, q, tol::IMAGINARY)?;
                    deviation = deviation.max((t - scales[alpha] * scales[beta] / d_f).abs());
                    ratios.push(t / (scales[alpha] * scales[beta]));
                }
            }
        }
    }
    let cross = (!ratios.is_empty()).then(|| mean(&ratios));

    let id = linalg::identity(d);
    for (ops, &gamma) in settings.iter().zip(&weights) {
        let sum = ops.iter().fold(linalg::zeros(d), |acc, p| acc + p);
        deviation = deviation.max(linalg::max_abs_diff(&sum, &id.scale(gamma)));
    }

    if deviation > tol {
        return Err(Error::NotEquiangular { deviation, tol });
    }
    let view = SettingsView::partial(d, &fam.outcomes(), &weights, &purities)?;
    Ok(InferredParams { view, offdiag: offdiags, cross, max_deviation: deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geam::GeamParams;
    use crate::operators::{build_mubs, build_sic, FamilyKind};
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn qubit_mubs_satisfy_relations() {
        let fam = build_mubs(2, 3).unwrap();
        let third = 1.0 / 3.0;
        let params = GeamParams::derive(2, 3, &[2, 2, 2], &[third; 3], &[1.0; 3]).unwrap();
        let report = verify_relations(&fam, &params.view(), 1e-10).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.max_residual() < 1e-10);
    }

    #[test]
    fn scaled_operator_shows_trace_residual() {
        let fam = build_mubs(2, 3).unwrap();
        let mut settings = fam.settings().to_vec();
        settings[1][0] = settings[1][0].scale(1.01);
        let weights = fam.weights().to_vec();
        let perturbed = MeasurementFamily::new(2, FamilyKind::Custom, weights, settings).unwrap();
        let third = 1.0 / 3.0;
        let params = GeamParams::derive(2, 3, &[2, 2, 2], &[third; 3], &[1.0; 3]).unwrap();
        let report = verify_relations(&perturbed, &params.view(), 1e-9).unwrap();
        assert!(!report.passed);
        assert!((report.trace - 0.01 * third).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let fam = build_sic(2).unwrap();
        let third = 1.0 / 3.0;
        let params = GeamParams::derive(2, 3, &[2, 2, 2], &[third; 3], &[1.0; 3]).unwrap();
        assert!(matches!(verify_relations(&fam, &params.view(), 1e-9), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn sic_round_trip() {
        let inferred = infer_params(&build_sic(2).unwrap(), 1e-9).unwrap();
        let p = inferred.view.complete().unwrap();
        assert_eq!((p.d(), p.n_settings(), p.outcomes()), (2, 1, &[4usize][..]));
        assert!((p.weights()[0] - 1.0).abs() < 1e-9);
        assert!((p.purity()[0] - 1.0).abs() < 1e-9);
        assert!(inferred.cross.is_none());
    }

    #[test]
    fn qutrit_mub_round_trip() {
        let inferred = infer_params(&build_mubs(3, 4).unwrap(), 1e-9).unwrap();
        for s in inferred.view.settings() {
            assert!((s.purity - 1.0).abs() < 1e-9);
            assert!((s.trace_scale - 0.25).abs() < 1e-9);
        }
        assert!((inferred.cross.unwrap() - 1.0 / 3.0).abs() < 1e-9);
        assert!(inferred.view.complete().is_ok());
    }

    #[test]
    fn glued_random_povms_are_not_equiangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let first = sampling::random_povm(&mut rng, 3, 4);
        let second = sampling::random_povm(&mut rng, 3, 5);
        let fam = MeasurementFamily::new(3, FamilyKind::Custom, vec![1.0, 1.0], vec![first, second]).unwrap();
        assert!(matches!(infer_params(&fam, 1e-9), Err(Error::NotEquiangular { .. })));
    }
}
