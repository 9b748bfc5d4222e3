//! Mutually unbiased bases in prime dimension and the measurement families built on top of
//! orthonormal traceless operator sets (MUMs and `(N,M)`-POVMs).

use std::f64::consts::PI;

use super::bases::{gell_mann_basis, simplex_from_orthonormal};
use super::{equiangular_family, FamilyKind, MeasurementFamily, MAX_DIMENSION};
use crate::error::{Constraint, Error, Result};
use crate::geam::purity_window;
use crate::linalg::{self, c, CMatrix, CVector};
use crate::tol;

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|i| i * i <= n).all(|i| !n.is_multiple_of(i))
}

fn check_dimension(d: usize) -> Result<()> {
    if !(2..=MAX_DIMENSION).contains(&d) {
        return Err(Error::UnsupportedDimension { d, reason: format!("supported range is 2..={MAX_DIMENSION}") });
    }
    Ok(())
}

fn check_setting_count(d: usize, l: usize) -> Result<()> {
    if !(1..=d + 1).contains(&l) {
        return Err(Error::admissibility(Constraint::SettingRange, format!("L = {l} outside 1..={}", d + 1)));
    }
    Ok(())
}

/// All `d + 1` mutually unbiased bases for prime `d`: the computational basis followed by
/// the `d` quadratic-phase bases `v_j^(r)[n] = ω^(r n² + j n) / √d`. For `d = 2` the phase is
/// `i^(r n) (−1)^(j n)`, giving the X and Y eigenbases.
pub fn mub_vectors(d: usize) -> Result<Vec<Vec<CVector>>> {
    check_dimension(d)?;
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension { d, reason: "MUBs are only constructed for prime d".into() });
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut bases = Vec::with_capacity(d + 1);
    bases.push((0..d).map(|j| CVector::from_fn(d, |n, _| c(if n == j { 1.0 } else { 0.0 }, 0.0))).collect());
    for r in 0..d {
        let basis = (0..d)
            .map(|j| {
                CVector::from_fn(d, |n, _| {
                    let phase = if d == 2 {
                        // i^(r n) (−1)^(j n)
                        PI / 2.0 * (r * n) as f64 + PI * (j * n) as f64
                    } else {
                        2.0 * PI * ((r * n * n + j * n) % d) as f64 / d as f64
                    };
                    c(norm * phase.cos(), norm * phase.sin())
                })
            })
            .collect();
        bases.push(basis);
    }
    Ok(bases)
}

/// The first `L` MUBs as rank-one projectors scaled by `γ_α = 1/L`, so `a_α = 1/L`, `b_α = 1`.
pub fn build_mubs(d: usize, l: usize) -> Result<MeasurementFamily> {
    let bases = mub_vectors(d)?;
    check_setting_count(d, l)?;
    let gamma = 1.0 / l as f64;
    let settings = bases
        .iter()
        .take(l)
        .map(|basis| basis.iter().map(|v| linalg::projector(v).scale(gamma)).collect())
        .collect();
    MeasurementFamily::new(d, FamilyKind::Mub, vec![gamma; l], settings)
}

/// Unit-norm simplices `(Π_k − I/d)/√(1 − 1/d)` from the MUB projectors.
fn mub_simplices(d: usize, l: usize) -> Result<Vec<Vec<CMatrix>>> {
    let bases = mub_vectors(d)?;
    let id = linalg::identity(d).scale(1.0 / d as f64);
    let norm = 1.0 / (1.0 - 1.0 / d as f64).sqrt();
    Ok(bases
        .iter()
        .take(l)
        .map(|basis| basis.iter().map(|v| (linalg::projector(v) - &id).scale(norm)).collect())
        .collect())
}

/// Consecutive blocks of `block` Gell-Mann operators, each mapped onto a simplex.
fn gell_mann_simplices(d: usize, settings: usize, block: usize) -> Vec<Vec<CMatrix>> {
    let basis = gell_mann_basis(d);
    basis.chunks(block).take(settings).map(simplex_from_orthonormal).collect()
}

/// `L` mutually unbiased measurements with `a_α = 1/L` and `b_α = κ`.
///
/// Prime `d` uses the MUB-derived traceless operators, which are positive for every
/// `κ ∈ (1/d, 1]` and reproduce [`build_mubs`] at `κ = 1`. Other dimensions fall back to
/// generalized Gell-Mann blocks, where positivity only holds for `κ` near `1/d`.
pub fn build_mums(d: usize, l: usize, kappa: f64) -> Result<MeasurementFamily> {
    check_dimension(d)?;
    check_setting_count(d, l)?;
    let (lo, hi) = purity_window(d, d);
    if !(kappa > lo + tol::PURITY_FLOOR && kappa <= hi + tol::CONSTRAINT) {
        return Err(Error::admissibility(Constraint::PurityWindow, format!("kappa = {kappa} outside ({lo}, {hi}]")));
    }
    let simplices = if is_prime(d) { mub_simplices(d, l)? } else { gell_mann_simplices(d, l, d - 1) };
    let gamma = 1.0 / l as f64;
    equiangular_family(d, FamilyKind::Mum, &vec![gamma; l], &vec![kappa; l], &simplices)
}

/// An `(N,M)`-POVM: `N` settings of `M` outcomes with `γ_α = 1/N`, `a_α = d/(MN)` and
/// `b_α = x M²/d²`, built from consecutive Gell-Mann blocks. Needs `N(M − 1) ≤ d² − 1`.
pub fn build_nm_povm(d: usize, n: usize, m: usize, x: f64) -> Result<MeasurementFamily> {
    check_dimension(d)?;
    if n == 0 || m < 2 {
        return Err(Error::admissibility(Constraint::OutcomeCount, format!("need N >= 1 and M >= 2, got N = {n}, M = {m}")));
    }
    if n * (m - 1) > d * d - 1 {
        return Err(Error::admissibility(
            Constraint::ElementCount,
            format!("N(M-1) = {} exceeds d^2 - 1 = {}", n * (m - 1), d * d - 1),
        ));
    }
    let (d_f, m_f) = (d as f64, m as f64);
    let lo = d_f / (m_f * m_f);
    let hi = (d_f * d_f / (m_f * m_f)).min(d_f / m_f);
    if !(x > lo + tol::PURITY_FLOOR && x <= hi + tol::CONSTRAINT) {
        return Err(Error::admissibility(Constraint::PurityWindow, format!("x = {x} outside ({lo}, {hi}]")));
    }
    let purity = x * m_f * m_f / (d_f * d_f);
    let simplices = gell_mann_simplices(d, n, m - 1);
    equiangular_family(d, FamilyKind::NmPovm, &vec![1.0 / n as f64; n], &vec![purity; n], &simplices)
}
