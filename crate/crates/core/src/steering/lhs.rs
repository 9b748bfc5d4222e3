//! Exact LHS values by enumeration of deterministic response strategies.
//!
//! For an LHS assemblage `σ_{α,k} = Σ_λ q_λ p_λ(k|α) σ_λ` the functional `F = {P_{α,k}}`
//! evaluates to `Σ_λ q_λ Tr(Y_λ σ_λ) ≤ max_λ η_max(Y_λ)`, with equality when the hidden
//! variable is a point mass and `σ_λ` is the top eigenvector of `Y_λ`. `Y` is affine in the
//! response rows and `η_max` is convex, so the maximum over the product of simplices is
//! attained at a vertex, i.e. at a deterministic strategy. Enumerating the `Π_α M_α`
//! deterministic strategies therefore gives the LHS value exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::strategy::LhsStrategy;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::operators::MeasurementFamily;
use crate::tol;

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Strategies handled per parallel task. Fixed, so results do not depend on thread count.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhsOptions {
    pub cap: u64,
    /// Fall back to coordinate ascent when the cap is exceeded.
    pub heuristic: bool,
    pub restarts: usize,
    pub seed: u64,
    /// Power-iteration convergence threshold for large `d`.
    pub eig_tol: f64,
}

impl Default for LhsOptions {
    fn default() -> Self {
        Self { cap: DEFAULT_ENUMERATION_CAP, heuristic: false, restarts: 64, seed: 0x5eed, eig_tol: tol::EIGEN }
    }
}

/// Best deterministic strategy found and its LHS certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsOptimum {
    /// `max_λ η_max(Y_λ)`; a lower bound only when `exact` is false.
    pub value: f64,
    /// Zero-based outcome chosen in each setting.
    pub strategy: Vec<usize>,
    /// Top eigenvector of `Y` for the maximizing strategy (the hidden state `σ_λ`).
    pub certificate: CVector,
    pub exact: bool,
    pub strategies_examined: u128,
}

/// `Y = Σ_α Σ_k p(k|α) P_{α,k}`.
pub fn response_operator(fam: &MeasurementFamily, strat: &LhsStrategy) -> Result<CMatrix> {
    if strat.outcomes() != fam.outcomes() {
        return Err(Error::ShapeMismatch(format!(
            "strategy shape {:?} does not match family outcomes {:?}",
            strat.outcomes(),
            fam.outcomes()
        )));
    }
    let mut y = linalg::zeros(fam.d());
    for (ops, row) in fam.settings().iter().zip(strat.rows()) {
        for (p, &w) in ops.iter().zip(row) {
            if w != 0.0 {
                y += p.scale(w);
            }
        }
    }
    Ok(y)
}

fn deterministic_response(fam: &MeasurementFamily, choice: &[usize], buf: &mut CMatrix) {
    buf.fill(linalg::c(0.0, 0.0));
    for (ops, &k) in fam.settings().iter().zip(choice) {
        *buf += &ops[k];
    }
}

/// Mixed-radix digits of `index`, last setting varying fastest.
fn decode(mut index: u64, radices: &[usize], digits: &mut [usize]) {
    for (digit, &r) in digits.iter_mut().zip(radices).rev() {
        *digit = (index % r as u64) as usize;
        index /= r as u64;
    }
}

fn advance(radices: &[usize], digits: &mut [usize]) {
    for (digit, &r) in digits.iter_mut().zip(radices).rev() {
        *digit += 1;
        if *digit < r {
            return;
        }
        *digit = 0;
    }
}

/// Keeps the larger value; ties go to the smaller strategy index.
fn better(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

fn optimum_for(fam: &MeasurementFamily, strategy: Vec<usize>, exact: bool, examined: u128, eig_tol: f64) -> LhsOptimum {
    let mut y = linalg::zeros(fam.d());
    deterministic_response(fam, &strategy, &mut y);
    let (value, certificate) = linalg::largest_eigenpair_with_tol(&y, eig_tol);
    LhsOptimum { value, strategy, certificate, exact, strategies_examined: examined }
}

/// Exact `S_LHS` by enumerating every deterministic strategy, in parallel over fixed-size
/// index ranges with a max-reduction.
pub fn exact_lhs_value(fam: &MeasurementFamily, cap: u64) -> Result<LhsOptimum> {
    exact_lhs_value_with_tol(fam, cap, tol::EIGEN)
}

pub fn exact_lhs_value_with_tol(fam: &MeasurementFamily, cap: u64, eig_tol: f64) -> Result<LhsOptimum> {
    let count = fam.strategy_count();
    if count > cap as u128 {
        return Err(Error::EnumerationCapExceeded { count, cap });
    }
    let total = count as u64;
    let radices = fam.outcomes();
    let chunks = total.div_ceil(CHUNK);
    let (_, best_index) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut digits = vec![0usize; radices.len()];
            decode(start, &radices, &mut digits);
            let mut y = linalg::zeros(fam.d());
            let mut best = (f64::NEG_INFINITY, start);
            for index in start..end {
                deterministic_response(fam, &digits, &mut y);
                best = better(best, (linalg::max_eigenvalue_with_tol(&y, eig_tol), index));
                advance(&radices, &mut digits);
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), better);
    let mut strategy = vec![0usize; radices.len()];
    decode(best_index, &radices, &mut strategy);
    Ok(optimum_for(fam, strategy, true, count, eig_tol))
}

/// Random-restart coordinate ascent over deterministic strategies. The result is a lower
/// bound on `S_LHS` and is flagged non-exact.
pub fn heuristic_lhs_value(fam: &MeasurementFamily, restarts: usize, seed: u64) -> LhsOptimum {
    heuristic_lhs_value_with_tol(fam, restarts, seed, tol::EIGEN)
}

pub fn heuristic_lhs_value_with_tol(fam: &MeasurementFamily, restarts: usize, seed: u64, eig_tol: f64) -> LhsOptimum {
    let radices = fam.outcomes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = linalg::zeros(fam.d());
    let mut examined: u128 = 0;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..restarts.max(1) {
        let mut choice: Vec<usize> = radices.iter().map(|&m| rng.random_range(0..m)).collect();
        deterministic_response(fam, &choice, &mut y);
        let mut value = linalg::max_eigenvalue_with_tol(&y, eig_tol);
        examined += 1;
        loop {
            let mut improved = false;
            for alpha in 0..radices.len() {
                let current = choice[alpha];
                for k in 0..radices[alpha] {
                    if k == current {
                        continue;
                    }
                    choice[alpha] = k;
                    deterministic_response(fam, &choice, &mut y);
                    let candidate = linalg::max_eigenvalue_with_tol(&y, eig_tol);
                    examined += 1;
                    if candidate > value + 1e-15 {
                        value = candidate;
                        improved = true;
                        break;
                    }
                    choice[alpha] = current;
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, choice));
        }
    }
    let (_, strategy) = best.expect("at least one restart");
    optimum_for(fam, strategy, false, examined, eig_tol)
}

/// Exact enumeration within the cap, otherwise the heuristic lower bound if allowed.
pub fn lhs_value(fam: &MeasurementFamily, opts: &LhsOptions) -> Result<LhsOptimum> {
    match exact_lhs_value_with_tol(fam, opts.cap, opts.eig_tol) {
        Err(Error::EnumerationCapExceeded { .. }) if opts.heuristic => {
            Ok(heuristic_lhs_value_with_tol(fam, opts.restarts, opts.seed, opts.eig_tol))
        }
        other => other,
    }
}
