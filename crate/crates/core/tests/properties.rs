use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use steerlab::linalg::{self, CMatrix};
use steerlab::operators::{build_mubs, build_mums, build_nm_povm, build_sic, infer_params};
use steerlab::sampling;
use steerlab::steering::{
    assemblage_from_state, exact_lhs_value, heuristic_lhs_value, quantum_value, response_operator,
    trace_moments_closed_form, xi_bounds, Assemblage, LhsStrategy, SteeringFunctional, DEFAULT_ENUMERATION_CAP,
};
use steerlab::{coincidence_index, MeasurementFamily, SettingSelection};

fn family(choice: usize) -> MeasurementFamily {
    match choice % 9 {
        0 => build_mubs(2, 3),
        1 => build_mubs(3, 4),
        2 => build_mubs(5, 3),
        3 => build_mums(3, 4, 0.6),
        4 => build_mums(2, 2, 0.9),
        5 => build_sic(2),
        6 => build_sic(3),
        7 => build_nm_povm(3, 2, 5, 0.15),
        _ => build_nm_povm(2, 3, 2, 0.8),
    }
    .unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn selection_from_mask(mask: u32, n: usize) -> SettingSelection {
    let mut idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
    if idx.is_empty() {
        idx.push(0);
    }
    SettingSelection::new(idx, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_moments_match_matrices(choice in 0usize..9, seed in any::<u64>()) {
        let fam = family(choice);
        let view = infer_params(&fam, 1e-9).unwrap().view;
        let strat = sampling::random_strategy(&mut rng(seed), &fam.outcomes());
        let coincidence: Vec<f64> = strat.rows().iter().map(|r| coincidence_index(r).unwrap()).collect();
        let (tr, tr2) = trace_moments_closed_form(&view, &coincidence).unwrap();
        let y = response_operator(&fam, &strat).unwrap();
        prop_assert!((tr - linalg::real_trace(&y)).abs() < 1e-10);
        prop_assert!((tr2 - linalg::trace_product(&y, &y).re).abs() < 1e-10);
    }

    #[test]
    fn exact_value_never_exceeds_xi_plus(choice in 0usize..9, mask in 1u32..64) {
        let fam = family(choice);
        let sel = selection_from_mask(mask, fam.n_settings());
        let view = infer_params(&fam, 1e-9).unwrap().view.restrict(&sel).unwrap();
        let exact = exact_lhs_value(&fam.restrict(&sel).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert!(exact.value <= xi_bounds(&view).plus + 1e-9);
    }

    #[test]
    fn refining_a_selection_never_lowers_either_value(choice in 0usize..9, inner in 1u32..64, extra in 0u32..64) {
        let fam = family(choice);
        let n = fam.n_settings();
        let small = selection_from_mask(inner, n);
        let big_mask = small.indices().iter().fold(extra, |m, &i| m | (1 << i));
        let big = selection_from_mask(big_mask, n);
        let view = infer_params(&fam, 1e-9).unwrap().view;
        let lhs = |sel: &SettingSelection| exact_lhs_value(&fam.restrict(sel).unwrap(), DEFAULT_ENUMERATION_CAP).unwrap().value;
        prop_assert!(lhs(&small) <= lhs(&big) + 1e-12);
        let sq = |sel: &SettingSelection| quantum_value(&view.restrict(sel).unwrap());
        prop_assert!(sq(&small) <= sq(&big) + 1e-12);
    }

    #[test]
    fn stochastic_strategies_do_not_beat_enumeration(choice in 0usize..9, seed in any::<u64>()) {
        let fam = family(choice);
        let exact = exact_lhs_value(&fam, DEFAULT_ENUMERATION_CAP).unwrap();
        let strat = sampling::random_strategy(&mut rng(seed), &fam.outcomes());
        let y = response_operator(&fam, &strat).unwrap();
        prop_assert!(linalg::max_eigenvalue(&y) <= exact.value + 1e-9);
    }

    #[test]
    fn lhs_assemblages_respect_the_bound(choice in 0usize..9, seed in any::<u64>(), hidden in 1usize..5) {
        let fam = family(choice);
        let mut r = rng(seed);
        let q = sampling::random_distribution(&mut r, hidden);
        let strategies: Vec<LhsStrategy> = (0..hidden).map(|_| sampling::random_strategy(&mut r, &fam.outcomes())).collect();
        let states: Vec<CMatrix> = (0..hidden).map(|_| sampling::random_density_matrix(&mut r, fam.d())).collect();
        let sigma = Assemblage::from_lhs_model(&q, &strategies, &states).unwrap();
        let value = SteeringFunctional::from_family(&fam).evaluate(&sigma).unwrap();
        let exact = exact_lhs_value(&fam, DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert!(value <= exact.value + 1e-8);
    }

    #[test]
    fn quantum_assemblages_are_nonsignaling(choice in 0usize..9, seed in any::<u64>(), d_b in 1usize..4) {
        let fam = family(choice);
        let rho = sampling::random_density_matrix(&mut rng(seed), fam.d() * d_b);
        let sigma = assemblage_from_state(&rho, &fam).unwrap();
        prop_assert!(sigma.nonsignaling_residual() < 1e-8);
        // Per-setting traces equal γ_α.
        for (t, g) in sigma.setting_traces().iter().zip(fam.weights()) {
            prop_assert!((t - g).abs() < 1e-10);
        }
    }
}

#[test]
fn heuristic_is_a_lower_bound_and_finds_small_optima() {
    for choice in 0..9 {
        let fam = family(choice);
        let exact = exact_lhs_value(&fam, DEFAULT_ENUMERATION_CAP).unwrap();
        let lower = heuristic_lhs_value(&fam, 32, 11);
        assert!(!lower.exact);
        assert!(lower.value <= exact.value + 1e-12);
        assert!(lower.value >= exact.value - 1e-9, "choice {choice}: {} vs {}", lower.value, exact.value);
    }
}

#[test]
fn trivial_probe_reaches_the_quantum_value() {
    for choice in 0..9 {
        let fam = family(choice);
        let d = fam.d();
        let probe: Vec<Vec<CMatrix>> =
            fam.outcomes().iter().map(|&m| vec![linalg::identity(d).scale(1.0 / d as f64); m]).collect();
        let sigma = Assemblage::unnormalized(d, probe).unwrap();
        let value = SteeringFunctional::from_family(&fam).evaluate(&sigma).unwrap();
        let view = infer_params(&fam, 1e-9).unwrap().view;
        assert!((value - quantum_value(&view)).abs() < 1e-12);
    }
}

#[test]
fn product_state_assemblage_does_not_violate() {
    let mut r = rng(21);
    for choice in 0..9 {
        let fam = family(choice);
        let rho_a = sampling::random_density_matrix(&mut r, fam.d());
        let rho_b = sampling::random_density_matrix(&mut r, fam.d());
        let sigma = assemblage_from_state(&linalg::kron(&rho_a, &rho_b), &fam).unwrap();
        let value = SteeringFunctional::from_family(&fam).evaluate(&sigma).unwrap();
        let exact = exact_lhs_value(&fam, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(value <= exact.value + 1e-10);
    }
}
