use genfun_core::qft::{final_distribution, random_hermitian, random_state, Propagator};
use genfun_core::{transition_probability, Epsilon, GenNumber, TransitionProblem};
use proptest::prelude::*;

fn eps() -> Epsilon {
    Epsilon::new(0.05).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_evolution_is_unitary_and_complete(n in 2usize..=32, seed in any::<u64>(), t in prop_oneof![Just(0.1), Just(1.0), Just(10.0)]) {
        let h = random_hermitian(n, seed);
        let psi0 = random_state(n, seed ^ 0x5555).unwrap();
        let psi = Propagator::new(&h).unwrap().evolve(t, &psi0).unwrap();
        prop_assert!((psi.norm() - psi0.norm()).abs() < 1e-10);
        let total: f64 = psi.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quartic_probabilities_stay_in_range(n in 2usize..=24, g in 0.0f64..5.0, t in 0.0f64..5.0, omega in 0.0f64..3.0) {
        let p = TransitionProblem::quartic(n, omega, GenNumber::constant(g), t).unwrap();
        let dist = final_distribution(&p, eps()).unwrap();
        prop_assert!(dist.iter().all(|q| (0.0..=1.0).contains(q)));
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn counterterm_changes_no_probability(shift in -50.0f64..50.0, g in 0.0f64..2.0, t in 0.0f64..3.0) {
        let base = TransitionProblem::quartic(10, 1.0, GenNumber::constant(g), t).unwrap();
        let p0 = transition_probability(&base, eps()).unwrap();
        let p1 = transition_probability(&base.with_counterterm(GenNumber::constant(shift)), eps()).unwrap();
        prop_assert!((p0 - p1).abs() < 1e-12, "{p0} {p1}");
    }

    #[test]
    fn rabi_matches_closed_form(g in 0.01f64..3.0, t in 0.0f64..6.0, n in 2usize..8) {
        let p = TransitionProblem::rabi(g, t, n).unwrap();
        prop_assert!((transition_probability(&p, eps()).unwrap() - (g * t).sin().powi(2)).abs() < 1e-10);
    }
}
