use std::f64::consts::PI;

use bellrep::bellops::{
    build_operator, canonical_pairing, verify_bell_operator, AngleSet, PairingSpec, Tail,
};
use bellrep::chsh::{
    analytic_ceiling, canonical_angles, chsh_value, ClosedForm, DenseOracle, TSIRELSON,
};
use bellrep::entanglement::{
    entropy, entropy_closed_squeezed, entropy_tolerance, purity, purity_closed_squeezed,
    purity_tolerance, reduced_density,
};
use bellrep::optim::optimize_angles;
use bellrep::qstate::{maximal_state, skewed_state, squeezed_state, SchmidtState};
use proptest::prelude::*;

fn normalized_state(max_dim: usize) -> impl Strategy<Value = SchmidtState> {
    prop::collection::vec(0.01f64..1.0, 1..=max_dim).prop_map(|raw| {
        let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
        SchmidtState::new(raw.iter().map(|c| c / norm).collect(), 0.0, "prop").unwrap()
    })
}

/// A state together with an arbitrary pairing of its modes.
fn state_and_pairing() -> impl Strategy<Value = (SchmidtState, PairingSpec)> {
    normalized_state(8).prop_flat_map(|state| {
        let dim = state.dim();
        (
            Just(state),
            Just(dim),
            Just((0..dim).collect::<Vec<_>>()).prop_shuffle(),
            0..=dim / 2,
        )
            .prop_map(|(state, dim, modes, p)| {
                let pairs = (0..p).map(|k| (modes[2 * k], modes[2 * k + 1])).collect();
                (state, PairingSpec::new(dim, pairs).unwrap())
            })
    })
}

fn angles() -> impl Strategy<Value = AngleSet> {
    prop::array::uniform4(-PI..PI).prop_map(AngleSet::from)
}

proptest! {
    #[test]
    fn constructors_are_normalized(n in 1usize..20, r in 1e-6f64..=1.0, eta in 0.0f64..0.99, half in 1usize..40) {
        for s in [maximal_state(n).unwrap(), skewed_state(r).unwrap(), squeezed_state(eta, 2 * half).unwrap()] {
            prop_assert!((s.retained_mass() + s.tail_mass() - 1.0).abs() < 1e-12);
            prop_assert!(s.coeffs().iter().all(|&c| c >= 0.0));
        }
    }

    #[test]
    fn squeezed_ratio_and_tail(eta in 0.01f64..0.99, half in 1usize..40) {
        let s = squeezed_state(eta, 2 * half).unwrap();
        for w in s.coeffs().windows(2) {
            if w[0] > 1e-300 && w[1] > 0.0 {
                prop_assert!((w[1] / w[0] - eta).abs() <= 4.0 * f64::EPSILON * eta);
            }
        }
        let bigger = squeezed_state(eta, 2 * half + 2).unwrap();
        prop_assert!(bigger.tail_mass() <= s.tail_mass());
    }

    #[test]
    fn operators_are_dichotomic((_, spec) in state_and_pairing(), angle in -10.0f64..10.0) {
        let op = build_operator(&spec, angle);
        let r = verify_bell_operator(&op);
        prop_assert!(r.hermitian && r.involutive, "{r:?}");
        prop_assert_eq!(r.trace, (spec.dim() - 2 * spec.pair_count()) as f64);
        prop_assert!((op.matrix().trace().re - r.trace).abs() < 1e-12);
    }

    #[test]
    fn oracle_agrees_with_closed_form((state, spec) in state_and_pairing(), a in angles()) {
        let o = chsh_value(&state, &spec, a, &DenseOracle).unwrap();
        let c = chsh_value(&state, &spec, a, &ClosedForm).unwrap();
        prop_assert!((o.value - c.value).abs() < 1e-10);
        prop_assert!(o.imag_residual < 1e-10);
        prop_assert!(o.value.abs() <= TSIRELSON + 1e-9);
        prop_assert!(o.value <= analytic_ceiling(&state, &spec) + 1e-12);
    }

    #[test]
    fn squeezed_truncation_error_is_bounded(eta in 0.0f64..0.95, half in 1usize..16, p in 0usize..16, a in angles()) {
        let cutoff = 2 * half;
        let p = p.min(cutoff / 2);
        let state = squeezed_state(eta, cutoff).unwrap();
        let spec = canonical_pairing(cutoff, p).unwrap()
            .with_tail(if p < cutoff / 2 { Tail::Identity } else { Tail::Truncated });
        let o = chsh_value(&state, &spec, a, &DenseOracle).unwrap().value;
        let c = chsh_value(&state, &spec, a, &ClosedForm).unwrap().value;
        prop_assert!((o - c).abs() < 1e-8 + 4.0 * state.tail_mass());
    }

    #[test]
    fn zero_angles_never_violate((state, spec) in state_and_pairing()) {
        let v = chsh_value(&state, &spec, AngleSet::zero(), &DenseOracle).unwrap().value;
        prop_assert!(v <= 2.0 + 1e-12);
        let balanced = spec.pairs().iter().all(|&(i, j)| (state.coeffs()[i] - state.coeffs()[j]).abs() < 1e-15);
        if balanced {
            prop_assert!((v - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_state_diagnostics((state, _) in state_and_pairing()) {
        let rho = reduced_density(&state);
        let p = purity(&rho);
        prop_assert!(p > 0.0 && p <= 1.0 + 1e-15);
        prop_assert!(entropy(&rho) >= 0.0);
    }

    #[test]
    fn squeezed_closed_forms(eta in 0.05f64..0.95) {
        let cutoff = 64;
        let state = squeezed_state(eta, cutoff).unwrap();
        let rho = reduced_density(&state);
        let tail = state.tail_mass();
        prop_assert!((purity(&rho) - purity_closed_squeezed(eta).unwrap()).abs() < purity_tolerance(tail));
        prop_assert!((entropy(&rho) - entropy_closed_squeezed(eta).unwrap()).abs() < entropy_tolerance(eta, cutoff, tail));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn optimizer_reaches_the_ceiling((state, spec) in state_and_pairing()) {
        let r = optimize_angles(&state, &spec).unwrap();
        let ceiling = analytic_ceiling(&state, &spec);
        prop_assert!(r.best_value <= ceiling + 1e-7);
        prop_assert!((r.best_value - ceiling).abs() < 1e-7, "{} vs {}", r.best_value, ceiling);
        prop_assert!(r.best_value <= TSIRELSON + 1e-9);
    }
}

#[test]
fn chsh_increases_with_pair_count() {
    for n in 2..=9 {
        let s = maximal_state(n).unwrap();
        let values: Vec<f64> = (0..=n / 2)
            .map(|p| {
                chsh_value(
                    &s,
                    &canonical_pairing(n, p).unwrap(),
                    canonical_angles(),
                    &ClosedForm,
                )
                .unwrap()
                .value
            })
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]), "n={n}: {values:?}");
        let top = *values.last().unwrap();
        assert_eq!((top - TSIRELSON).abs() < 1e-12, n % 2 == 0, "n={n}: {top}");
    }
}

#[test]
fn closed_entropy_strictly_increasing() {
    let values: Vec<f64> = (0..100)
        .map(|k| entropy_closed_squeezed(k as f64 / 100.0).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
}
