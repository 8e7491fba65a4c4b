//! Property tests over randomized instances: unitarity, composition,
//! measurement completeness, branch orthogonality, entropy bounds.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use ioncav_core::analysis::{self, fidelity_two_mode};
use ioncav_core::evolution::{evolve, EvolutionRequest};
use ioncav_core::hamiltonian::{build_effective, EffectiveModel};
use ioncav_core::protocols::measure_internal;
use ioncav_core::space::{HilbertSpec, Internal, StateVector, TwoModeState};
use ioncav_core::targets::{self, Parity};

fn arb_model() -> impl Strategy<Value = EffectiveModel> {
    prop_oneof![
        Just(EffectiveModel::BeamSplitter),
        Just(EffectiveModel::Squeeze),
        Just(EffectiveModel::PhaseGate),
    ]
}

fn arb_state(spec: HilbertSpec) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), spec.dim()).prop_filter_map(
        "norm too small",
        move |pairs| {
            let amps: Vec<C64> = pairs.into_iter().map(|(re, im)| C64::new(re, im)).collect();
            let mut v = StateVector::from_amplitudes(spec, amps).ok()?;
            v.normalize().ok()?;
            Some(v)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_is_unitary_and_composes(
        model in arb_model(),
        omega in 0.2f64..1.2,
        t1 in 0.05f64..0.7,
        t2 in 0.05f64..0.7,
        input in arb_state(HilbertSpec::new(7, 7).unwrap()),
    ) {
        let spec = HilbertSpec::new(7, 7).unwrap();
        let h = build_effective(spec, model, omega).unwrap();
        let whole = evolve(&EvolutionRequest::new(&h, &input, t1 + t2)).unwrap();
        prop_assert!((whole.state.norm() - 1.0).abs() < 1e-10);
        let first = evolve(&EvolutionRequest::new(&h, &input, t1)).unwrap();
        let second = evolve(&EvolutionRequest::new(&h, &first.state, t2)).unwrap();
        let agreement = whole.state.inner(&second.state).unwrap().norm_sqr();
        prop_assert!((agreement - 1.0).abs() < 1e-10);
    }

    #[test]
    fn measurement_is_complete(
        model in arb_model(),
        omega in 0.2f64..1.2,
        t in 0.05f64..1.0,
        input in arb_state(HilbertSpec::new(6, 6).unwrap()),
    ) {
        let spec = HilbertSpec::new(6, 6).unwrap();
        let h = build_effective(spec, model, omega).unwrap();
        let out = evolve(&EvolutionRequest::new(&h, &input, t)).unwrap();
        let pg = measure_internal(&out.state, Internal::G).map(|(p, _)| p).unwrap_or(0.0);
        let pe = measure_internal(&out.state, Internal::E).map(|(p, _)| p).unwrap_or(0.0);
        prop_assert!((pg + pe - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cat_branches_are_orthogonal(
        theta in 0.05f64..1.4,
        n in 1usize..6,
    ) {
        let spec = HilbertSpec::new(8, 8).unwrap();
        let plus = targets::su2_cat(spec, theta, n, Parity::Plus).unwrap();
        let minus = targets::su2_cat(spec, theta, n, Parity::Minus).unwrap();
        prop_assert!(plus.state.inner(&minus.state).unwrap().norm() < 1e-10);
    }

    #[test]
    fn squeezed_cat_branches_are_orthogonal(r in 0.05f64..0.8) {
        let spec = HilbertSpec::new(30, 30).unwrap();
        let plus = targets::squeezed_cat(spec, r, Parity::Plus).unwrap();
        let minus = targets::squeezed_cat(spec, r, Parity::Minus).unwrap();
        prop_assert!(plus.state.inner(&minus.state).unwrap().norm() < 1e-10);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(
        re_a in -0.9f64..0.9,
        im_b in -0.9f64..0.9,
        theta in 0.0f64..1.2,
    ) {
        let spec = HilbertSpec::new(12, 12).unwrap();
        let x = targets::coherent_product(spec, C64::new(re_a, 0.0), C64::new(0.0, im_b)).unwrap();
        let y = targets::su2_coherent_state(spec, C64::new(theta, 0.1), 3).unwrap();
        let fxy = fidelity_two_mode(&x, &y).unwrap().fidelity;
        let fyx = fidelity_two_mode(&y, &x).unwrap().fidelity;
        prop_assert!((fxy - fyx).abs() < 1e-14);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&fxy));
    }

    #[test]
    fn distributions_are_normalized(
        pairs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
    ) {
        let amps: Vec<C64> = pairs.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        let mut s = TwoModeState::from_amplitudes(8, 8, amps).unwrap();
        prop_assume!(s.norm() > 1e-6);
        s.normalize().unwrap();
        for mode in [analysis::BosonMode::A, analysis::BosonMode::B] {
            let d = analysis::mode_distribution(&s, mode);
            prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
        let e = analysis::schmidt_entropy(&s);
        prop_assert!(e >= 0.0 && e <= 3.0 + 1e-9);
    }
}
