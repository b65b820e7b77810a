use bellforge::format::{State, StateFile};
use bellforge_core::states::{random_density, random_pure};
use bellforge_core::{NoiseKind, NoiseModel};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn pure_files_round_trip_exactly(seed in any::<u64>(), label in proptest::option::of("[a-z+ -]{0,12}")) {
        let s = random_pure(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = StateFile::from_pure(&s, label.clone()).to_json();
        let back = StateFile::parse(&text, "t").unwrap();
        prop_assert_eq!(back.label(), label.as_deref());
        prop_assert_eq!(back.to_state().unwrap(), State::Pure(s));
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn mixed_files_round_trip_exactly(seed in any::<u64>(), eps in 0.0f64..0.99) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_pure(&mut rng);
        let rho = random_density(&NoiseModel::new(NoiseKind::Ginibre, eps).unwrap(), &base, &mut rng).unwrap();
        let text = StateFile::from_density(&rho, None).to_json();
        match StateFile::parse(&text, "t").unwrap().to_state().unwrap() {
            State::Mixed(back) => prop_assert_eq!(back.matrix().max_abs_diff(rho.matrix()), 0.0),
            State::Pure(_) => prop_assert!(false, "kind changed"),
        }
    }

    #[test]
    fn any_finite_double_survives_formatting(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let text = bellforge::format::fmt_f64(x);
        prop_assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}
