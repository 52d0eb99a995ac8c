use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quasihopf::classification::{apply_automorphism, build_coproduct, braided_standard, standard_form, Automorphism};
use quasihopf::fusion::{
    k_class, k_class_label, k_class_product, simple_current, singlet_fuse, SingletKind, SingletLabel,
};
use quasihopf::presets::build_cartan;
use quasihopf::quasi::{gauge_twist, verify_all};
use quasihopf::sampling::{random_twist, sample_coproduct_params, value_pool};
use quasihopf::{AlgElem, BetaChoice, CycNum};

fn cyc() -> impl Strategy<Value = CycNum> {
    (prop::array::uniform4(-6i64..=6), 1i64..=4).prop_map(|(n, d)| {
        (0..4).map(|k| CycNum::zeta_pow(k as i64) * CycNum::frac(n[k], d).unwrap()).sum()
    })
}

fn beta() -> impl Strategy<Value = BetaChoice> {
    prop::sample::select(vec![1u8, 3, 5, 7]).prop_map(|k| BetaChoice::new(k).unwrap())
}

proptest! {
    #[test]
    fn field_ring_laws(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn field_inverse(a in cyc()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert!(!CycNum::from_rational(&a.norm()).is_zero());
    }

    #[test]
    fn galois_action_is_a_ring_map(a in cyc(), b in cyc(), k in prop::sample::select(vec![1i64, 3, 5, 7])) {
        prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
        prop_assert_eq!((&a + &b).galois(k), &a.galois(k) + &b.galois(k));
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn display_parses_back(a in cyc()) {
        prop_assert_eq!(a.to_string().parse::<CycNum>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<CycNum>(&json).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cartan_axioms_survive_twists(seed in any::<u64>(), b in beta()) {
        let q = build_cartan(b).quasi_bialgebra();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_twist(&mut rng, &q, 4);
        let twisted = gauge_twist(&q, &t);
        prop_assert!(verify_all(&twisted).iter().all(|r| r.passed()));
        let back = gauge_twist(&twisted, &t.inverse());
        prop_assert_eq!(back.coproduct(), q.coproduct());
        prop_assert_eq!(back.phi(), q.phi());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn standard_axioms_survive_twists(seed in any::<u64>()) {
        let q = braided_standard(&CycNum::i(), &CycNum::one(), BetaChoice::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_twist(&mut rng, &q, 3);
        let reports = verify_all(&gauge_twist(&q, &t));
        prop_assert_eq!(reports.len(), 7);
        prop_assert!(reports.iter().all(|r| r.passed()));
    }

    #[test]
    fn automorphisms_round_trip(x in prop::array::uniform3(prop::sample::select(value_pool()))) {
        let phi = Automorphism::new([CycNum::one(), x[0].clone(), x[1].clone(), x[2].clone()]).unwrap();
        for i in 0..16 {
            let e = AlgElem::basis([i]);
            prop_assert_eq!(phi.apply_inverse(&phi.apply(&e)), e);
        }
    }

    #[test]
    fn sampled_coproducts_normalize(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample_coproduct_params(&mut rng);
        let q = build_coproduct(&p, BetaChoice::default()).unwrap();
        prop_assert!(verify_all(&q).iter().all(|r| r.passed()));
        let sf = standard_form(&p, BetaChoice::default()).unwrap();
        prop_assert_eq!(sf.params.d, p.d());
        let phi = Automorphism::new(sf.x.clone()).unwrap();
        prop_assert!(verify_all(&apply_automorphism(&q, &phi)).iter().all(|r| r.passed()));
    }
}

fn singlet(p: u32) -> impl Strategy<Value = SingletLabel> {
    let kinds = vec![SingletKind::M, SingletKind::F, SingletKind::Fbar, SingletKind::P];
    (prop::sample::select(kinds), -4i64..=4, 1..=p).prop_map(move |(k, r, s)| SingletLabel::new(k, r, s, p).unwrap())
}

fn singlet_pair() -> impl Strategy<Value = (u32, SingletLabel, SingletLabel, SingletLabel)> {
    (2u32..=4).prop_flat_map(|p| (Just(p), singlet(p), singlet(p), singlet(p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn class_product_is_commutative_and_associative((p, a, b, c) in singlet_pair()) {
        let (ka, kb, kc) = (k_class_label(&a, p), k_class_label(&b, p), k_class_label(&c, p));
        prop_assert_eq!(k_class_product(&ka, &kb, p), k_class_product(&kb, &ka, p));
        prop_assert_eq!(
            k_class_product(&k_class_product(&ka, &kb, p), &kc, p),
            k_class_product(&ka, &k_class_product(&kb, &kc, p), p)
        );
    }

    #[test]
    fn fusion_lifts_the_class_product((p, a, b, _c) in singlet_pair()) {
        let Ok(ab) = singlet_fuse(&a, &b, p) else { return Ok(()) };
        let ba = singlet_fuse(&b, &a, p).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(k_class(&ab, p), k_class_product(&k_class_label(&a, p), &k_class_label(&b, p), p));
        if a.is_projective(p) || b.is_projective(p) {
            prop_assert!(ab.iter().all(|(l, _)| l.is_projective(p)), "{} x {} = {}", a, b, ab);
        }
    }

    #[test]
    fn simple_currents_are_invertible((p, a, _b, _c) in singlet_pair(), n in -5i64..=5) {
        prop_assert_eq!(simple_current(-n, &simple_current(n, &a)), a);
        let m = SingletLabel::m(n + 1, 1, p).unwrap();
        let prod = singlet_fuse(&m, &a, p).unwrap();
        prop_assert_eq!(prod.iter().count(), 1);
        prop_assert_eq!(prod.iter().next().unwrap().0, &simple_current(n, &a));
    }
}
