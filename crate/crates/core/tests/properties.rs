use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specball_core::chart::{from_spectral, to_spectral};
use specball_core::checks::{ball_sample, random_word};
use specball_core::coeff::ExactComplex;
use specball_core::decompose::{random_orthogonal_field, realize};
use specball_core::field::{lie_bracket, VectorField};
use specball_core::poly::{EuclidPoly, Monomial, Poly};

fn coeff() -> impl Strategy<Value = ExactComplex> {
    (-6i64..=6, 1i64..=4, -2i64..=2).prop_map(|(n, d, im)| {
        &ExactComplex::from_frac(n, d) + &(&ExactComplex::i() * &ExactComplex::from_int(im))
    })
}

fn euclid(max_exp: i32, max_terms: usize) -> impl Strategy<Value = EuclidPoly> {
    prop::collection::vec((prop::array::uniform4(0..=max_exp), coeff()), 0..=max_terms).prop_map(|ts| {
        ts.into_iter().fold(Poly::zero(), |acc, (e, c)| &acc + &Poly::term(Monomial::from_slice(&e), c))
    })
}

fn field(max_exp: i32) -> impl Strategy<Value = VectorField> {
    prop::array::uniform4(euclid(max_exp, 3)).prop_map(|[a, b, c, d]| VectorField::new(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chart_round_trip(q in euclid(3, 6)) {
        prop_assert_eq!(from_spectral(&to_spectral(&q)).unwrap(), q);
    }

    #[test]
    fn chart_is_a_ring_morphism(p in euclid(2, 4), q in euclid(2, 4)) {
        prop_assert_eq!(to_spectral(&(&p + &q)), &to_spectral(&p) + &to_spectral(&q));
        prop_assert_eq!(to_spectral(&(&p * &q)), &to_spectral(&p) * &to_spectral(&q));
    }

    #[test]
    fn fields_are_derivations(v in field(2), p in euclid(2, 3), q in euclid(2, 3)) {
        prop_assert_eq!(v.apply(&(&p * &q)), &(&v.apply(&p) * &q) + &(&p * &v.apply(&q)));
    }

    #[test]
    fn bracket_is_antisymmetric(v in field(2), w in field(2)) {
        prop_assert_eq!(lie_bracket(&v, &w), -&lie_bracket(&w, &v));
    }

    #[test]
    fn bracket_acts_as_commutator(v in field(2), w in field(2), q in euclid(2, 3)) {
        // [V,W] q = W(V q) - V(W q) with the library convention [V,W]_i = V(w_i) - W(v_i)
        prop_assert_eq!(lie_bracket(&v, &w).apply(&q), &v.apply(&w.apply(&q)) - &w.apply(&v.apply(&q)));
    }

    #[test]
    fn jacobi(u in field(1), v in field(1), w in field(1)) {
        let s = &(&lie_bracket(&u, &lie_bracket(&v, &w)) + &lie_bracket(&v, &lie_bracket(&w, &u)))
            + &lie_bracket(&w, &lie_bracket(&u, &v));
        prop_assert!(s.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn orthogonality_is_bracket_stable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (v, _) = random_orthogonal_field(&mut rng, 3, 2);
        let (w, _) = random_orthogonal_field(&mut rng, 3, 2);
        prop_assert!(v.is_orthogonal() && w.is_orthogonal());
        prop_assert!(lie_bracket(&v, &w).is_orthogonal());
    }

    #[test]
    fn divergence_charts_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (v, terms) = random_orthogonal_field(&mut rng, 4, 3);
        prop_assert_eq!(to_spectral(&v.divergence()), v.divergence_spectral().unwrap());
        for t in &terms {
            let f = realize(t);
            prop_assert_eq!(to_spectral(&f.divergence()), f.divergence_spectral().unwrap());
        }
    }

    #[test]
    fn word_times_inverse_is_identity(seed in any::<u64>(), mobius in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = ball_sample(&mut rng, 0.9);
        let w = random_word(&mut rng, 20, mobius);
        let back = w.inverse().apply(&w.apply(&m).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&m) <= 1e-10, "{}", back.max_abs_diff(&m));
    }
}
