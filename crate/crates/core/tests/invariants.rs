use proptest::prelude::*;

use selmat_core::combinat::{all_permutations, dominance_leq, partitions_of, Partition, Permutation};
use selmat_core::jack::{jack_in_monomials, monomial_to_jack, principal_specialization, principal_specialization_gamma};
use selmat_core::weingarten::wg_unitary;
use selmat_core::Rational;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..10_000).prop_map(|(p, q)| Rational::new(p, q))
}

fn positive_kappa() -> impl Strategy<Value = Rational> {
    (1i64..8, 1i64..8).prop_map(|(p, q)| Rational::new(p, q))
}

fn partition(max_weight: u32) -> impl Strategy<Value = Partition> {
    (1..=max_weight).prop_flat_map(|k| {
        let all = partitions_of(k);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn permutation(max_degree: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_degree)
        .prop_flat_map(|k| Just((1..=k).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|images| Permutation::from_images(&images).unwrap())
}

proptest! {
    #[test]
    fn rational_text_round_trips(r in rational()) {
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn rational_serde_round_trips(r in rational()) {
        let text = serde_json::to_string(&r).unwrap();
        let back: Rational = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn partition_text_round_trips(p in partition(12)) {
        let back: Partition = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn partitions_are_weakly_decreasing_with_the_right_weight(k in 1u32..14) {
        for p in partitions_of(k) {
            prop_assert_eq!(p.weight(), k);
            prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(p.parts().iter().all(|&x| x > 0));
        }
    }

    #[test]
    fn permutation_inverse_composes_to_identity(s in permutation(9)) {
        prop_assert!(s.compose(&s.inverse()).is_identity());
        prop_assert!(s.inverse().compose(&s).is_identity());
        prop_assert_eq!(s.inverse().cycle_type(), s.cycle_type());
        prop_assert_eq!(s.cycle_type().weight() as usize, s.degree());
    }

    #[test]
    fn cycle_type_is_a_class_function(s in permutation(7), t_seed in any::<u64>()) {
        let group = all_permutations(s.degree());
        let t = &group[(t_seed % group.len() as u64) as usize];
        let conj = t.compose(&s).compose(&t.inverse());
        prop_assert_eq!(conj.cycle_type(), s.cycle_type());
    }

    #[test]
    fn jack_polynomials_are_monic_and_triangular(lambda in partition(7), kappa in positive_kappa()) {
        let p = jack_in_monomials(&lambda, &kappa).unwrap();
        prop_assert_eq!(p.coeff(&lambda), Rational::one());
        for (mu, c) in p.terms() {
            prop_assert!(!c.is_zero());
            prop_assert!(dominance_leq(mu, &lambda).unwrap(), "{} not below {}", mu, lambda);
        }
    }

    #[test]
    fn monomial_to_jack_inverts_the_expansion(mu in partition(6), kappa in positive_kappa()) {
        let coeffs = monomial_to_jack(&mu, &kappa).unwrap();
        let mut total = selmat_core::jack::SymPoly::zero(mu.weight());
        for (lambda, c) in &coeffs {
            for (nu, d) in jack_in_monomials(lambda, &kappa).unwrap().terms() {
                total.add_term(nu, &(c.clone() * d.clone()));
            }
        }
        prop_assert_eq!(total, selmat_core::jack::SymPoly::monomial(&mu));
    }

    #[test]
    fn principal_specialization_matches_its_product_formula(
        lambda in partition(6),
        kappa in positive_kappa(),
        n in 1u32..9,
    ) {
        let direct = principal_specialization(&lambda, &kappa, n).unwrap();
        let product = principal_specialization_gamma(&lambda, &kappa, n).unwrap();
        prop_assert_eq!(product.as_rational(), Some(&direct));
    }

    #[test]
    fn unitary_weingarten_inverts_the_gram_matrix(k in 1usize..5, extra in 0i64..6) {
        // Sum over the group of Wg(s) z^{cycles(s)} is the identity entry, i.e. 1.
        let z = Rational::integer(k as i64 + extra);
        let mut total = Rational::zero();
        for s in all_permutations(k) {
            let wg = wg_unitary(&s.cycle_type(), &z, None).unwrap();
            total = total + wg * z.pow(s.cycles().len() as i32);
        }
        prop_assert_eq!(total, Rational::one());
    }
}
