mod common;

use fqdyn_core::dynamics::{
    check_ih_bijection, check_invariance, compute_bounds, lemma_period_check, per_n_locus, quotient_orbits,
    theorem_a_residual, theorem_b_residual,
};
use fqdyn_core::field::{build_field, embed_subfield, DEFAULT_FIELD_CAP};
use fqdyn_core::geometry::build_abstract;
use fqdyn_core::group::{all_subgroups, close_group, DEFAULT_CLOSURE_BOUND};
use fqdyn_core::harness::{klein_four, random_model, symmetric_s3};
use fqdyn_core::relations::{check_relation, relation_basis, IdempotentRelation};
use fqdyn_core::zeta::{newton_recurrence_holds, zeta_series, TruncatedSeries};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIELDS: [(u64, u32); 6] = [(2, 1), (2, 3), (2, 4), (3, 2), (5, 1), (7, 2)];

fn series(coeffs: Vec<(i64, i64)>, c0: i64) -> TruncatedSeries {
    let n = coeffs.len();
    let mut c = vec![BigRational::from_integer(BigInt::from(c0))];
    c.extend(coeffs.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())));
    TruncatedSeries::new(c, n)
}

proptest! {
    #[test]
    fn field_axioms(which in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (p, d) = FIELDS[which];
        let f = build_field(p, d, DEFAULT_FIELD_CAP).unwrap();
        let q = f.order();
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.pow(a, q), a);
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        if a != f.zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn embeddings_are_homomorphisms(which in 0usize..3, a in any::<u64>(), b in any::<u64>()) {
        let (p, d, k) = [(2u64, 2u32, 3u32), (3, 1, 4), (2, 1, 5)][which];
        let sub = build_field(p, d, DEFAULT_FIELD_CAP).unwrap();
        let big = build_field(p, d * k, DEFAULT_FIELD_CAP).unwrap();
        let e = embed_subfield(&sub, &big).unwrap();
        let q = sub.order();
        let (a, b) = (sub.element(a % q).unwrap(), sub.element(b % q).unwrap());
        prop_assert_eq!(e.apply(sub.add(a, b)), big.add(e.apply(a), e.apply(b)));
        prop_assert_eq!(e.apply(sub.mul(a, b)), big.mul(e.apply(a), e.apply(b)));
        prop_assert_eq!(e.apply(sub.one()), big.one());
    }

    #[test]
    fn exp_log_round_trip(c in prop::collection::vec((-20i64..20, 1i64..12), 1..12)) {
        let a = series(c.clone(), 1);
        prop_assert_eq!(a.log().unwrap().exp().unwrap(), a);
        let b = series(c, 0);
        prop_assert_eq!(b.exp().unwrap().log().unwrap(), b);
    }

    #[test]
    fn powers_invert(c in prop::collection::vec((-9i64..9, 1i64..6), 1..8), k in -6i64..6) {
        let a = series(c, 1);
        prop_assert!(a.int_pow(k).unwrap().mul(&a.int_pow(-k).unwrap()).unwrap().is_one());
        prop_assert_eq!(
            a.int_pow(k).unwrap().mul(&a).unwrap(),
            a.int_pow(k + 1).unwrap()
        );
    }

    #[test]
    fn zeta_satisfies_newton(counts in prop::collection::vec(0u64..1000, 1..10)) {
        let z = zeta_series(&counts, counts.len());
        prop_assert!(newton_recurrence_holds(&z, &counts));
        prop_assert!(z.coeff(0) == &BigRational::from_integer(1.into()));
    }

    #[test]
    fn basis_combinations_are_relations(x in -5i64..5, y in -5i64..5, z in -5i64..5) {
        let g = symmetric_s3().group;
        let subs = all_subgroups(&g);
        let basis = relation_basis(&g, &subs).unwrap();
        prop_assert_eq!(basis.len(), 3);
        let combo: Vec<i64> = (0..subs.len())
            .map(|i| x * basis[0].coefficients[i] + y * basis[1].coefficients[i] + z * basis[2].coefficients[i])
            .collect();
        prop_assert!(check_relation(&g, &subs, &IdempotentRelation::new(combo)).unwrap());
        for b in &basis {
            let gcd = b.coefficients.iter().fold(0i64, |acc, &v| acc.gcd(&v));
            prop_assert_eq!(gcd, 1);
            prop_assert!(*b.coefficients.iter().find(|&&v| v != 0).unwrap() > 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn harness_models_satisfy_everything(seed in any::<u64>(), s3 in any::<bool>()) {
        let pres = if s3 { symmetric_s3() } else { klein_four() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_model(&mut rng, &pres, 4);
        let mut model = build_abstract(&h.spec).unwrap();
        let g = close_group(&mut model, DEFAULT_CLOSURE_BOUND).unwrap();
        prop_assert_eq!(g.order(), pres.group.order());
        let subs = all_subgroups(&g);
        let basis = relation_basis(&g, &subs).unwrap();
        for rel in &basis {
            for n in 1..=4 {
                prop_assert_eq!(theorem_a_residual(&model, &g, &subs, rel, n, false).unwrap(), 0);
                prop_assert_eq!(theorem_b_residual(&model, &g, &subs, rel, n, false).unwrap(), 0);
            }
        }
        let bounds = compute_bounds(&model, &g, &subs).unwrap();
        let keep = per_n_locus(&model, &bounds.n).unwrap();
        prop_assert!(check_invariance(&model, &keep).all());
        let f = model.f_map().unwrap().to_vec();
        for (x, &k) in keep.iter().enumerate() {
            prop_assert_eq!(k, common::naive_in_per_n(&f, x, &bounds.n));
        }
        for sub in &subs {
            prop_assert!(check_ih_bijection(&model, sub, &bounds.n).unwrap().pass);
            let q = quotient_orbits(&model, sub).unwrap();
            prop_assert!(lemma_period_check(&q, &bounds.m).unwrap());
            for n in 1..=4 {
                prop_assert_eq!(q.rational_count(n).unwrap(), common::naive_rational(&model, sub, n));
                prop_assert_eq!(q.periodic_count(n).unwrap(), common::naive_periodic(&model, sub, n));
            }
        }
    }
}
