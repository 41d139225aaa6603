use num_bigint::BigInt;
use proptest::prelude::*;

use fibfield::fibgen::{fib_coeff, selfreciprocal_scan_with};
use fibfield::fqfunc::{fib_mod_field, func_equal, period_modulus, reduce_mod_xq_minus_x, FqPoly};
use fibfield::{dickson2, dickson_kind, fib_poly_binomial, fib_poly_recurrence, make_field, Exec, FieldCtx};

const SMALL_FIELDS: [(u64, u32); 8] = [(2, 1), (2, 2), (3, 1), (2, 3), (5, 1), (7, 1), (3, 2), (13, 1)];

fn small_field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(SMALL_FIELDS.to_vec()).prop_map(|(p, e)| make_field(p, e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_agree(n in 0i64..=300) {
        let rec = fib_poly_recurrence(n);
        prop_assert_eq!(&rec, &fib_poly_binomial(n).unwrap());
        for k in 0..=n as usize {
            prop_assert_eq!(BigInt::from(fib_coeff(n as u64, k as u64)), rec.coeff(k));
        }
    }

    #[test]
    fn negative_index_sign(n in 1i64..200) {
        let pos = fib_poly_recurrence(n);
        let expected = if n % 2 == 1 { pos.clone() } else { -&pos };
        prop_assert_eq!(fib_poly_recurrence(-n), expected);
    }

    #[test]
    fn second_kind_dickson(n in 0u64..=200, a in -3i64..=3) {
        prop_assert_eq!(dickson2(n, -1), fib_poly_recurrence(n as i64 + 1));
        prop_assert_eq!(dickson_kind(n, 1, a).unwrap(), dickson2(n, a));
    }

    #[test]
    fn even_index_never_self_reciprocal(half in 1i64..400, p in prop::sample::select(vec![0u64, 2, 3, 5, 7, 11])) {
        let f = fib_poly_recurrence(2 * half);
        let modulus = (p > 0).then(|| BigInt::from(p));
        prop_assert!(!f.is_self_reciprocal(modulus.as_ref()).unwrap());
    }

    #[test]
    fn field_reduction_matches_integer_reduction(n in 0u64..150, ctx in small_field()) {
        let over_z = fib_poly_recurrence(n as i64).reduce_mod(ctx.p()).unwrap();
        let coeffs: Vec<_> = over_z.coeffs().iter().map(|c| ctx.from_bigint(c)).collect();
        prop_assert_eq!(fib_mod_field(n, &ctx), FqPoly::new(&ctx, coeffs).unwrap());
    }

    #[test]
    fn congruent_indices_give_equal_functions(n in 1u64..200, shift in 1u64..3, ctx in small_field()) {
        let modulus = period_modulus(&ctx).modulus as u64;
        let a = fib_mod_field(n, &ctx);
        let b = fib_mod_field(n + shift * modulus, &ctx);
        prop_assert!(func_equal(&a, &b).unwrap());
        prop_assert!(func_equal(&a, &reduce_mod_xq_minus_x(&a)).unwrap());
    }

    #[test]
    fn pell_recurrence(n in 2i64..120) {
        let two = BigInt::from(2);
        let at = |m: i64| fib_poly_recurrence(m).eval(&two);
        prop_assert_eq!(at(n), &two * at(n - 1) + at(n - 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn scan_policies_agree(p in prop::sample::select(vec![0u64, 2, 3, 5, 7]), n_max in 1u64..700) {
        let seq = selfreciprocal_scan_with(p, n_max, Exec::Sequential).unwrap();
        let par = selfreciprocal_scan_with(p, n_max, Exec::Parallel).unwrap();
        prop_assert_eq!(seq, par);
    }
}
