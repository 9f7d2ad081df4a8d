use hilbert_core::chain_enum::DEFAULT_BUDGET;
use hilbert_core::exact_arith::Rational;
use hilbert_core::module_analyzer::{
    krull_dimension, reflect_params, validate_params, variety_polynomial, variety_series,
    GeneratorEvaluator, ModuleParams,
};
use hilbert_core::verification::accepted_points;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = ModuleParams> {
    let pts = accepted_points(5, 2);
    (0..pts.len()).prop_map(move |i| pts[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_agrees_with_polynomial_past_n(p in point(), k in 0i64..12) {
        let gf = variety_series(&p).unwrap();
        let poly = variety_polynomial(&p).unwrap();
        let k = p.n + k;
        prop_assert_eq!(Rational::from_integer(gf.coefficient(k as u64)), poly.eval_int(k));
    }

    #[test]
    fn dimension_is_pole_order(p in point()) {
        let d = krull_dimension(&p).unwrap();
        prop_assert_eq!(variety_series(&p).unwrap().pole_order(), d);
        prop_assert_eq!(variety_polynomial(&p).unwrap().degree(), Some(d as usize - 1));
    }

    #[test]
    fn reflection_preserves_generator_counts(p in point(), k in 0i64..5) {
        prop_assume!(p.n2 < p.n);
        let q = reflect_params(&p);
        prop_assert!(validate_params(&q).is_accepted());
        let a = GeneratorEvaluator::new(&p, DEFAULT_BUDGET).unwrap();
        let b = GeneratorEvaluator::new(&q, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(a.value(k), b.value(k));
    }

    #[test]
    fn generator_dominates_variety(p in point(), k in 0i64..16) {
        let e = GeneratorEvaluator::new(&p, DEFAULT_BUDGET).unwrap();
        let k = p.n + k;
        prop_assert!(Rational::from_integer(e.value(k)) >= variety_polynomial(&p).unwrap().eval_int(k));
    }
}
