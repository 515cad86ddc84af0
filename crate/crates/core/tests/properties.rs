use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use gapforge::bounds::liminf::Metric;
use gapforge::numeric::decimal::parse_decimal;
use gapforge::recurrence::DEFAULT_BIT_BUDGET;
use gapforge::report::format_sig17;
use gapforge::sequences::expr::{parse_sequence_expr, BinOp, Expr, Literal};
use gapforge::sequences::Table;
use gapforge::xi::{theorem_verdict, xi_record};
use gapforge::{
    iterate_equality, liminf_track, primes_up_to_with, two_over_n_check, AuxSequenceSpec, Builtin, Checkpoints,
    EvalValue, GuardBand, Primes, SieveConfig,
};

fn literal() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..1000).prop_map(|v| v.to_string()),
        (0u32..100, 0u32..1000).prop_map(|(a, b)| format!("{a}.{b:03}")),
    ]
    .prop_map(|text| {
        let value = parse_decimal(&text).unwrap();
        Expr::Number(Literal { text, value })
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::N), literal()];
    leaf.prop_recursive(5, 40, 3, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow)
        ];
        prop_oneof![
            (op, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::Binary {
                op,
                lhs: Box::new(l),
                rhs: Box::new(r),
            }),
            inner.clone().prop_map(|e| Expr::Ln(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Prime(Box::new(e))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::IfEven {
                even: Box::new(a),
                odd: Box::new(b),
            }),
        ]
    })
}

fn rational(num: u64, den: u64) -> EvalValue {
    EvalValue::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_expressions_reparse(e in expr()) {
        let printed = e.to_string();
        prop_assert_eq!(parse_sequence_expr(&printed).unwrap(), e);
    }

    #[test]
    fn sig17_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_sig17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn tables_round_trip(values in prop::collection::btree_map(1u64..10_000, (0i64..1_000_000, 0u32..8), 1..40)) {
        let text: String = values
            .iter()
            .map(|(n, (m, e))| format!("{n},{m}e-{e}\n"))
            .collect();
        let table = Table::parse(&text).unwrap();
        prop_assert_eq!(Table::parse(&table.to_csv()).unwrap(), table);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sieve_ignores_configuration(
        limit in 2u64..300_000,
        segment in prop_oneof![Just(1024u64), 1024u64..70_000],
        workers in 1usize..6,
    ) {
        let reference: Vec<u64> = primes_up_to_with(SieveConfig::new(limit).unwrap())
            .unwrap()
            .map(|(_, p)| p)
            .collect();
        let config = SieveConfig::new(limit)
            .unwrap()
            .with_segment_size(segment)
            .unwrap()
            .with_parallelism(workers)
            .unwrap();
        let other: Vec<(u64, u64)> = primes_up_to_with(config).unwrap().collect();
        prop_assert_eq!(other.len(), reference.len());
        for (i, (n, p)) in other.into_iter().enumerate() {
            prop_assert_eq!(n, i as u64 + 1);
            prop_assert_eq!(p, reference[i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn equality_recurrence_preserves_q(a in 1u64..500, b in 1u64..50, c in 1u64..5000, d in 1u64..50) {
        let run = iterate_equality(
            (rational(a, b), rational(c, d)),
            200,
            &Primes::new(),
            DEFAULT_BIT_BUDGET,
            GuardBand::default(),
        )
        .unwrap();
        let q1 = &run.q_trace[0];
        prop_assert!(run.q_trace.iter().all(|q| q == q1));
        prop_assert!(run.values.iter().all(|v| v.is_positive()));
    }

    #[test]
    fn three_forms_agree_on_rational_tables(values in prop::collection::vec((1u64..10_000, 1u64..64), 40)) {
        let primes = Primes::new();
        let table = Table::from_values(
            values.iter().enumerate().map(|(i, &(m, d))| (i as u64 + 1, BigRational::new(m.into(), d.into()))),
        )
        .unwrap();
        let spec = AuxSequenceSpec::tabulated(table);
        let g = GuardBand::default();
        for n in 1..40 {
            let rec = xi_record(&spec, n, &primes, g).unwrap();
            let theorem = theorem_verdict(&spec, n, &primes, g).unwrap();
            prop_assert!(rec.verdict.exact && rec.ratio_verdict.exact && theorem.exact);
            prop_assert_eq!(rec.verdict.state, rec.ratio_verdict.state);
            prop_assert_eq!(rec.verdict.state, theorem.state);
        }
    }

    #[test]
    fn float_forms_agree_off_the_guard_band(start in 2u64..50_000) {
        let primes = Primes::new();
        let spec = AuxSequenceSpec::Builtin(Builtin::NLogN);
        let g = GuardBand::default();
        for n in start..start + 20 {
            let rec = xi_record(&spec, n, &primes, g).unwrap();
            let theorem = theorem_verdict(&spec, n, &primes, g).unwrap();
            if !rec.verdict.is_indeterminate() && !theorem.is_indeterminate() {
                prop_assert_eq!(rec.verdict.state, theorem.state);
            }
            if !rec.ratio_verdict.is_indeterminate() && !rec.verdict.is_indeterminate() {
                prop_assert_eq!(rec.verdict.state, rec.ratio_verdict.state);
            }
        }
    }

    #[test]
    fn two_over_n_matches_identity_scan(start in 1u64..200_000) {
        let primes = Primes::new();
        let id = AuxSequenceSpec::Builtin(Builtin::IdentityN);
        for n in start..start + 25 {
            let direct = two_over_n_check(n, &primes).unwrap();
            let scanned = xi_record(&id, n, &primes, GuardBand::default()).unwrap().verdict;
            prop_assert_eq!(direct.state, scanned.state);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn running_minimum_is_monotone(n_end in 2u64..40_000, eps in 0.01f64..1.0) {
        let primes = Primes::new();
        for metric in [Metric::GapOverPScaled, Metric::GapOverLogEps(eps), Metric::FiroozbakhtRatio] {
            let r = liminf_track(&metric, n_end, &Checkpoints::PowersOfTwo, &primes, GuardBand::default()).unwrap();
            let mins: Vec<f64> = r.checkpoints.iter().map(|p| p.running_min.unwrap()).collect();
            prop_assert!(mins.windows(2).all(|w| w[1] <= w[0]));
            prop_assert!(r.tracker.argmin.unwrap() <= r.tracker.n_processed);
            prop_assert_eq!(r.tracker.n_processed, n_end);
        }
    }
}
