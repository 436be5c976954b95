//! Round-trip: the canonical expression string of any kernel-generated
//! polynomial parses back to the identical term map.

use proptest::prelude::*;

use qfrob_cli::parser::parse_expression;
use qfrob_core::sample;
use qfrob_core::{rat, Polynomial, VarSet};

fn poly_strategy(nvars: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    let exps = sample::exponent_vectors(nvars, 0, max_deg);
    let len = exps.len();
    prop::collection::vec(
        prop_oneof![
            // mix integers and non-integer rationals, mostly zero-free
            (-6i64..=6).prop_map(|n| (n, 1i64)),
            ((-6i64..=6), (1i64..=5)).prop_map(|(n, d)| (n, d)),
        ],
        len,
    )
    .prop_map(move |coeffs| {
        let vars = VarSet::coords(nvars);
        Polynomial::from_terms(
            &vars,
            exps.iter()
                .cloned()
                .zip(coeffs.into_iter().map(|(n, d)| rat(n) / rat(d))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn roundtrip_two_vars(p in poly_strategy(2, 4)) {
        let vars = VarSet::coords(2);
        let text = p.to_expr_string();
        let back = parse_expression(&text, &vars).expect("canonical output parses");
        prop_assert_eq!(back, p);
    }

    #[test]
    fn roundtrip_three_vars(p in poly_strategy(3, 3)) {
        let vars = VarSet::coords(3);
        let text = p.to_expr_string();
        let back = parse_expression(&text, &vars).expect("canonical output parses");
        prop_assert_eq!(back, p);
    }
}

#[test]
fn roundtrip_over_extended_variable_sets() {
    // witnesses from pencil checks carry lam variables; their canonical
    // strings must parse back over the same set
    let ext = VarSet::coords(2).extended(&["lam1", "lam2"]);
    let mut rng = sample::rng(99);
    for _ in 0..20 {
        let p = sample::random_polynomial(&mut rng, &ext, 2, 3);
        let back = parse_expression(&p.to_expr_string(), &ext).unwrap();
        assert_eq!(back, p);
    }
}

#[test]
fn zero_renders_and_parses() {
    let vars = VarSet::coords(2);
    let zero = Polynomial::zero(&vars);
    assert_eq!(
        parse_expression(&zero.to_expr_string(), &vars).unwrap(),
        zero
    );
}
