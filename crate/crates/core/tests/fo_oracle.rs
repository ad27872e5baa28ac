use std::collections::BTreeMap;

use localmds_core::fo::{self, Formula};
use localmds_core::generators;
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

fn var() -> impl Strategy<Value = String> {
    prop::sample::select(&VARS[..]).prop_map(String::from)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (var(), var()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (var(), var()).prop_map(|(a, b)| Formula::Lt(a, b)),
        (var(), var()).prop_map(|(a, b)| Formula::Edge(a, b)),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(fo::not),
            prop::collection::vec(inner.clone(), 0..3).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 0..3).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| fo::implies(a, b)),
            (var(), inner.clone()).prop_map(|(v, f)| Formula::Exists(v, Box::new(f))),
            (var(), inner).prop_map(|(v, f)| Formula::Forall(v, Box::new(f))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn optimized_matches_naive(phi in formula(), seed in 0u64..50, n in 3usize..8) {
        let g = generators::random_planar(n, seed).unwrap().graph;
        let env: BTreeMap<String, u32> = VARS
            .iter()
            .enumerate()
            .map(|(i, v)| (v.to_string(), (i as u32 * 2 + seed as u32) % n as u32))
            .collect();
        prop_assert_eq!(fo::eval(&g, &phi, &env).unwrap(), fo::eval_naive(&g, &phi, &env).unwrap());
    }

    #[test]
    fn display_round_trips(phi in formula()) {
        prop_assert_eq!(fo::parse(&phi.to_string()).unwrap(), phi);
    }
}

#[test]
fn phi_d_agrees_with_naive_on_small_graphs() {
    let phi = fo::build_phi_d(1);
    for seed in 0..3 {
        let g = generators::random_planar(7, seed).unwrap().graph;
        for v in g.vertices() {
            let env = BTreeMap::from([("x".to_string(), v)]);
            assert_eq!(fo::eval(&g, &phi, &env).unwrap(), fo::eval_naive(&g, &phi, &env).unwrap());
        }
    }
}

#[test]
fn psi_agrees_with_naive_on_a_path() {
    // Threshold 4 keeps the naive evaluation within reach.
    let psi = fo::build_psi_dprime(1, 1);
    let g = generators::path(4).unwrap().graph;
    for v in g.vertices() {
        let env = BTreeMap::from([("x".to_string(), v)]);
        assert_eq!(fo::eval(&g, &psi, &env).unwrap(), fo::eval_naive(&g, &psi, &env).unwrap());
    }
}

/// Atoms over the given variables.
fn atom_over(vars: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let v = || prop::sample::select(vars).prop_map(String::from);
    prop_oneof![
        (v(), v()).prop_map(|(a, b)| Formula::Edge(a, b)),
        (v(), v()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (v(), v()).prop_map(|(a, b)| fo::not(Formula::Edge(a, b))),
        (v(), v()).prop_map(|(a, b)| Formula::Lt(a, b)),
    ]
}

fn cover_shaped() -> impl Strategy<Value = Formula> {
    (
        atom_over(&["x", "y"]),
        atom_over(&["x", "y", "a"]),
        atom_over(&["x", "y", "b"]),
        atom_over(&["y", "a"]),
        atom_over(&["x", "y"]),
    )
        .prop_map(|(guard, ba, bb, ba2, fixed)| {
            fo::exists(
                &["a", "b"],
                fo::forall(&["y"], fo::implies(guard, Formula::Or(vec![ba, bb, ba2, fixed]))),
            )
        })
}

fn conjunction_shaped() -> impl Strategy<Value = Formula> {
    (
        prop::collection::vec(atom_over(&["x", "a"]), 0..3),
        prop::collection::vec(atom_over(&["x", "b"]), 0..3),
        prop::collection::vec(atom_over(&["x", "a", "b", "c"]), 0..2),
        any::<bool>(),
    )
        .prop_map(|(ua, ub, other, distinct)| {
            let mut parts = ua;
            parts.extend(ub);
            parts.extend(other);
            if distinct {
                for (p, q) in [("a", "b"), ("a", "c"), ("b", "c")] {
                    parts.push(fo::not(fo::eq(p, q)));
                }
            }
            fo::exists(&["a", "b", "c"], Formula::And(parts))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn block_solvers_match_naive(
        phi in prop_oneof![cover_shaped(), conjunction_shaped()],
        seed in 0u64..50,
        n in 3usize..9,
    ) {
        let g = generators::random_planar_sparse(n, seed, 40).unwrap().graph;
        for v in g.vertices() {
            let env = BTreeMap::from([("x".to_string(), v)]);
            prop_assert_eq!(fo::eval(&g, &phi, &env).unwrap(), fo::eval_naive(&g, &phi, &env).unwrap());
        }
    }
}
