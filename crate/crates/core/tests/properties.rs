//! Randomized invariant checks across the library: canonical form, weight
//! accounting, genetic operators, file round trips, and the generation
//! size controller.

use mapsolve::heuristics::by_name;
use mapsolve::instance::{
    make_instance, parse_instance, render_descriptor, Family, FamilyKind,
    InstanceDescriptor, InstanceSource,
};
use mapsolve::memetic::{
    crossover, next_gen_size, perturb, round_gen_size, swap_count,
};
use mapsolve::model::{
    assignment_weight, assignments_equal, canonicalize, ensure_feasible,
    write_solution, read_solution, Assignment, ProblemShape, Vector, WeightOracle,
};
use mapsolve::rng::Prng;
use proptest::prelude::*;

fn shape(s: usize, n: usize) -> ProblemShape {
    ProblemShape::new(s, n).unwrap()
}

fn arb_shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=6)
}

/// Canonical random assignment: identity first column, shuffled columns
/// for the other dimensions.
fn arb_assignment(s: usize, n: usize) -> impl Strategy<Value = Assignment> {
    proptest::collection::vec(
        Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle(),
        s - 1,
    )
    .prop_map(move |cols| {
        let vectors = (0..n)
            .map(|i| {
                let mut c = Vec::with_capacity(s);
                c.push((i + 1) as u32);
                for col in &cols {
                    c.push(col[i]);
                }
                Vector::new(c)
            })
            .collect();
        Assignment::new(vectors)
    })
}

fn arb_scrambled(s: usize, n: usize) -> impl Strategy<Value = Assignment> {
    arb_assignment(s, n)
        .prop_map(Assignment::into_vectors)
        .prop_shuffle()
        .prop_map(Assignment::new)
}

fn cc_oracle(s: usize, n: usize, index: u32) -> impl WeightOracle {
    let desc = InstanceDescriptor::new(
        Family::new(FamilyKind::Cc, false),
        shape(s, n),
        index,
    )
    .unwrap();
    make_instance(&desc)
}

proptest! {
    #[test]
    fn canonicalization_sorts_without_changing_the_set(
        (s, n, a) in arb_shape().prop_flat_map(|(s, n)| {
            arb_scrambled(s, n).prop_map(move |a| (s, n, a))
        })
    ) {
        let c = canonicalize(&a).unwrap();
        prop_assert!(c.is_canonical());
        prop_assert!(assignments_equal(&a, &c).unwrap());
        prop_assert_eq!(canonicalize(&c).unwrap(), c.clone());
        ensure_feasible(&c, shape(s, n)).unwrap();
    }

    #[test]
    fn weight_ignores_vector_order(
        (s, n, a) in arb_shape().prop_flat_map(|(s, n)| {
            arb_scrambled(s, n).prop_map(move |a| (s, n, a))
        }),
        index in 1u32..=10,
    ) {
        // integer-valued weights, so the sums match exactly in any order
        let oracle = cc_oracle(s, n, index);
        let c = canonicalize(&a).unwrap();
        prop_assert_eq!(
            assignment_weight(&oracle, &a).unwrap(),
            assignment_weight(&oracle, &c).unwrap()
        );
    }

    #[test]
    fn perturbation_preserves_feasibility(
        (s, n, a) in arb_shape().prop_flat_map(|(s, n)| {
            arb_assignment(s, n).prop_map(move |a| (s, n, a))
        }),
        strength in 0.05f64..=1.0,
        seed in any::<u64>(),
    ) {
        let mut rng = Prng::new(seed);
        let b = perturb(&a, strength, &mut rng);
        ensure_feasible(&b, shape(s, n)).unwrap();
        prop_assert!(b.is_canonical());
        let changed = a
            .vectors()
            .iter()
            .zip(b.vectors())
            .filter(|(x, y)| x != y)
            .count();
        prop_assert!(changed <= 2 * swap_count(n, strength));
    }

    #[test]
    fn crossover_children_are_feasible_and_keep_commons(
        (s, n, x, y) in arb_shape().prop_flat_map(|(s, n)| {
            (arb_assignment(s, n), arb_assignment(s, n))
                .prop_map(move |(x, y)| (s, n, x, y))
        }),
        seed in any::<u64>(),
    ) {
        let mut rng = Prng::new(seed);
        let (a, b) = crossover(&x, &y, 0.8, &mut rng).unwrap();
        for child in [&a, &b] {
            ensure_feasible(child, shape(s, n)).unwrap();
            prop_assert!(child.is_canonical());
        }
        for j in 0..n {
            if x.vectors()[j] == y.vectors()[j] {
                let common = &x.vectors()[j];
                prop_assert!(a.vectors().contains(common));
                prop_assert!(b.vectors().contains(common));
            }
        }
    }

    #[test]
    fn size_controller_stays_within_the_growth_clamp(
        m in 1.0f64..500.0,
        total in 0.1f64..100.0,
        elapsed in 0.0f64..150.0,
        delta in 0.0f64..5.0,
        horizon in 1u32..100,
        index in 1u32..150,
        growth in 1.05f64..2.0,
    ) {
        let next = next_gen_size(m, total, elapsed, delta, horizon, index, growth);
        prop_assert!(next >= m / growth - 1e-9);
        prop_assert!(next <= m * growth + 1e-9);
    }

    #[test]
    fn size_rounding_clamps_or_keeps_the_child_count_even(
        m in 0.0f64..200.0,
        prev in 0usize..200,
    ) {
        let r = round_gen_size(m, prev, 3.0);
        prop_assert!(r >= 4);
        let children = 3 * r as i64 - prev as i64;
        prop_assert!(children.rem_euclid(2) == 0 || r == 4);
    }

    #[test]
    fn descriptor_text_round_trips(
        pick in 0usize..6,
        (s, n) in arb_shape(),
        seed in any::<u64>(),
    ) {
        let family: Family =
            ["cc", "ccp", "cq", "cqp", "sr", "srp"][pick].parse().unwrap();
        let desc = InstanceDescriptor::with_seed(family, shape(s, n), seed);
        match parse_instance(&render_descriptor(&desc)).unwrap() {
            InstanceSource::Descriptor(back) => prop_assert_eq!(back, desc),
            other => prop_assert!(false, "expected a descriptor, got {:?}", other),
        }
    }

    #[test]
    fn solution_files_round_trip_bit_exactly(
        (s, n, a) in arb_shape().prop_flat_map(|(s, n)| {
            arb_assignment(s, n).prop_map(move |a| (s, n, a))
        }),
        weight in 0.0f64..1e9,
    ) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("solution.txt");
        write_solution(&path, &a, weight).unwrap();
        let (got_shape, got_a, got_w) = read_solution(&path).unwrap();
        prop_assert_eq!(got_shape, shape(s, n));
        prop_assert_eq!(got_a, a);
        prop_assert_eq!(got_w, weight);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn local_searches_never_worsen_a_feasible_start(
        (s, n, start) in (2usize..=4, 3usize..=6).prop_flat_map(|(s, n)| {
            arb_assignment(s, n).prop_map(move |a| (s, n, a))
        }),
        index in 1u32..=10,
    ) {
        let oracle = cc_oracle(s, n, index);
        let before = assignment_weight(&oracle, &start).unwrap();
        for name in mapsolve::heuristics::LOCAL_SEARCH_NAMES {
            let ls = by_name(name).unwrap();
            let out = ls.improve(&oracle, &start).unwrap();
            ensure_feasible(&out, shape(s, n)).unwrap();
            prop_assert!(out.is_canonical(), "{} output not canonical", name);
            let after = assignment_weight(&oracle, &out).unwrap();
            prop_assert!(after <= before, "{} worsened {} -> {}", name, before, after);
        }
    }
}
