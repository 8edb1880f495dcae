mod common;

use std::collections::BTreeSet;

use common::{label_concepts, random_records, transitive_reduction, Dense};
use proptest::prelude::*;
use pvfca::context::reference_fixture;
use pvfca::{covering_edges, enumerate_concepts, is_concept, leq, FormalContext};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn records_strategy() -> impl Strategy<Value = Vec<pvfca::CaseReport>> {
    (0usize..=10, 0usize..=12, 0.1f64..0.9, any::<u64>()).prop_map(|(n, m, density, seed)| {
        random_records(&mut ChaCha8Rng::seed_from_u64(seed), n, m, density)
    })
}

#[test]
fn fixture_matches_powerset_oracle() {
    let recs = reference_fixture();
    let ctx = FormalContext::ingest(&recs).unwrap();
    let expected = Dense::from_records(&recs).powerset_concepts();
    let cs = enumerate_concepts(&ctx, 0);
    assert_eq!(label_concepts(&ctx, &cs), expected);
    assert_eq!(cs.len(), expected.len());
}

#[test]
fn fixture_support_pruning_matches_filtered_oracle() {
    let recs = reference_fixture();
    let ctx = FormalContext::ingest(&recs).unwrap();
    let expected: BTreeSet<_> = Dense::from_records(&recs)
        .powerset_concepts()
        .into_iter()
        .filter(|(e, _)| e.len() >= 3)
        .collect();
    assert_eq!(label_concepts(&ctx, &enumerate_concepts(&ctx, 3)), expected);
}

#[test]
fn fixture_covering_edges_match_reduction_oracle() {
    let ctx = FormalContext::ingest(&reference_fixture()).unwrap();
    let cs = enumerate_concepts(&ctx, 0);
    let extents: Vec<BTreeSet<String>> = cs
        .iter()
        .map(|c| ctx.object_labels(&c.extent).into_iter().collect())
        .collect();
    let got: BTreeSet<_> = covering_edges(&cs).into_iter().collect();
    assert_eq!(got, transitive_reduction(&extents));
}

#[test]
fn pruned_covering_edges_match_reduction_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let recs = random_records(&mut rng, 10, 12, 0.5);
        let ctx = FormalContext::ingest(&recs).unwrap();
        let cs = enumerate_concepts(&ctx, 2);
        let extents: Vec<BTreeSet<String>> = cs
            .iter()
            .map(|c| ctx.object_labels(&c.extent).into_iter().collect())
            .collect();
        let got: BTreeSet<_> = covering_edges(&cs).into_iter().collect();
        assert_eq!(got, transitive_reduction(&extents));
    }
}

#[test]
fn enumeration_is_input_order_independent() {
    let mut recs = reference_fixture();
    let ctx = FormalContext::ingest(&recs).unwrap();
    let a = enumerate_concepts(&ctx, 0).to_records(&ctx);
    recs.reverse();
    let ctx = FormalContext::ingest(&recs).unwrap();
    let b = enumerate_concepts(&ctx, 0).to_records(&ctx);
    assert_eq!(a, b);
}

#[test]
fn enumeration_identical_across_pool_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let recs = random_records(&mut rng, 60, 40, 0.2);
    let ctx = FormalContext::ingest(&recs).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| enumerate_concepts(&ctx, 0).to_records(&ctx))
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn completeness_against_powerset(recs in records_strategy()) {
        let ctx = FormalContext::ingest(&recs).unwrap();
        let cs = enumerate_concepts(&ctx, 0);
        let expected = Dense::from_records(&recs).powerset_concepts();
        prop_assert_eq!(cs.len(), expected.len());
        prop_assert_eq!(label_concepts(&ctx, &cs), expected);
    }

    #[test]
    fn concepts_are_closed_and_unique(recs in records_strategy(), min_support in 0usize..4) {
        let ctx = FormalContext::ingest(&recs).unwrap();
        let cs = enumerate_concepts(&ctx, min_support);
        let extents: BTreeSet<_> = cs.iter().map(|c| c.extent.to_vec()).collect();
        let intents: BTreeSet<_> = cs.iter().map(|c| c.intent.to_vec()).collect();
        prop_assert_eq!(extents.len(), cs.len());
        prop_assert_eq!(intents.len(), cs.len());
        for c in &cs {
            prop_assert!(is_concept(&ctx, &c.extent, &c.intent).unwrap());
            prop_assert_eq!(c.support, c.extent.count());
            prop_assert!(c.support >= min_support);
        }
        if ctx.n_objects() >= min_support {
            let top = cs.top().unwrap();
            prop_assert_eq!(top.support, ctx.n_objects());
        }
    }

    #[test]
    fn order_agrees_with_intent_reverse_inclusion(recs in records_strategy()) {
        let ctx = FormalContext::ingest(&recs).unwrap();
        let cs = enumerate_concepts(&ctx, 0);
        for c1 in &cs {
            for c2 in &cs {
                prop_assert_eq!(leq(c1, c2), c2.intent.is_subset(&c1.intent));
                if leq(c1, c2) {
                    prop_assert!(c1.support <= c2.support);
                }
                if leq(c1, c2) && leq(c2, c1) {
                    prop_assert_eq!(c1, c2);
                }
            }
        }
    }

    #[test]
    fn pruning_keeps_ancestors(recs in records_strategy(), min_support in 1usize..5) {
        let ctx = FormalContext::ingest(&recs).unwrap();
        let full = enumerate_concepts(&ctx, 0);
        let pruned = enumerate_concepts(&ctx, min_support);
        let expected: Vec<_> = full.iter().filter(|c| c.support >= min_support).cloned().collect();
        prop_assert_eq!(pruned.as_slice(), &expected[..]);
        for kept in &pruned {
            for anc in full.iter().filter(|a| leq(kept, a)) {
                prop_assert!(pruned.by_intent(&anc.intent).is_some());
            }
        }
    }
}
