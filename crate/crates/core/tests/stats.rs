mod common;

use common::{prr_oracle, random_records, yates_oracle, Dense};
use proptest::prelude::*;
use pvfca::{
    chi_square, contingency_from_concept, enumerate_concepts, prr, select_strip, Chi2Correction,
    ContingencyMode, ContingencyTable, FormalContext,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn yates_matches_closed_form_on_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let [a, b, c, d] = [(); 4].map(|_| rng.gen_range(1..500u64));
        let got = chi_square(&ContingencyTable::new(a, b, c, d), Chi2Correction::Yates);
        let want = yates_oracle(a, b, c, d);
        let tol = 1e-9 * want.abs().max(1e-300);
        assert!((got - want).abs() <= tol || got == want, "{a} {b} {c} {d}: {got} vs {want}");
        let p = prr(&ContingencyTable::new(a, b, c, d)).unwrap();
        assert!((p - prr_oracle(a, b, c, d)).abs() <= 1e-12 * p);
    }
}

proptest! {
    #[test]
    fn prr_scale_invariant(a in 1u64..200, b in 0u64..200, c in 1u64..200, d in 0u64..200, k in 2u64..50) {
        let base = prr(&ContingencyTable::new(a, b, c, d)).unwrap();
        let scaled = prr(&ContingencyTable::new(a * k, b * k, c * k, d * k)).unwrap();
        prop_assert!((base - scaled).abs() <= 1e-12 * base);
    }

    #[test]
    fn chi_square_row_swap_symmetric(a in 0u64..300, b in 0u64..300, c in 0u64..300, d in 0u64..300) {
        for corr in [Chi2Correction::Yates, Chi2Correction::Pearson] {
            let x = chi_square(&ContingencyTable::new(a, b, c, d), corr);
            let y = chi_square(&ContingencyTable::new(c, d, a, b), corr);
            prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0));
            prop_assert!(x >= 0.0);
        }
    }

    #[test]
    fn yates_never_exceeds_pearson(a in 0u64..300, b in 0u64..300, c in 0u64..300, d in 0u64..300) {
        let t = ContingencyTable::new(a, b, c, d);
        prop_assert!(chi_square(&t, Chi2Correction::Yates) <= chi_square(&t, Chi2Correction::Pearson) + 1e-9);
    }

    #[test]
    fn contingency_marginals(n in 1usize..=10, m in 3usize..=12, density in 0.2f64..0.9, seed in any::<u64>()) {
        let recs = random_records(&mut ChaCha8Rng::seed_from_u64(seed), n, m, density);
        let ctx = FormalContext::ingest(&recs).unwrap();
        let dense = Dense::from_records(&recs);
        let strip = select_strip(&ctx, &enumerate_concepts(&ctx, 0), 1);
        for c in &strip {
            let t = contingency_from_concept(&ctx, c, ContingencyMode::Conjunction).unwrap();
            prop_assert_eq!(t.n(), ctx.n_objects() as u64);
            let intent = ctx.attribute_labels(&c.intent);
            let of_kind = |k: char| -> Vec<usize> {
                intent.iter().map(|l| dense.index_of(l)).filter(|&i| dense.kinds[i] == k).collect()
            };
            let (drugs, events, demo) = (of_kind('d'), of_kind('e'), of_kind('g'));
            let exposed = dense.count_with(|r| drugs.iter().all(|&i| r[i]));
            let evented = dense.count_with(|r| events.iter().all(|&i| r[i]));
            let both = dense.count_with(|r| drugs.iter().chain(&events).all(|&i| r[i]));
            prop_assert_eq!(t.a + t.b, exposed);
            prop_assert_eq!(t.a + t.c, evented);
            prop_assert_eq!(t.a, both);
            prop_assert!(t.a >= c.support as u64);
            if demo.is_empty() {
                prop_assert_eq!(t.a, c.support as u64);
            }
            let e = contingency_from_concept(&ctx, c, ContingencyMode::Extent).unwrap();
            prop_assert_eq!(e.a, c.support as u64);
            prop_assert_eq!(e.n(), ctx.n_objects() as u64);
            prop_assert_eq!(e.a + e.c, evented);
        }
    }
}
