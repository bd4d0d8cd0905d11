//! Property tests for snapshot construction invariants.

use std::collections::HashMap;

use proptest::prelude::*;

use guarnet::{build_snapshot, Enterprise, GuaranteeEdge, Month};

fn month() -> Month {
    Month::new(2008, 7).expect("valid month")
}

fn id_of(i: usize) -> String {
    format!("n{i:03}")
}

/// Enterprises plus a duplicate-free arc list over them, with integer
/// amounts so that merged sums stay exact.
fn arb_network() -> impl Strategy<Value = (Vec<Enterprise>, Vec<GuaranteeEdge>)> {
    (1usize..40).prop_flat_map(|n| {
        let enterprises: Vec<Enterprise> = (0..n)
            .map(|i| Enterprise::new(id_of(i), 1_000.0 + i as f64, 500.0, 100.0, 50.0, i % 7 == 0))
            .collect();
        let arcs = proptest::collection::btree_set((0..n, 0..n), 0..(3 * n).min(120)).prop_map(
            move |pairs| {
                pairs
                    .into_iter()
                    .filter(|(g, d)| g != d)
                    .enumerate()
                    .map(|(k, (g, d))| {
                        GuaranteeEdge::new(id_of(g), id_of(d), (k + 1) as f64, month())
                    })
                    .collect::<Vec<_>>()
            },
        );
        (Just(enterprises), arcs)
    })
}

proptest! {
    /// Forward and reverse adjacency must describe the same arcs, ids must
    /// map back to their indices, and degree totals must match the arc count.
    #[test]
    fn adjacency_views_are_consistent((enterprises, edges) in arb_network()) {
        let snapshot = build_snapshot(month(), enterprises, &edges).expect("valid input");

        prop_assert_eq!(snapshot.edge_count(), edges.len());
        prop_assert_eq!(snapshot.arcs().count(), snapshot.edge_count());

        for i in 0..snapshot.node_count() {
            prop_assert_eq!(snapshot.index_of(snapshot.id(i)), Some(i));
        }

        let mut out_total = 0usize;
        let mut in_total = 0usize;
        for i in 0..snapshot.node_count() {
            out_total += snapshot.out_degree(i);
            in_total += snapshot.in_degree(i);
        }
        prop_assert_eq!(out_total, snapshot.edge_count());
        prop_assert_eq!(in_total, snapshot.edge_count());

        for (g, d, amount) in snapshot.arcs() {
            prop_assert!(snapshot.has_arc(g, d));
            prop_assert!(
                snapshot.debtors_of(g).iter().any(|&(x, a)| x as usize == d && a == amount),
                "arc {g}->{d} missing from the debtor view"
            );
            prop_assert!(
                snapshot.guarantors_of(d).iter().any(|&(x, a)| x as usize == g && a == amount),
                "arc {g}->{d} missing from the guarantor view"
            );
        }
    }

    /// Repeating an arc `k` times must merge into one arc carrying the sum.
    #[test]
    fn duplicate_arcs_merge_by_summing(
        (enterprises, edges) in arb_network(),
        copies in 1usize..5,
    ) {
        let repeated: Vec<GuaranteeEdge> = edges
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.clone(), copies))
            .collect();
        let snapshot = build_snapshot(month(), enterprises, &repeated).expect("valid input");

        prop_assert_eq!(snapshot.edge_count(), edges.len());
        let expected: HashMap<(usize, usize), f64> = edges
            .iter()
            .map(|e| {
                let g = snapshot.index_of(&e.guarantor_id).expect("known id");
                let d = snapshot.index_of(&e.debtor_id).expect("known id");
                ((g, d), e.amount * copies as f64)
            })
            .collect();
        for (g, d, amount) in snapshot.arcs() {
            prop_assert_eq!(expected.get(&(g, d)).copied(), Some(amount));
        }
    }

    /// `YYYY-MM` text survives a round trip for every representable month.
    #[test]
    fn month_text_round_trips(year in 1u32..=9999, m in 1u32..=12) {
        let month = Month::new(year, m).expect("in range");
        let text = month.to_string();
        prop_assert_eq!(text.parse::<Month>().expect("own output parses"), month);
    }
}
