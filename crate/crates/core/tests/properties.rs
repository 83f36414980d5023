//! Property-based and exhaustive small-size checks of the library invariants.

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use rotkit_core::*;

fn arb_tree(max_n: u32) -> impl Strategy<Value = OrderedBinaryTree> {
    (0..=max_n, any::<u64>()).prop_map(|(n, seed)| OrderedBinaryTree::random(n, seed))
}

fn arb_pair(max_n: u32) -> impl Strategy<Value = (OrderedBinaryTree, OrderedBinaryTree)> {
    (0..=max_n, any::<u64>(), any::<u64>()).prop_map(|(n, a, b)| {
        (
            OrderedBinaryTree::random(n, a),
            OrderedBinaryTree::random(n, b),
        )
    })
}

proptest! {
    #[test]
    fn text_round_trips(t in arb_tree(48)) {
        prop_assert_eq!(&OrderedBinaryTree::parse(&t.to_text()).unwrap(), &t);
        prop_assert_eq!(&OrderedBinaryTree::parse(&t.to_text_labeled()).unwrap(), &t);
    }

    #[test]
    fn code_round_trips(t in arb_tree(80)) {
        prop_assert_eq!(&t.canonical_code().decode().unwrap(), &t);
        prop_assert_eq!(t.canonical_code().bit_len(), 2 * t.internal_count() + 1);
    }

    #[test]
    fn inverse_rotation_restores_tree((t, pick) in (arb_tree(24), any::<prop::sample::Index>())) {
        let neighbors = rotation_neighbors(&t);
        prop_assume!(!neighbors.is_empty());
        let (op, rotated) = &neighbors[pick.index(neighbors.len())];
        prop_assert_ne!(rotated, &t, "no valid rotation is a no-op");
        let inverse = RotationOp::new(op.dir.inverse(), op.path.clone());
        prop_assert_eq!(&rotated.apply_rotation(&inverse).unwrap(), &t);
    }

    #[test]
    fn one_rotation_swaps_exactly_one_interval((t, pick) in (arb_tree(24), any::<prop::sample::Index>())) {
        let neighbors = rotation_neighbors(&t);
        prop_assume!(!neighbors.is_empty());
        let (_, rotated) = &neighbors[pick.index(neighbors.len())];
        let before: BTreeSet<LeafInterval> = edge_intervals(&t).into_iter().collect();
        let after: BTreeSet<LeafInterval> = edge_intervals(rotated).into_iter().collect();
        prop_assert_eq!(before.symmetric_difference(&after).count(), 2);
    }

    #[test]
    fn witness_transforms_within_bound((s, t) in arb_pair(64)) {
        let bounds = distance_bounds(&s, &t).unwrap();
        prop_assert_eq!(bounds.upper, 2 * bounds.lower);
        let seq = approx_sequence(&s, &t).unwrap();
        prop_assert!(seq.len() as u32 <= bounds.upper);
        prop_assert_eq!(&s.apply_sequence(&seq).unwrap(), &t);
    }

    #[test]
    fn witness_tokens_round_trip((s, t) in arb_pair(24)) {
        let seq = approx_sequence(&s, &t).unwrap();
        let reparsed = RotationSequence::parse(&seq.to_string()).unwrap();
        prop_assert_eq!(&reparsed, &seq);
    }

    #[test]
    fn split_produces_consistent_pieces((s, t) in arb_pair(40)) {
        let e = common_edges(&s, &t).unwrap().len();
        let pieces = split_at_common_edges(&s, &t).unwrap();
        prop_assert_eq!(pieces.len(), e + 1);
        prop_assert_eq!(
            pieces.iter().map(|p| p.size).sum::<u32>(),
            s.internal_count()
        );
        for piece in &pieces {
            prop_assert_eq!(piece.s_piece.leaf_count(), piece.t_piece.leaf_count());
            prop_assert!(common_edges(&piece.s_piece, &piece.t_piece).unwrap().is_empty());
        }
        prop_assert_eq!(reassemble_pieces(&pieces).unwrap(), (s, t));
    }

    #[test]
    fn comb_reaches_right_caterpillar(t in arb_tree(64)) {
        let seq = comb_sequence(&t, &[]).unwrap();
        prop_assert_eq!(
            seq.len() as u32,
            t.internal_count() - t.right_spine_count()
        );
        let combed = t.apply_sequence(&seq).unwrap();
        prop_assert_eq!(combed, OrderedBinaryTree::comb(t.internal_count(), Side::Right));
    }

    #[test]
    fn bounds_are_symmetric((s, t) in arb_pair(40)) {
        let ab = distance_bounds(&s, &t).unwrap();
        let ba = distance_bounds(&t, &s).unwrap();
        prop_assert_eq!(ab, ba);
    }
}

#[test]
fn encodings_are_bijective_for_small_sizes() {
    for n in 0..=6u32 {
        for tree in enumerate_trees(n).unwrap() {
            assert_eq!(OrderedBinaryTree::parse(&tree.to_text()).unwrap(), tree);
            assert_eq!(
                OrderedBinaryTree::parse(&tree.to_text_labeled()).unwrap(),
                tree
            );
            assert_eq!(tree.canonical_code().decode().unwrap(), tree);
        }
    }
}

#[test]
fn interval_family_determines_the_shape() {
    for n in 0..=6u32 {
        let trees = enumerate_trees(n).unwrap();
        let mut seen: HashMap<Vec<LeafInterval>, usize> = HashMap::new();
        for (i, tree) in trees.iter().enumerate() {
            let mut family = edge_intervals(tree);
            family.sort();
            if let Some(&other) = seen.get(&family) {
                panic!("trees {other} and {i} of size {n} share an interval family");
            }
            seen.insert(family, i);
        }
        // e = n - 1 exactly on the diagonal.
        for (i, s) in trees.iter().enumerate() {
            for (j, t) in trees.iter().enumerate() {
                let e = common_edges(s, t).unwrap().len() as u32;
                if i == j {
                    assert_eq!(e, n.saturating_sub(1));
                } else {
                    assert!(n >= 1 && e < n - 1);
                }
            }
        }
    }
}

#[test]
fn spine_counts_of_combs() {
    for n in 0..=10u32 {
        assert_eq!(OrderedBinaryTree::comb(n, Side::Right).right_spine_count(), n);
        assert_eq!(
            OrderedBinaryTree::comb(n, Side::Left).right_spine_count(),
            n.min(1)
        );
    }
}
