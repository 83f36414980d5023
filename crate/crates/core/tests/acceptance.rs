//! Acceptance suite. Each test exercises one criterion end to end and prints
//! a single PASS line (visible with `--nocapture`); failures panic with
//! context. Timing-sensitive checks live in `c08`; run the suite with
//! `--test-threads=1` when measuring on a loaded machine.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use rotkit_core::*;

/// All shapes of size `n` plus the full ordered-pair distance matrix,
/// computed by breadth-first search from every source over the explicit
/// rotation graph.
fn distance_matrix(n: u32) -> (Vec<OrderedBinaryTree>, Vec<Vec<u32>>) {
    let trees = enumerate_trees(n).expect("within enumeration bound");
    let index: HashMap<CanonicalCode, usize> = trees
        .iter()
        .enumerate()
        .map(|(i, t)| (t.canonical_code(), i))
        .collect();
    let adjacency: Vec<Vec<usize>> = trees
        .iter()
        .map(|t| {
            rotation_neighbors(t)
                .into_iter()
                .map(|(_, u)| index[&u.canonical_code()])
                .collect()
        })
        .collect();
    let mut matrix = Vec::with_capacity(trees.len());
    for source in 0..trees.len() {
        let mut dist = vec![u32::MAX; trees.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        assert!(dist.iter().all(|&d| d != u32::MAX), "graph is connected");
        matrix.push(dist);
    }
    (trees, matrix)
}

/// Fixed, reproducible seed scheme for random pairs.
fn pair_seed(n: u32, sample: u32, side: u32) -> u64 {
    (u64::from(n) << 40) ^ (u64::from(sample) << 8) ^ u64::from(side)
}

fn random_pair(n: u32, sample: u32) -> (OrderedBinaryTree, OrderedBinaryTree) {
    (
        OrderedBinaryTree::random(n, pair_seed(n, sample, 0)),
        OrderedBinaryTree::random(n, pair_seed(n, sample, 1)),
    )
}

#[test]
fn c01_bounds_bracket_exact_distance_exhaustively() {
    let mut pairs = 0u64;
    for n in 0..=7u32 {
        let (trees, matrix) = distance_matrix(n);
        for (i, s) in trees.iter().enumerate() {
            for (j, t) in trees.iter().enumerate() {
                let d = matrix[i][j];
                let e = common_edges(s, t).unwrap().len() as u32;
                let lower = n.saturating_sub(e + 1);
                assert!(
                    lower <= d && d <= 2 * lower,
                    "n={n}: {s} vs {t}: e={e}, d={d}"
                );
                // Bind the matrix to the pairwise oracle on a sample.
                if pairs.is_multiple_of(997) {
                    assert_eq!(exact_distance(s, t, DEFAULT_STATE_LIMIT).unwrap(), d);
                }
                pairs += 1;
            }
        }
    }
    println!("acceptance 1 (two-sided bound, exhaustive n<=7): PASS ({pairs} ordered pairs)");
}

#[test]
fn c02_factor_two_guarantee_exhaustively() {
    let mut pairs = 0u64;
    for n in 0..=7u32 {
        let (trees, matrix) = distance_matrix(n);
        for (i, s) in trees.iter().enumerate() {
            for (j, t) in trees.iter().enumerate() {
                let d = matrix[i][j];
                let bounds = distance_bounds(s, t).unwrap();
                assert_eq!(bounds.upper, 2 * bounds.lower);
                assert!(
                    bounds.upper <= 2 * d,
                    "n={n}: {s} vs {t}: upper={} d={d}",
                    bounds.upper
                );
                assert!(bounds.lower <= d);
                pairs += 1;
            }
        }
    }
    println!("acceptance 2 (factor-2 guarantee, exhaustive n<=7): PASS ({pairs} ordered pairs)");
}

#[test]
fn c03_witness_transforms_source_into_target() {
    let mut checked = 0u64;
    for n in 0..=6u32 {
        let trees = enumerate_trees(n).unwrap();
        for s in &trees {
            for t in &trees {
                let bounds = distance_bounds(s, t).unwrap();
                let seq = approx_sequence(s, t).unwrap();
                assert!(seq.len() as u32 <= bounds.upper, "{s} vs {t}");
                assert_eq!(&s.apply_sequence(&seq).unwrap(), t, "{s} vs {t}");
                checked += 1;
            }
        }
    }
    for n in [8u32, 16, 32, 64, 128] {
        for sample in 0..1000 {
            let (s, t) = random_pair(n, sample);
            let bounds = distance_bounds(&s, &t).unwrap();
            let seq = approx_sequence(&s, &t).unwrap();
            assert!(seq.len() as u32 <= bounds.upper);
            assert_eq!(s.apply_sequence(&seq).unwrap(), t);
            checked += 1;
        }
    }
    println!("acceptance 3 (witness correctness and length): PASS ({checked} pairs)");
}

#[test]
fn c04_single_rotation_preserves_all_but_one_edge() {
    let mut rotations = 0u64;
    for n in 0..=6u32 {
        for tree in enumerate_trees(n).unwrap() {
            for (_, neighbor) in rotation_neighbors(&tree) {
                let e = common_edges(&tree, &neighbor).unwrap().len() as u32;
                assert_eq!(e, n - 2, "{tree} vs {neighbor}");
                rotations += 1;
            }
        }
    }
    println!("acceptance 4 (one-rotation lemma, n<=6): PASS ({rotations} rotations)");
}

#[test]
fn c05_distance_decomposes_over_common_edge_split() {
    let mut pairs = 0u64;
    for n in 0..=6u32 {
        let (trees, matrix) = distance_matrix(n);
        for (i, s) in trees.iter().enumerate() {
            for (j, t) in trees.iter().enumerate() {
                let pieces = split_at_common_edges(s, t).unwrap();
                let sum: u32 = pieces
                    .iter()
                    .map(|p| {
                        exact_distance(&p.s_piece, &p.t_piece, DEFAULT_STATE_LIMIT).unwrap()
                    })
                    .sum();
                assert_eq!(sum, matrix[i][j], "{s} vs {t}");
                pairs += 1;
            }
        }
    }
    println!("acceptance 5 (decomposition identity, n<=6): PASS ({pairs} ordered pairs)");
}

#[test]
fn c06_comb_construction_lengths() {
    let mut checked = 0u64;
    for n in 0..=6u32 {
        for tree in enumerate_trees(n).unwrap() {
            let seq = comb_sequence(&tree, &[]).unwrap();
            assert_eq!(seq.len() as u32, n - tree.right_spine_count());
            assert!(seq.len() as u32 <= n.saturating_sub(1));
            checked += 1;
        }
    }
    for sample in 0..1000u32 {
        let tree = OrderedBinaryTree::random(1000, pair_seed(1000, sample, 2));
        let seq = comb_sequence(&tree, &[]).unwrap();
        assert_eq!(seq.len() as u32, 1000 - tree.right_spine_count());
        assert!(seq.len() <= 999);
        checked += 1;
    }
    // Between the two combs of size n the witness achieves exactly n - 1
    // rotations, comfortably within the 2n - 2 envelope.
    for n in [2u32, 10, 1000] {
        let left = OrderedBinaryTree::comb(n, Side::Left);
        let right = OrderedBinaryTree::comb(n, Side::Right);
        let seq = approx_sequence(&left, &right).unwrap();
        assert_eq!(seq.len() as u32, n - 1);
        assert!(seq.len() as u32 <= 2 * n - 2);
        assert_eq!(left.apply_sequence(&seq).unwrap(), right);
        checked += 1;
    }
    for sample in 0..1000u32 {
        let (s, t) = random_pair(1000, sample);
        let seq = approx_sequence(&s, &t).unwrap();
        assert!(seq.len() as u32 <= 2 * 1000 - 2);
        checked += 1;
    }
    println!("acceptance 6 (caterpillar construction lengths): PASS ({checked} checks)");
}

#[test]
fn c07_refined_bound_is_exact_below_threshold() {
    let config = RefinedConfig {
        exact_threshold: 10,
        ..RefinedConfig::default()
    };
    let mut pairs = 0u64;
    for n in 0..=5u32 {
        let trees = enumerate_trees(n).unwrap();
        for s in &trees {
            for t in &trees {
                let refined = refined_upper(s, t, &config).unwrap();
                assert!(refined.is_exact);
                assert_eq!(
                    refined.value,
                    exact_distance(s, t, DEFAULT_STATE_LIMIT).unwrap()
                );
                pairs += 1;
            }
        }
    }
    for n in [8u32, 9, 10] {
        for sample in 0..2000 {
            let (s, t) = random_pair(n, sample);
            let refined = refined_upper(&s, &t, &config).unwrap();
            assert!(refined.is_exact, "{s} vs {t}");
            assert_eq!(
                refined.value,
                exact_distance(&s, &t, DEFAULT_STATE_LIMIT).unwrap(),
                "{s} vs {t}"
            );
            let bounds = distance_bounds(&s, &t).unwrap();
            assert!(bounds.lower <= refined.value && refined.value <= bounds.upper);
            pairs += 1;
        }
    }
    println!("acceptance 7 (refined bound exactness): PASS ({pairs} pairs)");
}

#[test]
fn c08_bounds_and_witness_scale_linearly() {
    fn mean_seconds(n: u32, samples: u32, epoch: u32) -> f64 {
        let mut total = 0.0;
        for sample in 0..samples {
            let s = OrderedBinaryTree::random(n, pair_seed(n, epoch * 1000 + sample, 0));
            let t = OrderedBinaryTree::random(n, pair_seed(n, epoch * 1000 + sample, 1));
            let start = Instant::now();
            let bounds = distance_bounds(&s, &t).unwrap();
            let seq = approx_sequence(&s, &t).unwrap();
            total += start.elapsed().as_secs_f64();
            std::hint::black_box((bounds, seq.len()));
        }
        total / f64::from(samples)
    }

    // Several epochs; judge the least-contended one.
    let mut best_ratio = f64::INFINITY;
    let mut best_times = (0.0, 0.0);
    for epoch in 0..3 {
        let small = mean_seconds(100_000, 5, epoch);
        let large = mean_seconds(200_000, 5, epoch);
        let ratio = large / small;
        if ratio < best_ratio {
            best_ratio = ratio;
            best_times = (small, large);
        }
    }
    assert!(
        best_ratio <= 3.0,
        "doubling n scaled time by {best_ratio:.2} ({:.1} ms -> {:.1} ms)",
        best_times.0 * 1e3,
        best_times.1 * 1e3
    );

    let mut best_abs = f64::INFINITY;
    for epoch in 0..2 {
        best_abs = best_abs.min(mean_seconds(1_000_000, 1, 10 + epoch));
    }
    assert!(best_abs < 5.0, "n=10^6 took {best_abs:.2} s");
    println!(
        "acceptance 8 (linear scaling): PASS (2e5/1e5 ratio {best_ratio:.2}, n=10^6 in {:.0} ms)",
        best_abs * 1e3
    );
}

#[test]
fn c09_random_trees_are_uniform() {
    const SAMPLES: u32 = 50_000;
    let shapes = enumerate_trees(3).unwrap();
    let index: HashMap<CanonicalCode, usize> = shapes
        .iter()
        .enumerate()
        .map(|(i, t)| (t.canonical_code(), i))
        .collect();
    let mut counts = [0u32; 5];
    for seed in 0..SAMPLES {
        let tree = OrderedBinaryTree::random(3, u64::from(seed));
        counts[index[&tree.canonical_code()]] += 1;
    }
    let expected = f64::from(SAMPLES) / 5.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| {
            let diff = f64::from(c) - expected;
            diff * diff / expected
        })
        .sum();
    // Chi-square critical value, 4 degrees of freedom, significance 0.001.
    const CHI2_CRITICAL: f64 = 18.467;
    assert!(chi2 < CHI2_CRITICAL, "chi^2 = {chi2:.3}, counts {counts:?}");
    for &c in &counts {
        let freq = f64::from(c) / f64::from(SAMPLES);
        assert!((freq - 0.2).abs() <= 0.01, "counts {counts:?}");
    }
    println!("acceptance 9 (uniform generation): PASS (chi^2 = {chi2:.3} over {counts:?})");
}

#[test]
fn c10_small_diameters_respect_size_bound() {
    let mut report = String::new();
    for n in 1..=8u32 {
        let (d, (a, b)) = diameter(n, DEFAULT_STATE_LIMIT).unwrap();
        assert!(d <= 2 * n - 2, "n={n}: diameter {d}");
        assert_eq!(exact_distance(&a, &b, DEFAULT_STATE_LIMIT).unwrap(), d);
        if n == 3 {
            assert_eq!(d, 2);
        }
        report.push_str(&format!("{n}:{d} "));
    }
    println!("acceptance 10 (diameter bound, all-pairs n<=8): PASS ({})", report.trim());
}
