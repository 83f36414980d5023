//! Exact rotation distance by breadth-first search over the rotation graph,
//! exhaustive shape enumeration, and diameter computation. Desk-scale ground
//! truth: the rotation graph on trees of size `n` has `Catalan(n)` vertices,
//! so everything here carries an explicit state budget.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::mem;

use hashbrown::HashMap;

use crate::edges::{check_leaf_counts, LeafCountMismatch};
use crate::rotation::{NodePath, RotationDir, RotationOp};
use crate::tree::{CanonicalCode, Node, NodeId, OrderedBinaryTree, Side};

/// Default cap on stored search states.
pub const DEFAULT_STATE_LIMIT: usize = 2_000_000;

/// Largest `n` accepted by [`enumerate_trees`]; `Catalan(12) = 208012`.
pub const MAX_ENUMERATION_SIZE: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    LeafCount(LeafCountMismatch),
    /// The search stored `limit` states without finishing.
    StateLimitExceeded { limit: usize },
    EnumerationTooLarge { n: u32, max: u32 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::LeafCount(e) => write!(f, "{e}"),
            OracleError::StateLimitExceeded { limit } => {
                write!(f, "state limit of {limit} stored trees exceeded")
            }
            OracleError::EnumerationTooLarge { n, max } => {
                write!(f, "cannot enumerate trees of size {n} (maximum {max})")
            }
        }
    }
}

impl core::error::Error for OracleError {}

impl From<LeafCountMismatch> for OracleError {
    fn from(e: LeafCountMismatch) -> Self {
        OracleError::LeafCount(e)
    }
}

/// All trees one valid rotation away from `t`, each with the op producing it.
/// Sites are visited in preorder; at each site a right rotation is listed
/// before a left one. Every neighbor is distinct from `t`.
pub fn rotation_neighbors(t: &OrderedBinaryTree) -> Vec<(RotationOp, OrderedBinaryTree)> {
    let mut out = Vec::new();
    let mut path: Vec<Side> = Vec::new();
    // (node, depth, step that led here)
    let mut stack: Vec<(NodeId, u32, Option<Side>)> = vec![(t.root, 0, None)];
    while let Some((id, depth, step)) = stack.pop() {
        path.truncate(depth.saturating_sub(1) as usize);
        if let Some(step) = step {
            path.push(step);
        }
        let Node::Internal { left, right } = t.nodes[id as usize] else {
            continue;
        };
        if t.nodes[left as usize].is_internal() {
            let mut rotated = t.clone();
            rotated
                .rotate_at(id, RotationDir::Right)
                .expect("precondition checked");
            out.push((
                RotationOp::new(RotationDir::Right, NodePath::from_steps(&path)),
                rotated,
            ));
        }
        if t.nodes[right as usize].is_internal() {
            let mut rotated = t.clone();
            rotated
                .rotate_at(id, RotationDir::Left)
                .expect("precondition checked");
            out.push((
                RotationOp::new(RotationDir::Left, NodePath::from_steps(&path)),
                rotated,
            ));
        }
        stack.push((right, depth + 1, Some(Side::Right)));
        stack.push((left, depth + 1, Some(Side::Left)));
    }
    out
}

/// Neighbor shapes without op bookkeeping, for search inner loops.
fn neighbor_shapes(t: &OrderedBinaryTree) -> Vec<OrderedBinaryTree> {
    let mut out = Vec::new();
    for id in 0..t.nodes.len() as NodeId {
        let Node::Internal { left, right } = t.nodes[id as usize] else {
            continue;
        };
        if t.nodes[left as usize].is_internal() {
            let mut rotated = t.clone();
            rotated.rotate_at(id, RotationDir::Right).expect("internal");
            out.push(rotated);
        }
        if t.nodes[right as usize].is_internal() {
            let mut rotated = t.clone();
            rotated.rotate_at(id, RotationDir::Left).expect("internal");
            out.push(rotated);
        }
    }
    out
}

/// Exact rotation distance between `s` and `t` by bidirectional breadth-first
/// search keyed on canonical codes, expanding the smaller frontier first.
///
/// Fails with [`OracleError::StateLimitExceeded`] once `state_limit` codes are
/// stored; the default budget handles sizes up to roughly a dozen internal
/// nodes comfortably.
pub fn exact_distance(
    s: &OrderedBinaryTree,
    t: &OrderedBinaryTree,
    state_limit: usize,
) -> Result<u32, OracleError> {
    check_leaf_counts(s, t)?;
    if s == t {
        return Ok(0);
    }
    let mut dist_s: HashMap<CanonicalCode, u32> = HashMap::new();
    let mut dist_t: HashMap<CanonicalCode, u32> = HashMap::new();
    dist_s.insert(s.canonical_code(), 0);
    dist_t.insert(t.canonical_code(), 0);
    let mut frontier_s = vec![s.clone()];
    let mut frontier_t = vec![t.clone()];
    let mut radius_s = 0u32;
    let mut radius_t = 0u32;
    let mut best: Option<u32> = None;

    loop {
        // Any undiscovered path must cross both explored balls, so it is at
        // least radius_s + radius_t + 1 long; once best is within that, stop.
        if let Some(b) = best {
            if b <= radius_s + radius_t + 1 {
                return Ok(b);
            }
        }
        let from_s = if frontier_s.is_empty() {
            false
        } else if frontier_t.is_empty() {
            true
        } else {
            frontier_s.len() <= frontier_t.len()
        };
        if frontier_s.is_empty() && frontier_t.is_empty() {
            // The rotation graph on a fixed leaf count is connected.
            return best.ok_or(OracleError::StateLimitExceeded { limit: state_limit });
        }
        let (own, other, frontier, radius) = if from_s {
            (&mut dist_s, &dist_t, &mut frontier_s, &mut radius_s)
        } else {
            (&mut dist_t, &dist_s, &mut frontier_t, &mut radius_t)
        };
        let level = mem::take(frontier);
        let next_radius = *radius + 1;
        for tree in &level {
            for neighbor in neighbor_shapes(tree) {
                let code = neighbor.canonical_code();
                if own.contains_key(&code) {
                    continue;
                }
                if own.len() + other.len() >= state_limit {
                    return Err(OracleError::StateLimitExceeded { limit: state_limit });
                }
                if let Some(&d) = other.get(&code) {
                    let candidate = next_radius + d;
                    best = Some(best.map_or(candidate, |b| b.min(candidate)));
                }
                own.insert(code, next_radius);
                frontier.push(neighbor);
            }
        }
        *radius = next_radius;
    }
}

/// `Catalan(n)`, the number of tree shapes with `n` internal nodes.
/// Exact for `n <= 33`.
pub fn catalan(n: u32) -> u64 {
    let mut row = vec![0u64; n as usize + 1];
    row[0] = 1;
    for size in 1..=n as usize {
        row[size] = (0..size).map(|l| row[l] * row[size - 1 - l]).sum();
    }
    row[n as usize]
}

/// All tree shapes with `n` internal nodes, in ascending canonical-code
/// order, without duplicates. `n` is capped at [`MAX_ENUMERATION_SIZE`].
pub fn enumerate_trees(n: u32) -> Result<Vec<OrderedBinaryTree>, OracleError> {
    if n > MAX_ENUMERATION_SIZE {
        return Err(OracleError::EnumerationTooLarge {
            n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    let mut by_size: Vec<Vec<OrderedBinaryTree>> = Vec::with_capacity(n as usize + 1);
    by_size.push(vec![OrderedBinaryTree::leaf()]);
    for size in 1..=n as usize {
        let mut shapes = Vec::with_capacity(catalan(size as u32) as usize);
        for left_size in 0..size {
            for left in &by_size[left_size] {
                for right in &by_size[size - 1 - left_size] {
                    shapes.push(OrderedBinaryTree::join(left, right));
                }
            }
        }
        by_size.push(shapes);
    }
    let mut trees = by_size.pop().expect("size n built");
    trees.sort_by_cached_key(OrderedBinaryTree::canonical_code);
    Ok(trees)
}

/// Largest exact distance over all ordered pairs of size-`n` trees, with one
/// maximizing pair (the first in enumeration order). All-pairs breadth-first
/// search over the explicit rotation graph.
pub fn diameter(
    n: u32,
    state_limit: usize,
) -> Result<(u32, (OrderedBinaryTree, OrderedBinaryTree)), OracleError> {
    let trees = enumerate_trees(n)?;
    if trees.len() > state_limit {
        return Err(OracleError::StateLimitExceeded { limit: state_limit });
    }
    let index: HashMap<CanonicalCode, u32> = trees
        .iter()
        .enumerate()
        .map(|(i, t)| (t.canonical_code(), i as u32))
        .collect();
    let adjacency: Vec<Vec<u32>> = trees
        .iter()
        .map(|t| {
            neighbor_shapes(t)
                .into_iter()
                .map(|nb| index[&nb.canonical_code()])
                .collect()
        })
        .collect();

    let mut best = 0u32;
    let mut witness = (0u32, 0u32);
    let mut dist = vec![u32::MAX; trees.len()];
    let mut queue = alloc::collections::VecDeque::new();
    for source in 0..trees.len() as u32 {
        dist.fill(u32::MAX);
        dist[source as usize] = 0;
        queue.clear();
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (target, &d) in dist.iter().enumerate() {
            debug_assert_ne!(d, u32::MAX, "rotation graph is connected");
            if d > best {
                best = d;
                witness = (source, target as u32);
            }
        }
    }
    Ok((
        best,
        (
            trees[witness.0 as usize].clone(),
            trees[witness.1 as usize].clone(),
        ),
    ))
}
