//! Two-sided rotation distance bounds, witness sequences realizing the upper
//! bound, and a refined upper bound from per-piece estimates.
//!
//! For trees with `n` internal nodes and `e` common edges the rotation
//! distance `d` satisfies `n-e-1 <= d <= 2(n-e-1)`, so the pair
//! `(lower, upper) = (n-e-1, 2(n-e-1))` brackets `d` within a factor of two.
//! The witness for the upper bound combs each piece of the common-edge split
//! to a right caterpillar and then un-combs it into the target shape.

use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;

use crate::edges::{
    check_leaf_counts, common_edges, extract_pieces, pack_base, split_at_common_edges,
    LeafCountMismatch, LeafInterval,
};
use crate::oracle::{exact_distance, OracleError};
use crate::rotation::{NodePath, RotationDir, RotationOp, RotationSequence};
use crate::tree::{Node, OrderedBinaryTree};

/// Distance bracket per the `n`, `e` counting bound. `upper` is exactly
/// `2 * lower`, and `lower` is zero iff the trees are equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceBounds {
    /// Internal node count of either tree.
    pub n: u32,
    /// Number of common edges.
    pub e: u32,
    /// `n - e - 1`, clamped to zero for the single-leaf tree.
    pub lower: u32,
    /// `2 * lower`.
    pub upper: u32,
}

/// Errors from the approximation operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxError {
    LeafCount(LeafCountMismatch),
    /// A requested opaque interval is not an edge of the tree.
    OpaqueNotAnEdge(LeafInterval),
    Oracle(OracleError),
}

impl fmt::Display for ApproxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApproxError::LeafCount(e) => write!(f, "{e}"),
            ApproxError::OpaqueNotAnEdge(iv) => {
                write!(f, "opaque interval {iv} is not an edge of the tree")
            }
            ApproxError::Oracle(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ApproxError {}

impl From<LeafCountMismatch> for ApproxError {
    fn from(e: LeafCountMismatch) -> Self {
        ApproxError::LeafCount(e)
    }
}

impl From<OracleError> for ApproxError {
    fn from(e: OracleError) -> Self {
        ApproxError::Oracle(e)
    }
}

/// Computes the distance bracket for `s` and `t`. Linear in `n`.
pub fn distance_bounds(
    s: &OrderedBinaryTree,
    t: &OrderedBinaryTree,
) -> Result<DistanceBounds, LeafCountMismatch> {
    let e = common_edges(s, t)?.len() as u32;
    let n = s.internal_count();
    let lower = n.saturating_sub(e + 1);
    Ok(DistanceBounds {
        n,
        e,
        lower,
        upper: 2 * lower,
    })
}

/// Right rotations (as `R^k` spine positions) that comb `t` into a right
/// caterpillar. Walks the right spine top-down, rotating while the left child
/// is internal; every internal node off the spine is absorbed by exactly one
/// rotation.
fn comb_positions(t: &OrderedBinaryTree) -> Vec<u32> {
    let mut work = t.clone();
    let mut out = Vec::new();
    let mut cur = work.root;
    let mut depth = 0u32;
    while let Node::Internal { left, right } = work.nodes[cur as usize] {
        if work.nodes[left as usize].is_internal() {
            out.push(depth);
            work.rotate_at(cur, RotationDir::Right)
                .expect("left child is internal");
        } else {
            cur = right;
            depth += 1;
        }
    }
    out
}

/// Rotation sequence turning `t` into the right comb over its atoms, where an
/// atom is an original leaf or a subtree under an interval in `opaque`.
///
/// Every op is a right rotation on the (growing) right spine; the sequence
/// never rotates at a node inside an opaque subtree and never destroys the
/// edge above one. Its length is the number of internal nodes outside opaque
/// subtrees minus the number of those already on the right spine.
pub fn comb_sequence(
    t: &OrderedBinaryTree,
    opaque: &[LeafInterval],
) -> Result<RotationSequence, ApproxError> {
    let base = pack_base(t);
    let pack = |iv: &LeafInterval| u64::from(iv.lo()) * base + u64::from(iv.hi());
    let edges: HashSet<u64> = crate::edges::edge_intervals(t).iter().map(pack).collect();
    let mut cuts = HashSet::with_capacity(opaque.len());
    for iv in opaque {
        if !edges.contains(&pack(iv)) {
            return Err(ApproxError::OpaqueNotAnEdge(*iv));
        }
        cuts.insert(pack(iv));
    }
    let pieces = extract_pieces(t, &cuts, base);
    let contracted = &pieces.pieces[0].tree;
    let ops = comb_positions(contracted)
        .into_iter()
        .map(|k| RotationOp::new(RotationDir::Right, NodePath::rights_only(k)))
        .collect();
    Ok(RotationSequence::new(ops))
}

/// Witness sequence transforming `s` into `t`, of length at most
/// `2(n - e - 1)`. Linear in `n`.
///
/// Pieces of the common-edge split are processed outermost first. Each piece
/// is combed to a right caterpillar and then un-combed into the target shape
/// by the reversed, direction-flipped comb of the target piece. Ops carry
/// whole-tree paths valid at application time: once the enclosing pieces are
/// done, a piece's root sits at its target-tree position, so prefixes are
/// read off the target tree.
pub fn approx_sequence(
    s: &OrderedBinaryTree,
    t: &OrderedBinaryTree,
) -> Result<RotationSequence, LeafCountMismatch> {
    let common = common_edges(s, t)?;
    let base = pack_base(s);
    let cuts: HashSet<u64> = common
        .iter()
        .map(|iv| u64::from(iv.lo()) * base + u64::from(iv.hi()))
        .collect();
    let s_pieces = extract_pieces(s, &cuts, base);
    let t_pieces = extract_pieces(t, &cuts, base);
    debug_assert_eq!(s_pieces.pieces.len(), t_pieces.pieces.len());
    let trie = &t_pieces.trie;
    let mut ops = Vec::new();
    for (sp, tp) in s_pieces.pieces.iter().zip(&t_pieces.pieces) {
        debug_assert_eq!(sp.outer, tp.outer);
        debug_assert_eq!(sp.placeholders, tp.placeholders);
        for k in comb_positions(&sp.tree) {
            ops.push(RotationOp::new(
                RotationDir::Right,
                NodePath::from_trie(trie, tp.prefix, k),
            ));
        }
        for k in comb_positions(&tp.tree).into_iter().rev() {
            ops.push(RotationOp::new(
                RotationDir::Left,
                NodePath::from_trie(trie, tp.prefix, k),
            ));
        }
    }
    Ok(RotationSequence::new(ops))
}

/// Refined upper bound on the distance between two trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefinedUpper {
    pub value: u32,
    /// True when every piece was pinned exactly, in which case `value` is the
    /// exact rotation distance.
    pub is_exact: bool,
}

/// Configuration for [`refined_upper`].
#[derive(Clone, Copy, Debug)]
pub struct RefinedConfig {
    /// Pieces of at most this many internal nodes are solved exactly by the
    /// breadth-first oracle.
    pub exact_threshold: u32,
    /// Piece size from which the sharper `2n - 6` diameter bound is applied
    /// instead of `2n - 2`. The sharper bound only holds for large enough
    /// trees; 13 is a conservative cutoff.
    pub sharp_threshold: u32,
    /// State budget for the exact oracle.
    pub state_limit: usize,
}

impl Default for RefinedConfig {
    fn default() -> Self {
        RefinedConfig {
            exact_threshold: 10,
            sharp_threshold: 13,
            state_limit: crate::oracle::DEFAULT_STATE_LIMIT,
        }
    }
}

/// Upper bound from summing per-piece estimates over the common-edge split:
/// the exact oracle distance for pieces within `exact_threshold`, otherwise
/// the best applicable size bound. The sum is a valid bound because the
/// distance of the whole pair is the sum of the piece distances.
pub fn refined_upper(
    s: &OrderedBinaryTree,
    t: &OrderedBinaryTree,
    config: &RefinedConfig,
) -> Result<RefinedUpper, ApproxError> {
    check_leaf_counts(s, t)?;
    let pieces = split_at_common_edges(s, t)?;
    let mut value = 0u32;
    let mut is_exact = true;
    for piece in &pieces {
        let n = piece.size;
        let lower = n.saturating_sub(1);
        if n <= config.exact_threshold {
            value += exact_distance(&piece.s_piece, &piece.t_piece, config.state_limit)?;
        } else {
            let bound = if n >= config.sharp_threshold {
                (2 * n - 6).max(lower)
            } else {
                2 * n - 2
            };
            value += bound;
            if bound != lower {
                is_exact = false;
            }
        }
    }
    Ok(RefinedUpper { value, is_exact })
}
