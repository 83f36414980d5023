//! Common edge pairs between two trees on the same leaf set, and splitting
//! both trees at common edges into corresponding piece pairs.
//!
//! In an ordered tree the leaf set below an internal edge is a contiguous
//! interval, so an edge's induced leaf partition is named exactly by that
//! interval: two edges form a common pair iff their intervals are equal.
//! Interval equality on packed integer keys replaces the general
//! cluster-matching machinery needed for unordered trees.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};

use crate::rotation::{PathTrie, PathTrieBuilder, PATH_NONE};
use crate::tree::{Node, NodeId, OrderedBinaryTree};

/// Contiguous 1-based leaf range `[lo, hi]` subtended by an internal edge.
///
/// Always `1 <= lo < hi <= n+1`, and never the full leaf set (that range
/// belongs to the root, which has no edge above it).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafInterval {
    lo: u32,
    hi: u32,
}

impl LeafInterval {
    pub fn new(lo: u32, hi: u32) -> Self {
        debug_assert!(1 <= lo && lo < hi);
        LeafInterval { lo, hi }
    }

    pub fn lo(self) -> u32 {
        self.lo
    }

    pub fn hi(self) -> u32 {
        self.hi
    }
}

impl fmt::Display for LeafInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// The two input trees do not have the same number of leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeafCountMismatch {
    pub s_leaves: u32,
    pub t_leaves: u32,
}

impl fmt::Display for LeafCountMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "leaf count mismatch: first tree has {} leaves, second has {}",
            self.s_leaves, self.t_leaves
        )
    }
}

impl core::error::Error for LeafCountMismatch {}

pub(crate) fn check_leaf_counts(
    s: &OrderedBinaryTree,
    t: &OrderedBinaryTree,
) -> Result<(), LeafCountMismatch> {
    if s.leaf_count() == t.leaf_count() {
        Ok(())
    } else {
        Err(LeafCountMismatch {
            s_leaves: s.leaf_count(),
            t_leaves: t.leaf_count(),
        })
    }
}

/// Packs an interval into a single key; `base` must exceed the largest leaf
/// index, we use `n + 2`.
#[inline]
fn pack(lo: u32, hi: u32, base: u64) -> u64 {
    u64::from(lo) * base + u64::from(hi)
}

pub(crate) fn pack_base(t: &OrderedBinaryTree) -> u64 {
    u64::from(t.leaf_count()) + 1
}

/// The leaf interval of every internal edge of `t`: one interval per
/// non-root internal node, in postorder. A tree with `n` internal nodes has
/// `n - 1` internal edges. Single traversal, linear time.
pub fn edge_intervals(t: &OrderedBinaryTree) -> Vec<LeafInterval> {
    let n = t.internal_count() as usize;
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut stack = vec![(t.root, false)];
    let mut spans: Vec<(u32, u32)> = Vec::new();
    let mut next_leaf = 0u32;
    while let Some((id, expanded)) = stack.pop() {
        match t.nodes[id as usize] {
            Node::Leaf => {
                next_leaf += 1;
                spans.push((next_leaf, next_leaf));
            }
            Node::Internal { left, right } => {
                if expanded {
                    let (_, hi) = spans.pop().expect("right span");
                    let (lo, _) = spans.pop().expect("left span");
                    if id != t.root {
                        out.push(LeafInterval::new(lo, hi));
                    }
                    spans.push((lo, hi));
                } else {
                    stack.push((id, true));
                    stack.push((right, false));
                    stack.push((left, false));
                }
            }
        }
    }
    out
}

/// Intervals of the common edge pairs of `s` and `t`:
/// `edge_intervals(s) ∩ edge_intervals(t)`. The count is `e`. Expected
/// linear time via hashed set membership on packed keys.
pub fn common_edges(
    s: &OrderedBinaryTree,
    t: &OrderedBinaryTree,
) -> Result<Vec<LeafInterval>, LeafCountMismatch> {
    check_leaf_counts(s, t)?;
    let base = pack_base(s);
    let s_set: HashSet<u64> = edge_intervals(s)
        .into_iter()
        .map(|iv| pack(iv.lo, iv.hi, base))
        .collect();
    Ok(edge_intervals(t)
        .into_iter()
        .filter(|iv| s_set.contains(&pack(iv.lo, iv.hi, base)))
        .collect())
}

/// What a piece was cut out at: the root of the whole tree, or a common edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceOuter {
    Root,
    Edge(LeafInterval),
}

/// A corresponding pair of sub-trees produced by cutting both trees at their
/// common edges. Contracted inner common subtrees are replaced by ordinary
/// placeholder leaves; `placeholders` records, for each placeholder's 1-based
/// leaf position within the piece, the interval it stands for. The map is
/// identical for `s_piece` and `t_piece`.
#[derive(Clone, Debug)]
pub struct PiecePair {
    pub s_piece: OrderedBinaryTree,
    pub t_piece: OrderedBinaryTree,
    /// Internal node count of either piece.
    pub size: u32,
    pub outer: PieceOuter,
    pub placeholders: Vec<(u32, LeafInterval)>,
}

pub(crate) struct RawPiece {
    pub(crate) outer: PieceOuter,
    pub(crate) tree: OrderedBinaryTree,
    pub(crate) placeholders: Vec<(u32, LeafInterval)>,
    /// Trie node of the path from the whole-tree root to this piece's root.
    pub(crate) prefix: u32,
}

pub(crate) struct RawPieces {
    pub(crate) pieces: Vec<RawPiece>,
    pub(crate) trie: Arc<PathTrie>,
}

/// Cuts `t` at every edge whose packed interval is in `cuts`. Pieces come out
/// in preorder of their roots: outermost first, siblings left to right. Each
/// piece contracts only its maximal proper cut sub-intervals; deeper cut
/// edges appear inside inner pieces.
pub(crate) fn extract_pieces(
    t: &OrderedBinaryTree,
    cuts: &HashSet<u64>,
    base: u64,
) -> RawPieces {
    let spans = t.node_spans();
    let mut trie = PathTrieBuilder::new();
    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    // Piece roots still to process, most recently discovered last so that
    // popping yields preorder.
    let mut worklist: Vec<(NodeId, PieceOuter, u32)> = vec![(t.root, PieceOuter::Root, PATH_NONE)];
    while let Some((piece_root, outer, prefix)) = worklist.pop() {
        let mut nodes = vec![Node::Leaf];
        let mut placeholders = Vec::new();
        let mut inner: Vec<(NodeId, PieceOuter, u32)> = Vec::new();
        // (original node, slot in the piece arena, trie node of its path)
        let mut stack: Vec<(NodeId, NodeId, u32)> = vec![(piece_root, 0, prefix)];
        let mut leaf_pos = 0u32;
        while let Some((old, slot, path)) = stack.pop() {
            let (lo, hi) = spans[old as usize];
            if slot != 0 && t.nodes[old as usize].is_internal() && cuts.contains(&pack(lo, hi, base))
            {
                // Maximal cut subtree: contract to a placeholder leaf.
                leaf_pos += 1;
                let interval = LeafInterval::new(lo, hi);
                placeholders.push((leaf_pos, interval));
                inner.push((old, PieceOuter::Edge(interval), path));
                continue;
            }
            match t.nodes[old as usize] {
                Node::Leaf => leaf_pos += 1,
                Node::Internal { left, right } => {
                    let ls = nodes.len() as NodeId;
                    nodes.push(Node::Leaf);
                    let rs = nodes.len() as NodeId;
                    nodes.push(Node::Leaf);
                    nodes[slot as usize] = Node::Internal {
                        left: ls,
                        right: rs,
                    };
                    let lpath = trie.child(path, crate::tree::Side::Left);
                    let rpath = trie.child(path, crate::tree::Side::Right);
                    stack.push((right, rs, rpath));
                    stack.push((left, ls, lpath));
                }
            }
        }
        pieces.push(RawPiece {
            outer,
            tree: OrderedBinaryTree { nodes, root: 0 },
            placeholders,
            prefix,
        });
        worklist.extend(inner.into_iter().rev());
    }
    RawPieces {
        pieces,
        trie: trie.finish(),
    }
}

/// Splits both trees at all their common edges, producing exactly `e + 1`
/// piece pairs whose sizes sum to `n`. Piece pairs share no common edges;
/// re-substituting every placeholder (see [`reassemble_pieces`]) reconstructs
/// the inputs exactly.
pub fn split_at_common_edges(
    s: &OrderedBinaryTree,
    t: &OrderedBinaryTree,
) -> Result<Vec<PiecePair>, LeafCountMismatch> {
    let common = common_edges(s, t)?;
    let base = pack_base(s);
    let cuts: HashSet<u64> = common.iter().map(|iv| pack(iv.lo, iv.hi, base)).collect();
    let s_pieces = extract_pieces(s, &cuts, base);
    let t_pieces = extract_pieces(t, &cuts, base);
    debug_assert_eq!(s_pieces.pieces.len(), t_pieces.pieces.len());
    Ok(s_pieces
        .pieces
        .into_iter()
        .zip(t_pieces.pieces)
        .map(|(sp, tp)| {
            debug_assert_eq!(sp.outer, tp.outer);
            debug_assert_eq!(sp.placeholders, tp.placeholders);
            debug_assert_eq!(sp.tree.internal_count(), tp.tree.internal_count());
            PiecePair {
                size: sp.tree.internal_count(),
                outer: sp.outer,
                placeholders: sp.placeholders,
                s_piece: sp.tree,
                t_piece: tp.tree,
            }
        })
        .collect())
}

/// Error reassembling pieces back into the original tree pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReassembleError {
    NoRootPiece,
    MultipleRootPieces,
    DuplicateOuter(LeafInterval),
    /// A placeholder refers to an interval no piece was cut at, or to a piece
    /// that precedes its parent in the list.
    UnresolvedPlaceholder(LeafInterval),
}

impl fmt::Display for ReassembleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReassembleError::NoRootPiece => write!(f, "no root piece"),
            ReassembleError::MultipleRootPieces => write!(f, "multiple root pieces"),
            ReassembleError::DuplicateOuter(iv) => {
                write!(f, "two pieces share the outer interval {iv}")
            }
            ReassembleError::UnresolvedPlaceholder(iv) => {
                write!(f, "placeholder {iv} cannot be resolved")
            }
        }
    }
}

impl core::error::Error for ReassembleError {}

/// Inverse of [`split_at_common_edges`]: substitutes every placeholder by its
/// recorded subtree, recursively, and returns the reconstructed `(s, t)`.
/// Pieces must be listed outermost first, as produced by the split.
pub fn reassemble_pieces(
    pieces: &[PiecePair],
) -> Result<(OrderedBinaryTree, OrderedBinaryTree), ReassembleError> {
    let mut by_outer: HashMap<LeafInterval, usize> = HashMap::with_capacity(pieces.len());
    let mut root_index = None;
    for (i, piece) in pieces.iter().enumerate() {
        match piece.outer {
            PieceOuter::Root => {
                if root_index.replace(i).is_some() {
                    return Err(ReassembleError::MultipleRootPieces);
                }
            }
            PieceOuter::Edge(iv) => {
                if by_outer.insert(iv, i).is_some() {
                    return Err(ReassembleError::DuplicateOuter(iv));
                }
            }
        }
    }
    let root_index = root_index.ok_or(ReassembleError::NoRootPiece)?;

    let mut assembled: Vec<Option<(OrderedBinaryTree, OrderedBinaryTree)>> =
        vec![None; pieces.len()];
    for i in (0..pieces.len()).rev() {
        let piece = &pieces[i];
        let (done, rest) = assembled.split_at_mut(i + 1);
        let mut subs_s: Vec<(u32, &OrderedBinaryTree)> = Vec::with_capacity(piece.placeholders.len());
        let mut subs_t: Vec<(u32, &OrderedBinaryTree)> = Vec::with_capacity(piece.placeholders.len());
        for &(pos, iv) in &piece.placeholders {
            let child = by_outer
                .get(&iv)
                .copied()
                .filter(|&c| c > i)
                .ok_or(ReassembleError::UnresolvedPlaceholder(iv))?;
            let (s_sub, t_sub) = rest[child - i - 1]
                .as_ref()
                .ok_or(ReassembleError::UnresolvedPlaceholder(iv))?;
            subs_s.push((pos, s_sub));
            subs_t.push((pos, t_sub));
        }
        done[i] = Some((
            piece.s_piece.with_leaves_replaced(&subs_s),
            piece.t_piece.with_leaves_replaced(&subs_t),
        ));
    }
    Ok(assembled[root_index].take().expect("root assembled"))
}
