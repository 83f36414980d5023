//! Rotations addressed by root paths, and sequences of them.
//!
//! A rotation is addressed by the `{L,R}` walk from the root to the rotated
//! node *at the moment the rotation is applied*; node identity is not stable
//! under rotation, paths are. The text form of an op is the direction letter,
//! `@`, then the path: `R@`, `L@LR`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::hash::{Hash, Hasher};
use core::str::FromStr;

use crate::tree::{Node, NodeId, OrderedBinaryTree, Side};

/// Direction of a rotation. A right rotation at `v` lifts `v`'s left child
/// into `v`'s position; a left rotation is the exact inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RotationDir {
    Right,
    Left,
}

impl RotationDir {
    pub fn letter(self) -> char {
        match self {
            RotationDir::Right => 'R',
            RotationDir::Left => 'L',
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            RotationDir::Right => RotationDir::Left,
            RotationDir::Left => RotationDir::Right,
        }
    }
}

pub(crate) const PATH_NONE: u32 = u32::MAX;

#[derive(Debug)]
struct TrieEntry {
    step: Side,
    parent: u32,
    depth: u32,
}

/// Shared storage for path prefixes. Witness generation produces up to
/// `2(n-1)` ops whose paths overlap heavily; storing each op's path as its
/// own step vector would make total output quadratic in n, so paths borrow a
/// prefix from a trie and append a run of right-steps.
#[derive(Debug)]
pub(crate) struct PathTrie {
    entries: Vec<TrieEntry>,
}

#[derive(Debug, Default)]
pub(crate) struct PathTrieBuilder {
    entries: Vec<TrieEntry>,
}

impl PathTrieBuilder {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    /// Appends a child of `parent` (or of the root when `parent == PATH_NONE`).
    pub(crate) fn child(&mut self, parent: u32, step: Side) -> u32 {
        let depth = if parent == PATH_NONE {
            1
        } else {
            self.entries[parent as usize].depth + 1
        };
        self.entries.push(TrieEntry {
            step,
            parent,
            depth,
        });
        self.entries.len() as u32 - 1
    }

    pub(crate) fn finish(self) -> Arc<PathTrie> {
        Arc::new(PathTrie {
            entries: self.entries,
        })
    }
}

#[derive(Clone)]
enum Prefix {
    Empty,
    Trie { trie: Arc<PathTrie>, node: u32 },
}

/// Address of a node: the child-direction walk from the root. The empty path
/// addresses the root itself.
///
/// Comparison, hashing, and display all use the logical step sequence; how
/// the steps are stored internally does not matter.
#[derive(Clone)]
pub struct NodePath {
    prefix: Prefix,
    rights: u32,
    len: u32,
}

impl NodePath {
    /// The empty path (the root).
    pub fn root() -> Self {
        NodePath {
            prefix: Prefix::Empty,
            rights: 0,
            len: 0,
        }
    }

    /// Path `R^rights` straight down the right spine.
    pub(crate) fn rights_only(rights: u32) -> Self {
        NodePath {
            prefix: Prefix::Empty,
            rights,
            len: rights,
        }
    }

    pub fn from_steps(steps: &[Side]) -> Self {
        let rights = steps
            .iter()
            .rev()
            .take_while(|s| **s == Side::Right)
            .count() as u32;
        let prefix = &steps[..steps.len() - rights as usize];
        if prefix.is_empty() {
            return NodePath {
                prefix: Prefix::Empty,
                rights,
                len: steps.len() as u32,
            };
        }
        let mut builder = PathTrieBuilder::new();
        let mut node = PATH_NONE;
        for &step in prefix {
            node = builder.child(node, step);
        }
        NodePath {
            prefix: Prefix::Trie {
                trie: builder.finish(),
                node,
            },
            rights,
            len: steps.len() as u32,
        }
    }

    /// Path `prefix ++ R^rights`, where `prefix` is a trie node
    /// (`PATH_NONE` for the empty prefix).
    pub(crate) fn from_trie(trie: &Arc<PathTrie>, node: u32, rights: u32) -> Self {
        if node == PATH_NONE {
            return NodePath {
                prefix: Prefix::Empty,
                rights,
                len: rights,
            };
        }
        let depth = trie.entries[node as usize].depth;
        NodePath {
            prefix: Prefix::Trie {
                trie: Arc::clone(trie),
                node,
            },
            rights,
            len: depth + rights,
        }
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Steps in root-to-node order.
    pub fn steps(&self) -> Vec<Side> {
        let mut out: Vec<Side> = self.steps_rev().collect();
        out.reverse();
        out
    }

    /// Steps in node-to-root order; cheap, no allocation.
    fn steps_rev(&self) -> StepsRev<'_> {
        StepsRev {
            rights: self.rights,
            prefix: &self.prefix,
            node: match &self.prefix {
                Prefix::Empty => PATH_NONE,
                Prefix::Trie { node, .. } => *node,
            },
        }
    }
}

struct StepsRev<'a> {
    rights: u32,
    prefix: &'a Prefix,
    node: u32,
}

impl Iterator for StepsRev<'_> {
    type Item = Side;

    fn next(&mut self) -> Option<Side> {
        if self.rights > 0 {
            self.rights -= 1;
            return Some(Side::Right);
        }
        if self.node == PATH_NONE {
            return None;
        }
        let Prefix::Trie { trie, .. } = self.prefix else {
            return None;
        };
        let entry = &trie.entries[self.node as usize];
        self.node = entry.parent;
        Some(entry.step)
    }
}

impl PartialEq for NodePath {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.steps_rev().eq(other.steps_rev())
    }
}

impl Eq for NodePath {}

impl Hash for NodePath {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u32(self.len);
        for step in self.steps_rev() {
            state.write_u8(step as u8);
        }
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in self.steps() {
            f.write_char(step.letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NodePath({self})")
    }
}

impl FromStr for NodePath {
    type Err = OpParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut steps = Vec::with_capacity(s.len());
        for c in s.chars() {
            steps.push(match c {
                'L' => Side::Left,
                'R' => Side::Right,
                other => return Err(OpParseError::BadStep(other)),
            });
        }
        Ok(NodePath::from_steps(&steps))
    }
}

/// One rotation: a direction and the root path of the node it applies to,
/// valid at application time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationOp {
    pub dir: RotationDir,
    pub path: NodePath,
}

impl RotationOp {
    pub fn new(dir: RotationDir, path: NodePath) -> Self {
        RotationOp { dir, path }
    }
}

impl fmt::Display for RotationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.dir.letter(), self.path)
    }
}

/// Error parsing a rotation op token such as `R@LL`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpParseError {
    Empty,
    BadDirection(char),
    MissingAt,
    BadStep(char),
}

impl fmt::Display for OpParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpParseError::Empty => write!(f, "empty op token"),
            OpParseError::BadDirection(c) => {
                write!(f, "bad direction {c:?}, expected 'R' or 'L'")
            }
            OpParseError::MissingAt => write!(f, "missing '@' after direction"),
            OpParseError::BadStep(c) => write!(f, "bad path step {c:?}, expected 'L' or 'R'"),
        }
    }
}

impl core::error::Error for OpParseError {}

impl FromStr for RotationOp {
    type Err = OpParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let dir = match chars.next() {
            None => return Err(OpParseError::Empty),
            Some('R') => RotationDir::Right,
            Some('L') => RotationDir::Left,
            Some(c) => return Err(OpParseError::BadDirection(c)),
        };
        let rest = chars.as_str();
        let Some(path) = rest.strip_prefix('@') else {
            return Err(OpParseError::MissingAt);
        };
        Ok(RotationOp::new(dir, path.parse()?))
    }
}

/// An ordered list of rotations, applied first to last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RotationSequence {
    ops: Vec<RotationOp>,
}

/// Error parsing a whitespace-separated op token stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequenceParseError {
    pub token: usize,
    pub error: OpParseError,
}

impl fmt::Display for SequenceParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op token {}: {}", self.token, self.error)
    }
}

impl core::error::Error for SequenceParseError {}

impl RotationSequence {
    pub fn new(ops: Vec<RotationOp>) -> Self {
        RotationSequence { ops }
    }

    pub fn empty() -> Self {
        RotationSequence { ops: Vec::new() }
    }

    pub fn ops(&self) -> &[RotationOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Parses a whitespace-separated stream of op tokens.
    pub fn parse(text: &str) -> Result<Self, SequenceParseError> {
        let mut ops = Vec::new();
        for (token, word) in text.split_whitespace().enumerate() {
            ops.push(
                word.parse()
                    .map_err(|error| SequenceParseError { token, error })?,
            );
        }
        Ok(RotationSequence { ops })
    }
}

impl From<Vec<RotationOp>> for RotationSequence {
    fn from(ops: Vec<RotationOp>) -> Self {
        RotationSequence { ops }
    }
}

impl<'a> IntoIterator for &'a RotationSequence {
    type Item = &'a RotationOp;
    type IntoIter = core::slice::Iter<'a, RotationOp>;

    fn into_iter(self) -> Self::IntoIter {
        self.ops.iter()
    }
}

impl fmt::Display for RotationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                f.write_char(' ')?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Error applying a single rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationError {
    /// The path left the tree or ended on a leaf; `depth` is the number of
    /// steps successfully taken.
    InvalidPath { depth: u32 },
    /// The child that would be lifted is a leaf.
    LeafChild { dir: RotationDir },
}

impl fmt::Display for RotationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationError::InvalidPath { depth } => {
                write!(f, "path does not address an internal node (reached a leaf after {depth} steps)")
            }
            RotationError::LeafChild { dir } => {
                let side = match dir {
                    RotationDir::Right => "left",
                    RotationDir::Left => "right",
                };
                write!(f, "{side} child is a leaf, rotation not applicable")
            }
        }
    }
}

impl core::error::Error for RotationError {}

/// Error applying a sequence: the first failing op and its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequenceError {
    pub index: usize,
    pub error: RotationError,
}

impl fmt::Display for SequenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op {}: {}", self.index, self.error)
    }
}

impl core::error::Error for SequenceError {}

impl OrderedBinaryTree {
    /// Applies one rotation, returning the new tree. The result differs from
    /// `self` only within the subtree at the addressed position, and the
    /// in-order leaf sequence is unchanged.
    pub fn apply_rotation(&self, op: &RotationOp) -> Result<Self, RotationError> {
        let mut tree = self.clone();
        tree.rotate_in_place(op)?;
        Ok(tree)
    }

    /// Left fold of [`apply_rotation`](Self::apply_rotation) over the
    /// sequence; reports the first failing op with its index.
    pub fn apply_sequence(&self, seq: &RotationSequence) -> Result<Self, SequenceError> {
        let mut tree = self.clone();
        for (index, op) in seq.ops().iter().enumerate() {
            tree.rotate_in_place(op)
                .map_err(|error| SequenceError { index, error })?;
        }
        Ok(tree)
    }

    pub(crate) fn rotate_in_place(&mut self, op: &RotationOp) -> Result<(), RotationError> {
        let mut cur = self.root;
        let mut depth = 0u32;
        for step in op.path.steps() {
            let Node::Internal { left, right } = self.nodes[cur as usize] else {
                return Err(RotationError::InvalidPath { depth });
            };
            cur = match step {
                Side::Left => left,
                Side::Right => right,
            };
            depth += 1;
        }
        if !self.nodes[cur as usize].is_internal() {
            return Err(RotationError::InvalidPath { depth });
        }
        self.rotate_at(cur, op.dir)
    }

    /// Rotation by node slot. The slot is the *position*: after the call it
    /// holds the lifted child, so a cursor pointing at `v` keeps addressing
    /// the same position in the tree.
    pub(crate) fn rotate_at(&mut self, v: NodeId, dir: RotationDir) -> Result<(), RotationError> {
        let Node::Internal { left, right } = self.nodes[v as usize] else {
            return Err(RotationError::InvalidPath { depth: 0 });
        };
        match dir {
            RotationDir::Right => {
                let Node::Internal {
                    left: ul,
                    right: ur,
                } = self.nodes[left as usize]
                else {
                    return Err(RotationError::LeafChild { dir });
                };
                self.nodes[left as usize] = Node::Internal { left: ur, right };
                self.nodes[v as usize] = Node::Internal {
                    left: ul,
                    right: left,
                };
            }
            RotationDir::Left => {
                let Node::Internal {
                    left: ul,
                    right: ur,
                } = self.nodes[right as usize]
                else {
                    return Err(RotationError::LeafChild { dir });
                };
                self.nodes[right as usize] = Node::Internal { left, right: ul };
                self.nodes[v as usize] = Node::Internal {
                    left: right,
                    right: ur,
                };
            }
        }
        Ok(())
    }
}
