//! Ordered rooted binary trees: representation, text encoding, construction.
//!
//! Every internal node has exactly two ordered children (an *extended* binary
//! tree), so a tree with `n` internal nodes has exactly `n + 1` leaves. Leaves
//! carry no stored labels: leaf `k` is simply the k-th leaf in left-to-right
//! order. All operations are iterative; trees with millions of nodes are fine.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::hash::{Hash, Hasher};
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

pub(crate) type NodeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Leaf,
    Internal { left: NodeId, right: NodeId },
}

impl Node {
    pub(crate) fn is_internal(self) -> bool {
        matches!(self, Node::Internal { .. })
    }
}

/// Which child of an internal node; also selects the orientation of a comb.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char(self.letter())
    }
}

/// An ordered rooted binary tree in which every internal node has exactly two
/// children. The tree is a pure shape: equality, hashing, and the text form
/// all ignore the internal storage layout.
///
/// Text grammar: `TREE := "." | "(" TREE "," TREE ")"`, optionally with
/// whitespace between tokens. A labeled variant replaces each `.` with the
/// leaf's 1-based in-order position, e.g. `(1,(2,3))`.
#[derive(Clone)]
pub struct OrderedBinaryTree {
    pub(crate) nodes: Vec<Node>,
    pub(crate) root: NodeId,
}

/// Error raised by [`OrderedBinaryTree::parse`], with a byte position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseError {
    UnexpectedChar { position: usize, found: char },
    UnexpectedEnd,
    TrailingInput { position: usize },
    LabelOutOfOrder { position: usize, expected: u32, found: u32 },
    MixedLabels { position: usize },
    LabelTooLarge { position: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ParseError::UnexpectedChar { position, found } => {
                write!(f, "syntax error at byte {position}: unexpected {found:?}")
            }
            ParseError::UnexpectedEnd => write!(f, "syntax error: unexpected end of input"),
            ParseError::TrailingInput { position } => {
                write!(f, "trailing input after tree at byte {position}")
            }
            ParseError::LabelOutOfOrder {
                position,
                expected,
                found,
            } => write!(
                f,
                "leaf label {found} at byte {position}: leaves must read 1..n+1 left to right (expected {expected})"
            ),
            ParseError::MixedLabels { position } => {
                write!(f, "mixed labeled and unlabeled leaves at byte {position}")
            }
            ParseError::LabelTooLarge { position } => {
                write!(f, "leaf label at byte {position} is too large")
            }
        }
    }
}

impl core::error::Error for ParseError {}

/// Error raised by [`CanonicalCode::decode`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeError {
    /// The bit string ended before the tree was complete.
    Truncated,
    /// The tree was complete before the bit string ended.
    TrailingBits,
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::Truncated => write!(f, "code ends before the tree is complete"),
            DecodeError::TrailingBits => write!(f, "code continues past a complete tree"),
        }
    }
}

impl core::error::Error for DecodeError {}

impl OrderedBinaryTree {
    /// The single-leaf tree (`n = 0`).
    pub fn leaf() -> Self {
        OrderedBinaryTree {
            nodes: vec![Node::Leaf],
            root: 0,
        }
    }

    /// Parses the text grammar. Labeled and unlabeled encodings of the same
    /// shape parse to equal trees; labels are validated and discarded.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let mut nodes: Vec<Node> = Vec::new();
        // Internal nodes whose children are still being parsed; the flag is
        // true once the left child has been attached.
        let mut frames: Vec<(NodeId, bool)> = Vec::new();
        let mut labeled: Option<bool> = None;
        let mut leaves_seen: u32 = 0;

        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };

        loop {
            skip_ws(&mut pos);
            // Parse one TREE production.
            let leaf_id: NodeId = match bytes.get(pos) {
                Some(b'(') => {
                    let id = nodes.len() as NodeId;
                    nodes.push(Node::Internal { left: 0, right: 0 });
                    frames.push((id, false));
                    pos += 1;
                    continue;
                }
                Some(b'.') => {
                    if labeled.replace(false) == Some(true) {
                        return Err(ParseError::MixedLabels { position: pos });
                    }
                    pos += 1;
                    leaves_seen += 1;
                    let id = nodes.len() as NodeId;
                    nodes.push(Node::Leaf);
                    id
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = pos;
                    if labeled.replace(true) == Some(false) {
                        return Err(ParseError::MixedLabels { position: start });
                    }
                    let mut value: u64 = 0;
                    while let Some(d) = bytes.get(pos).filter(|b| b.is_ascii_digit()) {
                        value = value * 10 + u64::from(d - b'0');
                        if value > u64::from(u32::MAX) {
                            return Err(ParseError::LabelTooLarge { position: start });
                        }
                        pos += 1;
                    }
                    leaves_seen += 1;
                    if value != u64::from(leaves_seen) {
                        return Err(ParseError::LabelOutOfOrder {
                            position: start,
                            expected: leaves_seen,
                            found: value as u32,
                        });
                    }
                    let id = nodes.len() as NodeId;
                    nodes.push(Node::Leaf);
                    id
                }
                Some(&c) => {
                    return Err(ParseError::UnexpectedChar {
                        position: pos,
                        found: c as char,
                    })
                }
                None => return Err(ParseError::UnexpectedEnd),
            };

            // A subtree just completed; attach it upward as far as possible.
            let mut completed = leaf_id;
            loop {
                skip_ws(&mut pos);
                match frames.last_mut() {
                    None => {
                        if pos < bytes.len() {
                            return Err(ParseError::TrailingInput { position: pos });
                        }
                        return Ok(OrderedBinaryTree {
                            nodes,
                            root: completed,
                        });
                    }
                    Some((id, left_done @ false)) => {
                        if let Node::Internal { left, .. } = &mut nodes[*id as usize] {
                            *left = completed;
                        }
                        *left_done = true;
                        match bytes.get(pos) {
                            Some(b',') => pos += 1,
                            Some(&c) => {
                                return Err(ParseError::UnexpectedChar {
                                    position: pos,
                                    found: c as char,
                                })
                            }
                            None => return Err(ParseError::UnexpectedEnd),
                        }
                        break;
                    }
                    Some(&mut (id, true)) => {
                        if let Node::Internal { right, .. } = &mut nodes[id as usize] {
                            *right = completed;
                        }
                        match bytes.get(pos) {
                            Some(b')') => pos += 1,
                            Some(&c) => {
                                return Err(ParseError::UnexpectedChar {
                                    position: pos,
                                    found: c as char,
                                })
                            }
                            None => return Err(ParseError::UnexpectedEnd),
                        }
                        frames.pop();
                        completed = id;
                    }
                }
            }
        }
    }

    /// Canonical serialization: no whitespace, `.` for every leaf.
    /// `parse(t.to_text()) == t` for every tree.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(4 * self.internal_count() as usize + 1);
        self.write_tree(&mut out, false).expect("write to String");
        out
    }

    /// Serialization with leaves replaced by their 1-based in-order position.
    pub fn to_text_labeled(&self) -> String {
        let mut out = String::new();
        self.write_tree(&mut out, true).expect("write to String");
        out
    }

    fn write_tree<W: fmt::Write>(&self, w: &mut W, labeled: bool) -> fmt::Result {
        enum Item {
            Node(NodeId),
            Byte(char),
        }
        let mut stack = vec![Item::Node(self.root)];
        let mut next_leaf = 0u32;
        while let Some(item) = stack.pop() {
            match item {
                Item::Byte(c) => w.write_char(c)?,
                Item::Node(id) => match self.nodes[id as usize] {
                    Node::Leaf => {
                        next_leaf += 1;
                        if labeled {
                            write!(w, "{next_leaf}")?;
                        } else {
                            w.write_char('.')?;
                        }
                    }
                    Node::Internal { left, right } => {
                        w.write_char('(')?;
                        stack.push(Item::Byte(')'));
                        stack.push(Item::Node(right));
                        stack.push(Item::Byte(','));
                        stack.push(Item::Node(left));
                    }
                },
            }
        }
        Ok(())
    }

    /// Number of internal nodes (the size of the tree).
    pub fn internal_count(&self) -> u32 {
        (self.nodes.len() as u32 - 1) / 2
    }

    /// Number of leaves, always `internal_count() + 1`.
    pub fn leaf_count(&self) -> u32 {
        self.internal_count() + 1
    }

    /// Number of internal nodes reachable from the root by following only
    /// right-child links, the root included when it is internal.
    pub fn right_spine_count(&self) -> u32 {
        let mut count = 0;
        let mut cur = self.root;
        while let Node::Internal { right, .. } = self.nodes[cur as usize] {
            count += 1;
            cur = right;
        }
        count
    }

    /// Builds the comb (caterpillar) with `n` internal nodes. In a right comb
    /// every internal node's left child is a leaf; a left comb is the mirror.
    pub fn comb(n: u32, side: Side) -> Self {
        let mut nodes = Vec::with_capacity(2 * n as usize + 1);
        nodes.push(Node::Leaf);
        let mut root: NodeId = 0;
        for _ in 0..n {
            let leaf = nodes.len() as NodeId;
            nodes.push(Node::Leaf);
            let next = nodes.len() as NodeId;
            nodes.push(match side {
                Side::Right => Node::Internal {
                    left: leaf,
                    right: root,
                },
                Side::Left => Node::Internal {
                    left: root,
                    right: leaf,
                },
            });
            root = next;
        }
        OrderedBinaryTree { nodes, root }
    }

    /// Uniformly random tree shape with `n` internal nodes, deterministic in
    /// `(n, seed)`.
    ///
    /// Grown by leaf insertion: at step `k` one of the existing `2k - 1` nodes
    /// and a side are chosen uniformly, and the chosen node is replaced by a
    /// new internal node whose other child is a fresh leaf. This makes all
    /// `Catalan(n)` shapes equally likely.
    pub fn random(n: u32, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nodes = Vec::with_capacity(2 * n as usize + 1);
        nodes.push(Node::Leaf);
        let mut all: Vec<NodeId> = Vec::with_capacity(2 * n as usize + 1);
        all.push(0);
        for _ in 0..n {
            let target = all[rng.gen_range(0..all.len())] as usize;
            let moved = nodes.len() as NodeId;
            nodes.push(nodes[target]);
            let leaf = nodes.len() as NodeId;
            nodes.push(Node::Leaf);
            nodes[target] = if rng.gen::<bool>() {
                Node::Internal {
                    left: leaf,
                    right: moved,
                }
            } else {
                Node::Internal {
                    left: moved,
                    right: leaf,
                }
            };
            all.push(moved);
            all.push(leaf);
        }
        OrderedBinaryTree { nodes, root: 0 }
    }

    /// Preorder shape encoding: bit 1 for internal, 0 for leaf; length
    /// `2n + 1` bits. Injective over trees, decodable via
    /// [`CanonicalCode::decode`].
    pub fn canonical_code(&self) -> CanonicalCode {
        let mut code = CanonicalCode {
            words: SmallVec::new(),
            bits: 0,
        };
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            match self.nodes[id as usize] {
                Node::Leaf => code.push_bit(false),
                Node::Internal { left, right } => {
                    code.push_bit(true);
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        code
    }

    /// Leaf span `(lo, hi)` of every node, indexed by internal slot id.
    /// Leaves get `(k, k)`; an internal node spans its whole subtree.
    pub(crate) fn node_spans(&self) -> Vec<(u32, u32)> {
        let mut spans = vec![(0u32, 0u32); self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        let mut next_leaf = 0u32;
        while let Some((id, expanded)) = stack.pop() {
            match self.nodes[id as usize] {
                Node::Leaf => {
                    next_leaf += 1;
                    spans[id as usize] = (next_leaf, next_leaf);
                }
                Node::Internal { left, right } => {
                    if expanded {
                        spans[id as usize] = (spans[left as usize].0, spans[right as usize].1);
                    } else {
                        stack.push((id, true));
                        stack.push((right, false));
                        stack.push((left, false));
                    }
                }
            }
        }
        spans
    }

    /// New tree with `left` and `right` as the root's subtrees.
    pub(crate) fn join(left: &Self, right: &Self) -> Self {
        let llen = left.nodes.len() as NodeId;
        let mut nodes = Vec::with_capacity(left.nodes.len() + right.nodes.len() + 1);
        nodes.push(Node::Internal {
            left: 1 + left.root,
            right: 1 + llen + right.root,
        });
        nodes.extend(left.nodes.iter().map(|n| offset_node(*n, 1)));
        nodes.extend(right.nodes.iter().map(|n| offset_node(*n, 1 + llen)));
        OrderedBinaryTree { nodes, root: 0 }
    }

    /// Copy of `self` with the leaves at the given 1-based in-order positions
    /// replaced by the given subtrees. `subs` must be sorted by position.
    pub(crate) fn with_leaves_replaced(&self, subs: &[(u32, &OrderedBinaryTree)]) -> Self {
        debug_assert!(subs.windows(2).all(|w| w[0].0 < w[1].0));
        let extra: usize = subs.iter().map(|(_, t)| t.nodes.len() - 1).sum();
        let mut nodes = Vec::with_capacity(self.nodes.len() + extra);
        nodes.push(Node::Leaf);
        let mut stack: Vec<(NodeId, u32)> = vec![(self.root, 0)];
        let mut leaf_pos = 0u32;
        let mut subs = subs.iter().peekable();
        while let Some((old, slot)) = stack.pop() {
            match self.nodes[old as usize] {
                Node::Leaf => {
                    leaf_pos += 1;
                    if let Some(&&(pos, sub)) = subs.peek() {
                        if pos == leaf_pos {
                            subs.next();
                            splice_subtree(&mut nodes, slot, sub);
                            continue;
                        }
                    }
                    nodes[slot as usize] = Node::Leaf;
                }
                Node::Internal { left, right } => {
                    let ls = nodes.len() as NodeId;
                    nodes.push(Node::Leaf);
                    let rs = nodes.len() as NodeId;
                    nodes.push(Node::Leaf);
                    nodes[slot as usize] = Node::Internal {
                        left: ls,
                        right: rs,
                    };
                    stack.push((right, rs));
                    stack.push((left, ls));
                }
            }
        }
        OrderedBinaryTree { nodes, root: 0 }
    }
}

fn offset_node(node: Node, delta: NodeId) -> Node {
    match node {
        Node::Leaf => Node::Leaf,
        Node::Internal { left, right } => Node::Internal {
            left: left + delta,
            right: right + delta,
        },
    }
}

/// Copies `sub` into `nodes`, its root landing in the existing `slot`.
fn splice_subtree(nodes: &mut Vec<Node>, slot: NodeId, sub: &OrderedBinaryTree) {
    let base = nodes.len() as NodeId;
    let remap = |id: NodeId| -> NodeId {
        if id == sub.root {
            slot
        } else if id < sub.root {
            base + id
        } else {
            base + id - 1
        }
    };
    let mapped = |n: Node| match n {
        Node::Leaf => Node::Leaf,
        Node::Internal { left, right } => Node::Internal {
            left: remap(left),
            right: remap(right),
        },
    };
    for (id, n) in sub.nodes.iter().enumerate() {
        if id as NodeId != sub.root {
            nodes.push(mapped(*n));
        }
    }
    nodes[slot as usize] = mapped(sub.nodes[sub.root as usize]);
}

impl PartialEq for OrderedBinaryTree {
    fn eq(&self, other: &Self) -> bool {
        if self.nodes.len() != other.nodes.len() {
            return false;
        }
        let mut stack = vec![(self.root, other.root)];
        while let Some((a, b)) = stack.pop() {
            match (self.nodes[a as usize], other.nodes[b as usize]) {
                (Node::Leaf, Node::Leaf) => {}
                (
                    Node::Internal {
                        left: al,
                        right: ar,
                    },
                    Node::Internal {
                        left: bl,
                        right: br,
                    },
                ) => {
                    stack.push((ar, br));
                    stack.push((al, bl));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for OrderedBinaryTree {}

impl Hash for OrderedBinaryTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_usize(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            match self.nodes[id as usize] {
                Node::Leaf => state.write_u8(0),
                Node::Internal { left, right } => {
                    state.write_u8(1);
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
    }
}

impl fmt::Display for OrderedBinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, false)
    }
}

impl fmt::Debug for OrderedBinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderedBinaryTree({self})")
    }
}

impl FromStr for OrderedBinaryTree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OrderedBinaryTree::parse(s)
    }
}

/// Preorder bit encoding of a tree shape, packed most-significant-bit first
/// so the derived ordering is the lexicographic order of the bit string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    words: SmallVec<[u64; 2]>,
    bits: u32,
}

impl CanonicalCode {
    fn push_bit(&mut self, one: bool) {
        let word = (self.bits / 64) as usize;
        if word == self.words.len() {
            self.words.push(0);
        }
        if one {
            self.words[word] |= 1u64 << (63 - self.bits % 64);
        }
        self.bits += 1;
    }

    pub fn bit_len(&self) -> u32 {
        self.bits
    }

    pub fn bit(&self, index: u32) -> bool {
        debug_assert!(index < self.bits);
        self.words[(index / 64) as usize] >> (63 - index % 64) & 1 == 1
    }

    /// Rebuilds the tree the code was taken from.
    pub fn decode(&self) -> Result<OrderedBinaryTree, DecodeError> {
        let mut nodes: Vec<Node> = Vec::with_capacity(self.bits as usize);
        let mut frames: Vec<(NodeId, bool)> = Vec::new();
        let mut next = 0u32;
        loop {
            if next == self.bits {
                return Err(DecodeError::Truncated);
            }
            let one = self.bit(next);
            next += 1;
            if one {
                let id = nodes.len() as NodeId;
                nodes.push(Node::Internal { left: 0, right: 0 });
                frames.push((id, false));
                continue;
            }
            let mut completed = nodes.len() as NodeId;
            nodes.push(Node::Leaf);
            loop {
                match frames.last_mut() {
                    None => {
                        if next != self.bits {
                            return Err(DecodeError::TrailingBits);
                        }
                        return Ok(OrderedBinaryTree {
                            nodes,
                            root: completed,
                        });
                    }
                    Some((id, left_done @ false)) => {
                        if let Node::Internal { left, .. } = &mut nodes[*id as usize] {
                            *left = completed;
                        }
                        *left_done = true;
                        break;
                    }
                    Some(&mut (id, true)) => {
                        if let Node::Internal { right, .. } = &mut nodes[id as usize] {
                            *right = completed;
                        }
                        frames.pop();
                        completed = id;
                    }
                }
            }
        }
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.bits {
            f.write_char(if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}
