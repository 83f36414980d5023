//! Rotation distance toolkit for ordered rooted binary trees.
//!
//! Rotation distance — the minimum number of rotations turning one tree shape
//! into another — has no known polynomial-time algorithm. This crate computes
//! provable lower and upper bounds that bracket the distance within a factor
//! of two in linear time, emits a witness rotation sequence realizing the
//! upper bound, and provides exact breadth-first oracles for verifying all of
//! it at small sizes.
//!
//! - [`tree`]: the tree type, text encoding, construction, canonical codes.
//! - [`rotation`]: rotations addressed by root paths, sequences of them.
//! - [`edges`]: common edge pairs via leaf-interval equality, piece splitting.
//! - [`approx`]: distance bounds, witness sequences, refined upper bounds.
//! - [`oracle`]: exact distances, exhaustive enumeration, diameters.
//!
//! The crate is `no_std` (with `alloc`); IO, the CLI, and file formats live in
//! the companion binary crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approx;
pub mod edges;
pub mod oracle;
pub mod rotation;
pub mod tree;

pub use approx::{
    approx_sequence, comb_sequence, distance_bounds, refined_upper, ApproxError, DistanceBounds,
    RefinedConfig, RefinedUpper,
};
pub use edges::{
    common_edges, edge_intervals, reassemble_pieces, split_at_common_edges, LeafCountMismatch,
    LeafInterval, PieceOuter, PiecePair, ReassembleError,
};
pub use oracle::{
    catalan, diameter, enumerate_trees, exact_distance, rotation_neighbors, OracleError,
    DEFAULT_STATE_LIMIT, MAX_ENUMERATION_SIZE,
};
pub use rotation::{
    NodePath, OpParseError, RotationDir, RotationError, RotationOp, RotationSequence,
    SequenceError, SequenceParseError,
};
pub use tree::{CanonicalCode, DecodeError, OrderedBinaryTree, ParseError, Side};
