//! Combinatorics of strand algebras over pointed matched circles.
//!
//! A pointed matched circle carries 4k marked points matched in pairs; its
//! strand diagrams form a differential algebra over ℤ/2, and the diagrams
//! compatible with the matching span the subalgebra whose generators are
//! idempotent-decorated chord sets. This crate builds those objects with
//! exact arithmetic (half-integers and rationals, never floats) and computes
//! the grading that refines them: a Maslov component paired with a relative
//! homology class, composed through a pairing correction term.
//!
//! The same Maslov component is implemented three independent ways: a closed
//! form on chord sets, the inversion count of strand diagrams, and a signed
//! crossing count of chord arcs against their pushoffs. [`verify`] runs the
//! agreement checks, the grading laws, and the normalization tally on any
//! circle, exhaustively or by seeded sampling. [`diagrams`] evaluates the
//! Euler-measure index of bordered domains against the same grading data.
//!
//! Everything is deterministic: containers are ordered, serialization is
//! canonical, and randomized checks take explicit seeds.

pub mod algebra;
pub mod diagrams;
pub mod grading;
pub mod halfint;
pub mod pmc;
pub mod pontryagin;
pub mod strands;
pub mod verify;

pub use halfint::HalfInteger;
pub use pmc::PointedMatchedCircle;
