//! Combinatorics of non-degenerate complete intersections in toric varieties.
//!
//! The crate covers exact integer linear algebra, rational polytopes and fans,
//! homogenization of Laurent systems with respect to a fan, the anticanonical
//! complex with its singularity tests, fake weighted projective spaces, and an
//! enumeration engine for terminal Fano threefolds embedded in them.

pub mod anticanonical;
pub mod classification;
pub mod error;
pub mod laurent;
pub mod lattice;
pub mod fan;
pub mod fwps;
pub mod polytope;

pub use error::{Error, ErrorKind, Result};
