//! Fusion systems of small finite groups.
//!
//! Groups are permutation groups with a fully enumerated element table
//! ([`Group`]). On top of that kernel the crate builds the fusion system of a
//! group at a prime ([`FusionSystem`]), decides p-local equivalence of two
//! groups ([`equivalence`]), factors fusion morphisms through essential
//! subgroups ([`alperin`]) and computes the abelian invariants that classify
//! finite abelian groups prime by prime ([`abelian`]).

pub mod abelian;
pub mod alperin;
pub mod arith;
pub mod catalog;
pub mod describe;
pub mod diagram;
pub mod equivalence;
pub mod error;
pub mod fusion;
pub mod group;
pub mod iso;
pub mod perm;

pub use error::{Error, ParseError, Result};
pub use fusion::{FusionSystem, Morphism};
pub use group::{Group, Limits, Quotient, Subgroup};
pub use perm::Permutation;
