//! Exact computations with the ideal data behind naive blowups: monomial
//! ideals at points of σ-orbits, generalized naive sequences and their
//! torsion extensions, sparse subsets of ℕ, and point separation for orbits
//! in projective space.
//!
//! The modules layer as follows. [`monomial`] is plain commutative algebra.
//! [`sequence`] attaches ideals to orbit slots and builds sequences, stable
//! forms and torsion extensions on top. [`sparse`] and [`geometry`] are
//! independent of both. [`fixture`], [`expr`] and [`pipeline`] turn TOML
//! fixtures into verified reports.

pub mod error;
pub mod expr;
pub mod fixture;
pub mod geometry;
pub mod monomial;
pub mod pipeline;
pub mod sequence;
pub mod sparse;

pub use error::{Error, Result};
pub use monomial::{Colength, Monomial, MonomialIdeal};
pub use sequence::*;
pub use sparse::{BoundingFunction, SparseSetWindow};
