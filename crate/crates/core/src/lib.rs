//! Exact computer algebra for plane polynomial automorphisms.
//!
//! The crate implements, over the rationals, the amalgamated-product structure
//! of the group of plane polynomial automorphisms: normal forms and lengths,
//! the Bass-Serre tree with its action, axes of hyperbolic elements, the
//! color/generality/independence calculus, labeled combinatorial diagrams with
//! curvature accounting, and constructive normal-closure certificates.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod algebra;
pub mod auto;
pub mod closure;
pub mod colors;
pub mod diagrams;
pub mod error;
pub mod expr;
pub mod rng;
pub mod tree;

pub use algebra::{BPoly, Degree, Rat, UPoly};
pub use auto::{Factorization, PolyAuto, Tail, Token, Word};
pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
