//! Right product quasigroups and loops over finite carriers.
//!
//! An algebra `(S; *, \, /)` is a right product quasigroup when it is
//! isomorphic to `Q x R` with `Q` a quasigroup and `R` a right zero
//! semigroup. This crate checks the equational characterization, splits
//! such algebras into their two factors, solves `xa = b`, reduces bracketed
//! products, decides the word problem and searches for small models.

pub mod algebra;
pub mod axioms;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod products;
pub mod search;
pub mod solver;
pub mod structure;
pub mod term;
pub mod word;

pub use algebra::{Element, FiniteAlgebra, OpSymbol, Table};
pub use error::{Error, Result};
pub use term::{Assignment, Identity, Term, Verdict};
