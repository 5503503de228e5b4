//! Monomial bases for irreducible representations of so(2n+1).
//!
//! The basis of `L_λ` is indexed by the lattice points of a polytope `Π_λ`
//! cut out by weighted sums over Dyck paths in a triangular grid of roots.
//! The crate builds that polytope, its bijection with Gelfand–Tsetlin
//! patterns, explicit matrix models of the modules, rewriting in the
//! enveloping algebra, and exact checks of the resulting basis statements.

pub mod cli;
pub mod error;
pub mod gtbij;
pub mod kernel;
pub mod patterns;
pub mod pbw;
pub mod repbuild;
pub mod rootsys;
pub mod verify;

pub use error::{Error, Result};
