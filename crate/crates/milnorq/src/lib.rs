//! Mod-2 Steenrod operations on Stiefel-Whitney classes and mechanical
//! verification of E-module decompositions of the cohomology of BSO(n)
//! and BO(n), where E is the exterior algebra on the Milnor primitives
//! Q0 and Q1.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf2mat`]: bit-packed GF(2) vectors, matrices, rank/solve kernel
//! - [`gf2poly`]: monomials, polynomials, graded bases, Poincaré series
//! - [`steenrod`]: Wu-formula Steenrod squares and the primitives Q0, Q1
//! - [`emodule`]: truncated graded modules over E = Λ(Q0, Q1)
//! - [`margolis`]: Margolis homology, freeness windows, series arithmetic
//! - [`spaces`]: the concrete modules (BSO, BO, Thom spaces, d_J families)
//! - [`verify`]: orchestrated degree-by-degree theorem checks
//! - [`cli`]: command-line surface with text and JSON reports

pub mod cli;
pub mod emodule;
pub mod error;
pub mod gf2mat;
pub mod gf2poly;
pub mod margolis;
pub mod spaces;
pub mod steenrod;
pub mod verify;

pub use error::{Error, Result};
