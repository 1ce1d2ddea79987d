//! Combinatorial Regge calculus on closed 3-manifold triangulations.
//!
//! - [`complex`]: facet-gluing triangulations, orbits, validity, canonical
//!   signatures and first homology.
//! - [`action`]: equal-edge-length Regge action and its volume-normalized form.
//! - [`moves`]: Pachner moves.
//! - [`sampler`]: Metropolis–Hastings walks over triangulations.
//! - [`ensemble`]: partition functions, the two-level model and the
//!   cosmological-constant estimate.
//! - [`census`]: exhaustive enumeration, classification and degeneracy
//!   histograms.

pub mod action;
pub mod census;
pub mod complex;
pub mod ensemble;
pub mod moves;
pub mod perm;
pub mod report;
pub mod sampler;
mod unionfind;

pub use complex::{GluedTriangulation, Gluing, IsoSignature, QuotientSkeleton, RationalMu};
pub use perm::Perm4;
