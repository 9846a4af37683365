//! Exact combinatorics and polynomial algebra for smooth toroidal
//! compactifications of Siegel varieties.
//!
//! * [`poly`], [`polymat`]: sparse polynomials over ℚ and their determinants.
//! * [`cone`]: marked simplicial cones in `Sym_g`, lattice volumes, fans, separability.
//! * [`volume`]: local volume functions `F_σ` and the Monge–Ampère identity.
//! * [`residue`]: degree identities, the residue chain, intersection verdicts.
//! * [`period`]: floating-point checks on the Siegel space and its cusps.
//! * [`catalog`]: builtin cones.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cone;
pub mod error;
pub mod feasibility;
pub mod json;
pub mod linalg;
pub mod period;
pub mod poly;
pub mod polymat;
pub mod residue;
pub mod volume;

pub use error::{Error, Result};
pub use poly::{MultiPoly, Rational};
