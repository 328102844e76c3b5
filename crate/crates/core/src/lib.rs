//! Spectral geometry of the Bakry-Émery (drift) Laplacian on rotationally
//! symmetric weighted manifolds.
//!
//! The crate discretizes `Δ_φ = Δ - ∇φ·∇` on warped products and circles,
//! computes the bottom of its spectrum, and checks the classical lower
//! bounds for the first non-zero eigenvalue (Lichnerowicz type and the
//! `π²/d² + (31/100)(n-1)K` estimate), together with the gradient estimate,
//! barrier comparison and soliton identities behind them.
//!
//! Everything here is `no_std` + `alloc`; IO lives in the companion crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod estimate;
pub mod geometry;
pub mod jet;
pub mod profile;
pub mod quadrature;
pub mod soliton;
pub mod spectral;
pub mod testfn;
pub mod tridiag;

pub use error::Error;
pub use geometry::{Grid, Topology, WarpedManifold};
pub use profile::{CubicSpline, Profile, SplineEnd};
