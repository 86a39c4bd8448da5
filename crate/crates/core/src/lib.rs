//! Numerical toolkit for the conformal geometry of two-component links in S^3:
//! the space of point-pairs as a pseudo-Riemannian submanifold of R^10_6, the
//! product torus of a link, its area, cross-ratio density and conformal angle.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conformal;
pub mod error;
pub mod functionals;
pub mod linalg;
pub mod link;
pub mod minkowski;
pub mod optimizer;
pub mod rng;
pub mod sphere;
pub mod symplectic;
pub mod verify;

pub use error::{Error, Result};
pub use link::{Link2, LinkCurve, MobiusMap};
