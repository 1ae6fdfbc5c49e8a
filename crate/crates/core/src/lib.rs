//! Construction and verification of improper affine spheres and improper
//! affine maps: geometric solutions of the Hessian one equation
//! `u_xx u_yy - u_xy^2 = eps` with `eps = +1` (elliptic) or `eps = -1`
//! (hyperbolic).
//!
//! The crate builds surfaces from closed-form holomorphic (split-holomorphic)
//! Weierstrass data, transforms them through the Riccati machinery of
//! R-associated pairs, solves the non-characteristic geometric Cauchy
//! problem from analytic curve data, and checks every constructed mesh
//! against the structure equations and the PDE itself.
//!
//! Grid evaluation and verification sweeps are data parallel (rayon) when
//! the `parallel` feature is enabled (default); the sequential fallback
//! produces bit-identical results.

pub mod cauchy;
pub mod cnum;
pub mod error;
pub mod exec;
pub mod gallery;
pub mod geom;
pub mod holo;
pub mod ribaucour;
pub mod verify;
pub mod weier;

pub use cnum::{CEps, Eps};
pub use error::Error;
pub use geom::Vec3;
pub use holo::HoloExpr;
pub use weier::{DomainSpec, SurfaceMesh, WeierstrassData};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
