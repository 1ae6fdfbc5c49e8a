//! The Weierstrass representation: evaluating immersion, conormal and
//! affine metric of an improper affine map from a pair (G, F) of
//! holomorphic (split-holomorphic) functions on a parameter grid, with the
//! height path integral, vertical period accounting and singular-set
//! extraction.

mod domain;
mod mesh;
mod quad;
mod singular;
mod surface;

pub use domain::{DomainKind, DomainSpec, Puncture};
pub use mesh::{MeshKind, Sample, SurfaceMesh};
pub use quad::{gauss_legendre, integrate_expr_product, integrate_fdg, integrate_g_dfbar, QuadOptions};
pub use singular::{extract_singular_curves, SingularCurve};
pub use surface::{detect_period, eval_surface, eval_surface_seq, eval_surface_with, working_pair};

use crate::cnum::Eps;
use crate::error::Error;
use crate::holo::HoloExpr;
use crate::Result;

/// Weierstrass data: the generating pair (G, F), the algebra and the domain
/// to evaluate on.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    pub g: HoloExpr,
    pub f: HoloExpr,
    pub eps: Eps,
    pub domain: DomainSpec,
    /// Human-readable description of where the data came from.
    pub provenance: String,
}

impl WeierstrassData {
    pub fn new(g: HoloExpr, f: HoloExpr, domain: DomainSpec, provenance: impl Into<String>) -> Result<Self> {
        if g.eps() != f.eps() || g.eps() != domain.eps {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self { eps: g.eps(), g, f, domain, provenance: provenance.into() })
    }

    /// Same data on a different grid resolution.
    pub fn with_resolution(mut self, n_s: usize, n_t: usize) -> Self {
        self.domain.n_s = n_s;
        self.domain.n_t = n_t;
        self
    }

    /// Same data on a different domain.
    pub fn with_domain(mut self, domain: DomainSpec) -> Result<Self> {
        if domain.eps != self.eps {
            return Err(Error::AlgebraMismatch);
        }
        self.domain = domain;
        Ok(self)
    }
}
