//! Evaluated surface meshes.

use crate::cnum::{CEps, Eps};
use crate::error::Error;
use crate::geom::Vec3;
use crate::weier::WeierstrassData;
use crate::Result;

/// How the grid parameters relate to the surface domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshKind {
    /// z = s + j t.
    Plane,
    /// z = exp(s + j t); t wraps at 2 pi.
    LogPolar { r_inner: f64, r_outer: f64 },
    /// (s, t) are asymptotic coordinates (u, v) of a hyperbolic surface.
    Asymptotic,
}

/// One evaluated grid sample.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    /// Grid parameters (s, t).
    pub s: f64,
    pub t: f64,
    /// The corresponding point of the surface domain.
    pub z: CEps,
    /// Immersion psi = (x, y, u).
    pub psi: Vec3,
    /// Affine conormal, third component exactly 1.
    pub n: Vec3,
    /// Metric coefficients (E, F, G) of h in the grid parameters.
    pub h: (f64, f64, f64),
    /// Degeneracy indicator of h; the singular set is its zero set.
    pub h_deg: f64,
    /// |h_deg| at or below the degeneracy threshold.
    pub singular: bool,
    /// Inside a puncture guard (or evaluation failed there); not a surface
    /// point, excluded from faces and checks.
    pub excluded: bool,
}

/// Grid of evaluated samples, immutable once built.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub eps: Eps,
    pub kind: MeshKind,
    pub n_s: usize,
    pub n_t: usize,
    /// Row-major: index = i * n_t + k with i the s index.
    pub samples: Vec<Sample>,
    /// For log-polar meshes: Re of the loop integral of -F dG around the
    /// puncture. The height jump per turn is twice this value.
    pub vertical_period: Option<f64>,
    pub provenance: String,
    /// The generating data when the mesh was built in-process; lost on
    /// CSV re-import.
    pub source: Option<WeierstrassData>,
}

impl SurfaceMesh {
    pub fn idx(&self, i: usize, k: usize) -> usize {
        debug_assert!(i < self.n_s && k < self.n_t);
        i * self.n_t + k
    }

    pub fn at(&self, i: usize, k: usize) -> &Sample {
        &self.samples[self.idx(i, k)]
    }

    /// Whether the t direction closes up.
    pub fn wraps_t(&self) -> bool {
        matches!(self.kind, MeshKind::LogPolar { .. })
    }

    /// Grid steps in (s, t).
    pub fn steps(&self) -> (f64, f64) {
        let ds = self.at(1, 0).s - self.at(0, 0).s;
        let dt = self.at(0, 1).t - self.at(0, 0).t;
        (ds, dt)
    }

    /// A sample is usable for verification stencils when neither it nor the
    /// flag of interest marks it out.
    pub fn usable(&self, i: usize, k: usize) -> bool {
        let s = self.at(i, k);
        !(s.singular || s.excluded)
    }

    /// Neighbor index in t with seam wrap for log-polar meshes; `None` at an
    /// open boundary.
    pub fn t_neighbor(&self, k: usize, delta: isize) -> Option<usize> {
        let n = self.n_t as isize;
        let kk = k as isize + delta;
        if self.wraps_t() {
            Some(kk.rem_euclid(n) as usize)
        } else if (0..n).contains(&kk) {
            Some(kk as usize)
        } else {
            None
        }
    }

    /// Interior samples (full FD stencil available, no flagged neighbor).
    /// For wrapped meshes the seam columns count as interior, but crossing
    /// the seam is only safe for fields unaffected by the vertical period,
    /// so callers on log-polar meshes with a nonzero period should stay off
    /// the seam; this helper already excludes it in that case.
    pub fn interior_nodes(&self) -> Vec<(usize, usize)> {
        let period = self.vertical_period.unwrap_or(0.0);
        let seam_safe = period.abs() <= 1e-12;
        let mut out = Vec::new();
        for i in 1..self.n_s.saturating_sub(1) {
            for k in 0..self.n_t {
                let boundary_t = if self.wraps_t() {
                    !seam_safe && (k == 0 || k + 1 == self.n_t)
                } else {
                    k == 0 || k + 1 == self.n_t
                };
                if boundary_t {
                    continue;
                }
                let neighbors_ok = [(i + 1, Some(k)), (i - 1, Some(k))]
                    .into_iter()
                    .chain([(i, self.t_neighbor(k, 1)), (i, self.t_neighbor(k, -1))])
                    .all(|(ii, kk)| kk.is_some_and(|kk| self.usable(ii, kk)));
                if neighbors_ok && self.usable(i, k) {
                    out.push((i, k));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.len() != self.n_s * self.n_t {
            return Err(Error::InvalidMesh(format!(
                "sample count {} does not match grid {}x{}",
                self.samples.len(),
                self.n_s,
                self.n_t
            )));
        }
        if self.samples.iter().any(|s| s.n.z != 1.0) {
            return Err(Error::InvalidMesh("conormal normalization broken: N3 != 1".into()));
        }
        Ok(())
    }
}
