//! PDE residual in graph form: at each interior nonsingular sample, fit a
//! quadratic in (x, y) to the heights of the nearest samples and compare
//! det Hess of the fit against eps.
//!
//! The parameter grid maps to a distorted point cloud in the (x, y) plane,
//! so the fit is local least squares over the k nearest neighbors (spatial
//! hash + ring search) rather than any global interpolant. Near-singular
//! configurations make the normal equations ill conditioned; those samples
//! are skipped and counted.

use crate::exec::{self, ExecMode};
use crate::geom;
use crate::verify::{CheckResult, VerificationReport};
use crate::weier::SurfaceMesh;
use crate::Result;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Neighbors per local fit (includes the center sample).
    pub k_neighbors: usize,
    /// |det Hess - eps| tolerance; `None` picks the resolution-indexed
    /// default.
    pub hessian_tol: Option<f64>,
    /// Structure-residual tolerance; `None` picks the resolution-indexed
    /// default.
    pub structure_tol: Option<f64>,
    /// Pivot threshold for the local fit conditioning guard.
    pub conditioning: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { k_neighbors: 12, hessian_tol: None, structure_tol: None, conditioning: 1e-9 }
    }
}

/// Resolution-indexed default tolerance for the graph-Hessian residual on
/// generic analytic data: 1e-4 at 256^2, scaled by (256/n)^2.
pub fn hessian_tolerance(n: usize) -> f64 {
    1e-4 * (256.0 / n as f64).powi(2)
}

struct SpatialIndex {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl SpatialIndex {
    fn build(points: &[(f64, f64)], active: &[bool]) -> Option<Self> {
        let mut min = (f64::INFINITY, f64::INFINITY);
        let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut count = 0usize;
        for (p, &a) in points.iter().zip(active) {
            if !a {
                continue;
            }
            min = (min.0.min(p.0), min.1.min(p.1));
            max = (max.0.max(p.0), max.1.max(p.1));
            count += 1;
        }
        if count < 8 {
            return None;
        }
        let w = (max.0 - min.0).max(1e-300);
        let h = (max.1 - min.1).max(1e-300);
        let cell = ((w * h / count as f64).sqrt() * 1.5).max(1e-300);
        let nx = ((w / cell).ceil() as usize + 1).max(1);
        let ny = ((h / cell).ceil() as usize + 1).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        for (idx, (p, &a)) in points.iter().zip(active).enumerate() {
            if !a {
                continue;
            }
            let bx = (((p.0 - min.0) / cell) as usize).min(nx - 1);
            let by = (((p.1 - min.1) / cell) as usize).min(ny - 1);
            buckets[by * nx + bx].push(idx as u32);
        }
        Some(Self { x0: min.0, y0: min.1, cell, nx, ny, buckets })
    }

    /// Indices of the k nearest active points to `p`, deterministic order
    /// (distance, then index).
    fn nearest(&self, points: &[(f64, f64)], p: (f64, f64), k: usize) -> Vec<u32> {
        let bx = (((p.0 - self.x0) / self.cell).max(0.0) as usize).min(self.nx - 1);
        let by = (((p.1 - self.y0) / self.cell).max(0.0) as usize).min(self.ny - 1);
        let mut ring = 0usize;
        let mut cand: Vec<(f64, u32)> = Vec::new();
        loop {
            cand.clear();
            let r = ring as isize;
            for cy in (by as isize - r).max(0)..=(by as isize + r).min(self.ny as isize - 1) {
                for cx in (bx as isize - r).max(0)..=(bx as isize + r).min(self.nx as isize - 1) {
                    for &idx in &self.buckets[cy as usize * self.nx + cx as usize] {
                        let q = points[idx as usize];
                        let d = (q.0 - p.0).hypot(q.1 - p.1);
                        cand.push((d, idx));
                    }
                }
            }
            // enough candidates, and the ring boundary is already farther
            // than the k-th distance, so the set is final
            if cand.len() >= k {
                cand.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
                let kth = cand[k - 1].0;
                if ring as f64 * self.cell >= kth || ring >= self.nx.max(self.ny) {
                    return cand.iter().take(k).map(|&(_, i)| i).collect();
                }
            }
            if ring >= self.nx.max(self.ny) {
                cand.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
                return cand.iter().take(k.min(cand.len())).map(|&(_, i)| i).collect();
            }
            ring += 1;
        }
    }
}

/// `|det Hess u - eps|` from local quadratic least squares.
pub fn hessian_residual(mesh: &SurfaceMesh, opts: &VerifyOptions) -> Result<VerificationReport> {
    hessian_residual_with(mesh, opts, ExecMode::Auto)
}

pub fn hessian_residual_with(
    mesh: &SurfaceMesh,
    opts: &VerifyOptions,
    mode: ExecMode,
) -> Result<VerificationReport> {
    let eps = mesh.eps.sign();
    let n = mesh.samples.len();
    let points: Vec<(f64, f64)> = mesh.samples.iter().map(|s| (s.psi.x, s.psi.y)).collect();
    let active: Vec<bool> = mesh.samples.iter().map(|s| !s.excluded && !s.singular).collect();
    let usable = active.iter().filter(|&&a| a).count();
    if usable < 50 {
        return Err(crate::error::Error::InvalidMesh(format!(
            "hessian check needs at least 50 nonsingular samples, found {usable}"
        )));
    }
    let index = SpatialIndex::build(&points, &active)
        .ok_or_else(|| crate::error::Error::InvalidMesh("too few active samples".into()))?;
    let interior: Vec<(usize, usize)> = mesh.interior_nodes();
    let k = opts.k_neighbors.max(8);

    let rows: Vec<Option<(f64, (usize, usize))>> = exec::map_indexed_with(mode, interior.len(), |j| {
        let (i, kk) = interior[j];
        let idx = mesh.idx(i, kk);
        if !active[idx] {
            return None;
        }
        let p = points[idx];
        let nb = index.nearest(&points, p, k);
        if nb.len() < 6 {
            return None;
        }
        // scale local offsets for conditioning
        let rho = nb
            .iter()
            .map(|&q| {
                let (qx, qy) = points[q as usize];
                (qx - p.0).hypot(qy - p.1)
            })
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let mut m = Vec::with_capacity(nb.len() * 6);
        let mut y = Vec::with_capacity(nb.len());
        for &q in &nb {
            let (qx, qy) = points[q as usize];
            let dx = (qx - p.0) / rho;
            let dy = (qy - p.1) / rho;
            m.extend_from_slice(&[1.0, dx, dy, dx * dx, dx * dy, dy * dy]);
            y.push(mesh.samples[q as usize].psi.z);
        }
        match geom::least_squares(&m, &y, nb.len(), 6, opts.conditioning) {
            Ok(c) => {
                let uxx = 2.0 * c[3] / (rho * rho);
                let uxy = c[4] / (rho * rho);
                let uyy = 2.0 * c[5] / (rho * rho);
                let det = uxx * uyy - uxy * uxy;
                Some(((det - eps).abs(), (i, kk)))
            }
            Err(_) => None, // ill-conditioned: near-singular configuration
        }
    });

    let mut residuals = Vec::new();
    let mut skipped = 0usize;
    for r in rows {
        match r {
            Some(v) => residuals.push(v),
            None => skipped += 1,
        }
    }
    let tol = opts.hessian_tol.unwrap_or_else(|| hessian_tolerance(mesh.n_s.min(mesh.n_t)));
    let mut report = VerificationReport::default();
    report.push(CheckResult::new(
        format!("det_hess_minus_eps[{}x{}]", mesh.n_s, mesh.n_t),
        &residuals,
        skipped,
        tol,
    ));
    Ok(report)
}
