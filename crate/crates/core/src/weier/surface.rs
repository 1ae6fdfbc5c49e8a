//! Grid evaluation of the representation formula.
//!
//! The immersion is `psi = (G + conj F, |G|^2/2 - |F|^2/2 + Re(G F)
//! - 2 Re int F dG)` with conormal planar part `conj F - G` and affine
//! metric `h = (|dG|^2 - |dF|^2)(ds^2 + eps dt^2)` in the conformal grid
//! parameters. The sign of the second conormal component follows the
//! structure equations `<N, d psi> = 0`, `<N, xi> = 1` in both algebras,
//! which fixes `N2 = eps * Im(conj F - G)` (the two coincide for eps = +1).
//!
//! Heights accumulate the path integral per grid edge: along the base row
//! first, then up each column (for an annulus: along a radial spoke of the
//! log chart, then around each ring). The accumulation order is fixed, so
//! meshes are bit-identical regardless of worker count; edge quadratures
//! are data parallel.

use crate::cnum::CEps;
use crate::error::Error;
use crate::exec::{self, ExecMode};
use crate::geom::Vec3;
use crate::holo::HoloExpr;
use crate::weier::domain::{DomainKind, DomainSpec};
use crate::weier::mesh::{MeshKind, Sample, SurfaceMesh};
use crate::weier::quad::{integrate_path, QuadOptions};
use crate::weier::WeierstrassData;
use crate::Result;

/// Relative threshold under which |h_deg| flags a sample singular.
const SINGULAR_REL_THRESHOLD: f64 = 1e-12;

/// Tolerance for the homotopic-path consistency check, relative to the
/// accumulated integral scale.
const PERIOD_CONSISTENCY_TOL: f64 = 1e-7;

/// The data pulled back to the evaluation chart: identity for a plane
/// domain, `z -> exp(w)` for the annulus log chart.
pub fn working_pair(data: &WeierstrassData) -> Result<(HoloExpr, HoloExpr)> {
    match data.domain.kind {
        DomainKind::Rectangle { .. } => Ok((data.g.clone(), data.f.clone())),
        DomainKind::Annulus { .. } => {
            let chart = HoloExpr::var(data.eps).exp();
            Ok((data.g.substitute(&chart)?, data.f.substitute(&chart)?))
        }
    }
}

/// Straight grid edge, or a three-segment jog around the nearest puncture
/// when the straight segment would pass inside its detour radius.
fn edge_path(domain: &DomainSpec, a: (f64, f64), b: (f64, f64), detour: f64) -> Vec<CEps> {
    let eps = domain.eps;
    let pa = CEps::new(a.0, a.1, eps);
    let pb = CEps::new(b.0, b.1, eps);
    if domain.punctures.is_empty() {
        return vec![pa, pb];
    }
    // distance from each puncture to the segment
    let (abx, aby) = (b.0 - a.0, b.1 - a.1);
    let len2 = abx * abx + aby * aby;
    let mut blocking: Option<(f64, f64)> = None;
    let mut best = f64::INFINITY;
    for p in &domain.punctures {
        let (apx, apy) = (p.at.re - a.0, p.at.im - a.1);
        let tau = if len2 == 0.0 { 0.0 } else { ((apx * abx + apy * aby) / len2).clamp(0.0, 1.0) };
        let (cx, cy) = (a.0 + tau * abx - p.at.re, a.1 + tau * aby - p.at.im);
        let d = (cx * cx + cy * cy).sqrt();
        let r = detour.max(p.guard);
        if d < r && d < best {
            best = d;
            blocking = Some((p.at.re, p.at.im));
        }
    }
    let Some((px, py)) = blocking else {
        return vec![pa, pb];
    };
    // offset perpendicular to the edge, away from the puncture; ties go to
    // the positive side so the route is deterministic
    let len = len2.sqrt().max(f64::MIN_POSITIVE);
    let (nx, ny) = (-aby / len, abx / len);
    let side = {
        let s = (a.0 - px) * nx + (a.1 - py) * ny;
        if s >= 0.0 {
            1.0
        } else {
            -1.0
        }
    };
    let off = 2.0 * detour * side;
    let ja = CEps::new(a.0 + off * nx, a.1 + off * ny, eps);
    let jb = CEps::new(b.0 + off * nx, b.1 + off * ny, eps);
    vec![pa, ja, jb, pb]
}

struct EdgeIntegrals {
    /// base row integrals: edge (i, k0) -> (i+1, k0)
    row: Vec<CEps>,
    /// column integrals: edge (i, k) -> (i, k+1), index i * (n_t - 1) + k
    col: Vec<CEps>,
    /// top row integrals for the homotopy cross-check
    top: Vec<CEps>,
}

fn edge_integrals(
    data: &WeierstrassData,
    gw1: &HoloExpr,
    fw: &HoloExpr,
    mode: ExecMode,
) -> Result<EdgeIntegrals> {
    let domain = &data.domain;
    let (n_s, n_t) = (domain.n_s, domain.n_t);
    let (ds, dt) = domain.steps();
    let detour = 0.75 * ds.min(dt);
    let opts = QuadOptions { tol: 1e-12, points: 8, max_panels: 128 };
    let integrand = move |z: CEps| -> Result<CEps> { Ok(fw.eval(z)? * gw1.eval(z)?) };

    let n_row = n_s - 1;
    let n_col = n_s * (n_t - 1);
    let all: Vec<Result<CEps>> = exec::map_indexed_with(mode, n_row + n_col + n_row, |e| {
        let (a, b) = if e < n_row {
            (domain.node(e, 0), domain.node(e + 1, 0))
        } else if e < n_row + n_col {
            let i = (e - n_row) / (n_t - 1);
            let k = (e - n_row) % (n_t - 1);
            (domain.node(i, k), domain.node(i, k + 1))
        } else {
            let i = e - n_row - n_col;
            (domain.node(i, n_t - 1), domain.node(i + 1, n_t - 1))
        };
        integrate_path(&integrand, &edge_path(domain, a, b, detour), false, &opts)
    });
    let mut vals = Vec::with_capacity(all.len());
    for v in all {
        vals.push(v?);
    }
    let top = vals.split_off(n_row + n_col);
    let col = vals.split_off(n_row);
    Ok(EdgeIntegrals { row: vals, col, top })
}

/// Evaluate the surface mesh for the data (parallel when available).
pub fn eval_surface(data: &WeierstrassData) -> Result<SurfaceMesh> {
    eval_surface_with(data, ExecMode::Auto)
}

/// Sequential reference path; bit-identical to [`eval_surface`].
pub fn eval_surface_seq(data: &WeierstrassData) -> Result<SurfaceMesh> {
    eval_surface_with(data, ExecMode::Sequential)
}

pub fn eval_surface_with(data: &WeierstrassData, mode: ExecMode) -> Result<SurfaceMesh> {
    let domain = &data.domain;
    domain.validate()?;
    let (n_s, n_t) = (domain.n_s, domain.n_t);
    let eps = data.eps;
    let sign = eps.sign();

    let (gw, fw) = working_pair(data)?;
    let gw1 = gw.derive();
    let fw1 = fw.derive();

    // serial accumulation pass for int F dG
    let edges = edge_integrals(data, &gw1, &fw, mode)?;
    let mut acc = vec![CEps::zero(eps); n_s * n_t];
    for i in 1..n_s {
        acc[i * n_t] = acc[(i - 1) * n_t] + edges.row[i - 1];
    }
    for i in 0..n_s {
        for k in 1..n_t {
            acc[i * n_t + k] = acc[i * n_t + k - 1] + edges.col[i * (n_t - 1) + k - 1];
        }
    }

    // homotopic cross-check: reach the far corner along the other two sides
    let scale_acc = acc.iter().fold(0.0f64, |m, v| m.max(v.norm())).max(1.0);
    let alt = {
        let up: CEps = edges.col[0..(n_t - 1)]
            .iter()
            .fold(CEps::zero(eps), |s, &e| s + e);
        edges.top.iter().fold(up, |s, &e| s + e)
    };
    let delta = (alt - acc[(n_s - 1) * n_t + (n_t - 1)]).norm();
    if delta > PERIOD_CONSISTENCY_TOL * scale_acc {
        return Err(Error::InconsistentPeriod { delta, tol: PERIOD_CONSISTENCY_TOL * scale_acc });
    }

    // base point only shifts the height constant
    let (bi, bk) = domain.base_node();
    let base_acc = acc[bi * n_t + bk];

    let samples: Vec<Sample> = exec::map_indexed_with(mode, n_s * n_t, |idx| {
        let (i, k) = (idx / n_t, idx % n_t);
        let (s, t) = domain.node(i, k);
        let w = CEps::new(s, t, eps);
        let z = domain.to_sigma(s, t);
        let guarded = domain.is_excluded(s, t);
        let fields = (|| -> Result<(CEps, CEps, CEps, CEps)> {
            Ok((gw.eval(w)?, fw.eval(w)?, gw1.eval(w)?, fw1.eval(w)?))
        })();
        match fields {
            Ok((gv, fv, g1, f1)) if gv.is_finite() && fv.is_finite() && g1.is_finite() && f1.is_finite() => {
                let planar = gv + fv.conj();
                let height = 0.5 * gv.mod_sq() - 0.5 * fv.mod_sq() + (gv * fv).re
                    - 2.0 * (acc[idx] - base_acc).re;
                let ncx = fv.conj() - gv;
                let h_deg = g1.mod_sq() - f1.mod_sq();
                let h_scale = g1.mod_sq().abs() + f1.mod_sq().abs();
                Sample {
                    s,
                    t,
                    z,
                    psi: Vec3::new(planar.re, planar.im, height),
                    n: Vec3::new(ncx.re, sign * ncx.im, 1.0),
                    h: (h_deg, 0.0, sign * h_deg),
                    h_deg,
                    singular: h_deg.abs() <= SINGULAR_REL_THRESHOLD * h_scale,
                    excluded: guarded,
                }
            }
            _ => Sample {
                s,
                t,
                z,
                psi: Vec3::default(),
                n: Vec3::new(0.0, 0.0, 1.0),
                h: (0.0, 0.0, 0.0),
                h_deg: 0.0,
                singular: true,
                excluded: true,
            },
        }
    });

    let (kind, vertical_period) = match domain.kind {
        DomainKind::Rectangle { .. } => (MeshKind::Plane, None),
        DomainKind::Annulus { r_inner, r_outer } => {
            (MeshKind::LogPolar { r_inner, r_outer }, Some(detect_period(data)?.expect("annulus")))
        }
    };

    let mesh = SurfaceMesh {
        eps,
        kind,
        n_s,
        n_t,
        samples,
        vertical_period,
        provenance: data.provenance.clone(),
        source: Some(data.clone()),
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Vertical period diagnostic: `Re` of the loop integral of `-F dG` once
/// counter-clockwise around the puncture of an annulus domain (the height
/// jump per turn is twice this). `None` for simply connected domains.
///
/// The loop is taken at two radii; a disagreement beyond tolerance reports
/// quadrature non-convergence since the integrand is holomorphic in the
/// annulus and the loops are homotopic.
pub fn detect_period(data: &WeierstrassData) -> Result<Option<f64>> {
    let DomainKind::Annulus { .. } = data.domain.kind else {
        return Ok(None);
    };
    let (gw, fw) = working_pair(data)?;
    let gw1 = gw.derive();
    let integrand = |z: CEps| -> Result<CEps> { Ok(fw.eval(z)? * gw1.eval(z)?) };
    let ((s0, s1), _) = data.domain.param_ranges();
    let eps = data.eps;
    let opts = QuadOptions::default();
    let mut loops = [0.0f64; 2];
    for (slot, frac) in [(0usize, 0.25), (1, 0.75)] {
        let sig = s0 + frac * (s1 - s0);
        let path = [
            CEps::new(sig, 0.0, eps),
            CEps::new(sig, 2.0 * std::f64::consts::PI, eps),
        ];
        let v = integrate_path(&integrand, &path, false, &opts)?;
        loops[slot] = -v.re;
    }
    let delta = (loops[0] - loops[1]).abs();
    if delta > 1e-8 * (1.0 + loops[0].abs()) {
        return Err(Error::QuadratureNonConvergence { last: delta });
    }
    Ok(Some(loops[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnum::Eps;
    use crate::holo::parse_expr;
    use std::f64::consts::PI;

    fn plane_data(g: &str, f: &str, eps: Eps, n: usize) -> WeierstrassData {
        WeierstrassData::new(
            parse_expr(g, eps).unwrap(),
            parse_expr(f, eps).unwrap(),
            DomainSpec::rectangle(eps, (-2.0, 2.0), (-2.0, 2.0), n, n).unwrap(),
            "test",
        )
        .unwrap()
    }

    fn annulus_data(g: &str, f: &str, r: (f64, f64), n: usize) -> WeierstrassData {
        let eps = Eps::Elliptic;
        WeierstrassData::new(
            parse_expr(g, eps).unwrap(),
            parse_expr(f, eps).unwrap(),
            DomainSpec::annulus(eps, r.0, r.1, n, n).unwrap(),
            "test",
        )
        .unwrap()
    }

    #[test]
    fn paraboloid_point_values() {
        // (G, F) = (z, 0) at z = 1: psi = (1, 0, 1/2), N = (-1, 0, 1)
        let mesh = eval_surface(&plane_data("z", "0", Eps::Elliptic, 17)).unwrap();
        let sample = mesh
            .samples
            .iter()
            .find(|s| (s.s - 1.0).abs() < 1e-12 && s.t.abs() < 1e-12)
            .expect("grid contains z = 1");
        assert!((sample.psi.x - 1.0).abs() < 1e-12);
        assert!(sample.psi.y.abs() < 1e-12);
        assert!((sample.psi.z - 0.5).abs() < 1e-12);
        assert!((sample.n.x + 1.0).abs() < 1e-12 && sample.n.y.abs() < 1e-12);
        assert_eq!(sample.n.z, 1.0);
        assert!(!sample.singular);
    }

    #[test]
    fn split_paraboloid_height_is_hyperbolic() {
        // (G, F) = (z, 0), eps = -1: height = (s^2 - t^2)/2
        let mesh = eval_surface(&plane_data("z", "0", Eps::Hyperbolic, 17)).unwrap();
        for s in mesh.samples.iter() {
            let expect = 0.5 * (s.s * s.s - s.t * s.t);
            assert!((s.psi.z - expect).abs() < 1e-10, "at ({}, {})", s.s, s.t);
            assert!((s.psi.x - s.s).abs() < 1e-12 && (s.psi.y - s.t).abs() < 1e-12);
            // N = (-u_x, -u_y, 1) = (-s, t, 1): the eps-adjusted conormal
            assert!((s.n.x + s.s).abs() < 1e-10 && (s.n.y - s.t).abs() < 1e-10);
        }
    }

    #[test]
    fn conormal_is_orthogonal_to_dpsi_split_case() {
        // finite-difference <N, psi_s>, <N, psi_t> on the split paraboloid
        let mesh = eval_surface(&plane_data("z", "0", Eps::Hyperbolic, 33)).unwrap();
        let (ds, dt) = mesh.steps();
        for &(i, k) in mesh.interior_nodes().iter() {
            let c = mesh.at(i, k);
            let psi_s = (mesh.at(i + 1, k).psi - mesh.at(i - 1, k).psi) * (0.5 / ds);
            let psi_t = (mesh.at(i, k + 1).psi - mesh.at(i, k - 1).psi) * (0.5 / dt);
            assert!(c.n.dot(psi_s).abs() < 1e-9, "N.psi_s at ({i},{k})");
            assert!(c.n.dot(psi_t).abs() < 1e-9, "N.psi_t at ({i},{k})");
        }
    }

    #[test]
    fn rotational_degeneracy_vanishes_on_unit_circle() {
        // (z, 1/z): |dG| = 1, |dF| = 1/|z|^2, equal exactly on |z| = 1
        let data = annulus_data("z", "1/z", (1.0 / 3.0, 3.0), 33);
        let mesh = eval_surface(&data).unwrap();
        for s in mesh.samples.iter() {
            // log chart: h_deg = e^{2 sigma} - e^{-2 sigma}
            let expect = (2.0 * s.s).exp() - (-2.0 * s.s).exp();
            assert!((s.h_deg - expect).abs() < 1e-9 * (1.0 + expect.abs()));
        }
        let on_circle = mesh.samples.iter().filter(|s| s.s.abs() < 1e-12);
        for s in on_circle {
            assert!(s.h_deg.abs() < 1e-12);
            assert!(s.singular);
        }
    }

    #[test]
    fn multivalued_example_has_period_two_pi() {
        // (z, j r^2/z), r = 1: Re of the loop integral of -F dG is 2 pi
        let data = annulus_data("z", "j/z", (1.0 / 3.0, 3.0), 33);
        let p = detect_period(&data).unwrap().unwrap();
        assert!((p - 2.0 * PI).abs() < 1e-8, "period {p}");
        // real residue: Re kills the loop term
        let data0 = annulus_data("z", "1/z", (1.0 / 3.0, 3.0), 33);
        let p0 = detect_period(&data0).unwrap().unwrap();
        assert!(p0.abs() < 1e-8);
        // zero integrand
        let dz = annulus_data("z", "0", (1.0 / 3.0, 3.0), 33);
        assert!(detect_period(&dz).unwrap().unwrap().abs() < 1e-12);
        // simply connected domain: none
        assert!(detect_period(&plane_data("z", "0", Eps::Elliptic, 9)).unwrap().is_none());
    }

    #[test]
    fn path_independence_within_a_chart() {
        // two homotopic broken-line paths between the same endpoints
        let data = annulus_data("z", "2*z+1/z", (0.4, 2.5), 17);
        let a = CEps::new(0.5, 0.0, Eps::Elliptic);
        let b = CEps::new(0.8, 0.6, Eps::Elliptic);
        let mid1 = CEps::new(0.9, 0.1, Eps::Elliptic);
        let mid2 = CEps::new(0.45, 0.55, Eps::Elliptic);
        let i1 = crate::weier::integrate_fdg(&data, &[a, mid1, b]).unwrap();
        let i2 = crate::weier::integrate_fdg(&data, &[a, mid2, b]).unwrap();
        assert!((i1 - i2).norm() < 1e-8);
    }

    #[test]
    fn parallel_and_sequential_meshes_are_bit_identical() {
        let data = annulus_data("z", "1/z", (0.4, 2.5), 17);
        let a = eval_surface_with(&data, ExecMode::Auto).unwrap();
        let b = eval_surface_with(&data, ExecMode::Sequential).unwrap();
        for (x, y) in a.samples.iter().zip(b.samples.iter()) {
            assert_eq!(x.psi.x.to_bits(), y.psi.x.to_bits());
            assert_eq!(x.psi.y.to_bits(), y.psi.y.to_bits());
            assert_eq!(x.psi.z.to_bits(), y.psi.z.to_bits());
            assert_eq!(x.h_deg.to_bits(), y.h_deg.to_bits());
        }
    }
}
