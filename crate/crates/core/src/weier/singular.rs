//! Zero-level-set extraction of the metric degeneracy field: marching
//! squares over grid cells with linear interpolation on sign-change edges,
//! stitched into polylines, then Newton-refined against the exact
//! expressions when the mesh still carries its generating data.

use crate::cnum::CEps;
use crate::holo::HoloExpr;
use crate::weier::mesh::SurfaceMesh;
use crate::weier::surface::working_pair;
use crate::Result;
use std::collections::HashMap;

/// Target |h_deg| after Newton refinement, relative to the local gradient
/// scale; refinement stops early once reached (at most four steps).
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_STEPS: usize = 4;

/// A polyline in the zero set of `h_deg`, in grid parameters.
#[derive(Debug, Clone)]
pub struct SingularCurve {
    /// Ordered vertices (s, t).
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

impl SingularCurve {
    /// Arc length in the parameter chart.
    pub fn param_length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1))
            .sum()
    }
}

/// Edge of the grid: (i, k) plus horizontal (towards i+1) or vertical
/// (towards k+1). Crossings live on unique edges, which makes stitching a
/// matter of matching edge ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EdgeId {
    i: usize,
    k: usize,
    vertical: bool,
}

struct Crossing {
    at: (f64, f64),
}

fn interp(a: (f64, f64), fa: f64, b: (f64, f64), fb: f64) -> (f64, f64) {
    let t = fa / (fa - fb);
    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
}

/// Extract the zero-level polylines of `h_degeneracy`.
///
/// Cells touching excluded samples are skipped. On log-polar meshes the
/// seam cells (last ring back to the first) participate, so circles around
/// the puncture close up.
pub fn extract_singular_curves(mesh: &SurfaceMesh) -> Result<Vec<SingularCurve>> {
    let refiner = Refiner::from_mesh(mesh)?;
    let (n_s, n_t) = (mesh.n_s, mesh.n_t);
    let n_cols = if mesh.wraps_t() { n_t } else { n_t - 1 };
    let (_, dt) = mesh.steps();
    let t_origin = mesh.at(0, 0).t;

    let mut crossings: HashMap<EdgeId, Crossing> = HashMap::new();
    // segments as pairs of edge ids, collected in scan order
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();

    // corner positions come from the uniform grid so the seam cell of a
    // wrapped mesh unrolls past 2 pi instead of jumping back to 0
    let pos = |i: usize, kidx: usize| -> (f64, f64) {
        (mesh.at(i, 0).s, t_origin + dt * kidx as f64)
    };

    for i in 0..(n_s - 1) {
        for kc in 0..n_cols {
            let k1 = (kc + 1) % n_t;
            // corners counter-clockwise: (i,kc), (i+1,kc), (i+1,kc+1), (i,kc+1)
            let corner_samples = [(i, kc), (i + 1, kc), (i + 1, k1), (i, k1)];
            if corner_samples.iter().any(|&(ci, ck)| {
                let s = mesh.at(ci, ck);
                s.excluded || !s.h_deg.is_finite()
            }) {
                continue;
            }
            let f: [f64; 4] = std::array::from_fn(|j| {
                let (ci, ck) = corner_samples[j];
                mesh.at(ci, ck).h_deg
            });
            let p: [(f64, f64); 4] = [
                pos(i, kc),
                pos(i + 1, kc),
                pos(i + 1, kc + 1),
                pos(i, kc + 1),
            ];
            // cell edges: bottom, right, top, left
            let edge_ids = [
                EdgeId { i, k: kc, vertical: false },
                EdgeId { i: i + 1, k: kc, vertical: true },
                EdgeId { i, k: k1, vertical: false },
                EdgeId { i, k: kc, vertical: true },
            ];
            let corner_pairs = [(0usize, 1usize), (1, 2), (3, 2), (0, 3)];
            let neg = |v: f64| v < 0.0;
            let mut hits: Vec<usize> = Vec::new();
            for (e, &(ca, cb)) in corner_pairs.iter().enumerate() {
                let (fa, fb) = (f[ca], f[cb]);
                if neg(fa) != neg(fb) {
                    crossings
                        .entry(edge_ids[e])
                        .or_insert_with(|| Crossing { at: interp(p[ca], fa, p[cb], fb) });
                    hits.push(e);
                }
            }
            match hits.len() {
                2 => segments.push((edge_ids[hits[0]], edge_ids[hits[1]])),
                4 => {
                    // saddle: disambiguate with the cell-center average
                    let center = 0.25 * (f[0] + f[1] + f[2] + f[3]);
                    if neg(center) == neg(f[0]) {
                        segments.push((edge_ids[1], edge_ids[2]));
                        segments.push((edge_ids[3], edge_ids[0]));
                    } else {
                        segments.push((edge_ids[0], edge_ids[1]));
                        segments.push((edge_ids[2], edge_ids[3]));
                    }
                }
                _ => {}
            }
        }
    }

    // stitch segments into chains by walking the edge adjacency
    let mut adj: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (si, &(a, b)) in segments.iter().enumerate() {
        adj.entry(a).or_default().push(si);
        adj.entry(b).or_default().push(si);
    }
    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        // walk forward from both endpoints of the starting segment
        let mut chain = vec![segments[start].0, segments[start].1];
        used[start] = true;
        loop {
            let tail = *chain.last().expect("nonempty");
            let next = adj
                .get(&tail)
                .and_then(|list| list.iter().find(|&&si| !used[si]).copied());
            match next {
                Some(si) => {
                    used[si] = true;
                    let (a, b) = segments[si];
                    chain.push(if a == tail { b } else { a });
                }
                None => break,
            }
        }
        loop {
            let head = chain[0];
            let next = adj
                .get(&head)
                .and_then(|list| list.iter().find(|&&si| !used[si]).copied());
            match next {
                Some(si) => {
                    used[si] = true;
                    let (a, b) = segments[si];
                    chain.insert(0, if a == head { b } else { a });
                }
                None => break,
            }
        }
        let closed = chain.len() > 2 && chain[0] == *chain.last().expect("nonempty");
        let mut points: Vec<(f64, f64)> = chain
            .iter()
            .map(|id| crossings.get(id).expect("crossing recorded").at)
            .collect();
        if closed {
            points.pop();
        }
        for pt in points.iter_mut() {
            *pt = refiner.refine(*pt);
        }
        if closed {
            let first = points[0];
            points.push(first);
        }
        curves.push(SingularCurve { points, closed });
    }
    Ok(curves)
}

/// Newton refinement against the exact degeneracy field when the mesh still
/// knows its data; identity otherwise.
struct Refiner {
    exact: Option<ExactField>,
}

struct ExactField {
    g1: HoloExpr,
    f1: HoloExpr,
    g2: HoloExpr,
    f2: HoloExpr,
    eps: crate::cnum::Eps,
}

impl Refiner {
    fn from_mesh(mesh: &SurfaceMesh) -> Result<Self> {
        let Some(data) = mesh.source.as_ref() else {
            return Ok(Self { exact: None });
        };
        if matches!(mesh.kind, crate::weier::mesh::MeshKind::Asymptotic) {
            return Ok(Self { exact: None });
        }
        let (gw, fw) = working_pair(data)?;
        let g1 = gw.derive();
        let f1 = fw.derive();
        Ok(Self {
            exact: Some(ExactField {
                g2: g1.derive(),
                f2: f1.derive(),
                g1,
                f1,
                eps: data.eps,
            }),
        })
    }

    fn refine(&self, p: (f64, f64)) -> (f64, f64) {
        let Some(field) = self.exact.as_ref() else { return p };
        let mut cur = p;
        for _ in 0..NEWTON_MAX_STEPS {
            let Ok((val, gs, gt)) = field.value_grad(cur) else { return cur };
            let norm2 = gs * gs + gt * gt;
            if norm2 == 0.0 {
                return cur;
            }
            if val.abs() <= NEWTON_TOL * norm2.sqrt().max(1.0) {
                break;
            }
            cur = (cur.0 - val * gs / norm2, cur.1 - val * gt / norm2);
        }
        cur
    }
}

impl ExactField {
    /// h_deg and its gradient in grid parameters from exact derivatives:
    /// d/ds mod_sq(G') = 2 Re(G'' conj G'), d/dt mod_sq(G') = -2 eps Im(G'' conj G').
    fn value_grad(&self, p: (f64, f64)) -> Result<(f64, f64, f64)> {
        let z = CEps::new(p.0, p.1, self.eps);
        let sign = self.eps.sign();
        let g1 = self.g1.eval(z)?;
        let f1 = self.f1.eval(z)?;
        let g2 = self.g2.eval(z)?;
        let f2 = self.f2.eval(z)?;
        let val = g1.mod_sq() - f1.mod_sq();
        let wg = g2 * g1.conj();
        let wf = f2 * f1.conj();
        let ds = 2.0 * (wg.re - wf.re);
        let dt = -2.0 * sign * (wg.im - wf.im);
        Ok((val, ds, dt))
    }
}
