//! Composite Gauss-Legendre quadrature along polylines in the parameter
//! chart, used for the height integral `int F dG`, the vertical period and
//! the Eq.-13-style diagnostic integral.

use crate::cnum::CEps;
use crate::error::Error;
use crate::holo::HoloExpr;
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Absolute + relative convergence target for panel refinement.
    pub tol: f64,
    /// Gauss-Legendre points per panel.
    pub points: usize,
    /// Panel-doubling cap per segment.
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { tol: 1e-11, points: 16, max_panels: 256 }
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    out
}

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrate `f(z) dz` (or `f(z) conj(dz)` when `conj_dz`) along one
/// straight segment with adaptive panel doubling.
fn integrate_segment<F>(
    f: &F,
    a: CEps,
    b: CEps,
    conj_dz: bool,
    nodes: &[(f64, f64)],
    opts: &QuadOptions,
) -> Result<CEps>
where
    F: Fn(CEps) -> Result<CEps>,
{
    let dir = b - a;
    let dz = if conj_dz { dir.conj() } else { dir };
    let eval_panels = |panels: usize| -> Result<CEps> {
        let mut acc = CEps::zero(a.eps);
        let h = 1.0 / panels as f64;
        for p in 0..panels {
            let lo = p as f64 * h;
            for &(x, w) in nodes {
                let tau = lo + 0.5 * h * (x + 1.0);
                let z = a + dir.scale(tau);
                let v = f(z).map_err(|e| match e {
                    Error::SingularDivisor { divisor, context } => Error::PathSingularity {
                        near: z.to_string(),
                        detail: format!("singular divisor {divisor} in {context}"),
                    },
                    other => other,
                })?;
                acc = acc + v.scale(w * 0.5 * h);
            }
        }
        Ok(acc * dz)
    };
    let mut panels = 1;
    let mut prev = eval_panels(panels)?;
    loop {
        panels *= 2;
        let next = eval_panels(panels)?;
        let diff = (next - prev).norm();
        if diff <= opts.tol * (1.0 + next.norm()) {
            return Ok(next);
        }
        if panels >= opts.max_panels {
            return Err(Error::QuadratureNonConvergence { last: diff });
        }
        prev = next;
    }
}

/// Integrate a pointwise integrand along a polyline; additive over
/// concatenation by construction.
pub fn integrate_path<F>(f: &F, path: &[CEps], conj_dz: bool, opts: &QuadOptions) -> Result<CEps>
where
    F: Fn(CEps) -> Result<CEps>,
{
    if path.len() < 2 {
        return Err(Error::InvalidParameter("integration path needs at least two vertices".into()));
    }
    let nodes = gauss_legendre(opts.points);
    let mut acc = CEps::zero(path[0].eps);
    for seg in path.windows(2) {
        acc = acc + integrate_segment(f, seg[0], seg[1], conj_dz, &nodes, opts)?;
    }
    Ok(acc)
}

/// `int F dG = int F(z) G'(z) dz` along a polyline in the chart where the
/// expressions live.
pub fn integrate_expr_product(f: &HoloExpr, dg: &HoloExpr, path: &[CEps], opts: &QuadOptions) -> Result<CEps> {
    let integrand = |z: CEps| Ok(f.eval(z)? * dg.eval(z)?);
    integrate_path(&integrand, path, false, opts)
}

/// `int F dG` for Weierstrass data in its own chart (the derivative is
/// taken symbolically).
pub fn integrate_fdg(data: &super::WeierstrassData, path: &[CEps]) -> Result<CEps> {
    let dg = data.g.derive();
    integrate_expr_product(&data.f, &dg, path, &QuadOptions::default())
}

/// `int G d(conj F)` along a polyline: the conjugated-differential integral
/// of the alternative height convention, kept as a diagnostic.
pub fn integrate_g_dfbar(g: &HoloExpr, df: &HoloExpr, path: &[CEps], opts: &QuadOptions) -> Result<CEps> {
    let integrand = |z: CEps| Ok(g.eval(z)? * df.eval(z)?.conj());
    integrate_path(&integrand, path, true, opts)
}

/// Closed polygonal loop around `center` with the given radius, counter
/// clockwise, as a polyline of `n + 1` vertices (first == last).
pub fn circle_loop(center: CEps, radius: f64, n: usize) -> Vec<CEps> {
    let mut path = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        path.push(center + CEps::new(radius * th.cos(), radius * th.sin(), center.eps));
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnum::Eps;
    use crate::weier::{DomainSpec, WeierstrassData};
    use std::f64::consts::PI;

    fn data(g: &str, f: &str) -> WeierstrassData {
        let eps = Eps::Elliptic;
        WeierstrassData::new(
            crate::holo::parse_expr(g, eps).unwrap(),
            crate::holo::parse_expr(f, eps).unwrap(),
            DomainSpec::rectangle(eps, (-2.0, 2.0), (-2.0, 2.0), 16, 16).unwrap(),
            "test",
        )
        .unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // degree 2n-1 exactness: x^7 over [-1,1] = 0, x^6 = 2/7
        let nodes = gauss_legendre(4);
        let int7: f64 = nodes.iter().map(|&(x, w)| w * x.powi(7)).sum();
        let int6: f64 = nodes.iter().map(|&(x, w)| w * x.powi(6)).sum();
        assert!(int7.abs() < 1e-15);
        assert!((int6 - 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn zero_integrand_gives_zero() {
        let d = data("z", "0");
        let path = [CEps::zero(Eps::Elliptic), CEps::new(1.0, 1.0, Eps::Elliptic)];
        let v = integrate_fdg(&d, &path).unwrap();
        assert_eq!((v.re, v.im), (0.0, 0.0));
    }

    #[test]
    fn unit_integrand_integrates_dz() {
        // F = 1, G = z: int dz from 0 to 1+j = 1+j
        let d = data("z", "1");
        let path = [CEps::zero(Eps::Elliptic), CEps::new(1.0, 1.0, Eps::Elliptic)];
        let v = integrate_fdg(&d, &path).unwrap();
        assert!((v.re - 1.0).abs() < 1e-14 && (v.im - 1.0).abs() < 1e-14);
    }

    #[test]
    fn residue_of_j_over_z() {
        // F = j/z, G = z around the origin: 2 pi j * j = -2 pi.
        // The polygonal loop is homotopic to the circle, so the quadrature
        // must reproduce the residue value.
        let d = data("z", "j/z");
        let path = circle_loop(CEps::zero(Eps::Elliptic), 1.0, 64);
        let v = integrate_fdg(&d, &path).unwrap();
        assert!((v.re + 2.0 * PI).abs() < 1e-8, "re = {}", v.re);
        assert!(v.im.abs() < 1e-8);
    }

    #[test]
    fn additive_over_concatenation_and_null_homotopic_loops_vanish() {
        let d = data("z^2", "exp(z)");
        let a = CEps::zero(Eps::Elliptic);
        let m = CEps::new(0.7, 0.2, Eps::Elliptic);
        let b = CEps::new(1.0, 1.0, Eps::Elliptic);
        let whole = integrate_fdg(&d, &[a, b]).unwrap();
        let part1 = integrate_fdg(&d, &[a, m]).unwrap();
        let part2 = integrate_fdg(&d, &[m, b]).unwrap();
        let sum = part1 + part2;
        assert!((whole - sum).norm() < 1e-10);
        // closed triangle, no singularity inside
        let loop_v = integrate_fdg(&d, &[a, m, b, a]).unwrap();
        assert!(loop_v.norm() < 1e-10);
    }

    #[test]
    fn path_through_singularity_is_reported() {
        let d = data("z", "1/z");
        let path = [CEps::new(-1.0, 0.0, Eps::Elliptic), CEps::new(1.0, 0.0, Eps::Elliptic)];
        let err = integrate_fdg(&d, &path);
        assert!(
            matches!(err, Err(Error::PathSingularity { .. }) | Err(Error::QuadratureNonConvergence { .. })),
            "got {err:?}"
        );
    }
}
