//! Parameter domains and their grids.
//!
//! Every mesh is evaluated over a rectangle of grid parameters (s, t). For a
//! plane domain these are the coordinates of `z = s + j t` themselves. An
//! annulus `r_in < |z| < r_out` is gridded in the conformal log chart
//! `z = exp(s + j t)` with `s` in `[ln r_in, ln r_out]` and `t` running once
//! around `[0, 2 pi)`; the chart map is holomorphic, so the pulled-back data
//! stays holomorphic and the affine metric stays conformal in (s, t).

use crate::cnum::{CEps, Eps};
use crate::error::Error;
use crate::Result;
use std::f64::consts::PI;

/// Fraction of the domain scale kept clear around a declared puncture.
pub const DEFAULT_GUARD_FRACTION: f64 = 1e-3;

/// An excluded point (an end of the surface) with its guard radius.
#[derive(Debug, Clone, Copy)]
pub struct Puncture {
    /// Position in the parameter chart.
    pub at: CEps,
    pub guard: f64,
}

#[derive(Debug, Clone)]
pub enum DomainKind {
    /// [s0, s1] x [t0, t1] in the plane, z = s + j t.
    Rectangle { s: (f64, f64), t: (f64, f64) },
    /// r_in < |z| < r_out, punctured at 0, gridded in the log chart.
    Annulus { r_inner: f64, r_outer: f64 },
}

#[derive(Debug, Clone)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub eps: Eps,
    pub n_s: usize,
    pub n_t: usize,
    /// Base point for height accumulation, in the parameter chart. Defaults
    /// to the grid corner (rectangle) or the inner spoke end (annulus).
    pub base: Option<(f64, f64)>,
    /// Interior punctures (used by transformed data whose R has zeros or
    /// poles inside a plane domain).
    pub punctures: Vec<Puncture>,
}

impl DomainSpec {
    pub fn rectangle(eps: Eps, s: (f64, f64), t: (f64, f64), n_s: usize, n_t: usize) -> Result<Self> {
        if !(s.0 < s.1 && t.0 < t.1) {
            return Err(Error::InvalidParameter("rectangle bounds must be increasing".into()));
        }
        Ok(Self { kind: DomainKind::Rectangle { s, t }, eps, n_s, n_t, base: None, punctures: Vec::new() })
    }

    pub fn annulus(eps: Eps, r_inner: f64, r_outer: f64, n_s: usize, n_t: usize) -> Result<Self> {
        if !(r_inner > 0.0 && r_inner < r_outer) {
            return Err(Error::InvalidParameter(format!(
                "annulus radii must satisfy 0 < r_in < r_out, got {r_inner}, {r_outer}"
            )));
        }
        if r_inner < DEFAULT_GUARD_FRACTION * r_outer {
            return Err(Error::InvalidParameter(format!(
                "inner radius {r_inner} is inside the guard radius {} of the puncture",
                DEFAULT_GUARD_FRACTION * r_outer
            )));
        }
        Ok(Self { kind: DomainKind::Annulus { r_inner, r_outer }, eps, n_s, n_t, base: None, punctures: Vec::new() })
    }

    /// Grid ranges in the parameter chart.
    pub fn param_ranges(&self) -> ((f64, f64), (f64, f64)) {
        match self.kind {
            DomainKind::Rectangle { s, t } => (s, t),
            DomainKind::Annulus { r_inner, r_outer } => ((r_inner.ln(), r_outer.ln()), (0.0, 2.0 * PI)),
        }
    }

    /// Whether the t direction closes up (annulus seam).
    pub fn wraps_t(&self) -> bool {
        matches!(self.kind, DomainKind::Annulus { .. })
    }

    /// Grid node in the parameter chart. For a wrapped direction the last
    /// node stays one step short of the seam.
    pub fn node(&self, i: usize, k: usize) -> (f64, f64) {
        let ((s0, s1), (t0, t1)) = self.param_ranges();
        let ds = (s1 - s0) / (self.n_s - 1) as f64;
        let dt = if self.wraps_t() {
            (t1 - t0) / self.n_t as f64
        } else {
            (t1 - t0) / (self.n_t - 1) as f64
        };
        (s0 + ds * i as f64, t0 + dt * k as f64)
    }

    /// Grid steps (ds, dt) in the parameter chart.
    pub fn steps(&self) -> (f64, f64) {
        let ((s0, s1), (t0, t1)) = self.param_ranges();
        let ds = (s1 - s0) / (self.n_s - 1) as f64;
        let dt = if self.wraps_t() {
            (t1 - t0) / self.n_t as f64
        } else {
            (t1 - t0) / (self.n_t - 1) as f64
        };
        (ds, dt)
    }

    /// Map a parameter point to the point of the surface domain.
    pub fn to_sigma(&self, s: f64, t: f64) -> CEps {
        let w = CEps::new(s, t, self.eps);
        match self.kind {
            DomainKind::Rectangle { .. } => w,
            DomainKind::Annulus { .. } => w.exp(),
        }
    }

    /// Base node indices for height accumulation: the grid node nearest to
    /// the configured base point, or the chart corner.
    pub fn base_node(&self) -> (usize, usize) {
        let Some((bs, bt)) = self.base else { return (0, 0) };
        let ((s0, _), (t0, _)) = self.param_ranges();
        let (ds, dt) = self.steps();
        let i = ((bs - s0) / ds).round().clamp(0.0, (self.n_s - 1) as f64) as usize;
        let kmax = if self.wraps_t() { self.n_t - 1 } else { self.n_t - 1 };
        let k = ((bt - t0) / dt).round().clamp(0.0, kmax as f64) as usize;
        (i, k)
    }

    /// Distance from a parameter point to the nearest puncture, with that
    /// puncture's guard radius. `None` when no punctures are declared.
    pub fn nearest_puncture(&self, s: f64, t: f64) -> Option<(f64, f64)> {
        self.punctures
            .iter()
            .map(|p| (((s - p.at.re).powi(2) + (t - p.at.im).powi(2)).sqrt(), p.guard))
            .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"))
    }

    /// True when the parameter point is inside some puncture guard.
    pub fn is_excluded(&self, s: f64, t: f64) -> bool {
        self.nearest_puncture(s, t).is_some_and(|(d, g)| d < g)
    }

    /// A characteristic length of the domain in the parameter chart.
    pub fn scale(&self) -> f64 {
        let ((s0, s1), (t0, t1)) = self.param_ranges();
        (s1 - s0).hypot(t1 - t0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_s < 8 || self.n_t < 8 {
            return Err(Error::InvalidParameter(format!(
                "grid resolution must be at least 8 per axis, got {}x{}",
                self.n_s, self.n_t
            )));
        }
        if let Some((bs, bt)) = self.base {
            let ((s0, s1), (t0, t1)) = self.param_ranges();
            if !(s0 <= bs && bs <= s1 && t0 <= bt && bt <= t1) {
                return Err(Error::InvalidParameter("base point lies outside the domain".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_grid_lives_in_log_chart() {
        let d = DomainSpec::annulus(Eps::Elliptic, 0.5, 2.0, 9, 8).unwrap();
        let ((s0, s1), (t0, t1)) = d.param_ranges();
        assert!((s0 - 0.5f64.ln()).abs() < 1e-15);
        assert!((s1 - 2.0f64.ln()).abs() < 1e-15);
        assert_eq!((t0, t1), (0.0, 2.0 * PI));
        // seam stays open: last t node is one step before 2 pi
        let (_, t_last) = d.node(0, 7);
        assert!(t_last < 2.0 * PI - 1e-9);
        let z = d.to_sigma(0.0, 0.0);
        assert!((z.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_domains() {
        assert!(DomainSpec::rectangle(Eps::Elliptic, (1.0, -1.0), (0.0, 1.0), 8, 8).is_err());
        assert!(DomainSpec::annulus(Eps::Elliptic, 0.0, 1.0, 8, 8).is_err());
        assert!(DomainSpec::annulus(Eps::Elliptic, 1e-6, 10.0, 8, 8).is_err());
    }

    #[test]
    fn puncture_guard_excludes_points() {
        let mut d = DomainSpec::rectangle(Eps::Elliptic, (-1.0, 1.0), (-1.0, 1.0), 16, 16).unwrap();
        d.punctures.push(Puncture { at: CEps::zero(Eps::Elliptic), guard: 0.1 });
        assert!(d.is_excluded(0.05, 0.0));
        assert!(!d.is_excluded(0.5, 0.5));
    }
}
