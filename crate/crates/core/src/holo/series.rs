//! Truncated real power series and their holomorphic / split-holomorphic
//! extensions off the real axis, the carrier for analytic Cauchy data.

use crate::cnum::{CEps, Eps};
use crate::error::Error;
use crate::Result;

/// Default truncation order when building series from closures.
pub const DEFAULT_ORDER: usize = 16;

/// Fraction of the estimated convergence radius that is trusted.
const RADIUS_SAFETY: f64 = 0.75;

/// Tail size admitted at the edge of the trust region when capping the
/// radius of an entire function's truncation.
const TAIL_TOL: f64 = 1e-10;

/// A real power series `sum c_k (s - s0)^k` truncated at `coeffs.len() - 1`.
#[derive(Debug, Clone)]
pub struct PowerSeries {
    center: f64,
    coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn new(center: f64, coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        Self { center, coeffs }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluate at a real argument (Horner).
    pub fn eval(&self, s: f64) -> f64 {
        let d = s - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * d + c)
    }

    /// Term-by-term derivative (order drops by one).
    pub fn derivative(&self) -> PowerSeries {
        if self.coeffs.len() == 1 {
            return PowerSeries::new(self.center, vec![0.0]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        PowerSeries::new(self.center, coeffs)
    }

    /// Trust radius: 0.75 x the convergence radius estimated by the
    /// coefficient ratio test on the tail of the expansion.
    ///
    /// A sparse tail (at most one nonzero coefficient in the top half) is
    /// read as exact polynomial data and trusted everywhere. A dense tail is
    /// treated as a truncation: the ratio estimate is additionally capped at
    /// the distance where the last retained term reaches the tail tolerance,
    /// so truncated entire functions are not trusted arbitrarily far out.
    pub fn trust_radius(&self) -> f64 {
        let n = self.coeffs.len();
        let tail: Vec<(usize, f64)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(n / 2)
            .filter(|(k, &c)| *k > 0 && c != 0.0)
            .map(|(k, &c)| (k, c.abs()))
            .collect();
        if tail.len() < 2 {
            return f64::INFINITY;
        }
        let mut ratio_radius = f64::INFINITY;
        for pair in tail.windows(2) {
            let (ka, ca) = pair[0];
            let (kb, cb) = pair[1];
            ratio_radius = ratio_radius.min((ca / cb).powf(1.0 / (kb - ka) as f64));
        }
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
        let (k_last, c_last) = *tail.last().expect("tail has entries");
        let tail_radius = (TAIL_TOL * scale / c_last).powf(1.0 / k_last as f64).max(1.0);
        (RADIUS_SAFETY * ratio_radius).min(tail_radius)
    }

    fn check_radius(&self, distance: f64) -> Result<()> {
        let radius = self.trust_radius();
        if distance > radius {
            Err(Error::TrustRadius { distance, radius })
        } else {
            Ok(())
        }
    }

    /// Extend the series off the real axis at `z`.
    ///
    /// For eps = +1 this is the Taylor evaluation with the complex
    /// increment. For eps = -1 it is the d'Alembert extension
    /// `(c(u) + c(v))/2 + j (c(u) - c(v))/2` on the null coordinates
    /// `u = s + t`, `v = s - t`, which needs only real evaluations of the
    /// data and is the unique split-holomorphic extension of the axis
    /// values.
    pub fn compose(&self, z: CEps) -> Result<CEps> {
        match z.eps {
            Eps::Elliptic => {
                let d = z - CEps::real(self.center, z.eps);
                self.check_radius(d.norm())?;
                let mut acc = CEps::zero(z.eps);
                for &c in self.coeffs.iter().rev() {
                    acc = acc * d + CEps::real(c, z.eps);
                }
                Ok(acc)
            }
            Eps::Hyperbolic => {
                let u = z.re + z.im;
                let v = z.re - z.im;
                self.check_radius((u - self.center).abs())?;
                self.check_radius((v - self.center).abs())?;
                let cu = self.eval(u);
                let cv = self.eval(v);
                Ok(CEps::new(0.5 * (cu + cv), 0.5 * (cu - cv), z.eps))
            }
        }
    }
}

/// An R^3-valued analytic curve as three series sharing one center.
#[derive(Debug, Clone)]
pub struct CurveSeries {
    pub x: PowerSeries,
    pub y: PowerSeries,
    pub z: PowerSeries,
}

impl CurveSeries {
    pub fn new(x: PowerSeries, y: PowerSeries, z: PowerSeries) -> Result<Self> {
        if x.center != y.center || x.center != z.center {
            return Err(Error::InvalidParameter(
                "curve components must share the expansion point".into(),
            ));
        }
        Ok(Self { x, y, z })
    }

    pub fn from_coeff_rows(center: f64, rows: &[[f64; 3]]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter("curve needs at least one coefficient row".into()));
        }
        let col = |i: usize| PowerSeries::new(center, rows.iter().map(|r| r[i]).collect());
        CurveSeries::new(col(0), col(1), col(2))
    }

    pub fn center(&self) -> f64 {
        self.x.center
    }

    pub fn order(&self) -> usize {
        self.x.order().max(self.y.order()).max(self.z.order())
    }

    pub fn eval(&self, s: f64) -> crate::geom::Vec3 {
        crate::geom::Vec3::new(self.x.eval(s), self.y.eval(s), self.z.eval(s))
    }

    pub fn derivative(&self) -> CurveSeries {
        CurveSeries {
            x: self.x.derivative(),
            y: self.y.derivative(),
            z: self.z.derivative(),
        }
    }

    pub fn trust_radius(&self) -> f64 {
        self.x.trust_radius().min(self.y.trust_radius()).min(self.z.trust_radius())
    }

    /// Componentwise extension off the axis: a C_eps-valued triple.
    pub fn compose(&self, z: CEps) -> Result<[CEps; 3]> {
        Ok([self.x.compose(z)?, self.y.compose(z)?, self.z.compose(z)?])
    }
}

/// A planar analytic curve (two series sharing one center), the data of the
/// characteristic Cauchy family.
#[derive(Debug, Clone)]
pub struct PlanarSeries {
    pub x: PowerSeries,
    pub y: PowerSeries,
}

impl PlanarSeries {
    pub fn new(x: PowerSeries, y: PowerSeries) -> Result<Self> {
        if x.center != y.center {
            return Err(Error::InvalidParameter(
                "curve components must share the expansion point".into(),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn from_coeff_rows(center: f64, rows: &[[f64; 2]]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter("curve needs at least one coefficient row".into()));
        }
        Ok(Self {
            x: PowerSeries::new(center, rows.iter().map(|r| r[0]).collect()),
            y: PowerSeries::new(center, rows.iter().map(|r| r[1]).collect()),
        })
    }

    pub fn center(&self) -> f64 {
        self.x.center
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        (self.x.eval(s), self.y.eval(s))
    }

    pub fn derivative(&self) -> PlanarSeries {
        PlanarSeries { x: self.x.derivative(), y: self.y.derivative() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_series(order: usize) -> PowerSeries {
        let mut coeffs = vec![0.0; order + 1];
        let mut fact = 1.0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            if k % 2 == 0 {
                *c = if k % 4 == 0 { 1.0 / fact } else { -1.0 / fact };
            }
        }
        PowerSeries::new(0.0, coeffs)
    }

    #[test]
    fn quadratic_extends_to_imaginary_axis() {
        // s^2 at z = jt gives (jt)^2 = -t^2 for eps = +1
        let sq = PowerSeries::new(0.0, vec![0.0, 0.0, 1.0]);
        let v = sq.compose(CEps::new(0.0, 0.7, Eps::Elliptic)).unwrap();
        assert!((v.re + 0.49).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn identity_extends_to_identity_in_split_plane() {
        let id = PowerSeries::new(0.0, vec![0.0, 1.0]);
        let z = CEps::new(0.4, -1.2, Eps::Hyperbolic);
        let v = id.compose(z).unwrap();
        assert!((v.re - z.re).abs() < 1e-15 && (v.im - z.im).abs() < 1e-15);
    }

    #[test]
    fn cosine_series_reaches_cosh_at_j() {
        let v = cos_series(16).compose(CEps::j(Eps::Elliptic)).unwrap();
        assert!((v.re - 1.0f64.cosh()).abs() < 1e-8, "got {}", v.re);
        assert!(v.im.abs() < 1e-8);
    }

    #[test]
    fn extension_restricts_to_the_curve() {
        let s3 = PowerSeries::new(0.5, vec![1.0, -2.0, 0.25, 3.0]);
        for eps in [Eps::Elliptic, Eps::Hyperbolic] {
            for s in [-0.2, 0.5, 1.1] {
                let v = s3.compose(CEps::real(s, eps)).unwrap();
                assert!((v.re - s3.eval(s)).abs() < 1e-13);
                assert!(v.im.abs() < 1e-13);
            }
        }
    }

    #[test]
    fn split_extension_is_constant_along_characteristics() {
        // The two null components of the d'Alembert extension depend on one
        // characteristic variable each: P+Q = c(u), P-Q = c(v).
        let c = PowerSeries::new(0.0, vec![0.3, 1.0, -0.5, 0.125, 0.02]);
        let u0 = 0.8;
        let mut first = None;
        for t in [-0.05, 0.02, 0.2, 0.35] {
            let z = CEps::new(u0 - t, t, Eps::Hyperbolic); // s + t = u0
            let v = c.compose(z).unwrap();
            let plus = v.re + v.im;
            match first {
                None => first = Some(plus),
                Some(p) => assert!((plus - p).abs() < 1e-12),
            }
            assert!((plus - c.eval(u0)).abs() < 1e-12);
        }
        let v0 = -0.25;
        for t in [-0.2, 0.1, 0.3] {
            let z = CEps::new(v0 + t, t, Eps::Hyperbolic); // s - t = v0
            let v = c.compose(z).unwrap();
            assert!(((v.re - v.im) - c.eval(v0)).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_trust_radius_is_an_error() {
        // geometric series has radius 1, trust radius 0.75
        let geo = PowerSeries::new(0.0, vec![1.0; 24]);
        assert!(geo.compose(CEps::real(0.5, Eps::Elliptic)).is_ok());
        let err = geo.compose(CEps::real(0.9, Eps::Elliptic)).unwrap_err();
        assert!(matches!(err, Error::TrustRadius { .. }));
    }

    #[test]
    fn polynomials_have_generous_trust_radius() {
        let p = PowerSeries::new(0.0, vec![0.0, 0.0, 0.5]);
        assert!(p.trust_radius() > 10.0);
    }

    #[test]
    fn derivative_drops_order() {
        let p = PowerSeries::new(1.0, vec![5.0, 3.0, 2.0]);
        let d = p.derivative();
        assert_eq!(d.coeffs(), &[3.0, 4.0]);
        assert_eq!(d.eval(2.0), 7.0);
    }
}
