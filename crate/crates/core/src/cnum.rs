//! Arithmetic on the unified complex / split-complex numbers C_eps.
//!
//! A value is `s + j t` with `j^2 = -eps`: for `eps = +1` this is the
//! ordinary complex plane, for `eps = -1` the split-complex (Lorentz)
//! algebra, where the null cone `s = +-t` carries the zero divisors.
//! Mixing the two algebras is rejected, never coerced.

use crate::error::Error;
use crate::Result;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Selector of the algebra: `j^2 = -eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Eps {
    /// eps = +1, ordinary complex numbers (elliptic Hessian one equation).
    Elliptic,
    /// eps = -1, split-complex numbers (hyperbolic Hessian one equation).
    Hyperbolic,
}

impl Eps {
    /// The sign of eps as a float: +1.0 or -1.0.
    pub fn sign(self) -> f64 {
        match self {
            Eps::Elliptic => 1.0,
            Eps::Hyperbolic => -1.0,
        }
    }

    pub fn from_i32(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Eps::Elliptic),
            -1 => Ok(Eps::Hyperbolic),
            _ => Err(Error::InvalidParameter(format!("eps must be +1 or -1, got {v}"))),
        }
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eps::Elliptic => write!(f, "+1"),
            Eps::Hyperbolic => write!(f, "-1"),
        }
    }
}

/// A number `re + j im` of C_eps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CEps {
    pub re: f64,
    pub im: f64,
    pub eps: Eps,
}

impl CEps {
    pub const fn new(re: f64, im: f64, eps: Eps) -> Self {
        Self { re, im, eps }
    }

    pub const fn real(re: f64, eps: Eps) -> Self {
        Self { re, im: 0.0, eps }
    }

    pub const fn zero(eps: Eps) -> Self {
        Self::real(0.0, eps)
    }

    pub const fn one(eps: Eps) -> Self {
        Self::real(1.0, eps)
    }

    /// The imaginary unit j of the algebra.
    pub const fn j(eps: Eps) -> Self {
        Self { re: 0.0, im: 1.0, eps }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im, self.eps)
    }

    /// `z conj(z) = re^2 + eps im^2`. Real, and negative inside the split
    /// light cone when eps = -1.
    pub fn mod_sq(self) -> f64 {
        self.re * self.re + self.eps.sign() * self.im * self.im
    }

    /// Euclidean magnitude of the coefficient pair, used for tolerances and
    /// trust radii (not the algebra modulus).
    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn check_same(self, rhs: Self) -> Result<()> {
        if self.eps == rhs.eps {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn try_add(self, rhs: Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Self::new(self.re + rhs.re, self.im + rhs.im, self.eps))
    }

    pub fn try_sub(self, rhs: Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Self::new(self.re - rhs.re, self.im - rhs.im, self.eps))
    }

    /// `(s1 + j t1)(s2 + j t2) = (s1 s2 - eps t1 t2) + j (s1 t2 + t1 s2)`.
    pub fn try_mul(self, rhs: Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Self::new(
            self.re * rhs.re - self.eps.sign() * self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
            self.eps,
        ))
    }

    /// Division through the conjugate; fails when the divisor lies on the
    /// null cone (`mod_sq = 0`), which for eps = +1 means only zero itself.
    pub fn try_div(self, rhs: Self) -> Result<Self> {
        self.check_same(rhs)?;
        let d = rhs.mod_sq();
        if d == 0.0 {
            return Err(Error::SingularDivisor {
                divisor: rhs.to_string(),
                context: "scalar division".into(),
            });
        }
        let num = self.try_mul(rhs.conj())?;
        Ok(Self::new(num.re / d, num.im / d, self.eps))
    }

    /// Exponential: `e^s (cos t + j sin t)` for eps = +1 and
    /// `e^s (cosh t + j sinh t)` for eps = -1 (the unique continuous
    /// solution of `exp' = exp`, `exp(0) = 1` in either algebra).
    pub fn exp(self) -> Self {
        let r = self.re.exp();
        match self.eps {
            Eps::Elliptic => Self::new(r * self.im.cos(), r * self.im.sin(), self.eps),
            Eps::Hyperbolic => Self::new(r * self.im.cosh(), r * self.im.sinh(), self.eps),
        }
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// division and can fail on the null cone.
    pub fn powi(self, n: i32) -> Result<Self> {
        if n < 0 {
            return CEps::one(self.eps).try_div(self.powi(-n)?);
        }
        let mut result = CEps::one(self.eps);
        let mut base = self;
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                result = result.try_mul(base)?;
            }
            base = base.try_mul(base)?;
            k >>= 1;
        }
        Ok(result)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.re, k * self.im, self.eps)
    }
}

impl fmt::Display for CEps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.re == 0.0 {
            if self.im == 1.0 {
                write!(f, "j")
            } else {
                write!(f, "{}j", self.im)
            }
        } else if self.im < 0.0 {
            write!(f, "({}-{}j)", self.re, -self.im)
        } else {
            write!(f, "({}+{}j)", self.re, self.im)
        }
    }
}

// Operator forms panic on algebra mismatch; they are used internally where
// the eps invariant is already established (expressions carry one tag).
impl Add for CEps {
    type Output = CEps;
    fn add(self, rhs: CEps) -> CEps {
        self.try_add(rhs).expect("algebra mismatch in +")
    }
}

impl Sub for CEps {
    type Output = CEps;
    fn sub(self, rhs: CEps) -> CEps {
        self.try_sub(rhs).expect("algebra mismatch in -")
    }
}

impl Mul for CEps {
    type Output = CEps;
    fn mul(self, rhs: CEps) -> CEps {
        self.try_mul(rhs).expect("algebra mismatch in *")
    }
}

impl Neg for CEps {
    type Output = CEps;
    fn neg(self) -> CEps {
        CEps::new(-self.re, -self.im, self.eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> CEps {
        CEps::new(re, im, Eps::Elliptic)
    }

    fn s(re: f64, im: f64) -> CEps {
        CEps::new(re, im, Eps::Hyperbolic)
    }

    #[test]
    fn j_squared_is_minus_eps() {
        let je = CEps::j(Eps::Elliptic);
        let jh = CEps::j(Eps::Hyperbolic);
        assert_eq!(je * je, c(-1.0, 0.0));
        assert_eq!(jh * jh, s(1.0, 0.0));
    }

    #[test]
    fn division_by_null_cone_element_fails() {
        // conj(1+j)(1+j) = 1 - 1 = 0 in the split algebra
        let err = CEps::one(Eps::Hyperbolic).try_div(s(1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::SingularDivisor { .. }));
        // but the same division is fine for eps = +1
        assert!(CEps::one(Eps::Elliptic).try_div(c(1.0, 1.0)).is_ok());
    }

    #[test]
    fn mixing_algebras_is_rejected() {
        assert!(matches!(
            c(1.0, 0.0).try_add(s(1.0, 0.0)),
            Err(Error::AlgebraMismatch)
        ));
        assert!(matches!(
            c(1.0, 0.0).try_mul(s(1.0, 0.0)),
            Err(Error::AlgebraMismatch)
        ));
    }

    #[test]
    fn mod_sq_signs() {
        assert_eq!(s(1.0, 1.0).mod_sq(), 0.0);
        assert_eq!(s(2.0, 1.0).mod_sq(), 3.0);
        assert_eq!(s(1.0, 2.0).mod_sq(), -3.0);
        assert_eq!(c(3.0, 4.0).mod_sq(), 25.0);
    }

    #[test]
    fn exp_identities() {
        for eps in [Eps::Elliptic, Eps::Hyperbolic] {
            let e0 = CEps::zero(eps).exp();
            assert!((e0.re - 1.0).abs() < 1e-15 && e0.im.abs() < 1e-15);
        }
        // exp(j pi) = -1 in the complex algebra
        let m1 = CEps::new(0.0, PI, Eps::Elliptic).exp();
        assert!((m1.re + 1.0).abs() < 1e-14);
        assert!(m1.im.abs() < 1e-14);
        // exp never reaches the split null cone
        assert!(s(0.3, -0.9).exp().mod_sq() > 0.0);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = c(0.3, -1.7);
        let b = c(-2.0, 0.45);
        let q = (a * b).try_div(b).unwrap();
        assert!((q.re - a.re).abs() < 1e-14 && (q.im - a.im).abs() < 1e-14);
        let ah = s(0.3, -1.7);
        let bh = s(-2.0, 0.45);
        let qh = (ah * bh).try_div(bh).unwrap();
        assert!((qh.re - ah.re).abs() < 1e-12 && (qh.im - ah.im).abs() < 1e-12);
    }

    #[test]
    fn powi_handles_negative_exponents() {
        // 1 / j = -j for eps = +1
        let inv = CEps::j(Eps::Elliptic).powi(-1).unwrap();
        assert!((inv.re).abs() < 1e-15 && (inv.im + 1.0).abs() < 1e-15);
        assert!(s(1.0, 1.0).powi(-1).is_err());
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(
            (a_re, a_im, b_re, b_im, c_re, c_im) in (
                -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64,
                -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64,
            ),
            hyper in proptest::bool::ANY,
        ) {
            let eps = if hyper { Eps::Hyperbolic } else { Eps::Elliptic };
            let a = CEps::new(a_re, a_im, eps);
            let b = CEps::new(b_re, b_im, eps);
            let cc = CEps::new(c_re, c_im, eps);
            let ab = a * b;
            let ba = b * a;
            prop_assert!((ab.re - ba.re).abs() <= 1e-12 * (1.0 + ab.norm()));
            prop_assert!((ab.im - ba.im).abs() <= 1e-12 * (1.0 + ab.norm()));
            let l = (a * b) * cc;
            let r = a * (b * cc);
            prop_assert!((l.re - r.re).abs() <= 1e-10 * (1.0 + l.norm()));
            prop_assert!((l.im - r.im).abs() <= 1e-10 * (1.0 + l.norm()));
        }

        #[test]
        fn conj_is_multiplicative(
            (a_re, a_im, b_re, b_im) in (
                -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64,
            ),
            hyper in proptest::bool::ANY,
        ) {
            let eps = if hyper { Eps::Hyperbolic } else { Eps::Elliptic };
            let a = CEps::new(a_re, a_im, eps);
            let b = CEps::new(b_re, b_im, eps);
            let l = (a * b).conj();
            let r = a.conj() * b.conj();
            prop_assert!((l.re - r.re).abs() <= 1e-12 * (1.0 + l.norm()));
            prop_assert!((l.im - r.im).abs() <= 1e-12 * (1.0 + l.norm()));
        }

        #[test]
        fn mod_sq_matches_direct_evaluation(
            (re, im) in (-10.0..10.0f64, -10.0..10.0f64),
        ) {
            let e = CEps::new(re, im, Eps::Elliptic);
            let h = CEps::new(re, im, Eps::Hyperbolic);
            prop_assert!(e.mod_sq() >= 0.0);
            prop_assert!((e.mod_sq() - (re * re + im * im)).abs() < 1e-12);
            prop_assert!((h.mod_sq() - (re * re - im * im)).abs() < 1e-12);
        }

        #[test]
        fn exp_is_a_homomorphism(
            (a_re, a_im, b_re, b_im) in (
                -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64,
            ),
            hyper in proptest::bool::ANY,
        ) {
            let eps = if hyper { Eps::Hyperbolic } else { Eps::Elliptic };
            let a = CEps::new(a_re, a_im, eps);
            let b = CEps::new(b_re, b_im, eps);
            let l = (a + b).exp();
            let r = a.exp() * b.exp();
            let scale = l.norm().max(1e-300);
            prop_assert!((l.re - r.re).abs() <= 1e-12 * scale.max(1.0));
            prop_assert!((l.im - r.im).abs() <= 1e-12 * scale.max(1.0));
        }
    }
}
