//! Small Euclidean helpers: 3-vectors and dense linear solves for the
//! least-squares fits in the verification layer.

use crate::error::Error;
use crate::Result;
use std::ops::{Add, Mul, Neg, Sub};

/// A point or vector of R^3.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, rhs: Self) -> f64 {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn cross(self, rhs: Self) -> Self {
        Self::new(
            self.y * rhs.z - self.z * rhs.y,
            self.z * rhs.x - self.x * rhs.z,
            self.x * rhs.y - self.y * rhs.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.x, k * self.y, k * self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        self.scale(k)
    }
}

/// det [a; b; c] of three row vectors.
pub fn det3(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    a.dot(b.cross(c))
}

/// Solve the dense square system `A x = b` in place by LU with partial
/// pivoting. `a` is row-major `n x n`. Returns `FitDegenerate` when a pivot
/// falls below `rank_tol` relative to the largest entry.
pub fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize, rank_tol: f64) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (piv_row, piv_abs) = (col..n)
            .map(|r| (r, a[perm[r] * n + col].abs()))
            .fold((col, -1.0), |best, cand| if cand.1 > best.1 { cand } else { best });
        if piv_abs < rank_tol * scale {
            return Err(Error::FitDegenerate(format!(
                "pivot {piv_abs:.3e} below {:.3e} at column {col}",
                rank_tol * scale
            )));
        }
        perm.swap(col, piv_row);
        let p = perm[col];
        for r in (col + 1)..n {
            let q = perm[r];
            let factor = a[q * n + col] / a[p * n + col];
            a[q * n + col] = 0.0;
            for c in (col + 1)..n {
                a[q * n + c] -= factor * a[p * n + c];
            }
            b[q] -= factor * b[p];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let p = perm[col];
        let mut acc = b[p];
        for c in (col + 1)..n {
            acc -= a[p * n + c] * x[c];
        }
        x[col] = acc / a[p * n + col];
    }
    Ok(x)
}

/// Linear least squares: minimize `|M x - y|` for a row-major `rows x cols`
/// matrix via the normal equations. Columns are expected to be pre-scaled by
/// the caller when their magnitudes differ wildly.
pub fn least_squares(m: &[f64], y: &[f64], rows: usize, cols: usize, rank_tol: f64) -> Result<Vec<f64>> {
    debug_assert_eq!(m.len(), rows * cols);
    debug_assert_eq!(y.len(), rows);
    let mut ata = vec![0.0; cols * cols];
    let mut aty = vec![0.0; cols];
    for r in 0..rows {
        let row = &m[r * cols..(r + 1) * cols];
        for i in 0..cols {
            aty[i] += row[i] * y[r];
            for j in i..cols {
                ata[i * cols + j] += row[i] * row[j];
            }
        }
    }
    for i in 0..cols {
        for j in 0..i {
            ata[i * cols + j] = ata[j * cols + i];
        }
    }
    solve_dense(&mut ata, &mut aty, cols, rank_tol)
}
