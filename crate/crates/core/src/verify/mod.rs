//! Independent verification of constructed meshes: the PDE residual in
//! graph form, the structure-equation residuals, metric cross-checks and
//! asymptotic end fitting.

mod asymptotic;
mod hessian;
mod structure;

pub use asymptotic::{asymptotic_fit, AsymptoticFit};
pub use hessian::{hessian_residual, hessian_residual_with, VerifyOptions};
pub use structure::{structure_residuals, structure_tolerance};

use std::fmt;

/// Result of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub samples: usize,
    pub skipped: usize,
    pub tolerance: f64,
    pub pass: bool,
    /// Grid index of the worst sample, when meaningful.
    pub worst: Option<(usize, usize)>,
    /// Informational checks report without being asserted.
    pub informational: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, residuals: &[(f64, (usize, usize))], skipped: usize, tol: f64) -> Self {
        let mut max_residual = 0.0;
        let mut worst = None;
        let mut sum = 0.0;
        for &(r, at) in residuals {
            sum += r;
            if r >= max_residual {
                max_residual = r;
                worst = Some(at);
            }
        }
        let samples = residuals.len();
        let mean = if samples == 0 { 0.0 } else { sum / samples as f64 };
        Self {
            name: name.into(),
            max_residual,
            mean_residual: mean,
            samples,
            skipped,
            tolerance: tol,
            pass: max_residual <= tol,
            worst,
            informational: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self.pass = true;
        self
    }
}

/// A named bundle of checks with pass/fail accounting.
#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// CSV with columns `check,max,mean,n,tol,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,max,mean,n,tol,pass\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.name,
                c.max_residual,
                c.mean_residual,
                c.samples,
                c.tolerance,
                if c.pass { 1 } else { 0 }
            ));
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.informational {
                "info"
            } else if c.pass {
                "pass"
            } else {
                "FAIL"
            };
            write!(
                f,
                "[{status}] {:<28} max {:>12.5e}  mean {:>12.5e}  n {:>6}  tol {:>9.2e}",
                c.name, c.max_residual, c.mean_residual, c.samples, c.tolerance
            )?;
            if c.skipped > 0 {
                write!(f, "  skipped {}", c.skipped)?;
            }
            if let (false, Some((i, k))) = (c.pass, c.worst) {
                write!(f, "  worst at ({i},{k})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
