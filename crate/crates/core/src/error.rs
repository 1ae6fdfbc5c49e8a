use thiserror::Error;

/// Errors surfaced by the library.
///
/// Numerical failure modes (pole crossings, trust radius, blow-up) are kept
/// distinct from input/validation errors so callers can map them to
/// different exit codes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Arithmetic between values living in different algebras C_+1 / C_-1.
    #[error("algebra mismatch: operands carry different eps tags")]
    AlgebraMismatch,

    /// Division by zero or by an element of the split null cone.
    #[error("singular divisor {divisor} in `{context}`")]
    SingularDivisor { divisor: String, context: String },

    /// Series evaluation requested outside the configured trust radius.
    #[error("argument at distance {distance:.6e} exceeds series trust radius {radius:.6e}")]
    TrustRadius { distance: f64, radius: f64 },

    /// A quadrature path runs through (or too close to) a singularity.
    #[error("integration path hits a singularity near {near}: {detail}")]
    PathSingularity { near: String, detail: String },

    /// Two homotopic height accumulation paths disagree.
    #[error("inconsistent period: homotopic paths disagree by {delta:.6e} (tolerance {tol:.6e})")]
    InconsistentPeriod { delta: f64, tol: f64 },

    /// Composite quadrature failed to converge under panel refinement.
    #[error("quadrature did not converge: last correction {last:.6e}")]
    QuadratureNonConvergence { last: f64 },

    /// Riccati integration exceeded the blow-up cap (pole crossing).
    #[error("riccati solution exceeded blow-up cap near z = {at} (|R| > {cap:.3e})")]
    Blowup { at: String, cap: f64 },

    /// Closed-form R evaluated at one of its poles.
    #[error("pole of R at z = {at}")]
    PoleOfR { at: String },

    /// Transform refused: the supplied R does not solve the Riccati equation.
    #[error("R does not solve the Riccati equation: residual {residual:.3e} at z = {at}")]
    RiccatiResidual { residual: f64, at: String },

    /// Cauchy data violates the admissibility normalization.
    #[error("invalid admissible pair: {0}")]
    InvalidPair(String),

    /// Non-characteristic solver fed characteristic data (lambda vanishes).
    #[error("characteristic data: {0}")]
    CharacteristicData(String),

    /// Characteristic-family height form failed the closedness check.
    #[error("inconsistent characteristic data: {0}")]
    InconsistentData(String),

    /// Least-squares fit has rank-deficient normal equations.
    #[error("degenerate fit: {0}")]
    FitDegenerate(String),

    /// Rejected example or CLI parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Text input (expression or curve file) failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Mesh content does not support the requested operation.
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
}

impl Error {
    /// True for failure modes of the numerics themselves, as opposed to
    /// rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularDivisor { .. }
                | Error::TrustRadius { .. }
                | Error::PathSingularity { .. }
                | Error::InconsistentPeriod { .. }
                | Error::QuadratureNonConvergence { .. }
                | Error::Blowup { .. }
                | Error::PoleOfR { .. }
                | Error::RiccatiResidual { .. }
                | Error::InconsistentData(_)
                | Error::FitDegenerate(_)
        )
    }
}
