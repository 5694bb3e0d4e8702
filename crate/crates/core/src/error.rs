use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Matrix is numerically singular relative to its scale.
    #[error("singular matrix (det = {det:e}, threshold = {threshold:e})")]
    Singular { det: f64, threshold: f64 },

    /// Deformation gradient (or some probe of it) left GL⁺(3), or an argument
    /// is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("sampler failed after {rejections} rejections (spread = {spread})")]
    Sampler { rejections: usize, spread: f64 },

    #[error("model `{0}` is not declared isotropic")]
    NotIsotropic(String),

    /// `S₁ (Cof F)⁻¹` came out visibly non-symmetric; the model is not frame-indifferent.
    #[error("Cauchy stress asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    AsymmetricStress { asymmetry: f64, tolerance: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
