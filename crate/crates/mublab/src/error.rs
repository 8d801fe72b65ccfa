use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vectors live on different grids")]
    GridMismatch,
    #[error("sample {index} is non-positive ({value}); the continuous product needs f > 0")]
    NonPositiveSample { index: usize, value: f64 },
    #[error("time must be positive, got {t}")]
    NonPositiveTime { t: f64 },
    #[error("caustic singularity: |sin(omega t)| = {sin_abs:e} at omega*t = {omega_t}")]
    CausticSingularity { omega_t: f64, sin_abs: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dense operator guard: n = {n} exceeds the {max}-point limit")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("bases are not unbiased: deficit {deficit:e} exceeds tolerance {tol:e}")]
    NotUnbiased { deficit: f64, tol: f64 },
    #[error("kernel is not unitary: max deviation {deviation:e}")]
    NonUnitaryKernel { deviation: f64 },
    #[error("phase unwrap failed at window index {index}: column modulus too close to zero")]
    PhaseUnwrapFailure { index: usize },
    #[error("Riccati blow-up at t = {t}: |R| exceeded the overflow guard (caustic reached)")]
    BlowUp { t: f64 },
    #[error("mode {mode} hits a caustic: |sin(omega_k t)| below tolerance")]
    ModeCaustic { mode: usize },
    #[error("unsupported potential: {reason}")]
    UnsupportedPotential { reason: String },
    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
