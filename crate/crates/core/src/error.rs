use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor contraction shape mismatch: leg {left_leg} (dim {left_dim}) vs leg {right_leg} (dim {right_dim})")]
    ContractShape {
        left_leg: usize,
        left_dim: usize,
        right_leg: usize,
        right_dim: usize,
    },
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("numerical routine failed: {context}: {detail}")]
    NumericalFailure { context: String, detail: String },
    #[error("resource cap exceeded: {what} = {value} (cap {cap})")]
    ResourceCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("invalid pseudo-vacuum request: {0}")]
    InvalidVacuum(String),
    #[error("ill-conditioned vacuum orbit: inhomogeneities too close (gap {gap:.3e})")]
    IllConditionedOrbit { gap: f64 },
    #[error("singular Bethe configuration: {0}")]
    SingularConfiguration(String),
    #[error("evaluation point coincides with a rapidity: {0}")]
    Pole(String),
    #[error("Bethe construction produced a null state")]
    NullState,
    #[error("Bethe continuation failed at split inhomogeneity: {0}")]
    ContinuationFailure(String),
    #[error("multiplet classification failed: {0}")]
    Classification(String),
}
