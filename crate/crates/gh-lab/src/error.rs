use thiserror::Error;

#[derive(Debug, Error)]
pub enum GhError {
    #[error("point coincides with a monopole center")]
    AtCenter,
    #[error("point is inadmissible for the requested chart: {0}")]
    Inadmissible(String),
    #[error("point lies on or outside the moment polytope boundary")]
    OutsidePolytope,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("chart transition is singular at patch {0}")]
    SingularTransition(usize),
    #[error("point lies on the phase-transition shell")]
    OnShell,
}

pub type GhResult<T> = Result<T, GhError>;
