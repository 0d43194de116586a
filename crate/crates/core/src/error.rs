use thiserror::Error;

use crate::elliptic::EllipticError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("(m, V) = ({m}, {v}) lies in the resonance wedge")]
    ResonanceWedge { m: f64, v: f64 },
    #[error("uniform representative k = {0:e} is too close to zero")]
    SingularK(f64),
    #[error("circle map is not strictly increasing (min derivative {0:e})")]
    NonMonotone(f64),
    #[error("p(x) - v changes sign on the grid")]
    RootDetected,
    #[error("{what} did not converge (best estimate {best}, gap {gap:e})")]
    NoConvergence { what: &'static str, best: f64, gap: f64 },
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("spectral evolution blew up at t = {0}")]
    BlowUp(f64),
    #[error("grid: {0}")]
    Grid(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
