use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    Convergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("decay envelope never fell below the cut-off (last checked at {last_checked:e})")]
    Truncation { last_checked: f64 },

    #[error("pole of the frequency-domain kernel at s = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
