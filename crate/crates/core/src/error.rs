use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter is outside its admissible range.
    #[error("invalid {param} = {value}: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Gain at or above the oscillation threshold.
    #[error("gain r = {r} is at or above threshold r_th = {r_th}")]
    AboveThreshold { r: f64, r_th: f64 },

    /// An iterative or adaptive routine stopped before meeting its tolerance.
    #[error("{routine} did not converge after {iterations} iterations (achieved error {achieved:e})")]
    Convergence {
        routine: &'static str,
        iterations: usize,
        achieved: f64,
    },

    /// Normalization requested for a comb with no correlated signal (r = 0).
    #[error("correlation comb is identically zero; nothing to normalize")]
    DegenerateComb,
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain { param, value, reason }
    }
}
