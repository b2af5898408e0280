use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A structural validation failed; the report lists every violation.
    #[error("validation failed:\n{0}")]
    Validation(String),

    /// Malformed input data (unknown ids, bad colours, and so on).
    #[error("schema error: {0}")]
    Schema(String),

    /// An operation was applied outside its domain.
    #[error("domain mismatch: {0}")]
    Domain(String),

    /// A stated precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A restriction closure exceeded the configured bound.
    #[error("restriction closure exceeded bound {bound}; the element is not finite-state")]
    NotFiniteState { bound: usize },

    /// The groupoid closure exceeded the configured bound.
    #[error("groupoid closure exceeded bound {bound}; the groupoid appears infinite")]
    NotFinite { bound: usize },

    /// Bisimulation ran out of budget before reaching a verdict.
    #[error("equality undecided within depth {depth} and pair budget {budget}")]
    Undecided { depth: usize, budget: usize },

    /// An iterative computation failed to converge.
    #[error("iteration failed to converge: {0}")]
    NotConverged(String),

    /// The inverse-temperature/dynamics pair is subcritical for a colour.
    #[error("series diverges: beta*r[{colour}] = {value} is not above ln rho = {threshold}")]
    Subcritical {
        colour: usize,
        value: f64,
        threshold: f64,
    },

    /// The Perron-Frobenius vector is not invariant under the groupoid,
    /// so no KMS state at inverse temperature one exists.
    #[error("no KMS_1 state: x is not invariant under groupoid element {witness}")]
    NoKms1State { witness: String },

    /// A certificate could not be established either way.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}
