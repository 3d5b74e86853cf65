use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical or grid parameter violates a stated constraint.
    #[error("invalid parameter `{name}`: {constraint} (got {value})")]
    InvalidParam {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// Time step too coarse for the fastest Rabi oscillation on the grid.
    #[error(
        "time resolution too coarse: dt*max_rabi = {product:.3e} (dt = {dt:.3e}, \
         max rabi = {max_rabi:.3e}); require dt*max_rabi < {limit}"
    )]
    ResolutionTooCoarse {
        dt: f64,
        max_rabi: f64,
        product: f64,
        limit: f64,
    },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNoConvergence { achieved: f64, requested: f64 },

    /// Argument outside the domain an operation is defined on.
    #[error("{what} = {value} out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// The requested closed-form branch does not apply to these parameters.
    #[error("not applicable: {0}")]
    Applicability(String),

    /// Norm drift exceeded the accepted tolerance during integration.
    #[error(
        "norm residual {residual:.3e} exceeds tolerance {tolerance:.3e} at z = {z:.6} cm, \
         t = {t:.6} tau"
    )]
    NormDrift {
        z: f64,
        t: f64,
        residual: f64,
        tolerance: f64,
    },

    /// A measurement on gridded data could not be carried out.
    #[error("measurement failed: {0}")]
    Measurement(String),

    /// Characteristic table could not be built from these profiles.
    #[error("degenerate characteristic table: {0}")]
    DegenerateTable(String),

    /// Configuration text could not be parsed.
    #[error("config error ({key}): {reason}")]
    Config { key: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
