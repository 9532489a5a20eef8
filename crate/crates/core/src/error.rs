use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Integer arithmetic exceeded the active backend's width.
    #[error("integer overflow in {context} (wide backend caps at 128 bits; switch to the exact backend)")]
    Overflow { context: &'static str },

    /// A quadruple failed the parameter-space membership test.
    #[error("curvature quadruple ({alpha}, {beta}, {gamma}) is not admissible: {reason}")]
    NotInGamma {
        alpha: f64,
        beta: f64,
        gamma: f64,
        reason: &'static str,
    },

    /// An exact-integer backend was requested for a non-integral quadruple.
    #[error("backend {backend:?} requires an integral curvature quadruple")]
    BackendUnavailable { backend: crate::scalar::Backend },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A counting query was aborted after visiting more nodes than allowed.
    #[error("count aborted at node cap {cap}; partial count {partial} is a lower bound")]
    CountAborted { cap: u64, partial: u64 },

    /// A geometric configuration violated a tangency or degeneracy contract.
    #[error("degenerate disk configuration: {0}")]
    DegenerateGeometry(String),

    /// Disks {first} and {second} of a triple are not externally tangent.
    #[error("disks {first} and {second} are not tangent (residual {residual:e} exceeds tolerance {tolerance:e})")]
    NotTangent {
        first: usize,
        second: usize,
        residual: f64,
        tolerance: f64,
    },

    /// A measure estimate was requested at a scale where counts are too small.
    #[error("count {count} at lambda {lambda:e} is below the required {required}; retry with lambda >= {suggested_lambda:e}")]
    InsufficientResolution {
        lambda: f64,
        count: u64,
        required: u64,
        suggested_lambda: f64,
    },

    /// A transition kernel failed its mass sanity bounds.
    #[error("kernel raw mass {mass} outside [{lo}, {hi}]; increase lambda_kernel or n_max")]
    KernelMass { mass: f64, lo: f64, hi: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
