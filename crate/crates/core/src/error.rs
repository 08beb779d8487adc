use thiserror::Error;

/// Errors shared across the numerical modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input is rational to working precision (remainder {remainder:e} at quotient {index})")]
    RationalInput { index: usize, remainder: f64 },
    #[error("continued-fraction depth {depth} overflows 64-bit denominators")]
    DepthTooLarge { depth: usize },
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("bisection did not certify the target within {iterations} iterations (best error {best:e})")]
    NoConvergence { iterations: usize, best: f64 },
    #[error("sigma target {target} is not reachable (limit {limit})")]
    TargetTooLarge { target: f64, limit: f64 },
    #[error("no return to the arc within {cap} iterates")]
    CapExceeded { cap: usize },
    #[error("arc too long for successor rules: sigma {sigma} >= {limit}")]
    ArcTooLong { sigma: f64, limit: f64 },
    #[error("more than one critical value meets the doubled arc")]
    AmbiguousCriticalValue,
    #[error("exhaustive tree exceeded {cap} nodes")]
    TreeCap { cap: usize },
    #[error("point lies outside the domain: {what}")]
    OutsideDomain { what: &'static str },
    #[error("parameter out of range: {what}")]
    OutOfRange { what: &'static str },
    #[error("outside the valid geometric regime: {what}")]
    OutsideRegime { what: String },
    #[error("root solver failed: residual {residual:e} above contract")]
    SolverFailure { residual: f64 },
    #[error("curve passes within {margin:e} of a critical value")]
    CriticalValueOnCurve { margin: f64 },
    #[error("inverse-branch tracking lost: {what}")]
    TrackingLost { what: String },
    #[error("pull-back level exceeded {cap} nodes")]
    NodeCap { cap: usize },
    #[error("orbit escaped the radius-{radius} disk at iterate {iterate}")]
    Escape { radius: f64, iterate: usize },
    #[error("degenerate configuration: {what}")]
    Degenerate { what: String },
    #[error("invalid parameters: {what}")]
    InvalidParams { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
