use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficient of degree {degree} has imaginary part {residue:e}")]
    ImaginaryResidue { degree: usize, residue: f64 },
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("weighted product is not integrable (decay exponent {exponent})")]
    NonIntegrable { exponent: f64 },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
    #[error("integration step failed near x = {x}")]
    StepFailure { x: f64 },
    #[error("x = {x} lies outside the tabulated range [-{x_max}, {x_max}]")]
    OutOfGrid { x: f64, x_max: f64 },
    #[error("spectral parameter branch undefined at energy {energy}")]
    BranchUndefined { energy: f64 },
    #[error("no index convention reproduces the equation (best residual {best_residual:e})")]
    ConventionUnresolved { best_residual: f64 },
    #[error("no admissible root of the spectral quartic for order {order}")]
    NoSuchRoot { order: usize },
    #[error("factorization function has {count} real zero(s)")]
    NodeDetected { count: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("iteration did not converge: {0}")]
    NotConverged(&'static str),
    #[error("potential does not decay at the grid ends (|V| = {value:e})")]
    InsufficientDecay { value: f64 },
    #[error("samples vanish over an interval; sign changes are ambiguous")]
    AmbiguousZero,
    #[error("vanishing-parameter constraint violated: O00 = {given}, expected {expected}")]
    ConstraintViolated { given: f64, expected: f64 },
}
