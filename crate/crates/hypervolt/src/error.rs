use thiserror::Error;

/// Errors from special-function evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("gamma pole: argument {0} is (numerically) a nonpositive integer")]
    GammaPole(f64),
    #[error("mittag-leffler requires alpha > 0, got {0}")]
    NonPositiveAlpha(f64),
    #[error("mittag-leffler series did not converge within {cap} terms (alpha={alpha}, z={z})")]
    SeriesCap { alpha: f64, z: f64, cap: usize },
    #[error("argument must be finite")]
    NonFiniteArgument,
}

/// Errors from kernel construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("lambda = {0} is within 1e-9 of a nonpositive integer; the kernel is not defined there")]
    InadmissibleLambda(f64),
    #[error("lambda must be finite")]
    NonFiniteLambda,
    #[error("laplace symbol requires Re p > 0, got Re p = {0}")]
    LeftHalfPlane(f64),
    #[error("finite-part primitive requires t > 0, got {0}")]
    NonPositiveTime(f64),
}

/// Errors from forward/inverse Laplace transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("laplace transform requires Re p > 0, got Re p = {0}")]
    LeftHalfPlane(f64),
    #[error("quadrature did not converge: error estimate {estimate:e} exceeds target {target:e}")]
    QuadratureNonConvergence { estimate: f64, target: f64 },
    #[error("inversion requires t > 0, got {0}")]
    NonPositiveTime(f64),
    #[error("invalid inversion config: {0}")]
    InvalidConfig(String),
    #[error("transform evaluated non-finite at node {node}; pole on or near the contour, or overflow")]
    NonFiniteNode { node: num_complex::Complex64 },
    #[error("inversion overflowed double range at t = {0:e}")]
    Overflow(f64),
}

/// Errors from the resolvent-based solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("multiplier pole: |1 - Gamma(lambda) p^(-lambda)| vanished at p = {p}")]
    MultiplierPole { p: num_complex::Complex64 },
    #[error("inversion node at distance {dist:e} from the real multiplier pole p* = {pole} (limit 1e-6)")]
    NodeNearPole { pole: f64, dist: f64 },
    #[error("resolvent kernel supports lambda in (0,1] or lambda = -1/4, got {0}")]
    UnsupportedLambda(f64),
    #[error("solution grid must have strictly increasing positive times")]
    BadGrid,
    #[error("solution value non-finite at t = {0:e}")]
    NonFiniteValue(f64),
    #[error("convolution quadrature did not reach relative tolerance {target:e} (estimate {estimate:e})")]
    ConvolutionNonConvergence { estimate: f64, target: f64 },
}

/// Errors from the product-integration stepper.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepperError {
    #[error("product integration requires lambda in (0,1], got {0}")]
    LambdaOutOfRange(f64),
    #[error("invalid stepper config: {0}")]
    InvalidConfig(String),
    #[error("step instability: |1 - w_nn| = {0:e} < 1e-8")]
    StepInstability(f64),
    #[error("solution value non-finite at step {0}")]
    NonFiniteValue(usize),
}

/// Errors from the finite-part residual checker.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResidualError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("finite-part quadrature failed to stabilize to {target:e} relative (last delta {estimate:e})")]
    NonConvergence { estimate: f64, target: f64 },
    #[error("residual requires t > 0, got {0}")]
    NonPositiveTime(f64),
}

/// Errors from asymptotic estimation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("tauberian map undefined for nu = {0} (negative integer)")]
    ExcludedNu(f64),
    #[error("need at least {need} samples of constant sign in the window, found {found}")]
    InsufficientSamples { need: usize, found: usize },
    #[error("samples change sign inside the fit window")]
    SignChange,
    #[error("tail prediction requires exponential or faster decay; profile '{0}' decays like a power")]
    UnsupportedDecay(String),
}

/// Errors from parsing external inputs (grid specs, sample files).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("grid spec must be t_min:t_max:points:spacing, got '{0}'")]
    GridShape(String),
    #[error("bad grid field '{field}': {reason}")]
    GridField { field: String, reason: String },
    #[error("sample file line {line}: {reason}")]
    SampleLine { line: usize, reason: String },
    #[error("sample file: {0}")]
    SampleShape(String),
}
