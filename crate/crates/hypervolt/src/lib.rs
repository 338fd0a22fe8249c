//! Numerical solver and verification suite for the power-kernel Volterra
//! convolution equation
//!
//! ```text
//! v(t) = v0(t) + integral_0^t (t-s)^(lambda-1) v(s) ds
//! ```
//!
//! covering the classical weakly singular exponents lambda in (0, 1] and
//! the hyper-singular exponent lambda = -1/4, where the integral only
//! exists in the finite-part (analytic-continuation) sense.
//!
//! The solution machinery works in the Laplace domain: the kernel has
//! symbol Gamma(lambda) p^(-lambda), so the transform of the solution is
//! L(v0)(p) / (1 - Gamma(lambda) p^(-lambda)), which for lambda = -1/4
//! reads L(v0)(p) / (1 + 4 Gamma(3/4) p^(1/4)). Two independent routes
//! realize this:
//!
//! * [`resolvent::solve_via_inversion`] inverts the product numerically
//!   (Talbot, Gaver-Stehfest, or Euler summation);
//! * [`resolvent::solve_via_resolvent`] convolves the forcing with the
//!   Mittag-Leffler resolvent kernel in the time domain.
//!
//! A third classical oracle, [`volterra_direct::solve_product_integration`],
//! time-steps the equation directly for lambda in (0, 1], and
//! [`singular_residual::residual`] verifies any computed solution against
//! the equation itself through a Hadamard finite-part quadrature.

pub mod asymptotics;
pub mod error;
pub mod input;
pub mod kernel;
pub mod profile;
pub mod quad;
pub mod resolvent;
pub mod singular_residual;
pub mod special;
pub mod transform;
pub mod volterra_direct;

pub use error::{
    AsymptoticsError, KernelError, ParseError, ResidualError, SolveError, SpecialError,
    StepperError, TransformError,
};
pub use input::{parse_grid_spec, parse_sample_file, GridSpec, SampleData, Spacing};
pub use kernel::PowerKernel;
pub use profile::{Decay, SourceProfile};
pub use resolvent::{
    multiplier, resolvent_kernel, solve_via_inversion, solve_via_resolvent, Provenance, Route,
    SolutionGrid, HYPER_LAMBDA,
};
pub use transform::{laplace_forward, laplace_invert, InversionConfig, Method};
pub use volterra_direct::{solve_product_integration, Rule, StepperConfig};
