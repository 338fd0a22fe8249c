//! The power-law convolution kernel t^(lambda-1), its Laplace symbol
//! Gamma(lambda) p^(-lambda), the Gelfand-Shilov-normalized variant
//! Phi_lambda = t^(lambda-1)/Gamma(lambda), and the finite-part primitive
//! t^lambda/lambda used by the residual checker.

use num_complex::Complex64;

use crate::error::KernelError;
use crate::special;

/// Admissibility tolerance: lambda must stay this far from 0, -1, -2, ...
pub const LAMBDA_POLE_TOL: f64 = 1e-9;

/// A power kernel t^(lambda-1), optionally normalized by 1/Gamma(lambda).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerKernel {
    lambda: f64,
    normalized: bool,
}

/// True when `lambda` is admissible (finite, not within 1e-9 of a
/// nonpositive integer).
pub fn lambda_admissible(lambda: f64) -> bool {
    if !lambda.is_finite() {
        return false;
    }
    if lambda > LAMBDA_POLE_TOL {
        return true;
    }
    (lambda - lambda.round()).abs() >= LAMBDA_POLE_TOL
}

impl PowerKernel {
    pub fn new(lambda: f64) -> Result<Self, KernelError> {
        Self::with_normalization(lambda, false)
    }

    /// `normalized` selects Phi_lambda = t_+^(lambda-1) / Gamma(lambda).
    pub fn with_normalization(lambda: f64, normalized: bool) -> Result<Self, KernelError> {
        if !lambda.is_finite() {
            return Err(KernelError::NonFiniteLambda);
        }
        if !lambda_admissible(lambda) {
            return Err(KernelError::InadmissibleLambda(lambda));
        }
        Ok(PowerKernel { lambda, normalized })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Kernel value t^(lambda-1) (or Phi_lambda) at t > 0.
    pub fn evaluate(&self, t: f64) -> f64 {
        let v = t.powf(self.lambda - 1.0);
        if self.normalized {
            v / special::gamma_real(self.lambda)
        } else {
            v
        }
    }

    /// Laplace symbol Gamma(lambda) p^(-lambda) for Re p > 0, principal
    /// branch of p^(-lambda). Valid classically for lambda > 0 and by
    /// analytic continuation in lambda otherwise. The normalized kernel
    /// drops the Gamma factor.
    pub fn laplace_symbol(&self, p: Complex64) -> Result<Complex64, KernelError> {
        if !(p.re > 0.0) {
            return Err(KernelError::LeftHalfPlane(p.re));
        }
        let power = (-self.lambda * p.ln()).exp();
        if self.normalized {
            Ok(power)
        } else {
            // lambda admissibility guarantees we are away from Gamma poles
            let g = special::gamma_real(self.lambda);
            Ok(g * power)
        }
    }

    /// Hadamard finite part of the primitive: fp of the integral of
    /// (t-s)^(lambda-1) over s in (0, t).
    ///
    /// Classical value t^lambda/lambda for lambda > 0; for lambda < 0 the
    /// divergent endpoint power eps^lambda/(-lambda) is dropped, which is
    /// the same regularization as analytic continuation in lambda.
    pub fn finite_part_primitive(&self, t: f64) -> Result<f64, KernelError> {
        if !(t > 0.0) {
            return Err(KernelError::NonPositiveTime(t));
        }
        let v = t.powf(self.lambda) / self.lambda;
        if self.normalized {
            Ok(v / special::gamma_real(self.lambda))
        } else {
            Ok(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_integer_lambda() {
        for lam in [0.0, -1.0, -2.0, 1e-10, -1.0 + 1e-10] {
            assert!(PowerKernel::new(lam).is_err(), "lambda={lam}");
        }
        assert!(PowerKernel::new(-0.25).is_ok());
        assert!(PowerKernel::new(1.0).is_ok());
    }

    #[test]
    fn symbol_lambda_one_is_one_over_p() {
        // kernel identically 1, classical transform 1/p
        let k = PowerKernel::new(1.0).unwrap();
        let s = k.laplace_symbol(Complex64::new(3.0, 0.0)).unwrap();
        assert!((s - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn symbol_hyper_singular_at_p_one() {
        // Gamma(-1/4) * 1 = -4 Gamma(3/4)
        let k = PowerKernel::new(-0.25).unwrap();
        let s = k.laplace_symbol(Complex64::new(1.0, 0.0)).unwrap();
        assert!((s.re + 4.90166680986071).abs() < 1e-12);
        assert_eq!(s.im, 0.0);
    }

    #[test]
    fn symbol_half_at_four() {
        // Gamma(1/2) * 4^(-1/2) = sqrt(pi)/2
        let k = PowerKernel::new(0.5).unwrap();
        let s = k.laplace_symbol(Complex64::new(4.0, 0.0)).unwrap();
        assert!((s.re - 0.886226925452758).abs() < 1e-13);
    }

    #[test]
    fn symbol_requires_right_half_plane() {
        let k = PowerKernel::new(0.5).unwrap();
        assert!(k.laplace_symbol(Complex64::new(-1.0, 2.0)).is_err());
        assert!(k.laplace_symbol(Complex64::new(0.0, 2.0)).is_err());
    }

    #[test]
    fn normalized_symbol_relation() {
        let k = PowerKernel::new(-0.25).unwrap();
        let kn = PowerKernel::with_normalization(-0.25, true).unwrap();
        let p = Complex64::new(2.0, 1.5);
        let a = k.laplace_symbol(p).unwrap();
        let b = kn.laplace_symbol(p).unwrap() * special::gamma_real(-0.25);
        assert!((a - b).norm() <= 1e-15 * a.norm());
    }

    #[test]
    fn finite_part_primitive_values() {
        let k = PowerKernel::new(-0.25).unwrap();
        assert!((k.finite_part_primitive(1.0).unwrap() + 4.0).abs() < 1e-14);
        assert!((k.finite_part_primitive(16.0).unwrap() + 2.0).abs() < 1e-14);
        let k1 = PowerKernel::new(1.0).unwrap();
        assert!((k1.finite_part_primitive(2.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn primitive_differentiates_to_kernel() {
        // central difference of t^lambda/lambda reproduces t^(lambda-1)
        for &lam in &[-0.25, 0.5, 1.0] {
            let k = PowerKernel::new(lam).unwrap();
            for &t in &[0.5, 1.0, 2.0] {
                let h = 1e-5 * t;
                let d = (k.finite_part_primitive(t + h).unwrap()
                    - k.finite_part_primitive(t - h).unwrap())
                    / (2.0 * h);
                let want = k.evaluate(t);
                assert!(
                    (d - want).abs() <= 1e-6 * want.abs(),
                    "lambda={lam} t={t}: {d} vs {want}"
                );
            }
        }
    }
}
