//! Forcing profiles v0: the built-in catalog plus sample-file-backed
//! profiles. Each profile knows its pointwise values, an optional
//! closed-form Laplace transform, its value at zero, zeroth moment, decay
//! class, and enough structure for the transform machinery (quadrature
//! horizon, left-half-plane safety, interior breakpoints).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::input::SampleData;

/// Decay class of a forcing profile as t -> infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    Exponential,
    SuperExponential,
    Power(f64),
}

impl Decay {
    pub fn label(&self) -> String {
        match self {
            Decay::Exponential => "exponential".to_string(),
            Decay::SuperExponential => "super-exponential".to_string(),
            Decay::Power(rho) => format!("power({rho})"),
        }
    }
}

#[derive(Clone)]
enum Kind {
    /// e^(-t); transform 1/(1+p)
    Exp,
    /// t e^(-t); transform 1/(1+p)^2
    TExp,
    /// e^(-(t-3)^2); no closed-form transform (complex erfc avoided)
    GaussBump,
    /// cos^2(pi t / 4) on [0, 2], zero after; closed-form transform
    CosBump,
    /// linear interpolant of sampled data, zero beyond the last sample
    Sampled(Arc<SampleData>),
}

/// A forcing term v0 for the convolution equation.
#[derive(Clone)]
pub struct SourceProfile {
    name: String,
    kind: Kind,
}

impl std::fmt::Debug for SourceProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SourceProfile")
            .field("name", &self.name)
            .finish()
    }
}

const COSBUMP_END: f64 = 2.0;
const COSBUMP_OMEGA: f64 = PI / 2.0;

impl SourceProfile {
    pub fn exp() -> Self {
        SourceProfile {
            name: "exp".into(),
            kind: Kind::Exp,
        }
    }

    pub fn texp() -> Self {
        SourceProfile {
            name: "texp".into(),
            kind: Kind::TExp,
        }
    }

    pub fn gauss_bump() -> Self {
        SourceProfile {
            name: "gauss".into(),
            kind: Kind::GaussBump,
        }
    }

    pub fn cos_bump() -> Self {
        SourceProfile {
            name: "cosbump".into(),
            kind: Kind::CosBump,
        }
    }

    pub fn from_samples(name: &str, data: SampleData) -> Self {
        SourceProfile {
            name: name.into(),
            kind: Kind::Sampled(Arc::new(data)),
        }
    }

    /// The built-in catalog, in CLI order.
    pub fn catalog() -> Vec<SourceProfile> {
        vec![
            Self::exp(),
            Self::texp(),
            Self::gauss_bump(),
            Self::cos_bump(),
        ]
    }

    pub fn by_name(name: &str) -> Option<SourceProfile> {
        Self::catalog().into_iter().find(|p| p.name == name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// v0(t); zero for t < 0.
    pub fn evaluate(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match &self.kind {
            Kind::Exp => (-t).exp(),
            Kind::TExp => t * (-t).exp(),
            Kind::GaussBump => (-(t - 3.0) * (t - 3.0)).exp(),
            Kind::CosBump => {
                if t <= COSBUMP_END {
                    let c = (PI * t / 4.0).cos();
                    c * c
                } else {
                    0.0
                }
            }
            Kind::Sampled(d) => d.interpolate(t),
        }
    }

    /// Closed-form Laplace transform, when one is shipped.
    pub fn closed_transform(&self, p: Complex64) -> Option<Complex64> {
        match &self.kind {
            Kind::Exp => Some(1.0 / (1.0 + p)),
            Kind::TExp => {
                let q = 1.0 + p;
                Some(1.0 / (q * q))
            }
            Kind::CosBump => {
                // v0 = (1 + cos(w t))/2 on [0, 2], w = pi/2:
                // L = (1 - e^(-2p))/(2p) + p (1 + e^(-2p)) / (2 (p^2 + w^2))
                let em = expm1_complex(-2.0 * p);
                let w2 = COSBUMP_OMEGA * COSBUMP_OMEGA;
                Some(-em / (2.0 * p) + p * (2.0 + em) / (2.0 * (p * p + w2)))
            }
            Kind::GaussBump | Kind::Sampled(_) => None,
        }
    }

    pub fn value_at_zero(&self) -> f64 {
        self.evaluate(0.0)
    }

    /// Zeroth moment M0 = integral of v0 over [0, inf).
    pub fn moment0(&self) -> f64 {
        match &self.kind {
            Kind::Exp => 1.0,
            Kind::TExp => 1.0,
            // sqrt(pi)/2 (1 + erf 3); frozen from the closed form
            Kind::GaussBump => 1.7724342737122792,
            Kind::CosBump => 1.0,
            Kind::Sampled(d) => d.moment0_trapezoid(),
        }
    }

    pub fn decay(&self) -> Decay {
        match &self.kind {
            Kind::Exp | Kind::TExp => Decay::Exponential,
            Kind::GaussBump | Kind::CosBump | Kind::Sampled(_) => Decay::SuperExponential,
        }
    }

    /// Truncation horizon T* for forward quadrature: beyond it the
    /// integrand v0(u) e^(-re_p u) is below ~1e-18 of its peak.
    pub fn quadrature_horizon(&self, re_p: f64) -> f64 {
        let a = re_p.max(0.0);
        match &self.kind {
            Kind::Exp => 42.0 / (1.0 + a),
            Kind::TExp => 46.0 / (1.0 + a),
            Kind::GaussBump => {
                // solve (u-3)^2 + a u = 50: envelope crosses e^(-50)
                let b = a - 6.0;
                0.5 * (-b + (b * b + 164.0).sqrt())
            }
            Kind::CosBump => COSBUMP_END,
            Kind::Sampled(d) => d.last_time(),
        }
    }

    /// Whether the closed-form transform decays in the left half-plane,
    /// making it safe on a deformed (Talbot) contour. Compactly supported
    /// and super-exponential profiles have entire transforms that grow
    /// there instead.
    pub fn left_plane_safe(&self) -> bool {
        matches!(self.kind, Kind::Exp | Kind::TExp)
    }

    /// Interior points where v0 loses smoothness (quadrature split points).
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            Kind::CosBump => vec![COSBUMP_END],
            Kind::Sampled(d) => d.times.clone(),
            _ => Vec::new(),
        }
    }
}

/// exp(z) - 1 without cancellation for small |z|.
fn expm1_complex(z: Complex64) -> Complex64 {
    if z.norm() > 1e-3 {
        return z.exp() - 1.0;
    }
    // z + z^2/2! + z^3/3! + ...
    let mut term = z;
    let mut sum = z;
    for k in 2..20 {
        term = term * z / k as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}
