//! Forward Laplace transforms of forcing profiles (closed forms where
//! shipped, adaptive Gauss-Kronrod quadrature otherwise) and numerical
//! inversion by three methods: the fixed Talbot contour, Gaver-Stehfest,
//! and Euler summation of the Bromwich series.
//!
//! All three methods are node sums of the shape
//!     f(t) ~= prefactor * sum_k Re( coef_k * e^(s_k t) F(s_k) ),
//! and the solver layer exploits that: for profiles whose transforms grow
//! in the left half-plane, e^(s t) F(s) is evaluated as one fused
//! quadrature so the exponentials never overflow.

use std::f64::consts::{LN_10, LN_2, PI};

use num_complex::Complex64;

use crate::error::TransformError;
use crate::profile::SourceProfile;
use crate::quad::AdaptiveQuad;

/// Inversion method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Talbot,
    Stehfest,
    Euler,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Talbot => "talbot",
            Method::Stehfest => "stehfest",
            Method::Euler => "euler",
        }
    }
}

/// Inversion method plus its numeric parameters.
///
/// `nodes` is the Talbot M, the (even) Stehfest N, or the Euler series
/// length M (2M+1 transform evaluations). `contour_scale` scales the
/// Talbot contour radius r = scale * 2M/(5t) and is ignored elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig {
    pub method: Method,
    pub nodes: usize,
    pub contour_scale: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            method: Method::Talbot,
            nodes: 48,
            contour_scale: 1.0,
        }
    }
}

impl InversionConfig {
    pub fn talbot(nodes: usize) -> Self {
        InversionConfig {
            method: Method::Talbot,
            nodes,
            contour_scale: 1.0,
        }
    }

    pub fn stehfest(nodes: usize) -> Self {
        InversionConfig {
            method: Method::Stehfest,
            nodes,
            contour_scale: 1.0,
        }
    }

    pub fn euler(nodes: usize) -> Self {
        InversionConfig {
            method: Method::Euler,
            nodes,
            contour_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), TransformError> {
        let bad = |m: String| Err(TransformError::InvalidConfig(m));
        if !(self.contour_scale > 0.0) || !self.contour_scale.is_finite() {
            return bad(format!("contour_scale must be positive, got {}", self.contour_scale));
        }
        match self.method {
            Method::Talbot => {
                if !(16..=128).contains(&self.nodes) {
                    return bad(format!("talbot nodes must lie in [16, 128], got {}", self.nodes));
                }
            }
            Method::Stehfest => {
                if self.nodes % 2 != 0 || !(4..=18).contains(&self.nodes) {
                    return bad(format!(
                        "stehfest nodes must be even and in [4, 18], got {}",
                        self.nodes
                    ));
                }
            }
            Method::Euler => {
                if !(4..=48).contains(&self.nodes) {
                    return bad(format!("euler nodes must lie in [4, 48], got {}", self.nodes));
                }
            }
        }
        Ok(())
    }
}

/// An inversion node set at a fixed time t. `coef` excludes every
/// exponential factor: Euler and Stehfest consume plain transform values,
/// while Talbot multiplies e^(s t) in (or receives it fused with the
/// forward quadrature, see [`accumulate_fused`]).
pub(crate) struct NodeSum {
    pub method: Method,
    pub t: f64,
    pub prefactor: f64,
    pub nodes: Vec<(Complex64, Complex64)>,
}

/// Build the node set of `cfg` for inversion at time t.
pub(crate) fn node_sum(cfg: &InversionConfig, t: f64) -> Result<NodeSum, TransformError> {
    cfg.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(TransformError::NonPositiveTime(t));
    }
    Ok(match cfg.method {
        Method::Talbot => talbot_nodes(cfg.nodes, cfg.contour_scale, t),
        Method::Stehfest => stehfest_nodes(cfg.nodes, t),
        Method::Euler => euler_nodes(cfg.nodes, t),
    })
}

fn talbot_nodes(m: usize, scale: f64, t: f64) -> NodeSum {
    let r = scale * 2.0 * m as f64 / (5.0 * t);
    let mut nodes = Vec::with_capacity(m);
    nodes.push((Complex64::new(r, 0.0), Complex64::new(0.5, 0.0)));
    for k in 1..m {
        let theta = k as f64 * PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = r * theta * Complex64::new(cot, 1.0);
        let sigma = theta + (theta * cot - 1.0) * cot;
        nodes.push((s, Complex64::new(1.0, sigma)));
    }
    NodeSum {
        method: Method::Talbot,
        t,
        prefactor: r / m as f64,
        nodes,
    }
}

fn stehfest_nodes(n: usize, t: f64) -> NodeSum {
    let zeta = stehfest_coefficients(n);
    let ln2_t = LN_2 / t;
    let nodes = (1..=n)
        .map(|k| {
            let s = Complex64::new(k as f64 * ln2_t, 0.0);
            (s, Complex64::new(zeta[k], 0.0))
        })
        .collect();
    NodeSum {
        method: Method::Stehfest,
        t,
        prefactor: ln2_t,
        nodes,
    }
}

fn euler_nodes(m: usize, t: f64) -> NodeSum {
    let xi = euler_xi(m);
    let a = m as f64 * LN_10 / 3.0;
    // keep the node terms O(1) and apply the 10^(M/3) magnitude once in
    // the prefactor: pre-scaled terms would carry ~eps * 10^(M/3) of
    // representation noise into a heavily cancelling sum
    let nodes = (0..=2 * m)
        .map(|k| {
            let s = Complex64::new(a / t, PI * k as f64 / t);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (s, Complex64::new(sign * xi[k], 0.0))
        })
        .collect();
    NodeSum {
        method: Method::Euler,
        t,
        prefactor: 10.0f64.powf(m as f64 / 3.0) / t,
        nodes,
    }
}

fn kahan_step(sum: &mut f64, comp: &mut f64, term: f64) {
    let y = term - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// Node sum over plain transform values F(s). Talbot folds in its e^(s t)
/// factor here; Euler/Stehfest coefficients already carry everything.
pub(crate) fn accumulate_transform<F>(ns: &NodeSum, mut f: F) -> Result<f64, TransformError>
where
    F: FnMut(Complex64) -> Result<Complex64, TransformError>,
{
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &(s, coef) in &ns.nodes {
        let fv = f(s)?;
        if !fv.re.is_finite() || !fv.im.is_finite() {
            return Err(TransformError::NonFiniteNode { node: s });
        }
        let term = match ns.method {
            Method::Talbot => (coef * (s * ns.t).exp() * fv).re,
            // real-axis / Bromwich-line methods use Re F directly; the
            // alternating signs and magnitudes sit in coef exactly
            Method::Stehfest | Method::Euler => coef.re * fv.re,
        };
        kahan_step(&mut sum, &mut comp, term);
    }
    let v = ns.prefactor * sum;
    if !v.is_finite() {
        return Err(TransformError::Overflow(ns.t));
    }
    Ok(v)
}

/// Talbot node sum over pre-fused values E(s) ~= e^(s t) F(s), evaluated
/// stably by the caller (one quadrature per node).
pub(crate) fn accumulate_fused<E>(ns: &NodeSum, mut fused: E) -> Result<f64, TransformError>
where
    E: FnMut(Complex64) -> Result<Complex64, TransformError>,
{
    debug_assert_eq!(ns.method, Method::Talbot);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &(s, coef) in &ns.nodes {
        let e = fused(s)?;
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(TransformError::NonFiniteNode { node: s });
        }
        kahan_step(&mut sum, &mut comp, (coef * e).re);
    }
    let v = ns.prefactor * sum;
    if !v.is_finite() {
        return Err(TransformError::Overflow(ns.t));
    }
    Ok(v)
}

/// Gaver-Stehfest weights for even N <= 18; factorials up to 18! are
/// exactly representable in f64.
pub fn stehfest_coefficients(n: usize) -> Vec<f64> {
    let mut fact = [1.0f64; 19];
    for i in 1..19 {
        fact[i] = fact[i - 1] * i as f64;
    }
    let n2 = n / 2;
    let mut zeta = vec![0.0; n + 1];
    for (k, z) in zeta.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for j in k.div_ceil(2)..=k.min(n2) {
            acc += (j as f64).powi(n2 as i32) * fact[2 * j]
                / (fact[n2 - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k]);
        }
        *z = if (k + n2) % 2 == 0 { acc } else { -acc };
    }
    zeta
}

/// Euler-acceleration weights xi_0..xi_2M.
pub fn euler_xi(m: usize) -> Vec<f64> {
    let mut xi = vec![0.0; 2 * m + 1];
    xi[0] = 0.5;
    for x in xi.iter_mut().take(m + 1).skip(1) {
        *x = 1.0;
    }
    let scale = (2.0f64).powi(-(m as i32));
    xi[2 * m] = scale;
    let mut binom = 1.0f64; // C(m, 0)
    for k in 1..m {
        binom = binom * (m - k + 1) as f64 / k as f64;
        xi[2 * m - k] = xi[2 * m - k + 1] + scale * binom;
    }
    xi
}

/// Numerical inverse Laplace transform of a black-box F at time t.
///
/// The Talbot contour requires F analytic and decaying in the cut plane;
/// Euler and Stehfest sample only Re p > 0. Non-finite transform values
/// (poles on the node set, overflow) surface as errors.
pub fn laplace_invert<F>(transform: F, t: f64, cfg: &InversionConfig) -> Result<f64, TransformError>
where
    F: Fn(Complex64) -> Complex64,
{
    let ns = node_sum(cfg, t)?;
    accumulate_transform(&ns, |s| Ok(transform(s)))
}

/// Forward transform of a profile at Re p > 0: closed form when shipped,
/// otherwise adaptive quadrature over [0, T*] with the truncation horizon
/// chosen so the neglected tail is below ~1e-18.
pub fn laplace_forward(
    profile: &SourceProfile,
    p: Complex64,
) -> Result<Complex64, TransformError> {
    if !(p.re > 0.0) {
        return Err(TransformError::LeftHalfPlane(p.re));
    }
    if let Some(v) = profile.closed_transform(p) {
        return Ok(v);
    }
    let horizon = profile.quadrature_horizon(p.re);
    let quad = AdaptiveQuad::default();
    let integrand = |u: f64| profile.evaluate(u) * (-p * u).exp();
    let (val, est) = quad.integrate_complex(&integrand, 0.0, horizon, &profile.breakpoints());
    let target = 1e-8 * val.norm() + 1e-25;
    if est > target {
        return Err(TransformError::QuadratureNonConvergence {
            estimate: est,
            target,
        });
    }
    Ok(val)
}
