//! Power-law asymptotics of computed solutions: the Tauberian
//! correspondence between f(t) ~ A t^nu and its Laplace transform
//! A Gamma(nu+1) p^(-nu-1), log-log exponent fits on solution grids, and
//! the small-p expansion of the hyper-singular multiplier that predicts
//! the algebraic large-t tail M0 t^(-5/4).

use crate::error::AsymptoticsError;
use crate::profile::{Decay, SourceProfile};
use crate::resolvent::SolutionGrid;
use crate::special::gamma_real;

/// Which asymptotic end the Tauberian pairing refers to. The formula is
/// identical in both directions; the tag documents intent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// t -> 0 paired with p -> infinity
    SmallTime,
    /// t -> infinity paired with p -> 0
    LargeTime,
}

/// A fitted power law v ~ amplitude * t^exponent on a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    pub amplitude: f64,
    pub exponent: f64,
    pub window: (f64, f64),
    pub rms_log_residual: f64,
    pub samples: usize,
}

/// Map a time-side power law A t^nu to the Laplace-side law
/// (A Gamma(nu+1)) p^(-nu-1). Excluded: nu = -1, -2, ...
pub fn tauberian_map(
    amplitude: f64,
    nu: f64,
    _direction: Direction,
) -> Result<(f64, f64), AsymptoticsError> {
    if nu <= -0.5 && (nu - nu.round()).abs() < 1e-9 {
        return Err(AsymptoticsError::ExcludedNu(nu));
    }
    Ok((amplitude * gamma_real(nu + 1.0), -nu - 1.0))
}

/// Invert [`tauberian_map`]: recover (A, nu) from (coefficient, power).
pub fn tauberian_unmap(
    coefficient: f64,
    power: f64,
    _direction: Direction,
) -> Result<(f64, f64), AsymptoticsError> {
    let nu = -power - 1.0;
    if nu <= -0.5 && (nu - nu.round()).abs() < 1e-9 {
        return Err(AsymptoticsError::ExcludedNu(nu));
    }
    Ok((coefficient / gamma_real(nu + 1.0), nu))
}

/// Least-squares fit of log|v| against log t over the samples falling in
/// `window`. Requires at least 6 in-window samples of constant sign.
pub fn estimate_power_law(
    grid: &SolutionGrid,
    window: (f64, f64),
) -> Result<PowerLawFit, AsymptoticsError> {
    let (lo, hi) = window;
    let pairs: Vec<(f64, f64)> = grid
        .times
        .iter()
        .zip(grid.values.iter())
        .filter(|(&t, _)| t >= lo && t <= hi)
        .map(|(&t, &v)| (t, v))
        .collect();
    if pairs.len() < 6 {
        return Err(AsymptoticsError::InsufficientSamples {
            need: 6,
            found: pairs.len(),
        });
    }
    let sign = pairs[0].1.signum();
    if pairs.iter().any(|&(_, v)| v == 0.0 || v.signum() != sign) {
        return Err(AsymptoticsError::SignChange);
    }

    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|&(t, _)| t.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|&(_, v)| v.abs().ln()).collect();
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys.iter()).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rms = (xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();

    Ok(PowerLawFit {
        amplitude: sign * intercept.exp(),
        exponent: slope,
        window,
        rms_log_residual: rms,
        samples: pairs.len(),
    })
}

/// Leading large-t power-law prediction for the lambda = -1/4 solution.
///
/// Near p = 0 the transform expands as
///     L(v)(p) = M0 - c M0 p^(1/4) + O(p^(1/2)),   c = 4 Gamma(3/4),
/// and the non-analytic p^(1/4) term corresponds to an algebraic tail
/// with exponent -5/4 and coefficient c M0 / |Gamma(-1/4)| = M0.
/// Requires a forcing with finite M0 and exponential-or-faster decay.
pub fn tail_prediction(profile: &SourceProfile) -> Result<(f64, f64), AsymptoticsError> {
    match profile.decay() {
        Decay::Exponential | Decay::SuperExponential => Ok((profile.moment0(), -1.25)),
        Decay::Power(_) => Err(AsymptoticsError::UnsupportedDecay(
            profile.name().to_string(),
        )),
    }
}

/// Small-t amplitude prediction for the lambda = -1/4 solution with
/// v0(0) != 0: v ~ [v0(0) / (c Gamma(5/4))] t^(1/4), from L(v0)(p) ~
/// v0(0)/p and the Tauberian pairing applied to v0(0)/(c p^(5/4)).
pub fn small_time_prediction(profile: &SourceProfile) -> (f64, f64) {
    let c = 4.0 * gamma_real(0.75);
    (profile.value_at_zero() / (c * gamma_real(1.25)), 0.25)
}
