//! Boundary modulus profiles for outer-function construction.
//!
//! A profile describes w(theta) >= 0 on [0, 2*pi). The outer function with
//! |F| = w is exp(u + i*conj_u) with u = log w. For piecewise-constant and
//! sine-power profiles the harmonic conjugate has a closed form, so the
//! boundary values carry no Gibbs error; only isolated singular grid points
//! (arc endpoints, zeros of w) need patching. Smooth pocket profiles go
//! through the spectral route, which is exact to aliasing for C-infinity
//! data.

use crate::fft;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("modulus values must lie in [0, 1], got {0}")]
    ValueOutOfRange(f64),
    #[error("w = 0 on a set of positive measure: log-integrability fails")]
    LogIntegrability,
    #[error("arcs overlap near theta = {0}")]
    OverlappingArcs(f64),
    #[error("arc is unresolved at this grid size (shorter than 4 cells)")]
    UnresolvedArc,
    #[error("sampled profile length {0} does not match grid size {1}")]
    SampleLengthMismatch(usize, usize),
    #[error("sine-power exponent must be positive, got {0}")]
    BadExponent(f64),
    #[error("pocket halfwidth must lie in (0, pi), got {0}")]
    BadHalfwidth(f64),
    #[error("profile exceeds the unit bound: max w = {0}")]
    ExceedsUnitBound(f64),
}

fn wrap_angle(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut x = t % two_pi;
    if x < 0.0 {
        x += two_pi;
    }
    x
}

/// Closed arc data: w = `value` on [start, end) (angles wrap mod 2*pi).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModulusArc {
    pub arc: [f64; 2],
    pub value: f64,
}

/// One factor |2 sin((theta - theta0)/2)|^power of a sine-power modulus.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SineFactor {
    pub theta0: f64,
    pub power: f64,
}

/// A smooth dip of the modulus below 1, infinitely flat at its edges:
/// 1 - w^2 = depth * exp(-t^2/(1 - t^2)) with t = (theta - center)/halfwidth.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Pocket {
    pub center: f64,
    pub halfwidth: f64,
    pub depth: f64,
}

/// Piecewise description of the boundary modulus.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ModulusProfile {
    /// Constant `default` outside the listed arcs.
    PiecewiseConstant {
        default: f64,
        #[serde(default)]
        arcs: Vec<ModulusArc>,
    },
    /// w = scale * prod |2 sin((theta - theta0)/2)|^power.
    SinePowers {
        #[serde(default = "one")]
        scale: f64,
        sine_powers: Vec<SineFactor>,
    },
    /// w^2 = 1 - sum of smooth pockets.
    Pockets { pockets: Vec<Pocket> },
    /// Raw boundary samples of w on the target grid (smooth data assumed).
    Sampled { values: Vec<f64> },
}

fn one() -> f64 {
    1.0
}

/// Boundary values of the outer function together with the grid indices
/// whose value was patched (endpoint hits) or forced to zero (zeros of w).
pub struct OuterBoundary {
    pub samples: Vec<C64>,
}

impl ModulusProfile {
    /// Structural validation independent of any grid.
    pub fn validate(&self) -> Result<(), ProfileError> {
        match self {
            ModulusProfile::PiecewiseConstant { default, arcs } => {
                check_range(*default)?;
                for a in arcs {
                    check_range(a.value)?;
                }
                // overlap check on normalized arcs
                let mut spans: Vec<(f64, f64)> = Vec::new();
                for a in arcs {
                    for span in normalize_arc(a.arc[0], a.arc[1]) {
                        spans.push(span);
                    }
                }
                spans.sort_by(|x, y| x.0.total_cmp(&y.0));
                for pair in spans.windows(2) {
                    if pair[1].0 < pair[0].1 - 1e-12 {
                        return Err(ProfileError::OverlappingArcs(pair[1].0));
                    }
                }
                Ok(())
            }
            ModulusProfile::SinePowers { scale, sine_powers } => {
                check_range(*scale)?;
                if *scale == 0.0 {
                    return Err(ProfileError::LogIntegrability);
                }
                for f in sine_powers {
                    if f.power <= 0.0 {
                        return Err(ProfileError::BadExponent(f.power));
                    }
                }
                Ok(())
            }
            ModulusProfile::Pockets { pockets } => {
                for p in pockets {
                    check_range(p.depth)?;
                    if !(p.halfwidth > 0.0 && p.halfwidth < PI) {
                        return Err(ProfileError::BadHalfwidth(p.halfwidth));
                    }
                }
                Ok(())
            }
            ModulusProfile::Sampled { values } => {
                for &v in values {
                    check_range(v)?;
                }
                // runs of zeros are a positive-measure zero set
                let mut run = 0usize;
                for &v in values.iter().chain(values.iter().take(1)) {
                    if v == 0.0 {
                        run += 1;
                        if run > 1 {
                            return Err(ProfileError::LogIntegrability);
                        }
                    } else {
                        run = 0;
                    }
                }
                Ok(())
            }
        }
    }

    /// Modulus samples w(theta_j) on the m-point grid.
    pub fn sample_modulus(&self, m: usize) -> Result<Vec<f64>, ProfileError> {
        self.validate()?;
        match self {
            ModulusProfile::PiecewiseConstant { default, arcs } => Ok((0..m)
                .map(|j| {
                    let theta = fft::grid_angle(j, m);
                    lookup_arc(arcs, theta).unwrap_or(*default)
                })
                .collect()),
            ModulusProfile::SinePowers { scale, sine_powers } => Ok((0..m)
                .map(|j| {
                    let theta = fft::grid_angle(j, m);
                    let mut w = *scale;
                    for f in sine_powers {
                        w *= (2.0 * ((theta - f.theta0) / 2.0).sin()).abs().powf(f.power);
                    }
                    w
                })
                .collect()),
            ModulusProfile::Pockets { pockets } => Ok((0..m)
                .map(|j| {
                    let theta = fft::grid_angle(j, m);
                    let rho = pocket_rho(pockets, theta).min(1.0);
                    (1.0 - rho).max(0.0).sqrt()
                })
                .collect()),
            ModulusProfile::Sampled { values } => {
                if values.len() != m {
                    return Err(ProfileError::SampleLengthMismatch(values.len(), m));
                }
                Ok(values.clone())
            }
        }
    }

    /// Boundary values of the outer function with |F| = w on the m-point
    /// grid. `m` must be a power of two.
    pub fn outer_boundary(&self, m: usize) -> Result<OuterBoundary, ProfileError> {
        self.validate()?;
        match self {
            ModulusProfile::PiecewiseConstant { default, arcs } => {
                outer_piecewise_constant(*default, arcs, m)
            }
            ModulusProfile::SinePowers { scale, sine_powers } => {
                outer_sine_powers(*scale, sine_powers, m)
            }
            ModulusProfile::Pockets { pockets } => {
                let w = self.sample_modulus(m)?;
                let rho_max = pockets.iter().map(|p| p.depth).sum::<f64>();
                if rho_max >= 1.0 {
                    // w may vanish; only isolated zeros are admissible
                    let zeros = w.iter().filter(|&&v| v == 0.0).count();
                    if zeros > pockets.len() {
                        return Err(ProfileError::LogIntegrability);
                    }
                }
                outer_from_smooth_samples(&w, m)
            }
            ModulusProfile::Sampled { values } => {
                if values.len() != m {
                    return Err(ProfileError::SampleLengthMismatch(values.len(), m));
                }
                outer_from_smooth_samples(values, m)
            }
        }
    }
}

fn check_range(v: f64) -> Result<(), ProfileError> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(ProfileError::ValueOutOfRange(v));
    }
    Ok(())
}

/// Splits an arc into non-wrapping spans within [0, 2*pi).
fn normalize_arc(start: f64, end: f64) -> Vec<(f64, f64)> {
    let s = wrap_angle(start);
    let e = wrap_angle(end);
    if (s - e).abs() < 1e-15 {
        return Vec::new();
    }
    if s < e {
        vec![(s, e)]
    } else {
        vec![(s, 2.0 * PI), (0.0, e)]
    }
}

fn lookup_arc(arcs: &[ModulusArc], theta: f64) -> Option<f64> {
    for a in arcs {
        for (s, e) in normalize_arc(a.arc[0], a.arc[1]) {
            if theta >= s && theta < e {
                return Some(a.value);
            }
        }
    }
    None
}

fn pocket_rho(pockets: &[Pocket], theta: f64) -> f64 {
    let mut rho = 0.0;
    for p in pockets {
        let mut d = wrap_angle(theta - p.center);
        if d > PI {
            d -= 2.0 * PI;
        }
        let t = d / p.halfwidth;
        if t.abs() < 1.0 {
            rho += p.depth * (-t * t / (1.0 - t * t)).exp();
        }
    }
    rho
}

/// Harmonic conjugate of the indicator of [a, b]: the jump contributes
/// (1/pi) log |sin((theta-a)/2) / sin((theta-b)/2)|.
fn conjugate_indicator(theta: f64, a: f64, b: f64) -> f64 {
    let sa = ((theta - a) / 2.0).sin().abs();
    let sb = ((theta - b) / 2.0).sin().abs();
    (sa / sb).ln() / PI
}

fn outer_piecewise_constant(
    default: f64,
    arcs: &[ModulusArc],
    m: usize,
) -> Result<OuterBoundary, ProfileError> {
    // Reject positive-measure zero sets up front.
    let covered: f64 = arcs.iter().map(|a| wrapped_length(a.arc[0], a.arc[1])).sum();
    if default == 0.0 && covered < 2.0 * PI - 1e-9 {
        return Err(ProfileError::LogIntegrability);
    }
    for a in arcs {
        if a.value == 0.0 {
            return Err(ProfileError::LogIntegrability);
        }
    }

    let log_default = default.ln();
    let h = 2.0 * PI / m as f64;
    // The conjugate formula only sees the two true jump points of each arc;
    // wrapping across 0 needs no splitting because sin((theta - a)/2) is
    // pi-antiperiodic in a.
    let mut endpoints: Vec<f64> = Vec::new();
    for a in arcs {
        if wrapped_length(a.arc[0], a.arc[1]) < 4.0 * h {
            return Err(ProfileError::UnresolvedArc);
        }
        endpoints.push(wrap_angle(a.arc[0]));
        endpoints.push(wrap_angle(a.arc[1]));
    }

    let mut singular = vec![false; m];
    let mut samples = vec![C64::new(0.0, 0.0); m];
    for (j, sample) in samples.iter_mut().enumerate() {
        let theta = fft::grid_angle(j, m);
        let w = lookup_arc(arcs, theta).unwrap_or(default);
        let u = w.ln();
        let mut v = 0.0;
        for a in arcs {
            let c = a.value.ln() - log_default;
            v += c * conjugate_indicator(theta, a.arc[0], a.arc[1]);
        }
        for &p in &endpoints {
            if ((theta - p) / 2.0).sin().abs() < 1e-9 {
                singular[j] = true;
            }
        }
        if !v.is_finite() {
            singular[j] = true;
            v = 0.0;
        }
        *sample = C64::new(u, v).exp();
    }
    patch_singular(&mut samples, &singular);
    Ok(OuterBoundary { samples })
}

/// Arc length of [start, end) read forward mod 2*pi.
fn wrapped_length(start: f64, end: f64) -> f64 {
    let l = wrap_angle(end - start);
    if l == 0.0 {
        0.0
    } else {
        l
    }
}

fn outer_sine_powers(
    scale: f64,
    factors: &[SineFactor],
    m: usize,
) -> Result<OuterBoundary, ProfileError> {
    let mut samples = vec![C64::new(0.0, 0.0); m];
    let mut max_w = 0.0f64;
    for (j, sample) in samples.iter_mut().enumerate() {
        let theta = fft::grid_angle(j, m);
        let mut u = scale.ln();
        let mut v = 0.0;
        let mut hit_zero = false;
        for f in factors {
            let s = (2.0 * ((theta - f.theta0) / 2.0).sin()).abs();
            if s < 1e-12 {
                hit_zero = true;
                break;
            }
            u += f.power * s.ln();
            // conjugate of log|2 sin((theta - theta0)/2)| is (delta - pi)/2
            let delta = wrap_angle(theta - f.theta0);
            v += f.power * (delta - PI) / 2.0;
        }
        *sample = if hit_zero { C64::new(0.0, 0.0) } else { C64::new(u, v).exp() };
        max_w = max_w.max(sample.norm());
    }
    if max_w > 1.0 + 1e-9 {
        return Err(ProfileError::ExceedsUnitBound(max_w));
    }
    Ok(OuterBoundary { samples })
}

/// Spectral construction from smooth modulus samples: analytic completion
/// of log w, then exponentiation. Exact to aliasing for smooth w.
fn outer_from_smooth_samples(w: &[f64], m: usize) -> Result<OuterBoundary, ProfileError> {
    let mut u: Vec<f64> = Vec::with_capacity(m);
    let mut forced_zero = vec![false; m];
    for (j, &v) in w.iter().enumerate() {
        if v == 0.0 {
            // isolated zero: interpolate log w through the gap, force F = 0 after
            forced_zero[j] = true;
            let prev = w[(j + m - 1) % m];
            let next = w[(j + 1) % m];
            if prev == 0.0 || next == 0.0 {
                return Err(ProfileError::LogIntegrability);
            }
            u.push(0.5 * (prev.ln() + next.ln()));
        } else {
            u.push(v.ln());
        }
    }
    let u_c: Vec<C64> = u.iter().map(|&x| C64::new(x, 0.0)).collect();
    let hat = fft::analysis(&u_c);
    let mut bins = vec![C64::new(0.0, 0.0); m];
    bins[0] = hat[0];
    for k in 1..m / 2 {
        bins[k] = 2.0 * hat[k];
    }
    bins[m / 2] = hat[m / 2];
    let herglotz = fft::synthesis(&bins);
    let mut samples: Vec<C64> = herglotz.into_iter().map(|h| h.exp()).collect();
    for (j, &z) in forced_zero.iter().enumerate() {
        if z {
            samples[j] = C64::new(0.0, 0.0);
        }
    }
    Ok(OuterBoundary { samples })
}

fn patch_singular(samples: &mut [C64], singular: &[bool]) {
    let m = samples.len();
    let orig = samples.to_vec();
    for j in 0..m {
        if singular[j] {
            let prev = orig[(j + m - 1) % m];
            let next = orig[(j + 1) % m];
            samples[j] = 0.5 * (prev + next);
        }
    }
}
