//! Radius-of-convergence classification and order-of-growth estimation from
//! trailing windows of coefficient magnitudes.
//!
//! Everything here works on log2|cₙ| (f64): stream magnitudes can carry
//! binary exponents far outside f64 range, but their logs never do. The
//! classifier combines two signals over the trailing half-window
//! (n_max/2, n_max]:
//!
//! * the ratio-test trend: per-step log ratios qₙ = log2|c_{n+1}/cₙ| and the
//!   drift between the window's first and second half medians;
//! * the root-test slope: regression of log2|cₙ|/n against log2 n.
//!
//! A factorial-type decay drifts the ratio down a fixed factor per octave
//! and shows a negative root slope (entire); factorial-type growth mirrors
//! it (radius zero); polynomial-times-geometric streams hold both flat
//! (finite radius, estimated by extrapolating the ratio sequence in 1/n).

use serde::Serialize;

use super::stream::CoefficientStream;

/// Ratio drift over one octave below which the series counts as
/// super-geometric (entire). log2(0.90) per half-window.
const RATIO_DECAY_BITS: f64 = -0.152;
/// Root-test slope thresholds (bits per octave).
const ROOT_SLOPE_INF: f64 = -0.25;
const ROOT_SLOPE_ZERO: f64 = 0.25;
/// Beyond this many bits per step the magnitudes are out of every
/// representable radius regime.
const RATIO_SATURATION_BITS: f64 = 900.0;
/// Relative ratio-fit scatter beyond which no radius is reported.
const INDECISIVE_REL_RMS: f64 = 0.25;
/// Root-only path: fit residual (bits) beyond which no radius is reported.
const INDECISIVE_ROOT_RMS_BITS: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RadiusClass {
    Zero,
    Finite { value: f64, lo: f64, hi: f64 },
    Infinite,
}

impl RadiusClass {
    pub fn is_infinite(&self) -> bool {
        matches!(self, RadiusClass::Infinite)
    }

    pub fn finite_value(&self) -> Option<f64> {
        match self {
            RadiusClass::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Estimated radius of convergence and order of growth of Σ cₙ zⁿ.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthProfile {
    pub radius: RadiusClass,
    /// Order-of-growth estimate; meaningful when `radius` is `Infinite`,
    /// 0.0 for terminating streams.
    pub order: f64,
    /// Index range the estimates were computed from.
    pub n_window: (usize, usize),
}

#[derive(Debug, thiserror::Error)]
pub enum RadiusError {
    #[error("trailing-window estimates oscillate beyond tolerance (rms {rms:.3})")]
    Indecisive {
        rms: f64,
        /// Raw (n, log2|cₙ|) window data for the caller.
        window: Vec<(usize, f64)>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum OrderError {
    #[error("radius classification was not +infinity")]
    NotEntire,
}

fn median(xs: &mut Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Some(xs[xs.len() / 2])
}

/// Least squares y = a + b·x; returns (a, b, rms residual).
fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    debug_assert!(points.len() >= 2);
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return (sy / n, 0.0, 0.0);
    }
    let b = (n * sxy - sx * sy) / denom;
    let a = (sy - b * sx) / n;
    let rms = (points.iter().map(|p| (p.1 - a - b * p.0).powi(2)).sum::<f64>() / n).sqrt();
    (a, b, rms)
}

struct WindowData {
    /// (n, log2|cₙ|) over nonzero coefficients in the window.
    logs: Vec<(usize, f64)>,
    /// (n, q) with q = log2|c_{n+1}| − log2|cₙ|, consecutive nonzero pairs.
    ratios: Vec<(usize, f64)>,
    window: (usize, usize),
}

fn collect_window(s: &CoefficientStream, n_max: usize) -> WindowData {
    let lo = n_max / 2;
    let mut logs = Vec::new();
    let mut ratios = Vec::new();
    let mut prev: Option<(usize, f64)> = None;
    for n in lo..=n_max {
        match s.log2_abs_coeff(n) {
            Some(l) => {
                if n > lo {
                    logs.push((n, l));
                }
                if let Some((pn, pl)) = prev {
                    if pn + 1 == n {
                        ratios.push((pn, l - pl));
                    }
                }
                prev = Some((n, l));
            }
            None => prev = None,
        }
    }
    WindowData { logs, ratios, window: (lo + 1, n_max) }
}

fn root_slope(logs: &[(usize, f64)]) -> Option<(f64, f64, f64)> {
    let pts: Vec<(f64, f64)> = logs
        .iter()
        .filter(|(n, _)| *n >= 1)
        .map(|(n, l)| ((*n as f64).log2(), l / *n as f64))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    Some(linear_fit(&pts))
}

/// Classify the radius of convergence of Σ cₙ zⁿ from a trailing window.
pub fn radius_of_convergence(
    s: &CoefficientStream,
    n_max: usize,
) -> Result<GrowthProfile, RadiusError> {
    assert!(n_max >= 8, "radius estimation needs n_max >= 8");
    let data = collect_window(s, n_max);
    let profile = |radius| GrowthProfile { radius, order: 0.0, n_window: data.window };

    // Fewer than two live coefficients in the window: terminating stream,
    // a polynomial, entire of order 0.
    if data.logs.len() < 2 {
        return Ok(profile(RadiusClass::Infinite));
    }

    let window_len = data.window.1 - data.window.0 + 1;
    let ratio_usable = data.ratios.len() >= (window_len / 2).max(4);

    let (_, s_b, _) = root_slope(&data.logs).unwrap_or((0.0, 0.0, 0.0));

    let classify_infinite = |order_src: &CoefficientStream| GrowthProfile {
        radius: RadiusClass::Infinite,
        order: order_from_window(order_src, n_max).unwrap_or(0.0),
        n_window: data.window,
    };

    if ratio_usable {
        let half = data.ratios.len() / 2;
        let mut first: Vec<f64> = data.ratios[..half].iter().map(|p| p.1).collect();
        let mut last: Vec<f64> = data.ratios[half..].iter().map(|p| p.1).collect();
        let med_first = median(&mut first).unwrap();
        let med_last = median(&mut last).unwrap();
        let drift = med_last - med_first;

        if med_last < -RATIO_SATURATION_BITS || (drift < RATIO_DECAY_BITS && s_b < ROOT_SLOPE_INF)
        {
            return Ok(classify_infinite(s));
        }
        if med_last > RATIO_SATURATION_BITS || (drift > -RATIO_DECAY_BITS && s_b > ROOT_SLOPE_ZERO)
        {
            return Ok(profile(RadiusClass::Zero));
        }

        // Finite radius: extrapolate rₙ = 2^{qₙ} against 1/n. Clamp the
        // exponent so stray huge steps degrade to "indecisive" instead of
        // poisoning the fit with infinities.
        let pts: Vec<(f64, f64)> = data
            .ratios
            .iter()
            .map(|(n, q)| (1.0 / (*n as f64), q.clamp(-400.0, 400.0).exp2()))
            .collect();
        let (intercept, slope, rms) = linear_fit(&pts);
        if !intercept.is_finite() || intercept <= 0.0 || rms / intercept > INDECISIVE_REL_RMS {
            return Err(RadiusError::Indecisive { rms, window: data.logs });
        }
        let radius = 1.0 / intercept;
        let n_end = data.ratios.last().unwrap().0 as f64;
        // Residual scatter plus a curvature allowance from the 1/n fit.
        let rel = (2.0 * rms / intercept + (slope / n_end).abs() / intercept / n_end)
            .max(1e-12);
        return Ok(profile(RadiusClass::Finite {
            value: radius,
            lo: radius / (1.0 + rel),
            hi: radius * (1.0 + rel),
        }));
    }

    // Root-test-only fallback (gappy streams).
    if s_b < ROOT_SLOPE_INF {
        return Ok(classify_infinite(s));
    }
    if s_b > ROOT_SLOPE_ZERO {
        return Ok(profile(RadiusClass::Zero));
    }
    // Fit log2|cₙ|/n = B + c·(log2 n)/n to absorb polynomial factors.
    let pts: Vec<(f64, f64)> = data
        .logs
        .iter()
        .filter(|(n, _)| *n >= 1)
        .map(|(n, l)| ((*n as f64).log2() / *n as f64, l / *n as f64))
        .collect();
    let (b0, _, rms) = linear_fit(&pts);
    if rms > INDECISIVE_ROOT_RMS_BITS {
        return Err(RadiusError::Indecisive { rms, window: data.logs });
    }
    let radius = (-b0).exp2();
    let rel = (2f64.powf(2.0 * rms) - 1.0).max(1e-9);
    Ok(profile(RadiusClass::Finite {
        value: radius,
        lo: radius / (1.0 + rel),
        hi: radius * (1.0 + rel),
    }))
}

fn order_from_window(s: &CoefficientStream, n_max: usize) -> Option<f64> {
    let lo = (n_max / 2).max(2);
    let mut pts = Vec::new();
    for n in lo..=n_max {
        if let Some(l) = s.log2_abs_coeff(n) {
            let y = -(l * std::f64::consts::LN_2) / n as f64;
            pts.push(((n as f64).ln(), y));
        }
    }
    if pts.len() < 2 {
        return None;
    }
    let (_, slope, _) = linear_fit(&pts);
    if slope <= 1e-9 {
        return Some(f64::INFINITY);
    }
    Some(1.0 / slope)
}

/// Order-of-growth estimate from the coefficient asymptotics over the
/// trailing window; requires the series to classify as entire.
pub fn order_estimate(s: &CoefficientStream, n_max: usize) -> Result<f64, OrderError> {
    let profile = radius_of_convergence(s, n_max).map_err(|_| OrderError::NotEntire)?;
    if !profile.radius.is_infinite() {
        return Err(OrderError::NotEntire);
    }
    // Terminating → polynomial → order 0.
    Ok(order_from_window(s, n_max).unwrap_or(0.0))
}
