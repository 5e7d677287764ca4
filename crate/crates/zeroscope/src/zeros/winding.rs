//! Winding numbers along circles by adaptive sampling with phase
//! unwrapping.
//!
//! Between consecutive samples two conditions must hold before their phase
//! step is trusted: the step is below π/2, and the modulus lower bound along
//! the arc stays positive — endpoint modulus minus evaluation error minus a
//! Lipschitz allowance |f'|·arclen from the differentiated series. Arcs
//! failing either condition are bisected, up to a hard sample cap.

use num_complex::Complex64;

use crate::mp::{Complex, Prec, Real};
use crate::series::{CoefficientStream, EvalError, EvalResult, TailCertificate};

/// Closed disk in the plane.
#[derive(Debug, Clone, Copy)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Disk {
        assert!(radius > 0.0 && radius.is_finite());
        Disk { center, radius }
    }

    pub fn centered(radius: f64) -> Disk {
        Disk::new(Complex64::new(0.0, 0.0), radius)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

/// A certified-evaluator view of Σ cₙ zⁿ: stream plus tail certificate,
/// with the derivative sharing the certificate.
#[derive(Clone)]
pub struct SeriesFunction {
    stream: CoefficientStream,
    cert: TailCertificate,
}

impl SeriesFunction {
    pub fn new(stream: CoefficientStream, cert: TailCertificate) -> SeriesFunction {
        SeriesFunction { stream, cert }
    }

    pub fn stream(&self) -> &CoefficientStream {
        &self.stream
    }

    pub fn certificate(&self) -> &TailCertificate {
        &self.cert
    }

    pub fn prec(&self) -> Prec {
        self.stream.prec()
    }

    pub fn eval(&self, z: &Complex, eps: f64) -> Result<EvalResult, EvalError> {
        crate::series::evaluate(&self.stream, z, eps, &self.cert)
    }

    /// The derivative series (n+1)c_{n+1} with the transformed certificate.
    pub fn derivative(&self) -> SeriesFunction {
        SeriesFunction {
            stream: self.stream.derivative_stream(),
            cert: self.cert.derivative(),
        }
    }

    /// A crude f64 scale for choosing initial eps values.
    pub fn scale_hint(&self) -> f64 {
        self.cert
            .m_bound()
            .log2_abs()
            .map(|l| l.clamp(-100.0, 100.0).exp2())
            .unwrap_or(1.0)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ZeroCountError {
    #[error("contour at radius {radius} could not be certified zero-free ({samples} samples)")]
    ContourNearZero { radius: f64, samples: usize },
    #[error("accumulated phase {total_turns} turns is not near an integer")]
    PhaseInconsistent { total_turns: f64 },
    #[error("all {attempts} contour perturbations failed near radius {radius}")]
    Unresolvable { radius: f64, attempts: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Outcome of one certified contour integration.
#[derive(Debug, Clone)]
pub struct ContourOutcome {
    pub winding: usize,
    pub samples_used: usize,
    /// Certified lower bound on |f| over the contour samples.
    pub min_modulus: f64,
}

/// Result of counting with automatic radius perturbation.
#[derive(Debug, Clone)]
pub struct DiskCount {
    pub count: usize,
    pub radius_used: f64,
    pub samples_used: usize,
    pub min_modulus: f64,
}

const PHASE_STEP_MAX: f64 = std::f64::consts::FRAC_PI_2;
const MAX_SAMPLES: usize = 1 << 20;
const MIN_ARC: f64 = std::f64::consts::TAU / (1 << 21) as f64;
/// |total/2π − round| beyond this is a numerical failure.
const INTEGER_TOL: f64 = 1e-3;
/// Margin multiplier on the endpoint |f'| when bounding the arc variation.
const LIP_MARGIN: f64 = 1.5;

struct Sample {
    /// f(z(θ)) value, normalized to f64 for phase purposes.
    phase_vec: Complex64,
    /// Certified lower bound |f| − err (may be ≤ 0 when uncertain).
    lower: Real,
    /// Upper bound |f'| + err at the same point.
    deriv_upper: Real,
}

struct ContourCtx<'a> {
    f: &'a SeriesFunction,
    fp: SeriesFunction,
    disk: Disk,
    prec: Prec,
    samples: usize,
    min_lower: Option<Real>,
    scale: f64,
    /// Certificate-level fallback bound on |f'| over the disk.
    global_lip: Real,
}

/// Evaluate with eps refined adaptively: downward until the error is below
/// 2^-rel_bits of the value, upward past reported precision floors. None
/// when no eps succeeds.
pub fn refine_eval(
    f: &SeriesFunction,
    z: &Complex,
    scale: f64,
    rel_bits: i32,
) -> Result<Option<EvalResult>, ZeroCountError> {
    let mut eps = scale.clamp(1e-280, 1e280);
    let mut best: Option<EvalResult> = None;
    for _ in 0..16 {
        match f.eval(z, eps) {
            Ok(r) => {
                let v = r.value.abs().to_f64_clamped();
                let done = r.error_bound <= v * 2f64.powi(-rel_bits);
                let next = (v * 2f64.powi(-rel_bits - 6))
                    .max(eps * 2f64.powi(-20))
                    .max(1e-280);
                let improved =
                    best.as_ref().map(|b| r.error_bound < b.error_bound).unwrap_or(true);
                if improved {
                    best = Some(r);
                }
                if done || next >= eps {
                    break;
                }
                eps = next;
            }
            Err(EvalError::PrecisionExhausted { floor, .. }) => {
                if best.is_some() {
                    break;
                }
                let widened = if floor.is_finite() && floor > 0.0 {
                    floor * 4.0
                } else {
                    eps * 2f64.powi(20)
                };
                if !widened.is_finite() || widened <= eps || widened > 1e280 {
                    break;
                }
                eps = widened;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(best)
}

impl ContourCtx<'_> {
    fn point(&self, theta: f64) -> Complex {
        let z = self.disk.center + Complex64::from_polar(self.disk.radius, theta);
        Complex::from_c64(z, self.prec)
    }

    /// Evaluate f at θ, refining eps until the value dominates its error or
    /// the precision floor is hit.
    fn sample(&mut self, theta: f64) -> Result<Sample, ZeroCountError> {
        self.samples += 1;
        if self.samples > MAX_SAMPLES {
            return Err(ZeroCountError::ContourNearZero {
                radius: self.disk.radius,
                samples: self.samples,
            });
        }
        let z = self.point(theta);
        let r = match refine_eval(self.f, &z, self.scale, 18)? {
            Some(r) => r,
            None => {
                // even the loosest eval exhausted precision: treat the point
                // as uncertain
                return Ok(Sample {
                    phase_vec: Complex64::new(0.0, 0.0),
                    lower: Real::from_i64(-1, Prec(64)),
                    deriv_upper: Real::one(Prec(64)),
                });
            }
        };
        let modulus = r.value.abs();
        let lower = modulus.sub(&Real::from_f64(r.error_bound, self.prec));
        // Upper bound on |f'|; a loose relative target is enough for the
        // Lipschitz allowance. Fall back to the certificate-level bound
        // when the evaluation cannot certify anything.
        let deriv_upper = match refine_eval(&self.fp, &z, self.scale, 10)? {
            Some(d) => d.value.abs().add(&Real::from_f64(d.error_bound, self.prec)),
            None => self.global_lip.clone(),
        };
        Ok(Sample { phase_vec: r.value.to_c64_normalized(), lower, deriv_upper })
    }

    fn note_lower(&mut self, lower: &Real) {
        match &self.min_lower {
            Some(m) if m.le(lower) => {}
            _ => self.min_lower = Some(lower.clone()),
        }
    }
}

fn phase_step(a: &Sample, b: &Sample) -> f64 {
    let u = a.phase_vec;
    let v = b.phase_vec;
    let dot = u.re * v.re + u.im * v.im;
    let cross = u.re * v.im - u.im * v.re;
    cross.atan2(dot)
}

fn arc_phase(
    ctx: &mut ContourCtx<'_>,
    th_a: f64,
    a: &Sample,
    th_b: f64,
    b: &Sample,
) -> Result<f64, ZeroCountError> {
    let step = phase_step(a, b);
    if step.abs() < PHASE_STEP_MAX {
        // Modulus certification: min endpoint lower bound must beat the
        // possible variation |f'|·arclen along the arc.
        let arclen = ctx.disk.radius * (th_b - th_a);
        let lip = a.deriv_upper.max_val(&b.deriv_upper);
        let margin = lip.mul(&Real::from_f64(arclen * LIP_MARGIN, ctx.prec));
        let lb = a.lower.min_val(&b.lower);
        if lb.sub(&margin).is_positive() {
            ctx.note_lower(&lb);
            return Ok(step);
        }
    }
    if th_b - th_a < MIN_ARC {
        return Err(ZeroCountError::ContourNearZero {
            radius: ctx.disk.radius,
            samples: ctx.samples,
        });
    }
    let th_m = 0.5 * (th_a + th_b);
    let m = ctx.sample(th_m)?;
    Ok(arc_phase(ctx, th_a, a, th_m, &m)? + arc_phase(ctx, th_m, &m, th_b, b)?)
}

/// Zeros of f (with multiplicity) strictly inside the disk, by the total
/// change of arg f around the circle. The contour must stay certified
/// zero-free or the call fails with `ContourNearZero`.
pub fn winding_number(f: &SeriesFunction, disk: Disk) -> Result<ContourOutcome, ZeroCountError> {
    let prec = f.prec();
    let fp = f.derivative();
    // |f'(z)| ≤ M'·e^{2|z|/δ} over the disk, from the derivative certificate.
    let reach = disk.center.norm() + disk.radius;
    let global_lip = {
        let expo = Real::from_f64(2.0 * reach, prec).div(fp.certificate().delta());
        fp.certificate().m_bound().mul(&crate::mp::functions::exp(&expo))
    };
    let mut ctx = ContourCtx {
        f,
        fp,
        disk,
        prec,
        samples: 0,
        min_lower: None,
        scale: f.scale_hint(),
        global_lip,
    };
    const N0: usize = 32;
    let thetas: Vec<f64> = (0..=N0)
        .map(|i| std::f64::consts::TAU * i as f64 / N0 as f64)
        .collect();
    let mut samples = Vec::with_capacity(N0 + 1);
    for &t in &thetas[..N0] {
        samples.push(ctx.sample(t)?);
    }
    let mut total = 0.0f64;
    for i in 0..N0 {
        let (a, b) = (&samples[i], &samples[(i + 1) % N0]);
        total += arc_phase(&mut ctx, thetas[i], a, thetas[i + 1], b)?;
    }
    let turns = total / std::f64::consts::TAU;
    let nearest = turns.round();
    if (turns - nearest).abs() > INTEGER_TOL || nearest < -0.5 {
        return Err(ZeroCountError::PhaseInconsistent { total_turns: turns });
    }
    let min_modulus = ctx
        .min_lower
        .as_ref()
        .map(|m| m.to_f64_clamped().max(f64::MIN_POSITIVE))
        .unwrap_or(f64::MIN_POSITIVE);
    Ok(ContourOutcome {
        winding: nearest as usize,
        samples_used: ctx.samples,
        min_modulus,
    })
}

/// [`winding_number`] with automatic radius perturbation: radii scaled by
/// 1 ± j·10⁻³ for j ≤ 4 are tried in order until a contour certifies.
pub fn count_zeros_in_disk(f: &SeriesFunction, disk: Disk) -> Result<DiskCount, ZeroCountError> {
    let mut attempts = 0usize;
    let mut last_radius = disk.radius;
    for j in 0..=4u32 {
        let factors: &[f64] = if j == 0 {
            &[1.0]
        } else {
            &[1.0 + j as f64 * 1e-3, 1.0 - j as f64 * 1e-3]
        };
        for &fac in factors {
            attempts += 1;
            let d = Disk::new(disk.center, disk.radius * fac);
            last_radius = d.radius;
            match winding_number(f, d) {
                Ok(out) => {
                    return Ok(DiskCount {
                        count: out.winding,
                        radius_used: d.radius,
                        samples_used: out.samples_used,
                        min_modulus: out.min_modulus,
                    })
                }
                Err(ZeroCountError::ContourNearZero { .. })
                | Err(ZeroCountError::PhaseInconsistent { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(ZeroCountError::Unresolvable { radius: last_radius, attempts })
}

/// Counts over a strictly increasing list of radii (shared center 0).
pub fn zero_count_growth(
    f: &SeriesFunction,
    radii: &[f64],
) -> Vec<Result<DiskCount, ZeroCountError>> {
    assert!(radii.windows(2).all(|w| w[0] < w[1]), "radii must strictly increase");
    use rayon::prelude::*;
    radii
        .par_iter()
        .map(|&r| count_zeros_in_disk(f, Disk::centered(r)))
        .collect()
}
