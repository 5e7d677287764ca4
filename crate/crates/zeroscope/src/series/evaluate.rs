//! Certified truncated evaluation of Σ cₙ zⁿ.
//!
//! A [`TailCertificate`] (δ, M) witnesses |n!·cₙ·(δ/2)ⁿ| ≤ M over a scanned
//! index range. From it, |cₙ zⁿ| ≤ M·(2|z|/δ)ⁿ/n!, so the truncation error
//! past T is bounded by the exponential remainder
//! M·x^{T+1}/((T+1)!·(1 − x/(T+2))) with x = 2|z|/δ. The evaluator picks the
//! smallest such T with the remainder under eps/2, sums, and charges the
//! other eps/2 to summation rounding.

use crate::mp::{functions, Complex, Prec, Real};

use super::stream::{factorial, log2_factorial_f64, CoefficientStream};

/// Floor for the certified bound; any positive M certifies the zero stream.
const M_FLOOR_LOG2: i64 = -64;

/// A (δ, M) pair bounding the factorial-weighted terms at δ/2.
#[derive(Debug, Clone)]
pub struct TailCertificate {
    delta: Real,
    m_bound: Real,
    /// True when the maximum was attained early and visible decay followed;
    /// false certificates extrapolate an observed-but-late maximum.
    rigorous: bool,
    n_probe: usize,
}

impl TailCertificate {
    pub fn delta(&self) -> &Real {
        &self.delta
    }

    pub fn m_bound(&self) -> &Real {
        &self.m_bound
    }

    pub fn is_rigorous(&self) -> bool {
        self.rigorous
    }

    pub fn n_probe(&self) -> usize {
        self.n_probe
    }

    /// Certificate for the derivative series: if |n!·cₙ·(δ/2)ⁿ| ≤ M then the
    /// shifted-scaled coefficients c'ₙ = (n+1)c_{n+1} obey the same bound
    /// with M' = 2M/δ.
    pub fn derivative(&self) -> TailCertificate {
        TailCertificate {
            delta: self.delta.clone(),
            m_bound: self.m_bound.mul_pow2(1).div(&self.delta),
            rigorous: self.rigorous,
            n_probe: self.n_probe.saturating_sub(1),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    #[error("weighted terms still growing near n_probe={n_probe} (argmax at {argmax})")]
    NoDecayObserved { argmax: usize, n_probe: usize },
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("working precision {prec} bits cannot reach eps={eps:e} (rounding floor {floor:e})")]
    PrecisionExhausted { eps: f64, floor: f64, prec: u32 },
    #[error("eps must be positive and finite, got {0}")]
    InvalidEps(f64),
}

/// Truncated-evaluation result with a rigorous error bound.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: Complex,
    pub error_bound: f64,
    pub terms_used: usize,
}

/// Scan weighted terms |n!·cₙ·(δ/2)ⁿ| up to `n_probe` and certify their
/// maximum. Refuses when the terms are not decreasing near the end of the
/// scan (the claimed convergence radius is then not credible).
pub fn make_tail_certificate(
    s: &CoefficientStream,
    delta: f64,
    n_probe: usize,
) -> Result<TailCertificate, CertificateError> {
    make_tail_certificate_with(s, delta, n_probe, 1.0)
}

/// Same as [`make_tail_certificate`] with an explicit safety inflation on M.
pub fn make_tail_certificate_with(
    s: &CoefficientStream,
    delta: f64,
    n_probe: usize,
    safety: f64,
) -> Result<TailCertificate, CertificateError> {
    assert!(delta > 0.0 && delta.is_finite(), "delta must be positive");
    assert!(safety >= 1.0, "safety factor must be >= 1");
    assert!(n_probe >= 8, "n_probe too small to observe decay");
    let prec = s.prec();
    let log_half_delta = (delta / 2.0).log2();

    // f64 log-magnitude scan.
    let mut lw: Vec<Option<f64>> = Vec::with_capacity(n_probe + 1);
    for n in 0..=n_probe {
        lw.push(
            s.log2_abs_coeff(n)
                .map(|l| l + log2_factorial_f64(n) + n as f64 * log_half_delta),
        );
    }
    let (mut argmax, mut max_log) = (0usize, f64::NEG_INFINITY);
    for (n, v) in lw.iter().enumerate() {
        if let Some(l) = v {
            if *l > max_log {
                max_log = *l;
                argmax = n;
            }
        }
    }

    let delta_r = Real::from_f64(delta, prec);
    if max_log == f64::NEG_INFINITY {
        // Zero stream: the floor certifies it trivially.
        return Ok(TailCertificate {
            delta: delta_r,
            m_bound: Real::one(prec).mul_pow2(M_FLOOR_LOG2),
            rigorous: true,
            n_probe,
        });
    }

    // Decay near the end of the scan: compare the last quarter against the
    // one before it.
    let q3_range = n_probe / 2 + 1..=3 * n_probe / 4;
    let q4_range = 3 * n_probe / 4 + 1..=n_probe;
    let collect = |range: std::ops::RangeInclusive<usize>| -> Vec<f64> {
        range.filter_map(|n| lw[n]).collect()
    };
    let med = |mut v: Vec<f64>| -> Option<f64> {
        if v.is_empty() {
            return None;
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(v[v.len() / 2])
    };
    let q4 = collect(q4_range.clone());
    let decaying = if q4.is_empty() {
        true // tail identically zero
    } else if *q4_range.start() <= argmax {
        false // maximum sits in the last quarter
    } else {
        match (med(collect(q3_range)), med(q4)) {
            (Some(m3), Some(m4)) => m4 < m3 - 1e-12,
            (None, Some(m4)) => m4 <= max_log - 1.0,
            _ => true,
        }
    };
    if !decaying {
        return Err(CertificateError::NoDecayObserved { argmax, n_probe });
    }

    // Recompute the maximum precisely over the near-max cluster.
    let half_delta = delta_r.mul_pow2(-1);
    let mut m = Real::zero(prec);
    for (n, v) in lw.iter().enumerate() {
        if let Some(l) = v {
            if *l >= max_log - 2.0 {
                let w = s
                    .coeff(n)
                    .abs()
                    .mul(&Real::from_bigint(&factorial(n), prec))
                    .mul(&half_delta.powi(n as u64));
                m = m.max_val(&w);
            }
        }
    }
    if safety > 1.0 {
        m = m.mul(&Real::from_f64(safety, prec));
    }
    let floor = Real::one(prec).mul_pow2(M_FLOOR_LOG2);
    if m.lt(&floor) {
        m = floor;
    }
    Ok(TailCertificate {
        delta: delta_r,
        m_bound: m,
        rigorous: argmax <= n_probe / 2,
        n_probe,
    })
}

/// Partial sum Σ_{n≤T} cₙ zⁿ with T chosen so the certified tail plus the
/// summation rounding stays under eps. `error_bound` is a rigorous bound on
/// |value − Σ_{n} cₙ zⁿ| given the certificate.
pub fn evaluate(
    s: &CoefficientStream,
    z: &Complex,
    eps: f64,
    cert: &TailCertificate,
) -> Result<EvalResult, EvalError> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(EvalError::InvalidEps(eps));
    }
    let prec = s.prec();
    if z.is_zero() {
        return Ok(EvalResult { value: s.coeff(0), error_bound: 0.0, terms_used: 1 });
    }

    // Tail-bound scan in small precision: x = 2|z|/δ.
    let bp = Prec(96);
    let x = z.abs().with_prec(bp).mul_pow2(1).div(&cert.delta().with_prec(bp));
    let x_f = x.to_f64_clamped();
    if x_f > 1e7 {
        return Err(EvalError::PrecisionExhausted { eps, floor: f64::INFINITY, prec: prec.0 });
    }
    let m = cert.m_bound().with_prec(bp);
    let eps_half = Real::from_f64(eps, bp).mul_pow2(-1);
    // Start past the term peak: T ≥ ceil(x) keeps the remainder decreasing
    // in T (and the geometric factor 1/(1 − x/(T+2)) valid).
    let t0 = x_f.ceil().max(0.0) as usize;
    let mut pow = Real::one(bp);
    for k in 1..=(t0 + 1) as u64 {
        pow = pow.mul(&x).div_u64(k);
    }
    let mut t = t0;
    let one = Real::one(bp);
    let tail = |pow: &Real, t: usize| -> Real {
        let geom = one.sub(&x.div(&Real::from_u64(t as u64 + 2, bp)));
        m.mul(pow).div(&geom)
    };
    let mut tail_bound = tail(&pow, t);
    let t_cap = 2_000_000;
    while tail_bound.gt(&eps_half) {
        t += 1;
        pow = pow.mul(&x).div_u64(t as u64 + 1);
        tail_bound = tail(&pow, t);
        if t > t_cap {
            return Err(EvalError::PrecisionExhausted { eps, floor: f64::NAN, prec: prec.0 });
        }
    }

    // Sum the partial series, tracking an |·|₁ magnitude budget for the
    // rounding bound.
    let mut value = Complex::zero(prec);
    let mut abs_acc = Real::zero(prec);
    let mut z_pow = Complex::one(prec);
    for n in 0..=t {
        if n > 0 {
            z_pow = z_pow.mul(z);
        }
        let term = s.coeff(n).mul(&z_pow);
        abs_acc = abs_acc.add(&term.norm_one());
        value = value.add(&term);
    }

    // Rounding: ~6 roundings per accumulated term at relative 2^(1−prec),
    // plus slack for family-level coefficient rounding.
    let rounding_log2 = match abs_acc.log2_abs() {
        Some(l) => l + ((6 * (t + 1) + 8) as f64).log2() - (prec.0 as f64 - 16.0),
        None => f64::NEG_INFINITY,
    };
    if rounding_log2 > (eps / 2.0).log2() {
        return Err(EvalError::PrecisionExhausted {
            eps,
            floor: rounding_log2.exp2() * 2.0,
            prec: prec.0,
        });
    }
    let rounding = if rounding_log2 == f64::NEG_INFINITY { 0.0 } else { rounding_log2.exp2() };
    let error_bound = (tail_bound.to_f64_clamped() * (1.0 + 1e-12) + rounding).max(f64::MIN_POSITIVE);
    Ok(EvalResult { value, error_bound, terms_used: t + 1 })
}

/// Result of a growth-bound sweep.
#[derive(Debug, Clone)]
pub struct GrowthCheck {
    pub ok: bool,
    /// Largest observed |f(z)| / (M·e^{2|z|/δ}).
    pub worst_ratio: f64,
    pub checked: usize,
    pub violations: usize,
}

/// Check |f(z)| ≤ M·e^{2|z|/δ} + (evaluation error) at each sample point.
pub fn growth_bound_check(
    s: &CoefficientStream,
    cert: &TailCertificate,
    zs: &[Complex],
) -> Result<GrowthCheck, EvalError> {
    let prec = s.prec();
    let mut worst: f64 = 0.0;
    let mut violations = 0usize;
    for z in zs {
        let exponent = z.abs().mul_pow2(1).div(cert.delta());
        let bound = cert.m_bound().mul(&functions::exp(&exponent.with_prec(prec)));
        let eps = (bound.log2_abs().unwrap_or(0.0) - 40.0).exp2().clamp(1e-290, 1e290);
        let r = evaluate(s, z, eps, cert)?;
        let fabs = r.value.abs();
        let limit = bound.add(&Real::from_f64(r.error_bound, prec));
        if fabs.gt(&limit) {
            violations += 1;
        }
        let ratio = fabs.div(&bound).to_f64_clamped();
        if ratio > worst {
            worst = ratio;
        }
    }
    Ok(GrowthCheck { ok: violations == 0, worst_ratio: worst, checked: zs.len(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RationalComplex;
    use crate::mp::format::parse_decimal;
    use crate::series::stream::CoeffSource;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn exp_stream(prec: Prec) -> CoefficientStream {
        struct Exp;
        impl CoeffSource for Exp {
            fn value(&self, n: usize, prec: Prec) -> Complex {
                Complex::from_real(Real::from_ratio(&BigInt::from(1), &factorial(n), prec))
            }
            fn exact_value(&self, n: usize) -> Option<RationalComplex> {
                Some(RationalComplex::from_rational(BigRational::new(
                    BigInt::from(1),
                    factorial(n),
                )))
            }
        }
        CoefficientStream::new(Box::new(Exp), "exp", true, prec)
    }

    /// cₙ = 1/(n!·2ⁿ); sums to e^{z/2}.
    fn counterexample_two(prec: Prec) -> CoefficientStream {
        struct S;
        impl CoeffSource for S {
            fn value(&self, n: usize, prec: Prec) -> Complex {
                let den = factorial(n) * BigInt::from(2).pow(n as u32);
                Complex::from_real(Real::from_ratio(&BigInt::from(1), &den, prec))
            }
        }
        CoefficientStream::new(Box::new(S), "counterexample R=2", false, prec)
    }

    const E_REF: &str = "2.718281828459045235360287471352662497757247093699959574966967627724076630353547594571";

    #[test]
    fn exp_certificate_has_unit_bound() {
        let s = exp_stream(Prec(192));
        let cert = make_tail_certificate(&s, 1.0, 64).unwrap();
        assert!(cert.is_rigorous());
        // max of 2^-n is 1 at n = 0
        assert!(cert.m_bound().ge(&Real::one(Prec(192))));
        assert!(cert.m_bound().sub(&Real::one(Prec(192))).abs().to_f64() < 1e-30);
    }

    #[test]
    fn weighted_constant_terms_refuse_certification() {
        // For the exp stream at δ = 2 the weighted terms are identically 1:
        // the claimed radius is not credible from the scan.
        let s = exp_stream(Prec(96));
        assert!(matches!(
            make_tail_certificate(&s, 2.0, 64),
            Err(CertificateError::NoDecayObserved { .. })
        ));
    }

    #[test]
    fn zero_stream_certificate_is_floor() {
        let s = CoefficientStream::from_exact_table(vec![], "zero", Prec(96));
        let cert = make_tail_certificate(&s, 3.0, 32).unwrap();
        assert!(cert.is_rigorous());
        assert!(cert.m_bound().log2_abs().unwrap() <= -63.9);
    }

    #[test]
    fn counterexample_certificate_bound_is_one() {
        // weighted terms (δ/2)ⁿ/2ⁿ at δ=2: max 1 at n=0
        let s = counterexample_two(Prec(160));
        let cert = make_tail_certificate(&s, 2.0, 64).unwrap();
        let err = cert.m_bound().sub(&Real::one(Prec(160))).abs();
        assert!(err.to_f64() < 1e-40);
    }

    #[test]
    fn evaluate_exp_at_one_is_e() {
        let p = Prec(256);
        let s = exp_stream(p);
        let cert = make_tail_certificate(&s, 1.0, 64).unwrap();
        let r = evaluate(&s, &Complex::one(p), 1e-12, &cert).unwrap();
        assert!(r.error_bound <= 1e-12);
        let e = parse_decimal(E_REF, p).unwrap();
        let err = r.value.re.sub(&e).abs().to_f64();
        assert!(err <= r.error_bound, "err {err} bound {}", r.error_bound);
        assert!(r.value.im.is_zero());
    }

    #[test]
    fn evaluate_at_zero_is_exact() {
        let p = Prec(128);
        let s = counterexample_two(p);
        let cert = make_tail_certificate(&s, 2.0, 64).unwrap();
        let r = evaluate(&s, &Complex::zero(p), 1e-30, &cert).unwrap();
        assert_eq!(r.error_bound, 0.0);
        assert_eq!(r.terms_used, 1);
        assert_eq!(r.value.re.to_f64(), 1.0);
    }

    #[test]
    fn counterexample_evaluates_to_e_at_two() {
        let p = Prec(256);
        let s = counterexample_two(p);
        let cert = make_tail_certificate(&s, 2.0, 64).unwrap();
        let z = Complex::from_f64(2.0, 0.0, p);
        let r = evaluate(&s, &z, 1e-15, &cert).unwrap();
        let e = parse_decimal(E_REF, p).unwrap();
        assert!(r.value.re.sub(&e).abs().to_f64() <= r.error_bound);
    }

    #[test]
    fn smaller_eps_never_grows_error_bound() {
        let p = Prec(256);
        let s = exp_stream(p);
        let cert = make_tail_certificate(&s, 1.0, 64).unwrap();
        let z = Complex::from_f64(1.5, -2.0, p);
        let mut last = f64::INFINITY;
        for k in 2..14 {
            let eps = 10f64.powi(-k);
            let r = evaluate(&s, &z, eps, &cert).unwrap();
            assert!(r.error_bound <= eps);
            assert!(r.error_bound <= last, "bound grew at eps={eps}");
            last = r.error_bound;
        }
    }

    #[test]
    fn precision_exhaustion_is_reported() {
        let p = Prec(64);
        let s = exp_stream(p);
        let cert = make_tail_certificate(&s, 1.0, 64).unwrap();
        let z = Complex::from_f64(1.0, 0.0, p);
        match evaluate(&s, &z, 1e-40, &cert) {
            Err(EvalError::PrecisionExhausted { .. }) => {}
            other => panic!("expected exhaustion, got {other:?}"),
        }
        assert!(matches!(
            evaluate(&s, &z, 0.0, &cert),
            Err(EvalError::InvalidEps(_))
        ));
    }

    #[test]
    fn growth_bound_holds_for_exp() {
        let p = Prec(192);
        let s = exp_stream(p);
        let cert = make_tail_certificate(&s, 1.0, 64).unwrap();
        let mut zs = Vec::new();
        for i in 0..40 {
            let th = i as f64 * 0.157;
            let r = 0.5 + (i as f64) * 0.24;
            zs.push(Complex::from_f64(r * th.cos(), r * th.sin(), p));
        }
        let check = growth_bound_check(&s, &cert, &zs).unwrap();
        assert!(check.ok, "violations: {}", check.violations);
        assert!(check.worst_ratio <= 1.0 + 1e-9);
        assert_eq!(check.checked, 40);
    }

    #[test]
    fn growth_bound_zero_stream_ratio_zero() {
        let p = Prec(96);
        let s = CoefficientStream::from_exact_table(vec![], "zero", p);
        let cert = make_tail_certificate(&s, 1.0, 32).unwrap();
        let zs = vec![Complex::from_f64(3.0, 1.0, p)];
        let check = growth_bound_check(&s, &cert, &zs).unwrap();
        assert!(check.ok);
        assert_eq!(check.worst_ratio, 0.0);
    }
}
