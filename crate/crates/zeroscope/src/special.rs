//! Built-in coefficient families and their closed-form comparators: Le Roy
//! streams 1/(n!)^r, reduced Bessel streams, the e^{z/R} counterexample
//! family, and exponential-polynomial models e^{kz}P(z).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::exact::{Polynomial, RationalComplex};
use crate::hadamard;
use crate::mp::gamma::{ln_factorial_cached, rgamma};
use crate::mp::{functions, Complex, Prec, Real};
use crate::series::{
    evaluate, make_tail_certificate, CertificateError, CoeffSource, CoefficientStream, EvalError,
    EvalResult, TailCertificate,
};

/// Le Roy family parameter; the infinite-zeros classification needs
/// Re(r) > 1, but any complex r is accepted for exploration.
#[derive(Debug, Clone)]
pub struct LeRoyParams {
    pub r: RationalComplex,
}

impl LeRoyParams {
    pub fn new(r: RationalComplex) -> Self {
        LeRoyParams { r }
    }

    pub fn real(r: i64) -> Self {
        LeRoyParams { r: RationalComplex::from_int(r) }
    }
}

/// Bessel order α ∈ ℝ.
#[derive(Debug, Clone, Copy)]
pub struct BesselParams {
    pub alpha: f64,
}

impl BesselParams {
    pub fn new(alpha: f64) -> Self {
        assert!(alpha.is_finite());
        BesselParams { alpha }
    }

    fn alpha_is_integer(&self) -> bool {
        self.alpha.fract() == 0.0 && self.alpha.abs() < 2e9
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("k must be nonzero")]
    ZeroK,
    #[error("P must have a nonzero leading coefficient")]
    ZeroPolynomial,
}

/// The pair (k, P) in f(z) = e^{kz}·P(z), exact rational-complex data.
#[derive(Debug, Clone)]
pub struct ExpPolyModel {
    k: RationalComplex,
    p: Polynomial,
}

impl ExpPolyModel {
    pub fn new(k: RationalComplex, p: Polynomial) -> Result<Self, ModelError> {
        if k.is_zero() {
            return Err(ModelError::ZeroK);
        }
        if p.is_zero() {
            return Err(ModelError::ZeroPolynomial);
        }
        Ok(ExpPolyModel { k, p })
    }

    pub fn k(&self) -> &RationalComplex {
        &self.k
    }

    pub fn poly(&self) -> &Polynomial {
        &self.p
    }

    /// Degree N of P; equals the zero count of e^{kz}P(z) with multiplicity.
    pub fn degree(&self) -> usize {
        self.p.degree().expect("nonzero polynomial")
    }
}

/// cₙ = 1/(n!)^r. Exact when r is a (real) integer; otherwise computed as
/// exp(−r·ln n!) with the real positive branch of ln n!.
pub fn le_roy_coeffs(params: &LeRoyParams, prec: Prec) -> CoefficientStream {
    let exact_exponent: Option<i64> = if params.r.is_real() && params.r.re.is_integer() {
        i64::try_from(params.r.re.numer().clone()).ok()
    } else {
        None
    };
    let label = format!("leroy:r={:?}", params.r);
    match exact_exponent {
        Some(r_int) => {
            struct ExactLeRoy {
                r: i64,
            }
            impl CoeffSource for ExactLeRoy {
                fn value(&self, n: usize, prec: Prec) -> Complex {
                    self.exact_value(n).unwrap().to_complex(prec)
                }
                fn exact_value(&self, n: usize) -> Option<RationalComplex> {
                    let f = crate::series::factorial(n);
                    let c = RationalComplex::from_rational(BigRational::from_integer(f));
                    Some(c.pow(-self.r))
                }
            }
            CoefficientStream::new(Box::new(ExactLeRoy { r: r_int }), label, true, prec)
        }
        None => {
            struct FloatLeRoy {
                re: RationalComplex,
            }
            impl CoeffSource for FloatLeRoy {
                fn value(&self, n: usize, prec: Prec) -> Complex {
                    let wp = prec.guarded(16);
                    let l = ln_factorial_cached(n, wp);
                    let r = self.re.to_complex(wp);
                    // exp(−r·L) for real L ≥ 0
                    let a = r.re.mul(&l).neg();
                    let b = r.im.mul(&l).neg();
                    let mag = functions::exp(&a);
                    let (s, c) = functions::sin_cos(&b);
                    Complex::new(mag.mul(&c), mag.mul(&s)).with_prec(prec)
                }
            }
            CoefficientStream::new(Box::new(FloatLeRoy { re: params.r.clone() }), label, false, prec)
        }
    }
}

/// Reduced Bessel stream: c_m = (−1)^m / (m!·Γ(m+α+1)·4^m), with
/// J_α(z) = (z/2)^α·g(z²) for g the sum of this stream. Built on the
/// reciprocal gamma so Γ-poles (α a negative integer) give exact zeros.
pub fn bessel_reduced_coeffs(params: &BesselParams, prec: Prec) -> CoefficientStream {
    let label = format!("bessel:alpha={}", params.alpha);
    if params.alpha_is_integer() {
        struct ExactBessel {
            alpha: i64,
        }
        impl CoeffSource for ExactBessel {
            fn value(&self, n: usize, prec: Prec) -> Complex {
                self.exact_value(n).unwrap().to_complex(prec)
            }
            fn exact_value(&self, m: usize) -> Option<RationalComplex> {
                let shifted = m as i64 + self.alpha; // Γ(m+α+1) = (m+α)!
                if shifted < 0 {
                    return Some(RationalComplex::zero());
                }
                let den = crate::series::factorial(m)
                    * crate::series::factorial(shifted as usize)
                    * BigInt::from(4).pow(m as u32);
                let sign = if m % 2 == 0 { 1 } else { -1 };
                Some(RationalComplex::from_rational(BigRational::new(BigInt::from(sign), den)))
            }
        }
        CoefficientStream::new(
            Box::new(ExactBessel { alpha: params.alpha as i64 }),
            label,
            true,
            prec,
        )
    } else {
        struct FloatBessel {
            alpha: f64,
        }
        impl CoeffSource for FloatBessel {
            fn value(&self, m: usize, prec: Prec) -> Complex {
                let wp = prec.guarded(16);
                let arg = Real::from_f64(self.alpha, wp).add(&Real::from_u64(m as u64 + 1, wp));
                let rg = rgamma(&arg, wp);
                if rg.is_zero() {
                    return Complex::zero(prec);
                }
                let den = crate::series::factorial(m) * BigInt::from(4).pow(m as u32);
                let mut v = rg.div(&Real::from_bigint(&den, wp));
                if m % 2 == 1 {
                    v = v.neg();
                }
                Complex::from_real(v.with_prec(prec))
            }
        }
        CoefficientStream::new(Box::new(FloatBessel { alpha: params.alpha }), label, false, prec)
    }
}

/// The counterexample family cₙ = 1/(n!·Rⁿ): the unweighted sum is e^{z/R}
/// (never zero) while the weighted sum is geometric with radius exactly R.
pub fn counterexample_coeffs(r: &BigRational, prec: Prec) -> CoefficientStream {
    assert!(r.is_positive(), "R must be positive");
    struct S {
        r: BigRational,
    }
    impl CoeffSource for S {
        fn value(&self, n: usize, prec: Prec) -> Complex {
            self.exact_value(n).unwrap().to_complex(prec)
        }
        fn exact_value(&self, n: usize) -> Option<RationalComplex> {
            let rn = num_traits::pow::pow(self.r.clone(), n);
            let den = rn * BigRational::from_integer(crate::series::factorial(n));
            Some(RationalComplex::from_rational(den.recip()))
        }
    }
    let label = format!("counterexample:R={}", crate::exact::rational_to_string(r));
    CoefficientStream::new(Box::new(S { r: r.clone() }), label, true, prec)
}

/// Maclaurin stream of f(z) = e^{kz}P(z): cₙ = f⁽ⁿ⁾(0)/n!, exact via the
/// generalized Leibniz expansion.
pub fn exp_poly_stream(model: &ExpPolyModel, prec: Prec) -> CoefficientStream {
    struct S {
        model: ExpPolyModel,
    }
    impl CoeffSource for S {
        fn value(&self, n: usize, prec: Prec) -> Complex {
            self.exact_value(n).unwrap().to_complex(prec)
        }
        fn exact_value(&self, n: usize) -> Option<RationalComplex> {
            let d = hadamard::derivative_at_zero(&self.model, n);
            let f = BigRational::from_integer(crate::series::factorial(n));
            Some(d.mul_rational(&f.recip()))
        }
    }
    let label = format!("exppoly:k={:?};degP={}", model.k(), model.degree());
    CoefficientStream::new(Box::new(S { model: model.clone() }), label, true, prec)
}

/// Principal square root: |w|^(1/2)·e^(i·Arg(w)/2) with Arg ∈ (−π, π].
pub fn principal_sqrt(w: &Complex) -> Complex {
    w.sqrt()
}

#[derive(Debug, thiserror::Error)]
pub enum BesselError {
    #[error("z = 0 is a branch point for negative non-integer alpha")]
    BranchPoint,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// Reusable J_α evaluator: reduced stream + tail certificate built once.
pub struct BesselEvaluator {
    params: BesselParams,
    reduced: CoefficientStream,
    cert: TailCertificate,
    prec: Prec,
}

impl BesselEvaluator {
    pub fn new(params: BesselParams, prec: Prec) -> Result<Self, BesselError> {
        let reduced = bessel_reduced_coeffs(&params, prec);
        let cert = make_tail_certificate(&reduced, 1.0, 64)?;
        Ok(BesselEvaluator { params, reduced, cert, prec })
    }

    pub fn reduced_stream(&self) -> &CoefficientStream {
        &self.reduced
    }

    pub fn certificate(&self) -> &TailCertificate {
        &self.cert
    }

    /// J_α(z) = (z/2)^α·g(z²) on the principal branch of (z/2)^α.
    pub fn eval(&self, z: &Complex, eps: f64) -> Result<EvalResult, BesselError> {
        let alpha = self.params.alpha;
        let prec = self.prec;
        if z.is_zero() {
            if alpha == 0.0 {
                return Ok(EvalResult { value: Complex::one(prec), error_bound: 0.0, terms_used: 1 });
            }
            if alpha > 0.0 || self.params.alpha_is_integer() {
                // (z/2)^α kills the value; for negative integer α the
                // reduced series' leading zeros do (J_{−n}(0) = 0).
                return Ok(EvalResult {
                    value: Complex::zero(prec),
                    error_bound: 0.0,
                    terms_used: 1,
                });
            }
            return Err(BesselError::BranchPoint);
        }
        let half_z = Complex::new(z.re.mul_pow2(-1), z.im.mul_pow2(-1));
        let factor = half_z.pow_real(&Real::from_f64(alpha, prec));
        let factor_abs = factor.abs();
        let factor_f = factor_abs.to_f64_clamped().max(f64::MIN_POSITIVE);
        let w = z.mul(z);
        let g = evaluate(
            &self.reduced,
            &w,
            ((eps / factor_f) * 0.5).clamp(1e-290, 1e290),
            &self.cert,
        )?;
        let value = factor.mul(&g.value);
        // |factor|·err_g plus the rounding of the pow/mul themselves.
        let own_rounding = value
            .norm_one()
            .log2_abs()
            .map(|l| (l - (prec.0 as f64 - 12.0)).exp2())
            .unwrap_or(0.0);
        let error_bound = factor_f * g.error_bound * (1.0 + 1e-12) + own_rounding;
        Ok(EvalResult { value, error_bound, terms_used: g.terms_used })
    }
}

/// One-shot J_α evaluation (builds an evaluator internally; prefer
/// [`BesselEvaluator`] in loops).
pub fn bessel_eval(
    params: &BesselParams,
    z: &Complex,
    eps: f64,
    prec: Prec,
) -> Result<EvalResult, BesselError> {
    BesselEvaluator::new(*params, prec)?.eval(z, eps)
}
