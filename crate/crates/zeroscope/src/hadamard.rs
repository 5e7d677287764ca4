//! Exact machinery around the derivative identity f⁽ⁿ⁾(0) = kⁿ·Q(n) for
//! f(z) = e^{kz}·P(z): Leibniz derivative sequences, the degree-N polynomial
//! Q in the falling-factorial basis, the 1/|k| tail radius, and the inverse
//! problem of recovering (k, Q) from derivative data.
//!
//! Everything here is exact rational-complex arithmetic; no floating path.
//! The forward and backward routes are kept independent so exact agreement
//! between them is meaningful: derivatives come from the truncated Leibniz
//! sum with explicit binomials, Q evaluations from incremental falling
//! factorials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::exact::{Polynomial, RationalComplex};
use crate::series::factorial;
use crate::special::ExpPolyModel;

/// Exact derivative values d_n = f⁽ⁿ⁾(0), n = 0..=n_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeSequence {
    values: Vec<RationalComplex>,
}

impl DerivativeSequence {
    pub fn from_values(values: Vec<RationalComplex>) -> Self {
        DerivativeSequence { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> &RationalComplex {
        &self.values[n]
    }

    pub fn values(&self) -> &[RationalComplex] {
        &self.values
    }
}

/// Q(n) carried in both bases: falling-factorial weights b_j = a_j/k^j and
/// the expanded monomial form. The two must agree everywhere;`new` checks
/// them on 2N+3 integer points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    falling: Vec<RationalComplex>,
    monomial: Polynomial,
}

impl QPolynomial {
    fn new(falling: Vec<RationalComplex>, monomial: Polynomial) -> Self {
        let q = QPolynomial { falling, monomial };
        let n = q.degree();
        for t in 0..=(2 * n + 2) as i64 {
            debug_assert_eq!(q.eval_falling(t), q.monomial.eval_int(t), "basis mismatch at {t}");
        }
        q
    }

    /// Build from falling-factorial weights (b_N must be nonzero).
    pub fn from_falling_weights(falling: Vec<RationalComplex>) -> Self {
        assert!(!falling.is_empty() && !falling.last().unwrap().is_zero());
        let mut monomial = Polynomial::zero();
        let mut ff = Polynomial::constant(RationalComplex::one());
        for (j, b) in falling.iter().enumerate() {
            if j > 0 {
                // ff ← ff · (x − (j−1))
                let lin = Polynomial::new(vec![
                    RationalComplex::from_int(-(j as i64 - 1)),
                    RationalComplex::one(),
                ]);
                ff = ff.mul(&lin);
            }
            monomial = monomial.add(&ff.scale(b));
        }
        QPolynomial::new(falling, monomial)
    }

    /// Build from a monomial polynomial via finite differences:
    /// b_j = Δʲp(0) / j!.
    pub fn from_monomial(p: &Polynomial) -> Self {
        let n = p.degree().expect("nonzero polynomial");
        let mut row: Vec<RationalComplex> = (0..=n as i64 + 1).map(|t| p.eval_int(t)).collect();
        let mut falling = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let fj = BigRational::from_integer(factorial(j));
            falling.push(row[0].mul_rational(&fj.recip()));
            for i in 0..row.len() - 1 {
                row[i] = row[i + 1].sub(&row[i]);
            }
            row.pop();
        }
        while falling.len() > 1 && falling.last().unwrap().is_zero() {
            falling.pop();
        }
        QPolynomial::new(falling, p.clone())
    }

    /// Degree N; equals the falling-weight count minus one and the monomial
    /// degree.
    pub fn degree(&self) -> usize {
        self.falling.len() - 1
    }

    pub fn falling_weights(&self) -> &[RationalComplex] {
        &self.falling
    }

    pub fn monomial(&self) -> &Polynomial {
        &self.monomial
    }

    /// Q(n) by the falling-factorial route: Σ b_j·n(n−1)⋯(n−j+1).
    pub fn eval_falling(&self, n: i64) -> RationalComplex {
        let mut acc = RationalComplex::zero();
        let mut ff = RationalComplex::one();
        for (j, b) in self.falling.iter().enumerate() {
            if j > 0 {
                ff = ff.mul(&RationalComplex::from_int(n - (j as i64 - 1)));
            }
            acc = acc.add(&b.mul(&ff));
        }
        acc
    }
}

/// f⁽ⁿ⁾(0) for a single n by the truncated Leibniz sum
/// Σ_{j ≤ min(n, N)} C(n,j)·k^{n−j}·j!·a_j.
pub fn derivative_at_zero(model: &ExpPolyModel, n: usize) -> RationalComplex {
    let deg = model.degree();
    let k = model.k();
    let jmax = deg.min(n);
    let mut acc = RationalComplex::zero();
    let mut binom = BigInt::from(1); // C(n, j)
    for j in 0..=jmax {
        if j > 0 {
            binom = binom * BigInt::from(n - j + 1) / BigInt::from(j);
        }
        let aj = model.poly().coeff(j);
        if aj.is_zero() {
            continue;
        }
        let term = aj
            .mul_int(&(&binom * factorial(j)))
            .mul(&k.pow((n - j) as i64));
        acc = acc.add(&term);
    }
    acc
}

/// d_n = f⁽ⁿ⁾(0) for n = 0..=n_max, exact.
pub fn leibniz_derivatives(model: &ExpPolyModel, n_max: usize) -> DerivativeSequence {
    DerivativeSequence::from_values(
        (0..=n_max).map(|n| derivative_at_zero(model, n)).collect(),
    )
}

/// Q from the model: weights b_j = a_j/k^j, monomial form by exact basis
/// conversion. Degree is exactly deg P.
pub fn q_polynomial(model: &ExpPolyModel) -> QPolynomial {
    let k = model.k();
    let falling: Vec<RationalComplex> = model
        .poly()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, a)| a.mul(&k.pow(-(j as i64))))
        .collect();
    let q = QPolynomial::from_falling_weights(falling);
    assert_eq!(q.degree(), model.degree());
    q
}

#[derive(Debug, thiserror::Error)]
pub enum LemmaError {
    #[error("range [{lo}, {hi}] dips to or below the polynomial degree {degree}")]
    RangeBelowDegree { lo: usize, hi: usize, degree: usize },
}

/// Exact check of f⁽ⁿ⁾(0) = kⁿ·Q(n) over an integer range strictly above
/// deg P. The left side comes from the Leibniz sum, the right from the
/// falling-factorial evaluation; both exact.
pub fn verify_lemma(
    model: &ExpPolyModel,
    n_lo: usize,
    n_hi: usize,
) -> Result<bool, LemmaError> {
    let deg = model.degree();
    if n_lo <= deg {
        return Err(LemmaError::RangeBelowDegree { lo: n_lo, hi: n_hi, degree: deg });
    }
    assert!(n_lo <= n_hi);
    let q = q_polynomial(model);
    let k = model.k();
    for n in n_lo..=n_hi {
        let lhs = derivative_at_zero(model, n);
        let rhs = k.pow(n as i64).mul(&q.eval_falling(n as i64));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Radius of convergence of Σ Q(n)(kz)ⁿ: exactly 1/|k|.
pub fn tail_radius(q: &QPolynomial, k: &RationalComplex) -> f64 {
    assert!(!k.is_zero());
    let _ = q.degree(); // any polynomial Q, degree ≥ 0
    let norm = k.norm_sqr().to_f64().expect("rational fits f64 range");
    1.0 / norm.sqrt()
}

/// Worst |Q(n+1)/Q(n) − 1| over the trailing half of [n₀, n_max], where n₀
/// sits past every root of Q (exact Cauchy bound).
pub fn q_ratio_limit_check(q: &QPolynomial, n_max: usize) -> f64 {
    let bound = q.monomial().cauchy_root_bound();
    let n0 = bound.ceil().to_integer().to_i64().unwrap_or(0).max(0) + 1;
    let n_max = n_max as i64;
    assert!(n_max > n0 + 4, "horizon {n_max} too small for root bound {n0}");
    let mid = n0 + (n_max - n0) / 2;
    let mut worst: f64 = 0.0;
    for n in mid..n_max {
        let qn = q.eval_falling(n);
        let qn1 = q.eval_falling(n + 1);
        let dev = qn1.div(&qn).sub(&RationalComplex::one());
        let d = dev.norm_sqr().to_f64().unwrap_or(f64::INFINITY).sqrt();
        if d > worst {
            worst = d;
        }
    }
    worst
}

#[derive(Debug, thiserror::Error)]
pub enum FitError {
    #[error("need at least {need} derivative values, got {got}")]
    InsufficientData { need: usize, got: usize },
}

/// Try to recover (k, Q) with deg Q ≤ max_degree from derivative data:
/// d_n = kⁿ·Q(n) exactly for all available n > deg Q.
///
/// k is found exactly: the (N+1)-th finite difference of Q vanishes, so k
/// is a common root of the annihilator polynomials
/// Σ_j (−1)ʲ·C(N+1,j)·κʲ·d_{n+N+1−j} across n; a polynomial gcd narrows
/// them to a linear factor. Q follows by exact interpolation of d_n/kⁿ and
/// the candidate is accepted only after full exact verification.
pub fn fit_exponential_polynomial(
    d: &DerivativeSequence,
    max_degree: usize,
) -> Result<Option<(RationalComplex, QPolynomial)>, FitError> {
    let need = 2 * max_degree + 6;
    if d.len() < need {
        return Err(FitError::InsufficientData { need, got: d.len() });
    }
    let last = d.len() - 1;
    for cand in 0..=max_degree {
        let Some(k) = recover_k(d, cand) else { continue };
        if k.is_zero() {
            continue;
        }
        // Interpolate Q on the last cand+1 indices.
        let pts: Vec<(RationalComplex, RationalComplex)> = (last - cand..=last)
            .map(|n| {
                (
                    RationalComplex::from_int(n as i64),
                    d.get(n).div(&k.pow(n as i64)),
                )
            })
            .collect();
        let q_mono = Polynomial::interpolate(&pts);
        if q_mono.is_zero() {
            continue;
        }
        let q = QPolynomial::from_monomial(&q_mono);
        // Full exact verification over every available index above deg Q.
        let deg_q = q.degree();
        let ok = (deg_q + 1..=last).all(|n| {
            let rhs = k.pow(n as i64).mul(&q.eval_falling(n as i64));
            *d.get(n) == rhs
        });
        if ok {
            return Ok(Some((k, q)));
        }
    }
    Ok(None)
}

/// Common root of several finite-difference annihilators, reduced to a
/// linear factor by gcd; None when the data admits no such k.
fn recover_k(d: &DerivativeSequence, cand: usize) -> Option<RationalComplex> {
    let last = d.len() - 1;
    let order = cand + 1;
    let mut binom: Vec<BigInt> = Vec::with_capacity(order + 1);
    let mut b = BigInt::from(1);
    for j in 0..=order {
        if j > 0 {
            b = b * BigInt::from(order - j + 1) / BigInt::from(j);
        }
        binom.push(b.clone());
    }
    let poly_at = |n: usize| -> Polynomial {
        let coeffs: Vec<RationalComplex> = (0..=order)
            .map(|j| {
                let mut c = d.get(n + order - j).mul_int(&binom[j]);
                if j % 2 == 1 {
                    c = c.neg();
                }
                c
            })
            .collect();
        Polynomial::new(coeffs)
    };
    let mut gcd: Option<Polynomial> = None;
    let mut t = 0usize;
    while t + order <= last && t < order + 8 {
        let n = last - order - t;
        let p = poly_at(n);
        t += 1;
        if p.is_zero() {
            continue;
        }
        gcd = Some(match gcd {
            None => p,
            Some(g) => g.gcd(&p),
        });
        if let Some(g) = &gcd {
            match g.degree() {
                Some(1) => {
                    let k = g.coeff(0).neg().div(&g.coeff(1));
                    return Some(k);
                }
                Some(0) | None => return None,
                _ => {}
            }
        }
        if n == 0 {
            break;
        }
    }
    None
}

/// Seeded random exact model: rational k ≠ 0 and rational-complex P with
/// small numerators, deg P ≤ max_degree.
pub fn random_model(rng: &mut impl Rng, max_degree: usize) -> ExpPolyModel {
    let rat = |rng: &mut dyn rand::RngCore, allow_zero: bool| -> BigRational {
        loop {
            let num: i64 = rng.random_range(-20..=20);
            if num == 0 && !allow_zero {
                continue;
            }
            let den: i64 = rng.random_range(1..=10);
            return BigRational::new(num.into(), den.into());
        }
    };
    let k = RationalComplex::from_rational(rat(rng, false));
    let deg = rng.random_range(0..=max_degree);
    let mut coeffs = Vec::with_capacity(deg + 1);
    for j in 0..=deg {
        let re = rat(rng, j != deg);
        let im = if rng.random_bool(0.3) { rat(rng, true) } else { BigRational::zero() };
        coeffs.push(RationalComplex::new(re, im));
    }
    let p = Polynomial::new(coeffs);
    ExpPolyModel::new(k, p).expect("constructed nonzero")
}
