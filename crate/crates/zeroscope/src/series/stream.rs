//! Coefficient streams: lazily evaluated maps n ↦ cₙ with an exactness flag,
//! factorial weighting, and finite-horizon termination checks.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::exact::RationalComplex;
use crate::mp::{Complex, Prec, Real};

/// n! as a BigInt, globally cached.
pub fn factorial(n: usize) -> BigInt {
    static CACHE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigInt::from(1), BigInt::from(1)]));
    let mut tab = cache.lock().unwrap();
    while tab.len() <= n {
        let k = tab.len();
        let next = &tab[k - 1] * BigInt::from(k);
        tab.push(next);
    }
    tab[n].clone()
}

/// log2(n!), cheap f64 version for window scans.
pub fn log2_factorial_f64(n: usize) -> f64 {
    static CACHE: OnceLock<Mutex<Vec<f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![0.0, 0.0]));
    let mut tab = cache.lock().unwrap();
    while tab.len() <= n {
        let k = tab.len();
        let next = tab[k - 1] + (k as f64).log2();
        tab.push(next);
    }
    tab[n]
}

/// A coefficient supplier. `value` must be deterministic in (n, prec).
pub trait CoeffSource: Send + Sync {
    fn value(&self, n: usize, prec: Prec) -> Complex;

    /// Exact rational value, when the family supports it.
    fn exact_value(&self, _n: usize) -> Option<RationalComplex> {
        None
    }
}

struct StreamInner {
    source: Box<dyn CoeffSource>,
    label: String,
    exact: bool,
    prec: Prec,
    memo: Mutex<HashMap<usize, Complex>>,
}

/// Lazily evaluable coefficient stream; cheap to clone, safe to share across
/// threads (memoization sits behind a mutex, values are immutable once
/// computed).
#[derive(Clone)]
pub struct CoefficientStream {
    inner: Arc<StreamInner>,
}

impl std::fmt::Debug for CoefficientStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CoefficientStream({}, exact={})", self.inner.label, self.inner.exact)
    }
}

impl CoefficientStream {
    pub fn new(
        source: Box<dyn CoeffSource>,
        label: impl Into<String>,
        exact: bool,
        prec: Prec,
    ) -> Self {
        CoefficientStream {
            inner: Arc::new(StreamInner {
                source,
                label: label.into(),
                exact,
                prec,
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// Stream defined by an explicit finite table of exact coefficients
    /// (all later coefficients zero).
    pub fn from_exact_table(
        table: Vec<RationalComplex>,
        label: impl Into<String>,
        prec: Prec,
    ) -> Self {
        struct Table(Vec<RationalComplex>);
        impl CoeffSource for Table {
            fn value(&self, n: usize, prec: Prec) -> Complex {
                self.exact_value(n).unwrap().to_complex(prec)
            }
            fn exact_value(&self, n: usize) -> Option<RationalComplex> {
                Some(self.0.get(n).cloned().unwrap_or_else(RationalComplex::zero))
            }
        }
        CoefficientStream::new(Box::new(Table(table)), label, true, prec)
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn is_exact(&self) -> bool {
        self.inner.exact
    }

    pub fn prec(&self) -> Prec {
        self.inner.prec
    }

    /// cₙ at the stream's working precision. Memoized.
    pub fn coeff(&self, n: usize) -> Complex {
        if let Some(v) = self.inner.memo.lock().unwrap().get(&n) {
            return v.clone();
        }
        let v = self.inner.source.value(n, self.inner.prec);
        self.inner.memo.lock().unwrap().insert(n, v.clone());
        v
    }

    /// Exact cₙ when the stream is exact.
    pub fn coeff_exact(&self, n: usize) -> Option<RationalComplex> {
        if !self.inner.exact {
            return None;
        }
        self.inner.source.exact_value(n)
    }

    /// log2|cₙ|, None for an exactly zero coefficient.
    pub fn log2_abs_coeff(&self, n: usize) -> Option<f64> {
        let c = self.coeff(n);
        if c.is_zero() {
            return None;
        }
        c.norm_sqr().log2_abs().map(|l| l / 2.0)
    }

    /// The stream n ↦ n!·cₙ. Factorials are exact, so exactness is
    /// preserved; magnitudes live in the binary exponent, so overflow
    /// cannot happen.
    pub fn factorial_weight(&self) -> CoefficientStream {
        struct W(CoefficientStream);
        impl CoeffSource for W {
            fn value(&self, n: usize, prec: Prec) -> Complex {
                let f = Real::from_bigint(&factorial(n), prec);
                self.0.coeff(n).mul_real(&f)
            }
            fn exact_value(&self, n: usize) -> Option<RationalComplex> {
                self.0.coeff_exact(n).map(|c| c.mul_int(&factorial(n)))
            }
        }
        let label = format!("factorial_weight({})", self.label());
        let exact = self.is_exact();
        let prec = self.prec();
        CoefficientStream::new(Box::new(W(self.clone())), label, exact, prec)
    }

    /// The stream n ↦ cₙ/n!; inverse of [`factorial_weight`] on values.
    pub fn inverse_factorial_weight(&self) -> CoefficientStream {
        struct W(CoefficientStream);
        impl CoeffSource for W {
            fn value(&self, n: usize, prec: Prec) -> Complex {
                let f = Real::from_bigint(&factorial(n), prec);
                let c = self.0.coeff(n);
                Complex::new(c.re.div(&f), c.im.div(&f))
            }
            fn exact_value(&self, n: usize) -> Option<RationalComplex> {
                let f = num_rational::BigRational::new(BigInt::from(1), factorial(n));
                self.0.coeff_exact(n).map(|c| c.mul_rational(&f))
            }
        }
        let label = format!("inverse_factorial_weight({})", self.label());
        let exact = self.is_exact();
        let prec = self.prec();
        CoefficientStream::new(Box::new(W(self.clone())), label, exact, prec)
    }

    /// Stream of the derivative series: n ↦ (n+1)·c_{n+1}.
    pub fn derivative_stream(&self) -> CoefficientStream {
        struct D(CoefficientStream);
        impl CoeffSource for D {
            fn value(&self, n: usize, prec: Prec) -> Complex {
                let k = Real::from_u64(n as u64 + 1, prec);
                self.0.coeff(n + 1).mul_real(&k)
            }
            fn exact_value(&self, n: usize) -> Option<RationalComplex> {
                self.0
                    .coeff_exact(n + 1)
                    .map(|c| c.mul_int(&BigInt::from(n + 1)))
            }
        }
        let label = format!("derivative({})", self.label());
        let exact = self.is_exact();
        let prec = self.prec();
        CoefficientStream::new(Box::new(D(self.clone())), label, exact, prec)
    }
}

/// Finite-horizon termination check result.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum TerminationStatus {
    /// A nonzero coefficient exists in (n_max/2, n_max]: the stream keeps
    /// producing terms as far as this horizon can see.
    NonterminatingWitness { last_nonzero: usize },
    /// Every index after `last_nonzero` up to the horizon is zero.
    AppearsTerminating { last_nonzero: Option<usize> },
}

/// Scan coefficients up to `n_max`. Finite inspection only: a
/// `NonterminatingWitness` is evidence to the horizon, never a proof.
pub fn is_nonterminating_up_to(s: &CoefficientStream, n_max: usize) -> TerminationStatus {
    assert!(n_max >= 1);
    let mut last_nonzero: Option<usize> = None;
    for n in 0..=n_max {
        let nonzero = match s.coeff_exact(n) {
            Some(c) => !c.is_zero(),
            None => !s.coeff(n).is_zero(),
        };
        if nonzero {
            last_nonzero = Some(n);
        }
    }
    match last_nonzero {
        Some(n) if n > n_max / 2 => TerminationStatus::NonterminatingWitness { last_nonzero: n },
        other => TerminationStatus::AppearsTerminating { last_nonzero: other },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    pub(crate) fn exp_stream(prec: Prec) -> CoefficientStream {
        struct Exp;
        impl CoeffSource for Exp {
            fn value(&self, n: usize, prec: Prec) -> Complex {
                self.exact_value(n).unwrap().to_complex(prec)
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

    #[test]
    fn factorial_weight_of_exp_is_constant_one() {
        let s = exp_stream(Prec(128)).factorial_weight();
        for n in [0usize, 1, 5, 17, 64] {
            assert_eq!(s.coeff_exact(n).unwrap(), RationalComplex::one());
            let c = s.coeff(n);
            assert_eq!(c.re.to_f64(), 1.0);
            assert!(c.im.is_zero());
        }
        assert!(s.is_exact());
    }

    #[test]
    fn weight_then_inverse_is_identity() {
        let s = exp_stream(Prec(128));
        let round = s.factorial_weight().inverse_factorial_weight();
        for n in [0usize, 3, 10, 40] {
            assert_eq!(round.coeff_exact(n).unwrap(), s.coeff_exact(n).unwrap());
        }
    }

    #[test]
    fn zero_stream_stays_zero() {
        let s = CoefficientStream::from_exact_table(vec![], "zero", Prec(64));
        let w = s.factorial_weight();
        assert!(w.coeff(7).is_zero());
        assert!(w.coeff_exact(7).unwrap().is_zero());
        let inv = s.inverse_factorial_weight();
        assert!(inv.coeff(3).is_zero());
    }

    #[test]
    fn termination_scan_matches_examples() {
        let p = Prec(96);
        // exp stream never terminates
        match is_nonterminating_up_to(&exp_stream(p), 100) {
            TerminationStatus::NonterminatingWitness { last_nonzero } => {
                assert_eq!(last_nonzero, 100)
            }
            other => panic!("unexpected {other:?}"),
        }
        // 1 - 2z terminates at index 1
        let poly = CoefficientStream::from_exact_table(
            vec![RationalComplex::from_int(1), RationalComplex::from_int(-2)],
            "poly",
            p,
        );
        assert_eq!(
            is_nonterminating_up_to(&poly, 100),
            TerminationStatus::AppearsTerminating { last_nonzero: Some(1) }
        );
        // all-zero stream
        let zero = CoefficientStream::from_exact_table(vec![], "zero", p);
        assert_eq!(
            is_nonterminating_up_to(&zero, 50),
            TerminationStatus::AppearsTerminating { last_nonzero: None }
        );
    }

    #[test]
    fn derivative_stream_shifts_and_scales() {
        let s = exp_stream(Prec(96));
        let d = s.derivative_stream();
        // (e^z)' = e^z
        for n in [0usize, 2, 9] {
            assert_eq!(d.coeff_exact(n).unwrap(), s.coeff_exact(n).unwrap());
        }
    }

    #[test]
    fn concurrent_reads_are_consistent() {
        let s = exp_stream(Prec(128)).factorial_weight();
        std::thread::scope(|scope| {
            for _ in 0..4 {
                let s = s.clone();
                scope.spawn(move || {
                    for n in 0..200 {
                        assert!(!s.coeff(n).is_zero());
                    }
                });
            }
        });
    }
}
