//! Reciprocal gamma and log-factorial at working precision.
//!
//! The primitive is 1/Γ rather than Γ so that poles map to an exact zero:
//! Bessel coefficient formulas rely on 1/Γ(nonpositive integer) = 0.
//! Base-interval values come from Spouge's approximation with the term
//! count chosen from the target precision; arguments are shifted into
//! [1.5, 2.5) by the recurrence Γ(x+1) = x·Γ(x).

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::consts::pi;
use super::functions::{exp, ln, powf};
use super::real::{Prec, Real};

struct SpougeTable {
    a: u64,
    // c[0] = √(2π), c[k] for k ≥ 1 the alternating Spouge coefficients.
    coeffs: Vec<Real>,
}

fn spouge_cache() -> &'static Mutex<HashMap<u32, &'static SpougeTable>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static SpougeTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn spouge_table(prec: Prec) -> &'static SpougeTable {
    let mut cache = spouge_cache().lock().unwrap();
    if let Some(t) = cache.get(&prec.0) {
        return t;
    }
    // Relative truncation error ~ a^{-1/2} (2π)^{-(a+1/2)}; pick a so it
    // lands below 2^-(prec+16).
    let a = ((prec.0 as f64 + 24.0) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI).ln())
        .ceil() as u64
        + 3;
    let wp = prec.guarded(96);
    let two_pi = pi(wp).mul_pow2(1);
    let mut coeffs = Vec::with_capacity(a as usize);
    coeffs.push(two_pi.sqrt());
    let mut fact = Real::one(wp); // (k-1)!
    for k in 1..a {
        if k > 1 {
            fact = fact.mul_i64(k as i64 - 1);
        }
        let amk = Real::from_u64(a - k, wp);
        // (a-k)^(k-1/2) e^(a-k) / (k-1)!
        let pow = powf(&amk, &Real::from_f64(k as f64 - 0.5, wp));
        let mut c = pow.mul(&exp(&amk)).div(&fact);
        if k % 2 == 0 {
            c = c.neg();
        }
        coeffs.push(c);
    }
    let table: &'static SpougeTable = Box::leak(Box::new(SpougeTable { a, coeffs }));
    cache.insert(prec.0, table);
    table
}

/// Γ(s) for s in [1, 3); Spouge base evaluation.
fn gamma_base(s: &Real, prec: Prec) -> Real {
    let wp = prec.guarded(64);
    let t = spouge_table(prec);
    let s1 = s.with_prec(wp).sub(&Real::one(wp)); // z with Γ(z+1) form
    let mut acc = t.coeffs[0].with_prec(wp);
    for k in 1..t.a {
        let denom = s1.add(&Real::from_u64(k, wp));
        acc = acc.add(&t.coeffs[k as usize].with_prec(wp).div(&denom));
    }
    let base = s1.add(&Real::from_u64(t.a, wp)); // z + a
    // Γ(z+1) = (z+a)^(z+1/2) e^-(z+a) · acc
    let p = powf(&base, &s1.add(&Real::from_f64(0.5, wp)));
    p.mul(&exp(&base.neg())).mul(&acc).with_prec(prec)
}

/// 1/Γ(x) for real x at precision `prec`. Exact zero at poles
/// (x a nonpositive integer).
pub fn rgamma(x: &Real, prec: Prec) -> Real {
    if x.is_integer() && !x.is_positive() {
        return Real::zero(prec);
    }
    let wp = prec.guarded(64);
    let x = x.with_prec(wp);
    // Shift into [1.5, 2.5): Γ(x) = Γ(x + K) / Π_{j=0}^{K-1} (x + j), K ≥ 0
    //                or      Γ(x) = Π_{j=1}^{K} (x − j) · Γ(x − K), K > 0.
    let xf = x.to_f64_clamped();
    assert!(xf.abs() < 1e7, "gamma argument out of supported range");
    if xf < 1.5 {
        let k = (1.5 - xf).ceil() as u64;
        let mut prod = Real::one(wp);
        for j in 0..k {
            prod = prod.mul(&x.add(&Real::from_u64(j, wp)));
        }
        // 1/Γ(x) = prod / Γ(x+K)
        let g = gamma_base(&x.add(&Real::from_u64(k, wp)), wp);
        prod.div(&g).with_prec(prec)
    } else if xf < 2.5 {
        gamma_base(&x, wp).recip().with_prec(prec)
    } else {
        let k = (xf - 1.5).floor() as u64;
        let mut prod = Real::one(wp);
        for j in 1..=k {
            prod = prod.mul(&x.sub(&Real::from_u64(j, wp)));
        }
        let g = gamma_base(&x.sub(&Real::from_u64(k, wp)), wp);
        prod.mul(&g).recip().with_prec(prec)
    }
}

/// Γ(x); panics at poles (use [`rgamma`] when poles are expected).
pub fn gamma(x: &Real, prec: Prec) -> Real {
    let r = rgamma(x, prec);
    assert!(!r.is_zero(), "gamma pole");
    r.recip()
}

/// ln(n!) with an incremental per-precision cache.
pub fn ln_factorial_cached(n: usize, prec: Prec) -> Real {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<Real>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    let tab = map.entry(prec.0).or_insert_with(|| vec![Real::zero(prec), Real::zero(prec)]);
    while tab.len() <= n {
        let k = tab.len();
        let next = tab[k - 1].add(&ln(&Real::from_u64(k as u64, prec.guarded(32))).with_prec(prec));
        tab.push(next);
    }
    tab[n].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::format::parse_decimal;

    const G_HALF: &str = "1.77245385090551602729816748334114518279754945612238712821381";
    const G_3_5: &str = "3.32335097044784255118406403126464721774540523022947586540089";
    const RG_NEG_HALF: &str = "-0.282094791773878143474039725780386292922025314664499428422043";

    fn assert_close(x: &Real, reference: &str, bits: f64) {
        let r = parse_decimal(reference, x.prec()).unwrap();
        let err = x.sub(&r).abs();
        assert!(
            err.is_zero() || err.log2_abs().unwrap() < -bits,
            "err 2^{:?}",
            err.log2_abs()
        );
    }

    #[test]
    fn integer_values_are_factorials() {
        let p = Prec(192);
        for (n, f) in [(1u64, 1u64), (2, 1), (3, 2), (5, 24), (8, 5040), (11, 3628800)] {
            let g = gamma(&Real::from_u64(n, p), p);
            let rel = g.sub(&Real::from_u64(f, p)).abs().div(&Real::from_u64(f, p));
            assert!(rel.is_zero() || rel.log2_abs().unwrap() < -180.0, "Γ({n}) ≠ {f}");
        }
    }

    #[test]
    fn half_integer_reference_values() {
        let p = Prec(192);
        assert_close(&gamma(&Real::from_f64(0.5, p), p), G_HALF, 180.0);
        assert_close(&gamma(&Real::from_f64(3.5, p), p), G_3_5, 180.0);
        assert_close(&rgamma(&Real::from_f64(-0.5, p), p), RG_NEG_HALF, 180.0);
    }

    #[test]
    fn half_integers_match_double_factorial_formula() {
        // Γ(m + 3.5) = (2m+5)!! / 2^(m+3) · √π — independent of Spouge.
        let p = Prec(224);
        let sqrt_pi = pi(p).sqrt();
        for m in 0u64..12 {
            let mut dfact = 1u128;
            let mut k = 2 * m as u128 + 5;
            while k >= 2 {
                dfact *= k;
                k -= 2;
            }
            let want = Real::from_u64(dfact as u64, p)
                .mul(&sqrt_pi)
                .mul_pow2(-(m as i64) - 3);
            let got = gamma(&Real::from_f64(m as f64 + 3.5, p), p);
            let rel = got.sub(&want).abs().div(&want);
            assert!(rel.is_zero() || rel.log2_abs().unwrap() < -200.0, "m = {m}");
        }
    }

    #[test]
    fn poles_are_exact_zeros() {
        let p = Prec(128);
        for v in [0.0, -1.0, -2.0, -7.0, -30.0] {
            assert!(rgamma(&Real::from_f64(v, p), p).is_zero(), "pole at {v}");
        }
        assert!(!rgamma(&Real::from_f64(-0.5, p), p).is_zero());
    }

    #[test]
    fn reflection_style_negative_values() {
        let p = Prec(160);
        // Γ(-1.5) = 4√π/3
        let want = pi(p).sqrt().mul_i64(4).div_u64(3);
        let got = gamma(&Real::from_f64(-1.5, p), p);
        let rel = got.sub(&want).abs().div(&want);
        assert!(rel.is_zero() || rel.log2_abs().unwrap() < -150.0);
    }

    #[test]
    fn ln_factorial_cache_consistent() {
        let p = Prec(160);
        let direct = ln(&Real::from_u64(3628800, p));
        let cached = ln_factorial_cached(10, p);
        assert!(cached.sub(&direct).abs().log2_abs().unwrap_or(-1e9) < -150.0);
        // Monotone growth
        assert!(ln_factorial_cached(20, p).gt(&ln_factorial_cached(19, p)));
    }
}
