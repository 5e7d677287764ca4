//! Elementary functions on [`Real`]: exp, ln, sin/cos, atan/atan2, powf.
//!
//! Everything is computed at the argument's precision plus guard bits, then
//! rounded back. Accuracy target is a few ulps at the output precision,
//! which the callers account for in their error budgets.

use num_bigint::BigInt;

use super::consts::{ln2, pi};
use super::real::{Prec, Real};

const GUARD: u32 = 64;

/// e^x. Argument reduction x = k·ln2 + r, then r scaled down 2^j,
/// Taylor series, and j squarings.
pub fn exp(x: &Real) -> Real {
    let prec = x.prec();
    if x.is_zero() {
        return Real::one(prec);
    }
    let l2 = x.log2_abs().unwrap_or(0.0);
    assert!(l2 < 48.0, "exp argument magnitude too large: 2^{l2}");
    let wp = prec.guarded(GUARD + 16);
    let xw = x.with_prec(wp);
    let ln2_w = ln2(wp);
    let k: i64 = {
        let t = xw.div(&ln2_w).to_f64();
        t.round() as i64
    };
    let r = xw.sub(&ln2_w.mul_i64(k));
    // |r| ≤ ln2/2 + slack; scale to |r'| < 2^-10.
    let j: i64 = 10;
    let rs = r.mul_pow2(-j);
    let mut term = Real::one(wp);
    let mut sum = Real::one(wp);
    let mut i: u64 = 1;
    loop {
        term = term.mul(&rs).div_u64(i);
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
        if let Some(l) = term.log2_abs() {
            if l < -(wp.0 as f64) - 8.0 {
                break;
            }
        }
        i += 1;
    }
    let mut out = sum;
    for _ in 0..j {
        out = out.mul(&out);
    }
    out.mul_pow2(k).with_prec(prec)
}

/// Natural log of a positive value. Splits off the binary exponent and runs
/// Newton's iteration for the mantissa in [1,2) against exp().
pub fn ln(x: &Real) -> Real {
    let prec = x.prec();
    assert!(x.is_positive(), "ln of non-positive value");
    let wp = prec.guarded(GUARD);
    // x = t · 2^e with t in [1, 2).
    let e = x.log2_abs().unwrap().floor() as i64;
    let t = x.with_prec(wp).mul_pow2(-e);
    let ln2_w = ln2(wp);
    if t.sub(&Real::one(wp)).is_zero() {
        return ln2_w.mul_i64(e).with_prec(prec);
    }
    // Newton: y ← y + t·e^{-y} − 1, quadratic convergence from an f64 seed.
    let mut y = Real::from_f64(t.to_f64().ln(), wp);
    let one = Real::one(wp);
    for _ in 0..6 {
        let corr = t.mul(&exp(&y.neg())).sub(&one);
        y = y.add(&corr);
        if let Some(l) = corr.log2_abs() {
            if l < -(wp.0 as f64) + 4.0 {
                break;
            }
        } else {
            break;
        }
    }
    y.add(&ln2_w.mul_i64(e)).with_prec(prec)
}

/// log base 2.
pub fn log2(x: &Real) -> Real {
    let prec = x.prec();
    ln(x).div(&ln2(prec.guarded(GUARD))).with_prec(prec)
}

fn sin_cos_reduced(u: &Real, wp: Prec) -> (Real, Real) {
    // |u| small (≤ ~2^-8 after scaling). Plain Taylor for both.
    let u2 = u.mul(u);
    let mut term = u.clone();
    let mut s = u.clone();
    let mut i: u64 = 1;
    loop {
        term = term.mul(&u2).div_u64((2 * i) * (2 * i + 1)).neg();
        if term.is_zero() || term.log2_abs().unwrap_or(f64::NEG_INFINITY) < -(wp.0 as f64) - 8.0 {
            break;
        }
        s = s.add(&term);
        i += 1;
    }
    let mut term = Real::one(wp);
    let mut c = Real::one(wp);
    let mut i: u64 = 1;
    loop {
        term = term.mul(&u2).div_u64((2 * i - 1) * (2 * i)).neg();
        if term.is_zero() || term.log2_abs().unwrap_or(f64::NEG_INFINITY) < -(wp.0 as f64) - 8.0 {
            break;
        }
        c = c.add(&term);
        i += 1;
    }
    (s, c)
}

/// Simultaneous sin and cos with range reduction mod 2π and double-angle
/// reconstruction.
pub fn sin_cos(x: &Real) -> (Real, Real) {
    let prec = x.prec();
    if x.is_zero() {
        return (Real::zero(prec), Real::one(prec));
    }
    let l2 = x.log2_abs().unwrap();
    assert!(l2 < 48.0, "trig argument magnitude too large");
    let wp = prec.guarded(GUARD + 32);
    let two_pi = pi(wp).mul_pow2(1);
    let k = x.with_prec(wp).div(&two_pi).to_f64().round() as i64;
    let u = x.with_prec(wp).sub(&two_pi.mul_i64(k));
    // |u| ≤ π + slack. Scale down 12 doublings.
    let j = 12;
    let us = u.mul_pow2(-j);
    let (mut s, mut c) = sin_cos_reduced(&us, wp);
    for _ in 0..j {
        let s2 = s.mul(&c).mul_pow2(1);
        let c2 = c.mul(&c).sub(&s.mul(&s));
        s = s2;
        c = c2;
    }
    (s.with_prec(prec), c.with_prec(prec))
}

pub fn sin(x: &Real) -> Real {
    sin_cos(x).0
}

pub fn cos(x: &Real) -> Real {
    sin_cos(x).1
}

/// arctangent via halving identity atan(t) = 2·atan(t / (1 + √(1+t²))).
pub fn atan(x: &Real) -> Real {
    let prec = x.prec();
    if x.is_zero() {
        return Real::zero(prec);
    }
    let wp = prec.guarded(GUARD);
    let one = Real::one(wp);
    let neg = x.is_negative();
    let mut t = x.abs().with_prec(wp);
    let mut big = false;
    if t.gt(&one) {
        big = true;
        t = one.div(&t);
    }
    let mut halvings = 0u32;
    while t.log2_abs().map(|l| l > -10.0).unwrap_or(false) {
        let denom = one.add(&one.add(&t.mul(&t)).sqrt());
        t = t.div(&denom);
        halvings += 1;
    }
    // Taylor: Σ (-1)^i t^{2i+1} / (2i+1), ratio ~ 2^-20.
    let t2 = t.mul(&t);
    let mut pow = t.clone();
    let mut sum = t.clone();
    let mut i: u64 = 1;
    loop {
        pow = pow.mul(&t2).neg();
        let term = pow.div_u64(2 * i + 1);
        if term.is_zero() || term.log2_abs().unwrap_or(f64::NEG_INFINITY) < -(wp.0 as f64) - 8.0 {
            break;
        }
        sum = sum.add(&term);
        i += 1;
    }
    let mut out = sum.mul_pow2(halvings as i64);
    if big {
        out = pi(wp).mul_pow2(-1).sub(&out);
    }
    if neg {
        out = out.neg();
    }
    out.with_prec(prec)
}

/// Principal-branch two-argument arctangent; result in (−π, π].
/// The convention at the branch cut: y = 0, x < 0 maps to +π.
pub fn atan2(y: &Real, x: &Real) -> Real {
    let prec = Prec(y.prec().0.max(x.prec().0));
    if y.is_zero() {
        return if x.is_negative() { pi(prec) } else { Real::zero(prec) };
    }
    if x.is_zero() {
        let half_pi = pi(prec).mul_pow2(-1);
        return if y.is_positive() { half_pi } else { half_pi.neg() };
    }
    let base = atan(&y.div(x).with_prec(prec));
    if x.is_positive() {
        base
    } else if y.is_positive() {
        base.add(&pi(prec))
    } else {
        base.sub(&pi(prec))
    }
}

/// x^e for positive x and real e, via exp(e·ln x).
pub fn powf(x: &Real, e: &Real) -> Real {
    let prec = Prec(x.prec().0.max(e.prec().0));
    if e.is_zero() {
        return Real::one(prec);
    }
    assert!(x.is_positive(), "powf needs a positive base");
    let wp = prec.guarded(GUARD);
    exp(&ln(&x.with_prec(wp)).mul(&e.with_prec(wp))).with_prec(prec)
}

/// x^n for signed integer n.
pub fn powi(x: &Real, n: i64) -> Real {
    if n >= 0 {
        x.powi(n as u64)
    } else {
        x.powi((-n) as u64).recip()
    }
}

/// ln(n!) for integer n ≥ 0, exact factorial then one ln.
pub fn ln_factorial(n: u64, prec: Prec) -> Real {
    if n < 2 {
        return Real::zero(prec);
    }
    let mut f = BigInt::from(1);
    for k in 2..=n {
        f *= k;
    }
    ln(&Real::from_bigint(&f, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::format::parse_decimal;

    const E_REF: &str =
        "2.718281828459045235360287471352662497757247093699959574966967627724076630353547594571";
    const SIN1_REF: &str =
        "0.8414709848078965066525023216302989996225630607983710656727517099919104043912396689486";
    const COS1_REF: &str =
        "0.540302305868139717400936607442976603732310420617922227670097255381100394774471764518";
    const ATAN03_REF: &str =
        "0.2914567944778670919956046214328911935031675990120654192722060830872990149105089980715";
    const LN10_REF: &str =
        "2.302585092994045684017991454684364207601101488628772976033327900967572609677352480236";

    fn close_bits(a: &Real, reference: &str, bits: f64) {
        let p = a.prec();
        let r = parse_decimal(reference, p).unwrap();
        let err = a.sub(&r).abs();
        let l = err.log2_abs().unwrap_or(-1e9);
        assert!(l < -bits, "error 2^{l} vs target 2^-{bits}");
    }

    #[test]
    fn exp_hits_reference_digits() {
        let p = Prec(272);
        close_bits(&exp(&Real::one(p)), E_REF, 266.0);
        // exp(ln 10) == 10
        let ten = Real::from_u64(10, p);
        let back = exp(&ln(&ten));
        let rel = back.sub(&ten).abs().div(&ten);
        assert!(rel.is_zero() || rel.log2_abs().unwrap() < -262.0);
    }

    #[test]
    fn ln_hits_reference_digits() {
        let p = Prec(272);
        close_bits(&ln(&Real::from_u64(10, p)), LN10_REF, 264.0);
        assert!(ln(&Real::one(p)).is_zero());
    }

    #[test]
    fn trig_reference_digits() {
        let p = Prec(272);
        let one = Real::one(p);
        let (s, c) = sin_cos(&one);
        close_bits(&s, SIN1_REF, 258.0);
        close_bits(&c, COS1_REF, 258.0);
        // Pythagorean identity
        let id = s.mul(&s).add(&c.mul(&c)).sub(&one).abs();
        assert!(id.is_zero() || id.log2_abs().unwrap() < -255.0);
    }

    #[test]
    fn trig_large_argument_reduction() {
        let p = Prec(192);
        let x = Real::from_f64(1e9 + 0.25, p);
        let (s, c) = sin_cos(&x);
        let f = (1e9f64 + 0.25).sin();
        assert!((s.to_f64() - f).abs() < 1e-9);
        let id = s.mul(&s).add(&c.mul(&c)).sub(&Real::one(p)).abs();
        assert!(id.is_zero() || id.log2_abs().unwrap() < -180.0);
    }

    #[test]
    fn atan_reference_and_symmetry() {
        let p = Prec(272);
        let x = Real::from_ratio(&BigInt::from(3), &BigInt::from(10), p);
        close_bits(&atan(&x), ATAN03_REF, 260.0);
        assert!(atan(&x.neg()).add(&atan(&x)).is_zero());
        // atan(1) = π/4
        let q = atan(&Real::one(p)).mul_pow2(2).sub(&pi(p)).abs();
        assert!(q.is_zero() || q.log2_abs().unwrap() < -260.0);
    }

    #[test]
    fn atan2_quadrants_and_branch_convention() {
        let p = Prec(128);
        let one = Real::one(p);
        let z = Real::zero(p);
        let pi_p = pi(p);
        assert!(atan2(&z, &one.neg()).sub(&pi_p).is_zero());
        assert!(atan2(&z, &one).is_zero());
        let q3 = atan2(&one.neg(), &one.neg());
        // −3π/4
        let want = pi_p.mul_i64(-3).mul_pow2(-2);
        assert!(q3.sub(&want).abs().log2_abs().unwrap_or(-1e9) < -120.0);
        let q2 = atan2(&one, &one.neg());
        let want2 = pi_p.mul_i64(3).mul_pow2(-2);
        assert!(q2.sub(&want2).abs().log2_abs().unwrap_or(-1e9) < -120.0);
    }

    #[test]
    fn powf_and_ln_factorial() {
        let p = Prec(224);
        // 2^-1.5 reference from an independent high-precision computation
        let r = powf(&Real::from_u64(2, p), &Real::from_f64(-1.5, p));
        close_bits(&r, "0.35355339059327376220042218105242451964241796884423701829417", 200.0);
        // ln(5!) = ln 120
        let lf = ln_factorial(5, p);
        let direct = ln(&Real::from_u64(120, p));
        assert!(lf.sub(&direct).abs().log2_abs().unwrap_or(-1e9) < -215.0);
    }

    #[test]
    fn exp_extreme_arguments_stay_finite() {
        let p = Prec(96);
        let big = exp(&Real::from_f64(5000.0, p));
        assert!((big.log2_abs().unwrap() - 5000.0 / std::f64::consts::LN_2).abs() < 1e-6);
        let tiny = exp(&Real::from_f64(-5000.0, p));
        assert!((tiny.log2_abs().unwrap() + 5000.0 / std::f64::consts::LN_2).abs() < 1e-6);
    }
}
