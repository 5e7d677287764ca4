//! Round-trip-safe decimal serialization for [`Real`].

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use super::real::{Prec, Real};

/// Significant decimal digits needed to round-trip `prec` bits.
pub fn digits_for(prec: Prec) -> usize {
    (prec.0 as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

/// Scientific-notation decimal string with enough digits to round-trip at
/// the value's own precision. Deterministic: same value, same string.
pub fn to_decimal_string(x: &Real) -> String {
    to_decimal_string_digits(x, digits_for(x.prec()))
}

pub fn to_decimal_string_digits(x: &Real, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let neg = x.is_negative();
    let l10 = x.log2_abs().unwrap() * std::f64::consts::LOG10_2;
    // Aim for D with exactly `sig` digits: D = |x| · 10^(sig-1-e10).
    let mut e10 = l10.floor() as i64;
    let (mant, exp) = x.mant_exp();
    let mag = mant.abs();
    loop {
        let s = sig as i64 - 1 - e10;
        // D = round(mag · 2^exp · 10^s)
        let mut num = mag.clone();
        let mut den = BigInt::from(1);
        if exp >= 0 {
            num <<= exp as u64;
        } else {
            den <<= (-exp) as u64;
        }
        if s >= 0 {
            num *= BigInt::from(10u8).pow(s as u32);
        } else {
            den *= BigInt::from(10u8).pow((-s) as u32);
        }
        let (q, r) = num_integer::Integer::div_rem(&num, &den);
        let d = if &r * 2 >= den { q + 1 } else { q };
        let ds = d.to_string();
        let n = ds.len();
        if n == sig {
            return assemble(neg, &ds, e10);
        }
        // Rounding crossed a power of ten (or the f64 log was off by one).
        e10 += n as i64 - sig as i64;
        if n == 0 {
            return "0".to_string();
        }
    }
}

fn assemble(neg: bool, digits: &str, e10: i64) -> String {
    let trimmed = digits.trim_end_matches('0');
    let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
    let head = &trimmed[..1];
    let tail = &trimmed[1..];
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(head);
    if !tail.is_empty() {
        s.push('.');
        s.push_str(tail);
    }
    if e10 != 0 {
        s.push('e');
        s.push_str(&e10.to_string());
    }
    s
}

/// Parse a decimal string ("-1.25e-3", "42", "0.5") to a correctly rounded
/// Real. Returns None on malformed input.
pub fn parse_decimal(s: &str, prec: Prec) -> Option<Real> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (sign, rest) = match s.as_bytes()[0] {
        b'-' => (Sign::Minus, &s[1..]),
        b'+' => (Sign::Plus, &s[1..]),
        _ => (Sign::Plus, s),
    };
    let (mantissa_part, exp_part) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    let exp10: i64 = match exp_part {
        Some(e) => e.parse().ok()?,
        None => 0,
    };
    let (int_part, frac_part) = match mantissa_part.find('.') {
        Some(i) => (&mantissa_part[..i], &mantissa_part[i + 1..]),
        None => (mantissa_part, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let value: BigInt = digits.parse().ok()?;
    if value.is_zero() {
        return Some(Real::zero(prec));
    }
    let value = BigInt::from_biguint(sign, value.magnitude().clone());
    let e = exp10 - frac_part.len() as i64;
    let (num, den) = if e >= 0 {
        (value * BigInt::from(10u8).pow(e as u32), BigInt::from(1))
    } else {
        (value, BigInt::from(10u8).pow((-e) as u32))
    };
    Some(Real::from_ratio(&num, &den, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_simple_values() {
        let p = Prec(128);
        for v in [0.0, 1.0, -1.0, 0.5, 1234.5678, -3.25e-9, 1e20] {
            let x = Real::from_f64(v, p);
            let s = to_decimal_string(&x);
            let back = parse_decimal(&s, p).unwrap();
            assert!(back.eq_val(&x) || back.sub(&x).abs().log2_abs().unwrap_or(-1e9) < -120.0,
                "v={v} s={s}");
        }
    }

    #[test]
    fn round_trips_full_precision_values() {
        let p = Prec(256);
        let x = Real::from_u64(2, p).sqrt();
        let s = to_decimal_string(&x);
        let back = parse_decimal(&s, p).unwrap();
        let err = back.sub(&x).abs();
        // Round trip must reproduce the value to within a half ulp.
        assert!(err.is_zero() || err.log2_abs().unwrap() < x.log2_abs().unwrap() - 255.0);
    }

    #[test]
    fn parses_rationals_with_exponents() {
        let p = Prec(96);
        let x = parse_decimal("2.5e-1", p).unwrap();
        assert_eq!(x.to_f64(), 0.25);
        assert!(parse_decimal("abc", p).is_none());
        assert!(parse_decimal("", p).is_none());
        assert!(parse_decimal("1..2", p).is_none());
        assert_eq!(parse_decimal("-0.125", p).unwrap().to_f64(), -0.125);
    }

    #[test]
    fn huge_and_tiny_magnitudes_survive() {
        let p = Prec(96);
        let big = Real::from_u64(3, p).mul_pow2(4000);
        let s = to_decimal_string(&big);
        let back = parse_decimal(&s, p).unwrap();
        let rel = back.sub(&big).abs().div(&big.abs());
        assert!(rel.is_zero() || rel.log2_abs().unwrap() < -90.0, "s={s}");
    }
}
