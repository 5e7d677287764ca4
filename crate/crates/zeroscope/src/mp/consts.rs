//! Cached high-precision constants.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

use super::real::{Prec, Real};

fn cache() -> &'static Mutex<HashMap<(u32, u8), Real>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u8), Real>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

const KIND_PI: u8 = 0;
const KIND_LN2: u8 = 1;

/// arctan(1/q) scaled by 2^shift, exact integer series evaluation.
fn atan_inv_scaled(q: u64, shift: u64) -> BigInt {
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut term = (BigInt::from(1) << shift) / &q;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        let contrib = &term / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += &contrib;
        } else {
            sum -= &contrib;
        }
        if contrib.is_zero() && k > 0 {
            break;
        }
        term /= &q2;
        k += 1;
    }
    sum
}

/// π via Machin: π = 16·atan(1/5) − 4·atan(1/239).
pub fn pi(prec: Prec) -> Real {
    if let Some(v) = cache().lock().unwrap().get(&(prec.0, KIND_PI)) {
        return v.clone();
    }
    let shift = prec.0 as u64 + 32;
    let a = atan_inv_scaled(5, shift);
    let b = atan_inv_scaled(239, shift);
    let scaled = a * 16 - b * 4;
    let v = Real::normalized(scaled, -(shift as i64), prec);
    cache().lock().unwrap().insert((prec.0, KIND_PI), v.clone());
    v
}

/// ln 2 = 2·atanh(1/3) = 2·Σ 1/((2k+1)·3^{2k+1}).
pub fn ln2(prec: Prec) -> Real {
    if let Some(v) = cache().lock().unwrap().get(&(prec.0, KIND_LN2)) {
        return v.clone();
    }
    let shift = prec.0 as u64 + 32;
    let three = BigInt::from(3);
    let nine = BigInt::from(9);
    let mut term = (BigInt::from(1) << shift) / &three;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let contrib = &term / BigInt::from(2 * k + 1);
        if contrib.is_zero() {
            break;
        }
        sum += &contrib;
        term /= &nine;
        k += 1;
    }
    let v = Real::normalized(sum * 2, -(shift as i64), prec);
    cache().lock().unwrap().insert((prec.0, KIND_LN2), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::format::parse_decimal;

    const PI_REF: &str =
        "3.141592653589793238462643383279502884197169399375105820974944592307816406286208998628";
    const LN2_REF: &str =
        "0.6931471805599453094172321214581765680755001343602552541206800094933936219696947156059";

    #[test]
    fn pi_matches_reference_digits() {
        let p = Prec(272);
        let reference = parse_decimal(PI_REF, p).unwrap();
        let err = pi(p).sub(&reference).abs();
        assert!(err.log2_abs().unwrap_or(-1e9) < -265.0, "err = {:?}", err);
    }

    #[test]
    fn ln2_matches_reference_digits() {
        let p = Prec(272);
        let reference = parse_decimal(LN2_REF, p).unwrap();
        let err = ln2(p).sub(&reference).abs();
        assert!(err.log2_abs().unwrap_or(-1e9) < -266.0, "err = {:?}", err);
    }
}
