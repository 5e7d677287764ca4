//! Arbitrary-precision binary floating point on top of `BigInt`.
//!
//! A [`Real`] is `mant * 2^exp` with the mantissa normalized to exactly
//! `prec` bits (round to nearest, ties to even). The i64 exponent makes
//! overflow impossible for anything this crate computes: factorials,
//! Γ values and exp() of moderate arguments all stay far inside the
//! exponent range, so no separate log-magnitude representation is needed —
//! the exponent field *is* the log magnitude.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};

/// Working precision in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prec(pub u32);

impl Prec {
    pub const DEFAULT: Prec = Prec(256);
    pub const MIN: u32 = 8;

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Internal guard precision for elementary-function evaluation.
    pub(crate) fn guarded(self, extra: u32) -> Prec {
        Prec(self.0 + extra)
    }
}

impl Default for Prec {
    fn default() -> Self {
        Prec::DEFAULT
    }
}

impl fmt::Display for Prec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Multiprecision binary float: `mant * 2^exp`, `|mant|` has exactly
/// `prec` bits when nonzero.
#[derive(Clone)]
pub struct Real {
    mant: BigInt,
    exp: i64,
    prec: Prec,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({} @ {} bits)", self.to_f64(), self.prec.0)
    }
}

fn round_mag_to_bits(mag: &BigUint, drop: u64) -> BigUint {
    // Round-to-nearest-even.
    debug_assert!(drop > 0);
    let hi: BigUint = mag >> drop;
    let rem: BigUint = mag - (&hi << drop);
    let half: BigUint = BigUint::from(1u8) << (drop - 1);
    let round_up = match rem.cmp(&half) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => hi.bit(0), // tie: round to even
    };
    if round_up {
        hi + 1u8
    } else {
        hi
    }
}

impl Real {
    /// Normalize raw (mant, exp) to `prec` bits.
    pub(crate) fn normalized(mant: BigInt, exp: i64, prec: Prec) -> Real {
        debug_assert!(prec.0 >= Prec::MIN);
        if mant.is_zero() {
            return Real { mant: BigInt::zero(), exp: 0, prec };
        }
        let (sign, mag) = (mant.sign(), mant.magnitude().clone());
        let bits = mag.bits();
        let want = prec.0 as u64;
        let (mag, exp) = match bits.cmp(&want) {
            Ordering::Equal => (mag, exp),
            Ordering::Less => {
                let shift = want - bits;
                (mag << shift, exp - shift as i64)
            }
            Ordering::Greater => {
                let drop = bits - want;
                let mut out = round_mag_to_bits(&mag, drop);
                let mut exp = exp + drop as i64;
                if out.bits() > want {
                    // carry produced 2^prec
                    out >>= 1u8;
                    exp += 1;
                }
                (out, exp)
            }
        };
        let mant = BigInt::from_biguint(sign, mag);
        Real { mant, exp, prec }
    }

    pub fn zero(prec: Prec) -> Real {
        Real { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn one(prec: Prec) -> Real {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Prec) -> Real {
        Real::normalized(BigInt::from(v), 0, prec)
    }

    pub fn from_u64(v: u64, prec: Prec) -> Real {
        Real::normalized(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: Prec) -> Real {
        Real::normalized(v.clone(), 0, prec)
    }

    /// Exact conversion (f64 values are dyadic rationals).
    pub fn from_f64(v: f64, prec: Prec) -> Real {
        assert!(v.is_finite(), "cannot convert non-finite f64");
        if v == 0.0 {
            return Real::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Real::normalized(BigInt::from(sign * mant as i64), exp, prec)
    }

    /// Correctly rounded num/den.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: Prec) -> Real {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Real::zero(prec);
        }
        let sign = if (num.sign() == Sign::Minus) ^ (den.sign() == Sign::Minus) { -1 } else { 1 };
        let n = num.magnitude().clone();
        let d = den.magnitude().clone();
        let nb = n.bits() as i64;
        let db = d.bits() as i64;
        // Shift numerator so the quotient has at least prec + 3 bits.
        let shift = (db - nb + prec.0 as i64 + 3).max(0) as u64;
        let (q, r) = num_integer::Integer::div_rem(&(n << shift), &d);
        let mut q2: BigUint = q << 1u8;
        if !r.is_zero() {
            q2 |= BigUint::from(1u8); // sticky bit
        }
        let mant = BigInt::from_biguint(if sign < 0 { Sign::Minus } else { Sign::Plus }, q2);
        Real::normalized(mant, -(shift as i64) - 1, prec)
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn with_prec(&self, prec: Prec) -> Real {
        Real::normalized(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    /// -1, 0, +1.
    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Real {
        Real { mant: -self.mant.clone(), exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> Real {
        Real { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Exact scaling by 2^k.
    pub fn mul_pow2(&self, k: i64) -> Real {
        if self.is_zero() {
            return self.clone();
        }
        Real { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    fn join(a: &Real, b: &Real) -> Prec {
        Prec(a.prec.0.max(b.prec.0))
    }

    pub fn add(&self, rhs: &Real) -> Real {
        let prec = Real::join(self, rhs);
        if self.is_zero() {
            return rhs.with_prec(prec);
        }
        if rhs.is_zero() {
            return self.with_prec(prec);
        }
        let (hi, lo) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let diff = hi.exp - lo.exp;
        // Beyond this, `lo` only matters as a sticky bit.
        let cap = prec.0 as i64 + 8;
        if diff > cap + lo.mant.bits() as i64 {
            let mut m = &hi.mant << 3u8;
            if lo.mant.sign() == Sign::Minus {
                m -= 1;
            } else {
                m += 1;
            }
            return Real::normalized(m, hi.exp - 3, prec);
        }
        let m = (&hi.mant << diff as u64) + &lo.mant;
        Real::normalized(m, lo.exp, prec)
    }

    pub fn sub(&self, rhs: &Real) -> Real {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Real) -> Real {
        let prec = Real::join(self, rhs);
        if self.is_zero() || rhs.is_zero() {
            return Real::zero(prec);
        }
        Real::normalized(&self.mant * &rhs.mant, self.exp + rhs.exp, prec)
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        if k == 0 || self.is_zero() {
            return Real::zero(self.prec);
        }
        Real::normalized(&self.mant * k, self.exp, self.prec)
    }

    pub fn div(&self, rhs: &Real) -> Real {
        let prec = Real::join(self, rhs);
        assert!(!rhs.is_zero(), "division by zero");
        if self.is_zero() {
            return Real::zero(prec);
        }
        let shift = prec.0 as u64 + 3;
        let n = self.mant.magnitude() << shift;
        let (q, r) = num_integer::Integer::div_rem(&n, rhs.mant.magnitude());
        let mut q2: BigUint = q << 1u8;
        if !r.is_zero() {
            q2 |= BigUint::from(1u8);
        }
        let sign = if self.is_negative() ^ rhs.is_negative() { Sign::Minus } else { Sign::Plus };
        Real::normalized(
            BigInt::from_biguint(sign, q2),
            self.exp - rhs.exp - shift as i64 - 1,
            prec,
        )
    }

    pub fn div_u64(&self, k: u64) -> Real {
        assert!(k != 0);
        if self.is_zero() {
            return self.clone();
        }
        self.div(&Real::from_u64(k, self.prec))
    }

    pub fn recip(&self) -> Real {
        Real::one(self.prec).div(self)
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec;
        // Scale so the integer sqrt carries ≥ prec + 3 bits and the exponent is even.
        let want_bits = 2 * (prec.0 as u64 + 3);
        let cur = self.mant.bits();
        let mut shift = want_bits.saturating_sub(cur);
        if (self.exp - shift as i64) % 2 != 0 {
            shift += 1;
        }
        let scaled = self.mant.magnitude() << shift;
        let root = num_integer::Roots::sqrt(&scaled);
        let rem = &scaled - (&root * &root);
        let mut r2: BigUint = root << 1u8;
        if !rem.is_zero() {
            r2 |= BigUint::from(1u8);
        }
        Real::normalized(
            BigInt::from_biguint(Sign::Plus, r2),
            (self.exp - shift as i64) / 2 - 1,
            prec,
        )
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, mut e: u64) -> Real {
        let mut base = self.clone();
        let mut acc = Real::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn cmp_val(&self, rhs: &Real) -> Ordering {
        let ls = self.signum();
        let rs = rhs.signum();
        if ls != rs {
            return ls.cmp(&rs);
        }
        if ls == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitude classes first.
        let lm = self.exp + self.mant.bits() as i64;
        let rm = rhs.exp + rhs.mant.bits() as i64;
        let mag_ord = match lm.cmp(&rm) {
            Ordering::Equal => {
                // Align and compare mantissas exactly.
                let d = self.exp - rhs.exp;
                if d >= 0 {
                    (self.mant.magnitude() << d as u64).cmp(rhs.mant.magnitude())
                } else {
                    self.mant.magnitude().cmp(&(rhs.mant.magnitude() << (-d) as u64))
                }
            }
            o => o,
        };
        if ls > 0 {
            mag_ord
        } else {
            mag_ord.reverse()
        }
    }

    pub fn lt(&self, rhs: &Real) -> bool {
        self.cmp_val(rhs) == Ordering::Less
    }

    pub fn le(&self, rhs: &Real) -> bool {
        self.cmp_val(rhs) != Ordering::Greater
    }

    pub fn gt(&self, rhs: &Real) -> bool {
        self.cmp_val(rhs) == Ordering::Greater
    }

    pub fn ge(&self, rhs: &Real) -> bool {
        self.cmp_val(rhs) != Ordering::Less
    }

    pub fn max_val(&self, rhs: &Real) -> Real {
        if self.ge(rhs) { self.clone() } else { rhs.clone() }
    }

    pub fn min_val(&self, rhs: &Real) -> Real {
        if self.le(rhs) { self.clone() } else { rhs.clone() }
    }

    /// Exact equality as extended reals (independent of precision field).
    pub fn eq_val(&self, rhs: &Real) -> bool {
        self.cmp_val(rhs) == Ordering::Equal
    }

    /// log2(|x|) as f64; None for zero. Accurate to ~1e-13 absolute.
    pub fn log2_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let bits = self.mant.bits();
        let take = bits.min(53);
        let top: BigUint = self.mant.magnitude() >> (bits - take);
        let top_f = top.to_string().parse::<f64>().unwrap_or(f64::MAX);
        Some(self.exp as f64 + (bits - take) as f64 + top_f.log2())
    }

    /// Round toward zero to a BigInt.
    pub fn trunc_bigint(&self) -> BigInt {
        if self.is_zero() || self.exp + (self.mant.bits() as i64) <= 0 {
            return BigInt::zero();
        }
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            let mag = self.mant.magnitude() >> (-self.exp) as u64;
            BigInt::from_biguint(self.mant.sign(), mag)
        }
    }

    /// Nearest integer (ties away from zero), as BigInt.
    pub fn round_bigint(&self) -> BigInt {
        let half = Real::from_ratio(&BigInt::from(1), &BigInt::from(2), self.prec);
        let shifted = if self.is_negative() { self.sub(&half) } else { self.add(&half) };
        shifted.trunc_bigint()
    }

    /// True when the value is an exact integer.
    pub fn is_integer(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.exp >= 0 {
            return true;
        }
        let frac_bits = (-self.exp) as u64;
        if frac_bits >= self.mant.bits() + 64 {
            return false;
        }
        let mag = self.mant.magnitude();
        (mag >> frac_bits) << frac_bits == *mag
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (mag, e) = if bits <= 53 {
            (self.mant.magnitude().clone(), self.exp)
        } else {
            let drop = bits - 53;
            let mut m = round_mag_to_bits(self.mant.magnitude(), drop);
            let mut e = self.exp + drop as i64;
            if m.bits() > 53 {
                m >>= 1u8;
                e += 1;
            }
            (m, e)
        };
        let v: u64 = (&mag).try_into().expect("53-bit magnitude fits u64");
        let mut out = v as f64;
        if e > 1100 {
            out = f64::INFINITY;
        } else if e < -1200 {
            out = 0.0;
        } else {
            // Two-step scaling keeps intermediate powers in range and lets
            // results descend into the subnormals.
            let h = e / 2;
            out *= 2f64.powi(h as i32);
            out *= 2f64.powi((e - h) as i32);
        }
        if self.is_negative() {
            -out
        } else {
            out
        }
    }

    /// f64 conversion clamped away from overflow; saturates to ±MAX.
    pub fn to_f64_clamped(&self) -> f64 {
        let v = self.to_f64();
        if v.is_infinite() {
            if v > 0.0 { f64::MAX } else { f64::MIN }
        } else {
            v
        }
    }

    pub(crate) fn mant_exp(&self) -> (&BigInt, i64) {
        (&self.mant, self.exp)
    }
}
