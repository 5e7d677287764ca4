//! Complex numbers over [`Real`].

use std::fmt;

use num_complex::Complex64;

use super::functions::{atan2, exp, ln, sin_cos};
use super::real::{Prec, Real};

#[derive(Clone)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Complex {
        Complex { re, im }
    }

    pub fn zero(prec: Prec) -> Complex {
        Complex::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: Prec) -> Complex {
        Complex::new(Real::one(prec), Real::zero(prec))
    }

    pub fn from_real(re: Real) -> Complex {
        let prec = re.prec();
        Complex::new(re, Real::zero(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: Prec) -> Complex {
        Complex::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    pub fn from_c64(z: Complex64, prec: Prec) -> Complex {
        Complex::from_f64(z.re, z.im, prec)
    }

    pub fn prec(&self) -> Prec {
        Prec(self.re.prec().0.max(self.im.prec().0))
    }

    pub fn with_prec(&self, prec: Prec) -> Complex {
        Complex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, rhs: &Complex) -> Complex {
        Complex::new(self.re.add(&rhs.re), self.im.add(&rhs.im))
    }

    pub fn sub(&self, rhs: &Complex) -> Complex {
        Complex::new(self.re.sub(&rhs.re), self.im.sub(&rhs.im))
    }

    pub fn neg(&self) -> Complex {
        Complex::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, rhs: &Complex) -> Complex {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        Complex::new(re, im)
    }

    pub fn mul_real(&self, rhs: &Real) -> Complex {
        Complex::new(self.re.mul(rhs), self.im.mul(rhs))
    }

    pub fn div(&self, rhs: &Complex) -> Complex {
        let d = rhs.norm_sqr();
        assert!(!d.is_zero(), "complex division by zero");
        let n = self.mul(&rhs.conj());
        Complex::new(n.re.div(&d), n.im.div(&d))
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    /// |re| + |im|: cheap upper bound on √2·|z|, lower-bounded by |z|.
    pub fn norm_one(&self) -> Real {
        self.re.abs().add(&self.im.abs())
    }

    /// Principal argument in (−π, π].
    pub fn arg(&self) -> Real {
        atan2(&self.im, &self.re)
    }

    pub fn powi(&self, mut e: u64) -> Complex {
        let prec = self.prec();
        let mut base = self.clone();
        let mut acc = Complex::one(prec);
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

    /// e^z = e^re (cos im + i sin im).
    pub fn exp(&self) -> Complex {
        let m = exp(&self.re);
        let (s, c) = sin_cos(&self.im);
        Complex::new(m.mul(&c), m.mul(&s))
    }

    /// Principal log: ln|z| + i·Arg(z), Arg ∈ (−π, π].
    pub fn ln(&self) -> Complex {
        assert!(!self.is_zero(), "log of zero");
        Complex::new(ln(&self.abs()), self.arg())
    }

    /// Principal square root: √|z|·e^{i·Arg(z)/2}. Uses the numerically
    /// stable half-angle form at guarded precision; the Arg = π cut maps to
    /// the positive imaginary axis.
    pub fn sqrt(&self) -> Complex {
        let prec = self.prec();
        if self.is_zero() {
            return Complex::zero(prec);
        }
        let wp = prec.guarded(32);
        let w = self.with_prec(wp);
        let r = w.abs();
        let re_part = r.add(&w.re).mul_pow2(-1).max_val(&Real::zero(wp)).sqrt();
        let im_mag = r.sub(&w.re).mul_pow2(-1).max_val(&Real::zero(wp)).sqrt();
        // sign(0) = +1 keeps the branch-cut convention Arg ∈ (−π, π].
        let im_part = if w.im.is_negative() { im_mag.neg() } else { im_mag };
        Complex::new(re_part.with_prec(prec), im_part.with_prec(prec))
    }

    /// z^a for real a via exp(a·Log z) on the principal branch.
    pub fn pow_real(&self, a: &Real) -> Complex {
        let prec = Prec(self.prec().0.max(a.prec().0));
        if a.is_zero() {
            return Complex::one(prec);
        }
        if a.is_integer() {
            let n = a.trunc_bigint();
            let mag: u64 = n.magnitude().try_into().expect("integer exponent too large");
            let p = self.powi(mag);
            return if n.sign() == num_bigint::Sign::Minus {
                Complex::one(prec).div(&p)
            } else {
                p
            };
        }
        self.ln().mul_real(a).exp()
    }

    /// z^w for complex w on the principal branch.
    pub fn pow_complex(&self, w: &Complex) -> Complex {
        if w.is_zero() {
            return Complex::one(self.prec());
        }
        self.ln().mul(w).exp()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// (re, im) scaled by 2^-s where s ≈ log2|z|, guaranteed finite in f64.
    /// Preserves the argument exactly; used for phase computations.
    pub fn to_c64_normalized(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let lr = self.re.log2_abs().unwrap_or(f64::NEG_INFINITY);
        let li = self.im.log2_abs().unwrap_or(f64::NEG_INFINITY);
        let s = lr.max(li).round() as i64;
        Complex64::new(self.re.mul_pow2(-s).to_f64(), self.im.mul_pow2(-s).to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::from_f64(re, im, Prec(160))
    }

    #[test]
    fn field_operations_match_f64() {
        let a = c(1.5, -2.25);
        let b = c(-0.5, 3.0);
        let prod = a.mul(&b).to_c64();
        let want = Complex64::new(1.5, -2.25) * Complex64::new(-0.5, 3.0);
        assert!((prod - want).norm() < 1e-12);
        let q = a.div(&b).to_c64();
        let wantq = Complex64::new(1.5, -2.25) / Complex64::new(-0.5, 3.0);
        assert!((q - wantq).norm() < 1e-12);
    }

    #[test]
    fn principal_sqrt_branch() {
        // √4 = 2, √(−1) = i, √(−4) = 2i
        assert!((c(4.0, 0.0).sqrt().to_c64() - Complex64::new(2.0, 0.0)).norm() < 1e-30);
        assert!((c(-1.0, 0.0).sqrt().to_c64() - Complex64::new(0.0, 1.0)).norm() < 1e-30);
        assert!((c(-4.0, 0.0).sqrt().to_c64() - Complex64::new(0.0, 2.0)).norm() < 1e-30);
        // below the cut: √(−1 − εi) has negative imaginary part
        let below = c(-1.0, -1e-12).sqrt();
        assert!(below.im.is_negative());
    }

    #[test]
    fn sqrt_squares_back() {
        for (re, im) in [(3.0, 4.0), (-2.0, 0.5), (0.0, -9.0), (1e-8, 1e8)] {
            let z = c(re, im);
            let s = z.sqrt();
            let back = s.mul(&s);
            let err = back.sub(&z).abs();
            let scale = z.abs();
            assert!(err.div(&scale).log2_abs().unwrap_or(-1e9) < -140.0);
        }
    }

    #[test]
    fn exp_log_inverse() {
        let z = c(0.7, -1.9);
        let back = z.ln().exp();
        assert!(back.sub(&z).abs().log2_abs().unwrap_or(-1e9) < -140.0);
    }

    #[test]
    fn pow_real_integer_fast_path() {
        let z = c(1.0, 1.0);
        let p3 = z.pow_real(&Real::from_i64(3, Prec(160))).to_c64();
        assert!((p3 - Complex64::new(-2.0, 2.0)).norm() < 1e-12);
        let pm1 = z.pow_real(&Real::from_i64(-1, Prec(160))).to_c64();
        assert!((pm1 - Complex64::new(0.5, -0.5)).norm() < 1e-12);
    }

    #[test]
    fn normalized_f64_preserves_argument() {
        let z = Complex::from_f64(3.0, -4.0, Prec(128)).mul_real(&Real::one(Prec(128)).mul_pow2(3000));
        let n = z.to_c64_normalized();
        assert!(n.norm() > 0.1 && n.norm().is_finite());
        assert!((n.arg() - Complex64::new(3.0, -4.0).arg()).abs() < 1e-12);
    }
}
