//! Exact arithmetic: complex numbers with rational parts and dense
//! polynomials over them. This is the substrate for the derivative-identity
//! machinery, where every equality must hold exactly, and for the exact
//! serialization path of coefficient streams.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::mp::{Complex, Prec, Real};

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl fmt::Debug for RationalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl RationalComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        RationalComplex { re, im }
    }

    pub fn zero() -> Self {
        RationalComplex::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        RationalComplex::new(BigRational::one(), BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        RationalComplex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0);
        RationalComplex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        RationalComplex::new(re, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RationalComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        RationalComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }

    pub fn neg(&self) -> Self {
        RationalComplex::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RationalComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        RationalComplex::new(&self.re * k, &self.im * k)
    }

    pub fn mul_rational(&self, k: &BigRational) -> Self {
        RationalComplex::new(&self.re * k, &self.im * k)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "exact division by zero");
        let d = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let num = self.mul(&rhs.conj());
        RationalComplex::new(num.re / &d, num.im / &d)
    }

    pub fn conj(&self) -> Self {
        RationalComplex::new(self.re.clone(), -self.im.clone())
    }

    pub fn recip(&self) -> Self {
        RationalComplex::one().div(self)
    }

    /// Integer power (negative allowed for nonzero values).
    pub fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = RationalComplex::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// |re| + |im| as an exact rational upper bound of √2·|z| (and lower
    /// bound never below |z|); enough for Cauchy-style root bounds.
    pub fn norm_one(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Round to a multiprecision complex at the given precision.
    pub fn to_complex(&self, prec: Prec) -> Complex {
        Complex::new(
            Real::from_ratio(self.re.numer(), self.re.denom(), prec),
            Real::from_ratio(self.im.numer(), self.im.denom(), prec),
        )
    }

    /// |z| rounded to a Real at the given precision.
    pub fn abs_real(&self, prec: Prec) -> Real {
        self.to_complex(prec).abs()
    }
}

/// Dense polynomial over [`RationalComplex`], coefficients low-to-high,
/// normalized so the leading coefficient is nonzero (empty = zero poly).
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<RationalComplex>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<RationalComplex>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: RationalComplex) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn monomial(c: RationalComplex, deg: usize) -> Self {
        let mut v = vec![RationalComplex::zero(); deg];
        v.push(c);
        Polynomial::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> RationalComplex {
        self.coeffs.get(i).cloned().unwrap_or_else(RationalComplex::zero)
    }

    pub fn coeffs(&self) -> &[RationalComplex] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&RationalComplex> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&RationalComplex::from_int(-1)))
    }

    pub fn scale(&self, k: &RationalComplex) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![RationalComplex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Polynomial::new(out)
    }

    pub fn eval(&self, x: &RationalComplex) -> RationalComplex {
        let mut acc = RationalComplex::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn eval_int(&self, n: i64) -> RationalComplex {
        self.eval(&RationalComplex::from_int(n))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_int(&BigInt::from(i)))
            .collect();
        Polynomial::new(out)
    }

    /// Euclidean division: self = q·d + r with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut q = vec![
            RationalComplex::zero();
            self.coeffs.len().saturating_sub(d.coeffs.len()) + 1
        ];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap().div(&lead);
            let shift = rd - dd;
            q[shift] = q[shift].add(&factor);
            rem = rem.sub(&d.mul(&Polynomial::monomial(factor, shift)));
        }
        (Polynomial::new(q), rem)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading().cloned() {
            a.scale(&lead.recip())
        } else {
            a
        }
    }

    /// Unique interpolating polynomial of degree < points.len() through
    /// (x_i, y_i), by Newton divided differences; exact.
    pub fn interpolate(points: &[(RationalComplex, RationalComplex)]) -> Self {
        let n = points.len();
        assert!(n > 0);
        let mut table: Vec<RationalComplex> = points.iter().map(|(_, y)| y.clone()).collect();
        // table[i] becomes the divided difference [y_0..y_i]
        for level in 1..n {
            for i in (level..n).rev() {
                let num = table[i].sub(&table[i - 1]);
                let den = points[i].0.sub(&points[i - level].0);
                table[i] = num.div(&den);
            }
        }
        let mut poly = Polynomial::zero();
        let mut basis = Polynomial::constant(RationalComplex::one());
        for (i, item) in table.iter().enumerate() {
            poly = poly.add(&basis.scale(item));
            if i + 1 < n {
                let root = points[i].0.clone();
                basis = basis.mul(&Polynomial::new(vec![root.neg(), RationalComplex::one()]));
            }
        }
        poly
    }

    /// Exact Cauchy bound on root magnitudes: 1 + max |a_i| / |a_n| in the
    /// norm-one gauge (valid upper bound since norm_one ≥ modulus).
    pub fn cauchy_root_bound(&self) -> BigRational {
        match self.degree() {
            None | Some(0) => BigRational::zero(),
            Some(d) => {
                let lead = self.coeffs[d].norm_one();
                // norm_one(lead) can exceed |lead| by √2; compensate with ×2.
                let mut worst = BigRational::zero();
                for c in &self.coeffs[..d] {
                    let r = c.norm_one();
                    if r > worst {
                        worst = r;
                    }
                }
                BigRational::one() + worst / lead * BigRational::from_integer(BigInt::from(2))
            }
        }
    }
}

/// Parse "p/q", "p", or a plain decimal ("1.25", "-3e2") into an exact
/// rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some(idx) = s.find('/') {
        let num: BigInt = s[..idx].trim().parse().ok()?;
        let den: BigInt = s[idx + 1..].trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    // Decimal form: sign, digits, optional fraction, optional exponent.
    let (sign, rest) = match s.as_bytes().first()? {
        b'-' => (-1, &s[1..]),
        b'+' => (1, &s[1..]),
        _ => (1, s),
    };
    let (mant, exp_part) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    let exp10: i64 = match exp_part {
        Some(e) => e.parse().ok()?,
        None => 0,
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let e = exp10 - frac_part.len() as i64;
    let mut r = BigRational::from_integer(digits * sign);
    if e >= 0 {
        r *= BigRational::from_integer(BigInt::from(10u8).pow(e as u32));
    } else {
        r /= BigRational::from_integer(BigInt::from(10u8).pow((-e) as u32));
    }
    Some(r)
}

/// Render a rational as "p" or "p/q" (lossless).
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse a complex scalar in "a", "bi", "a+bi", "a-bi" form where a, b are
/// rationals or decimals ("3/2-1/4i", "1.5i", "2").
pub fn parse_rational_complex(s: &str) -> Option<RationalComplex> {
    let s = s.trim().replace(' ', "");
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the split between real and imaginary parts: the last +/- not
        // at position 0 and not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let b = bytes[i];
            if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re = parse_rational(&body[..i])?;
                let im_str = &body[i..];
                let im = if im_str == "+" {
                    BigRational::one()
                } else if im_str == "-" {
                    -BigRational::one()
                } else {
                    parse_rational(im_str)?
                };
                Some(RationalComplex::new(re, im))
            }
            None => {
                let im = if body.is_empty() {
                    BigRational::one()
                } else if body == "-" {
                    -BigRational::one()
                } else {
                    parse_rational(body)?
                };
                Some(RationalComplex::new(BigRational::zero(), im))
            }
        }
    } else {
        Some(RationalComplex::from_rational(parse_rational(&s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(n: i64, d: i64) -> RationalComplex {
        RationalComplex::from_ratio(n, d)
    }

    #[test]
    fn complex_rational_field_ops() {
        let a = RationalComplex::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(-3), BigInt::from(4)),
        );
        let b = RationalComplex::new(
            BigRational::new(BigInt::from(2), BigInt::from(3)),
            BigRational::new(BigInt::from(5), BigInt::from(7)),
        );
        let prod = a.mul(&b);
        let back = prod.div(&b);
        assert_eq!(back, a);
        assert_eq!(a.mul(&a.recip()), RationalComplex::one());
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
        assert_eq!(a.pow(-2), a.mul(&a).recip());
    }

    #[test]
    fn polynomial_eval_and_derivative() {
        // p = 2 - x + 3x^2
        let p = Polynomial::new(vec![rc(2, 1), rc(-1, 1), rc(3, 1)]);
        assert_eq!(p.eval_int(2), rc(12, 1));
        let d = p.derivative();
        assert_eq!(d.eval_int(2), rc(11, 1));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(d.degree(), Some(1));
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = Polynomial::new(vec![rc(2, 1), rc(-3, 1), rc(1, 1)]);
        let b = Polynomial::new(vec![rc(-3, 1), rc(2, 1), rc(1, 1)]);
        let g = a.gcd(&b);
        assert_eq!(g.degree(), Some(1));
        assert!(g.eval_int(1).is_zero());
        let (q, r) = a.div_rem(&g);
        assert!(r.is_zero());
        assert!(q.eval_int(2).is_zero());
    }

    #[test]
    fn interpolation_reproduces_polynomial() {
        let p = Polynomial::new(vec![rc(1, 3), rc(0, 1), rc(-2, 1), rc(5, 4)]);
        let pts: Vec<_> = (0..4)
            .map(|n| (RationalComplex::from_int(n), p.eval_int(n)))
            .collect();
        let q = Polynomial::interpolate(&pts);
        assert_eq!(p, q);
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        // roots at 1, 2, 3 → bound must exceed 3
        let p = Polynomial::new(vec![rc(-6, 1), rc(11, 1), rc(-6, 1), rc(1, 1)]);
        let b = p.cauchy_root_bound();
        assert!(b > BigRational::from_integer(BigInt::from(3)));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-1.25").unwrap(), BigRational::new((-5).into(), 4.into()));
        assert_eq!(parse_rational("2e3").unwrap(), BigRational::from_integer(2000.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
        let c = parse_rational_complex("3/2-1/4i").unwrap();
        assert_eq!(c, RationalComplex::new(
            BigRational::new(3.into(), 2.into()),
            BigRational::new((-1).into(), 4.into()),
        ));
        assert_eq!(parse_rational_complex("2").unwrap(), RationalComplex::from_int(2));
        assert_eq!(
            parse_rational_complex("-i").unwrap(),
            RationalComplex::new(BigRational::zero(), -BigRational::one())
        );
        assert_eq!(rational_to_string(&BigRational::new(3.into(), 4.into())), "3/4");
        assert_eq!(rational_to_string(&BigRational::from_integer(7.into())), "7");
    }
}
