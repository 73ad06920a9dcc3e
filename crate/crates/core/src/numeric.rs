//! Arbitrary-precision real and complex floats backed by MPFR.
//!
//! Every value carries its precision in bits (>= 64); binary operations
//! produce results at the larger of the two operand precisions, so precision
//! is carried through computations rather than silently truncated.

use std::cmp::Ordering;
use std::fmt::{self, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{CoreError, Result};
use crate::scalar::{Rational, Scalar};

pub const MIN_PRECISION: u32 = 64;

/// Arbitrary-precision real number.
#[derive(Clone, Debug)]
pub struct BigReal(Float);

fn clamp_prec(prec: u32) -> u32 {
    prec.max(MIN_PRECISION)
}

impl BigReal {
    pub fn zero(prec: u32) -> Self {
        BigReal(Float::with_val(clamp_prec(prec), 0))
    }

    pub fn one(prec: u32) -> Self {
        BigReal(Float::with_val(clamp_prec(prec), 1))
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        BigReal(Float::with_val(clamp_prec(prec), x))
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        BigReal(Float::with_val(clamp_prec(prec), x))
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let n: rug::Integer = q.numer().to_string().parse().expect("bigint to rug");
        let d: rug::Integer = q.denom().to_string().parse().expect("bigint to rug");
        let r = rug::Rational::from((n, d));
        BigReal(Float::with_val(clamp_prec(prec), r))
    }

    pub fn pi(prec: u32) -> Self {
        BigReal(Float::with_val(clamp_prec(prec), Constant::Pi))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }

    fn lift(&self, prec: u32) -> Float {
        let mut f = self.0.clone();
        if f.prec() < prec {
            f.set_prec(prec);
        }
        f
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }

    pub fn atan2(&self, x: &Self) -> Self {
        let p = self.prec().max(x.prec());
        BigReal(self.lift(p).atan2(&x.0))
    }

    pub fn powi(&self, k: i32) -> Self {
        BigReal(self.0.clone().pow(k))
    }

    /// x^q for positive x via exp(q ln x); exact half-integer powers are the
    /// common case (grading operators).
    pub fn pow_rational(&self, q: &Rational) -> Self {
        let e = BigReal::from_rational(q, self.prec());
        (self.ln() * e).exp()
    }

    pub fn max(&self, other: &Self) -> Self {
        if self.partial_cmp(other) == Some(Ordering::Less) {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        if self.partial_cmp(other) == Some(Ordering::Greater) {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Nearest integer and the (absolute) rounding residual.
    pub fn round_with_residual(&self) -> (BigInt, Self) {
        let rounded = self.0.clone().round();
        let int = rounded
            .to_integer()
            .expect("finite float rounds to integer");
        let res = BigReal(self.0.clone() - &rounded).abs();
        let big: BigInt = int.to_string().parse().expect("rug integer to bigint");
        (big, res)
    }

    pub fn mag_log2(&self) -> Option<f64> {
        if self.0.is_zero() || !self.0.is_finite() {
            return None;
        }
        self.0.get_exp().map(|e| e as f64)
    }

    /// Format with `digits` significant decimal digits, deterministic.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self.0)
    }
}

impl Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $assign:ident) => {
        impl $trait for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                let p = self.prec().max(rhs.prec());
                let mut a = self.lift(p);
                a.$assign(&rhs.0);
                BigReal(a)
            }
        }

        impl<'a> $trait<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let p = self.prec().max(rhs.prec());
                let mut a = self.lift(p);
                a.$assign(&rhs.0);
                BigReal(a)
            }
        }
    };
}

use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};
real_binop!(Add, add, add_assign);
real_binop!(Sub, sub, sub_assign);
real_binop!(Mul, mul, mul_assign);
real_binop!(Div, div, div_assign);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

/// Arbitrary-precision complex number.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigReal::zero(prec), BigReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::new(BigReal::one(prec), BigReal::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(BigReal::zero(prec), BigReal::one(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::new(BigReal::from_f64(re, prec), BigReal::from_f64(im, prec))
    }

    pub fn from_real(re: BigReal) -> Self {
        let prec = re.prec();
        Self::new(re, BigReal::zero(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sq(&self) -> BigReal {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sq().sqrt()
    }

    pub fn arg(&self) -> BigReal {
        self.im.atan2(&self.re)
    }

    /// Principal branch logarithm.
    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = sin_cos(&self.im);
        Self::new(m.clone() * c, m * s)
    }

    pub fn scale(&self, r: &BigReal) -> Self {
        Self::new(self.re.clone() * r, self.im.clone() * r)
    }

    pub fn mul_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }

    pub fn powi(&self, k: i32) -> Self {
        let prec = self.prec();
        if k == 0 {
            return Self::one(prec);
        }
        let mut base = if k > 0 { self.clone() } else { self.inv_unchecked() };
        let mut n = k.unsigned_abs();
        let mut acc = Self::one(prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            n >>= 1;
        }
        acc
    }

    fn inv_unchecked(&self) -> Self {
        let n = self.norm_sq();
        Self::new(self.re.clone() / n.clone(), -self.im.clone() / n)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

fn sin_cos(x: &BigReal) -> (BigReal, BigReal) {
    let (s, c) = x.0.clone().sin_cos(Float::new(x.prec()));
    (BigReal(s), BigReal(c))
}

impl Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl Add for BigComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for BigComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for BigComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * &rhs.re - self.im.clone() * &rhs.im;
        let im = self.re * &rhs.im + self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Div for BigComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm_sq();
        let num = self * rhs.conj();
        Self::new(num.re / n.clone(), num.im / n)
    }
}

impl Neg for BigComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for BigComplex {
    const EXACT: bool = false;

    fn zero() -> Self {
        BigComplex::zero(MIN_PRECISION)
    }

    fn one() -> Self {
        BigComplex::one(MIN_PRECISION)
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn from_rational(q: &Rational, prec: u32) -> Self {
        BigComplex::from_real(BigReal::from_rational(q, prec))
    }

    fn mag_log2(&self) -> Option<f64> {
        match (self.re.mag_log2(), self.im.mag_log2()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    fn negligible(&self, max_log2: Option<f64>) -> bool {
        let Some(mag) = Scalar::mag_log2(self) else {
            return true;
        };
        match max_log2 {
            // Keep half the working precision as elimination headroom.
            Some(scale) => mag < scale - (self.prec() as f64) * 0.5,
            None => false,
        }
    }

    fn invert(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            Err(CoreError::Singular)
        } else {
            Ok(self.inv_unchecked())
        }
    }

    fn approx(&self) -> (f64, f64) {
        self.to_f64_pair()
    }

    fn precision(&self) -> Option<u32> {
        Some(self.prec())
    }

    fn re_positive(&self) -> bool {
        self.re.is_positive()
    }

    fn im_negligible(&self, scale: Option<f64>) -> bool {
        let Some(mag) = self.im.mag_log2() else {
            return true;
        };
        match scale {
            Some(s) => mag < s - (self.prec() as f64) * 0.5,
            None => false,
        }
    }

    fn imaginary_unit() -> Option<Self> {
        Some(BigComplex::i(MIN_PRECISION))
    }
}

/// Best rational approximation with denominator at most `max_den`, via the
/// continued-fraction convergents. Returns the rational and |x - p/q|.
pub fn rationalize(x: &BigReal, max_den: &BigInt) -> (Rational, BigReal) {
    use num_traits::{Signed, Zero};
    let prec = x.prec();
    let mut p_prev = BigInt::from(1);
    let mut q_prev = BigInt::from(0);
    let mut p_cur = BigInt::from(0);
    let mut q_cur = BigInt::from(1);
    let mut f = x.0.clone();
    let mut best: Option<(Rational, Float)> = None;
    for step in 0..(prec as usize) {
        let floor = f.clone().floor();
        let Some(a_int) = floor.to_integer() else { break };
        let a: BigInt = a_int.to_string().parse().expect("integer parse");
        let p_new = &a * &p_cur + &p_prev;
        let q_new = &a * &q_cur + &q_prev;
        if q_new.abs() > *max_den && step > 0 {
            break;
        }
        p_prev = std::mem::replace(&mut p_cur, p_new);
        q_prev = std::mem::replace(&mut q_cur, q_new);
        if q_cur.is_zero() {
            break;
        }
        let cand = Rational::new(p_cur.clone(), q_cur.clone());
        let cand_f = BigReal::from_rational(&cand, prec);
        let resid = (x.clone() - cand_f).abs();
        let better = match &best {
            Some((_, b)) => resid.0 < *b,
            None => true,
        };
        if better {
            best = Some((cand, resid.0.clone()));
        }
        let frac = f.clone() - &floor;
        if frac.is_zero() {
            break;
        }
        f = Float::with_val(prec, frac.recip_ref());
        if !f.is_finite() {
            break;
        }
    }
    match best {
        Some((r, resid)) => (r, BigReal(resid)),
        None => (
            Rational::from_integer(0.into()),
            x.abs(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn precision_is_carried_through() {
        let a = BigReal::from_f64(2.0, 256);
        let b = BigReal::from_f64(3.0, 64);
        assert_eq!((a.clone() * b).prec(), 256);
        assert_eq!(BigReal::zero(10).prec(), MIN_PRECISION);
    }

    #[test]
    fn complex_log_exp_roundtrip() {
        let z = BigComplex::from_f64(-1.25, 0.5, 128);
        let w = z.ln().exp();
        let err = (w - z).abs();
        assert!(err.to_f64() < 1e-35, "err = {}", err);
    }

    #[test]
    fn rational_embedding() {
        let x = BigReal::from_rational(&rat(1, 3), 128);
        let three = BigReal::from_i64(3, 128);
        let err = (x * three - BigReal::one(128)).abs();
        assert!(err.to_f64() < 1e-37);
    }

    #[test]
    fn rounding_residual() {
        let x = BigReal::from_f64(4.9999999, 128);
        let (n, r) = x.round_with_residual();
        assert_eq!(n, BigInt::from(5));
        assert!(r.to_f64() < 2e-7);
    }
}
