//! Scalar tower: exact rationals, Gaussian rationals and the interface shared
//! with arbitrary-precision floats.
//!
//! Exact scalars have decidable equality, which is what makes canonical
//! echelon forms and the uniqueness arguments downstream (weight filtrations,
//! delta splittings) effective. Floats enter only through
//! [`crate::numeric::BigComplex`].

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};

/// Exact rational number.
pub type Rational = num_rational::BigRational;

/// Common interface for field scalars used by the generic linear algebra.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Exact scalars admit decidable equality; float scalars do not.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;

    /// Complex conjugate (identity on real scalars).
    fn conjugate(&self) -> Self;

    /// Embed an exact rational. `prec` is the precision in bits for float
    /// scalars and is ignored by exact ones.
    fn from_rational(q: &Rational, prec: u32) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)), 64)
    }

    /// log2 of the magnitude, `None` for zero. Used for pivot selection and
    /// negligibility thresholds; exactness of the result is irrelevant.
    fn mag_log2(&self) -> Option<f64>;

    /// Whether the value should be treated as zero during elimination, given
    /// the largest magnitude (log2) seen in the matrix. Exact scalars ignore
    /// the scale.
    fn negligible(&self, max_log2: Option<f64>) -> bool;

    fn invert(&self) -> Result<Self> {
        if self.negligible(None) {
            Err(CoreError::Singular)
        } else {
            Ok(Self::one() / self.clone())
        }
    }

    /// Approximate complex value, for reports and diagnostics only.
    fn approx(&self) -> (f64, f64);

    /// Precision in bits carried by the value, `None` for exact scalars.
    fn precision(&self) -> Option<u32>;

    /// Whether the real part is strictly positive (exact where possible).
    fn re_positive(&self) -> bool;

    /// Whether the imaginary part vanishes (to working precision for floats,
    /// with `scale` the ambient magnitude in log2).
    fn im_negligible(&self, scale: Option<f64>) -> bool;

    /// sqrt(-1) when the scalar field contains it.
    fn imaginary_unit() -> Option<Self>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        <Rational as One>::one()
    }

    fn is_zero(&self) -> bool {
        <Rational as Zero>::is_zero(self)
    }

    fn conjugate(&self) -> Self {
        self.clone()
    }

    fn from_rational(q: &Rational, _prec: u32) -> Self {
        q.clone()
    }

    fn mag_log2(&self) -> Option<f64> {
        if <Rational as Zero>::is_zero(self) {
            return None;
        }
        let n = self.numer().abs().bits() as f64;
        let d = self.denom().abs().bits() as f64;
        Some(n - d)
    }

    fn negligible(&self, _max_log2: Option<f64>) -> bool {
        <Rational as Zero>::is_zero(self)
    }

    fn approx(&self) -> (f64, f64) {
        (rational_to_f64(self), 0.0)
    }

    fn precision(&self) -> Option<u32> {
        None
    }

    fn re_positive(&self) -> bool {
        self > &<Rational as Zero>::zero()
    }

    fn im_negligible(&self, _scale: Option<f64>) -> bool {
        true
    }

    fn imaginary_unit() -> Option<Self> {
        None
    }
}

/// Convert an exact rational to the nearest f64 (diagnostics only).
pub fn rational_to_f64(q: &Rational) -> f64 {
    let n = q.numer();
    let d = q.denom();
    // Scale down huge operands before converting.
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    if nb < 1000 && db < 1000 {
        let nf = bigint_to_f64(n);
        let df = bigint_to_f64(d);
        return nf / df;
    }
    let shift = (nb.max(db) - 900).max(0) as u64;
    let nf = bigint_to_f64(&(n >> shift));
    let df = bigint_to_f64(&(d >> shift));
    nf / df
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::NAN)
}

/// Parse "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let mk = |e: &str| CoreError::Parse(format!("invalid rational {s:?}: {e}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|e| mk(&format!("{e}")))?;
        let q: BigInt = q.trim().parse().map_err(|e| mk(&format!("{e}")))?;
        if q.is_zero() {
            return Err(mk("zero denominator"));
        }
        Ok(Rational::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|e| mk(&format!("{e}")))?;
        Ok(Rational::from_integer(p))
    }
}

/// Gaussian rational a + b i with exact rational a, b.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_re(re: Rational) -> Self {
        Self {
            re,
            im: <Rational as Zero>::zero(),
        }
    }

    pub fn i() -> Self {
        Self {
            re: <Rational as Zero>::zero(),
            im: <Rational as One>::one(),
        }
    }

    pub fn is_real(&self) -> bool {
        <Rational as Zero>::is_zero(&self.im)
    }

    /// |z|^2 as an exact rational.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// i^k for integer k (k may be negative).
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::from_re(<Rational as One>::one()),
            1 => Self::i(),
            2 => Self::from_re(-<Rational as One>::one()),
            _ => -Self::i(),
        }
    }
}

impl Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if <Rational as Zero>::is_zero(&self.im) {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for GaussRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm_sq();
        assert!(
            !<Rational as Zero>::is_zero(&n),
            "division by zero Gaussian rational"
        );
        let conj = rhs.conjugate();
        let prod = self * conj;
        Self {
            re: prod.re / n.clone(),
            im: prod.im / n,
        }
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for GaussRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::from_re(<Rational as Zero>::zero())
    }

    fn one() -> Self {
        Self::from_re(<Rational as One>::one())
    }

    fn is_zero(&self) -> bool {
        <Rational as Zero>::is_zero(&self.re) && <Rational as Zero>::is_zero(&self.im)
    }

    fn conjugate(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn from_rational(q: &Rational, _prec: u32) -> Self {
        Self::from_re(q.clone())
    }

    fn mag_log2(&self) -> Option<f64> {
        if Scalar::is_zero(self) {
            return None;
        }
        let r = Scalar::mag_log2(&self.re);
        let i = Scalar::mag_log2(&self.im);
        match (r, i) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    fn negligible(&self, _max_log2: Option<f64>) -> bool {
        Scalar::is_zero(self)
    }

    fn approx(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn precision(&self) -> Option<u32> {
        None
    }

    fn re_positive(&self) -> bool {
        self.re > <Rational as Zero>::zero()
    }

    fn im_negligible(&self, _scale: Option<f64>) -> bool {
        <Rational as Zero>::is_zero(&self.im)
    }

    fn imaginary_unit() -> Option<Self> {
        Some(GaussRational::i())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gauss(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> GaussRational {
    GaussRational::new(rat(re_n, re_d), rat(im_n, im_d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_division_roundtrip() {
        let a = gauss(3, 2, -5, 7);
        let b = gauss(1, 3, 4, 1);
        let q = a.clone() / b.clone();
        assert_eq!(q * b, a);
    }

    #[test]
    fn i_powers_cycle() {
        let i = GaussRational::i();
        assert_eq!(
            i.clone() * i.clone(),
            GaussRational::from_re(-<Rational as One>::one())
        );
        assert_eq!(GaussRational::i_pow(-1), -GaussRational::i());
        assert_eq!(GaussRational::i_pow(6), GaussRational::i_pow(2));
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rational(" 6/-8 ").unwrap(), rat(-3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
