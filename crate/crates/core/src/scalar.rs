//! Coefficient types and the small trait tower the algorithms are generic over.
//!
//! [`Ring`] is what fraction-free elimination needs (exact division by a known
//! factor), [`Field`] adds division, and [`Scalar`] adds conjugation plus the
//! handful of hooks that let one implementation serve both the exact
//! ([`Rational`], [`Gaussian`]) and the floating ([`Complex64`]) code paths.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_complex::Complex64;

pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;

    /// Divides by `rhs` where the quotient is known to exist in the ring.
    fn exact_div(&self, rhs: &Self) -> Self;

    /// Preference when choosing an elimination pivot; larger is better and
    /// zero means unusable.
    fn pivot_score(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

pub trait Field: Ring + Div<Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Entry type for matrices that carry an adjoint.
pub trait Scalar: Field + Send + Sync + 'static {
    /// `true` when arithmetic never rounds; residual checks then demand exact zeros.
    const EXACT: bool;

    fn conj(&self) -> Self;

    /// Modulus as a float. Nonzero exact values never report 0.0.
    fn magnitude(&self) -> f64;

    fn to_c64(&self) -> Complex64;

    /// `1/sqrt(x)` for a positive real `x`, available only in floating mode.
    fn inv_sqrt(x: &Self) -> Option<Self>;

    fn from_c64(z: Complex64) -> Option<Self>;

    /// Guess for the value a computed `z` approximates: `z` itself in floating
    /// mode, a nearby small-denominator value in exact mode.
    fn snap(z: Complex64) -> Option<Self>;
}

/// Denominator bound used by [`Scalar::snap`].
pub const SNAP_DEN: u64 = 1_000_000;

/// Exact coefficient fields.
pub trait ExactField: Scalar + fmt::Display + FromStr<Err = String> {
    fn from_rational(r: Rational) -> Self;

    /// Best exact value near `z` with denominators bounded by `max_den`.
    fn rationalize(z: Complex64, max_den: u64) -> Option<Self>;
}

/// Arbitrary-precision rational in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact value of a finite float.
    pub fn from_f64_exact(x: f64) -> Option<Rational> {
        BigRational::from_float(x).map(Rational)
    }

    /// Continued-fraction approximation of `x` with denominator at most `max_den`.
    pub fn approximate(x: f64, max_den: u64) -> Option<Rational> {
        if !x.is_finite() {
            return None;
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
        let mut r = x;
        for _ in 0..64 {
            let a = r.floor();
            if a.abs() > 1e15 {
                break;
            }
            let a = a as i128;
            let p2 = a * p1 + p0;
            let q2 = a * q1 + q0;
            if q2 > max_den as i128 {
                break;
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = r - a as f64;
            if frac.abs() < 1e-12 {
                break;
            }
            r = 1.0 / frac;
        }
        if q1 == 0 {
            return None;
        }
        Some(Rational::from_big(BigInt::from(p1), BigInt::from(q1)))
    }

    fn parse_decimal(s: &str) -> Option<Rational> {
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.')?;
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::from_big(digits, den);
        Some(if neg { -r } else { r })
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `p`, `p/q` and plain decimals such as `-0.25`.
impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            return Ok(Rational::from_big(p, q));
        }
        if let Ok(p) = s.parse::<BigInt>() {
            return Ok(Rational(BigRational::from_integer(p)));
        }
        Rational::parse_decimal(s).ok_or_else(|| format!("not a rational number: {s:?}"))
    }
}

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $m:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                $ty(self.0.$m(rhs.0))
            }
        }
    };
}

forward_binop!(Rational, Add, add);
forward_binop!(Rational, Sub, sub);
forward_binop!(Rational, Mul, mul);
forward_binop!(Rational, Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }
}

impl Field for Rational {}

fn tiny_guard(x: f64, is_zero: bool) -> f64 {
    if is_zero {
        0.0
    } else if x == 0.0 || x.is_nan() {
        f64::MIN_POSITIVE
    } else {
        x
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        self.clone()
    }
    fn magnitude(&self) -> f64 {
        tiny_guard(self.to_f64().abs(), self.is_zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
    fn inv_sqrt(_: &Self) -> Option<Self> {
        None
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        if z.im != 0.0 {
            return None;
        }
        Rational::from_f64_exact(z.re)
    }
    fn snap(z: Complex64) -> Option<Self> {
        Self::rationalize(z, SNAP_DEN)
    }
}

impl ExactField for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn rationalize(z: Complex64, max_den: u64) -> Option<Self> {
        if z.im.abs() > 1e-9 * (1.0 + z.re.abs()) {
            return None;
        }
        Rational::approximate(z.re, max_den)
    }
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn i() -> Self {
        Gaussian::new(Rational::zero(), Rational::one())
    }

    pub fn norm_sqr(&self) -> Rational {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl From<Rational> for Gaussian {
    fn from(re: Rational) -> Self {
        Gaussian::new(re, Rational::zero())
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Always written as `re+imi` / `re-imi` so the file grammar stays regular.
impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Index of the sign separating real and imaginary parts of `a+bi` / `a-bi`.
pub(crate) fn split_complex(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    (1..bytes.len()).rev().find(|&k| {
        (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E' | b'/')
    })
}

impl FromStr for Gaussian {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Gaussian::from(s.parse::<Rational>()?));
        };
        match split_complex(body) {
            Some(k) => {
                let re: Rational = body[..k].parse()?;
                let im_txt = &body[k..];
                let im: Rational = match im_txt {
                    "+" => Rational::one(),
                    "-" => -Rational::one(),
                    _ => im_txt.trim_start_matches('+').parse()?,
                };
                Ok(Gaussian::new(re, im))
            }
            None => {
                let im = match body {
                    "" | "+" => Rational::one(),
                    "-" => -Rational::one(),
                    _ => body.parse()?,
                };
                Ok(Gaussian::new(Rational::zero(), im))
            }
        }
    }
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: Gaussian) -> Gaussian {
        Gaussian::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: Gaussian) -> Gaussian {
        Gaussian::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: Gaussian) -> Gaussian {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Gaussian::new(re, im)
    }
}

impl Div for Gaussian {
    type Output = Gaussian;
    fn div(self, rhs: Gaussian) -> Gaussian {
        let n = rhs.norm_sqr();
        assert!(!n.is_zero(), "division by zero");
        let num = self * rhs.conj();
        Gaussian::new(num.re / n.clone(), num.im / n)
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re, -self.im)
    }
}

impl Ring for Gaussian {
    fn zero() -> Self {
        Gaussian::default()
    }
    fn one() -> Self {
        Gaussian::from(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Gaussian::from(Rational::from_i64(v))
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }
}

impl Field for Gaussian {}

impl Scalar for Gaussian {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }
    fn magnitude(&self) -> f64 {
        tiny_guard(self.to_c64().norm(), self.is_zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
    fn inv_sqrt(_: &Self) -> Option<Self> {
        None
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(Gaussian::new(
            Rational::from_f64_exact(z.re)?,
            Rational::from_f64_exact(z.im)?,
        ))
    }
    fn snap(z: Complex64) -> Option<Self> {
        Self::rationalize(z, SNAP_DEN)
    }
}

impl ExactField for Gaussian {
    fn from_rational(r: Rational) -> Self {
        Gaussian::from(r)
    }
    fn rationalize(z: Complex64, max_den: u64) -> Option<Self> {
        Some(Gaussian::new(
            Rational::approximate(z.re, max_den)?,
            Rational::approximate(z.im, max_den)?,
        ))
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn pivot_score(&self) -> f64 {
        self.norm()
    }
}

impl Field for Complex64 {}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn inv_sqrt(x: &Self) -> Option<Self> {
        (x.re > 0.0).then(|| Complex64::new(1.0 / x.re.sqrt(), 0.0))
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }
    fn snap(z: Complex64) -> Option<Self> {
        Some(z)
    }
}

/// Total order on complex numbers used for sorted spectra: real part, then imaginary.
pub fn cmp_c64(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}
