//! Reduced rational functions in λ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::{poly_gcd, Poly};
use crate::scalar::{ExactField, Field, Ring};

/// `num / den` with `den` monic and `gcd(num, den) = 1`, so equality is structural.
#[derive(Clone, PartialEq)]
pub struct RatFun<S> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Field> RatFun<S> {
    /// Reduces `num / den`. Panics if `den` is zero.
    pub fn new(num: Poly<S>, den: Poly<S>) -> Self {
        let lc = den.leading().expect("rational function with zero denominator").clone();
        if num.is_zero() {
            return Self::zero();
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let inv = den.leading().map_or(lc, Clone::clone).inv();
        RatFun {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn lambda() -> Self {
        Self::from_poly(Poly::lambda())
    }

    pub fn num(&self) -> &Poly<S> {
        &self.num
    }

    pub fn den(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Value at `x`; `None` at a pole.
    pub fn eval(&self, x: &S) -> Option<S> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl<S: Field> Add for RatFun<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return RatFun::new(self.num + rhs.num, self.den);
        }
        RatFun::new(
            self.num * rhs.den.clone() + rhs.num * self.den.clone(),
            self.den * rhs.den,
        )
    }
}

impl<S: Field> Sub for RatFun<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Field> Mul for RatFun<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        RatFun::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl<S: Field> Div for RatFun<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "rational function division by zero");
        RatFun::new(self.num * rhs.den, self.den * rhs.num)
    }
}

impl<S: Field> Neg for RatFun<S> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFun {
            num: -self.num,
            den: self.den,
        }
    }
}

impl<S: Field> Ring for RatFun<S> {
    fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(S::from_i64(v))
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }
}

impl<S: Field> Field for RatFun<S> {}

impl<S: fmt::Debug> fmt::Debug for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

/// `num / den`, or just `num` when the denominator is 1. Multi-term sides are parenthesized.
impl<S: ExactField> fmt::Display for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return write!(f, "{}", self.num);
        }
        write!(f, "{} / {}", grouped(&self.num), grouped(&self.den))
    }
}

fn grouped<S: ExactField>(p: &Poly<S>) -> String {
    let terms = p.coeffs().iter().filter(|c| !c.is_zero()).count();
    if terms > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(c.iter().map(|&v| Rational::from_i64(v)).collect())
    }

    #[test]
    fn normalization_is_canonical() {
        // (2λ−2)/(4λ²−4) = (1/2)/(λ+1)
        let a = RatFun::new(p(&[-2, 2]), p(&[-4, 0, 4]));
        let b = RatFun::new(Poly::constant(Rational::new(1, 2)), p(&[1, 1]));
        assert_eq!(a, b);
        assert!(a.den().is_monic());
        assert_eq!(RatFun::new(a.num().clone(), a.den().clone()), a);
    }

    #[test]
    fn arithmetic_identities() {
        let l = RatFun::<Rational>::lambda();
        let inv = RatFun::one() / l.clone();
        // λ − 1/λ = (λ²−1)/λ
        let d = l.clone() - inv.clone();
        assert_eq!(d, RatFun::new(p(&[-1, 0, 1]), p(&[0, 1])));
        assert_eq!(d.to_string(), "(λ^2 - 1) / λ");
        assert_eq!(inv.clone() * l, RatFun::one());
        assert_eq!(inv.eval(&Rational::from_i64(2)), Some(Rational::new(1, 2)));
        assert_eq!(inv.eval(&Rational::zero()), None);
    }
}
