//! Exact scalar arithmetic: arbitrary-precision rationals and Gaussian
//! rationals.
//!
//! Everything downstream (q-series, characteristic classes, Clifford
//! supertraces) is built over these; no floating point enters any
//! mathematical path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Arbitrary-precision rational, always reduced, denominator > 0.
pub type Rat = BigRational;

/// `n` as a rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a rational (reduced by the constructor).
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// True iff `r` is an integer.
pub fn rat_is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// True iff `r` is an integer divisible by `c`.
pub fn rat_divisible_by(r: &Rat, c: &BigInt) -> bool {
    rat_is_integer(r) && (r.numer() % c).is_zero()
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Exact factorial n!.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 2..=n {
        acc *= BigInt::from(j);
    }
    acc
}

/// Gaussian rational a + b·i with exact components.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rat(rat_i(n))
    }

    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate a − b·i.
    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Norm a² + b² (a rational, zero iff self is zero).
    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero GaussRat");
        GaussRat { re: &self.re / &n, im: -&self.im / &n }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned_binop {
    ($t:ty, $tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $atr for $t {
            fn $am(&mut self, rhs: $t) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}
forward_owned_binop!(GaussRat, Add, add, AddAssign, add_assign);
forward_owned_binop!(GaussRat, Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(GaussRat, Mul, mul, MulAssign, mul_assign);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "({}{}*i)", self.re, self.im)
        } else {
            write!(f, "({}+{}*i)", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_row() {
        let row: Vec<_> = (0..=4).map(|k| binomial(4, k)).collect();
        let expect: Vec<BigInt> = [1, 4, 6, 4, 1].iter().map(|&n| BigInt::from(n)).collect();
        assert_eq!(row, expect);
    }

    #[test]
    fn gauss_field_ops() {
        let z = GaussRat::new(rat(1, 2), rat(3, 1));
        let w = &z * &z.inv();
        assert_eq!(w, GaussRat::one());
        let i = GaussRat::i();
        assert_eq!(&i * &i, -GaussRat::one());
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn divisibility() {
        assert!(rat_divisible_by(&rat_i(24), &BigInt::from(2)));
        assert!(!rat_divisible_by(&rat(1, 2), &BigInt::from(1)));
        assert!(!rat_divisible_by(&rat_i(3), &BigInt::from(2)));
    }
}
