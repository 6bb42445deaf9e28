//! Laurent polynomials in the central transcendental symbol ι.
//!
//! ι stands for 2πi and is never evaluated; all identities that would
//! involve powers of π are exact in ℚ(i)[ι, ι⁻¹]. The purely rational
//! slice (no i, no ι) is what modular-form data uses; the Gaussian and
//! ι-extended parts only appear in superconnection bookkeeping.

use crate::rat::{rat_is_integer, GaussRat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Finite map ι-power → Gaussian-rational coefficient; no zero entries stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IotaRat {
    terms: BTreeMap<i32, GaussRat>,
}

impl IotaRat {
    pub fn zero() -> Self {
        IotaRat::default()
    }

    pub fn one() -> Self {
        Self::from_gauss(GaussRat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_gauss(GaussRat::from_rat(r))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rat(crate::rat::rat_i(n))
    }

    pub fn from_gauss(c: GaussRat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(0, c);
        }
        IotaRat { terms: t }
    }

    /// c·ι^p as a single term.
    pub fn iota_term(p: i32, c: GaussRat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(p, c);
        }
        IotaRat { terms: t }
    }

    /// ι itself.
    pub fn iota() -> Self {
        Self::iota_term(1, GaussRat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of ι^p.
    pub fn coeff(&self, p: i32) -> GaussRat {
        self.terms.get(&p).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &GaussRat)> {
        self.terms.iter()
    }

    /// True iff the value lies in ℚ (single ι⁰ real term, or zero).
    pub fn is_plain_rat(&self) -> bool {
        self.terms.iter().all(|(&p, c)| p == 0 && c.is_real())
    }

    /// The ℚ-value, if `is_plain_rat`.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_plain_rat() {
            Some(self.coeff(0).re)
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        match self.as_rat() {
            Some(r) => rat_is_integer(&r),
            None => false,
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut t = BTreeMap::new();
        for (&p, v) in &self.terms {
            t.insert(p, v * c);
        }
        IotaRat { terms: t }
    }

    /// Multiply by ι^p.
    pub fn mul_iota_pow(&self, p: i32) -> Self {
        let mut t = BTreeMap::new();
        for (&q, v) in &self.terms {
            t.insert(q + p, v.clone());
        }
        IotaRat { terms: t }
    }

    /// Multiplicative inverse for monomials c·ι^p; None for genuine sums.
    pub fn inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&p, c) = self.terms.iter().next().unwrap();
        Some(Self::iota_term(-p, c.inv()))
    }

    fn insert_add(&mut self, p: i32, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(p).or_insert_with(GaussRat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }
}

impl Add for &IotaRat {
    type Output = IotaRat;
    fn add(self, rhs: &IotaRat) -> IotaRat {
        let mut out = self.clone();
        for (&p, c) in &rhs.terms {
            out.insert_add(p, c.clone());
        }
        out
    }
}

impl Sub for &IotaRat {
    type Output = IotaRat;
    fn sub(self, rhs: &IotaRat) -> IotaRat {
        let mut out = self.clone();
        for (&p, c) in &rhs.terms {
            out.insert_add(p, -c);
        }
        out
    }
}

impl Mul for &IotaRat {
    type Output = IotaRat;
    fn mul(self, rhs: &IotaRat) -> IotaRat {
        let mut out = IotaRat::zero();
        for (&p, a) in &self.terms {
            for (&q, b) in &rhs.terms {
                out.insert_add(p + q, a * b);
            }
        }
        out
    }
}

impl Neg for &IotaRat {
    type Output = IotaRat;
    fn neg(self) -> IotaRat {
        let mut t = BTreeMap::new();
        for (&p, c) in &self.terms {
            t.insert(p, -c);
        }
        IotaRat { terms: t }
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
forward_owned_binop!(IotaRat, Add, add, AddAssign, add_assign);
forward_owned_binop!(IotaRat, Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(IotaRat, Mul, mul, MulAssign, mul_assign);

impl Neg for IotaRat {
    type Output = IotaRat;
    fn neg(self) -> IotaRat {
        -&self
    }
}

impl fmt::Debug for IotaRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IotaRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match p {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*iota", c)?,
                _ => write!(f, "{}*iota^{}", c, p)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn iota_is_central_and_invertible() {
        let x = IotaRat::iota_term(2, GaussRat::from_i64(3));
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, IotaRat::one());
        let a = IotaRat::from_rat(rat(1, 2)) + IotaRat::iota();
        assert_eq!(a.inv(), None);
        assert_eq!(&a * &x, &x * &a);
    }

    #[test]
    fn plain_rat_detection() {
        assert!(IotaRat::from_rat(rat(7, 3)).is_plain_rat());
        assert!(!IotaRat::iota().is_plain_rat());
        assert!(!IotaRat::from_gauss(GaussRat::i()).is_plain_rat());
        assert!(IotaRat::zero().as_rat().unwrap().is_zero());
    }
}
