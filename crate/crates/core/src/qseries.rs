//! Truncated Laurent series in q with exact coefficients.
//!
//! A `QSeries` stores the coefficients of q^n for `valuation ≤ n ≤ truncation`;
//! coefficients above the truncation are unknown, coefficients below the
//! valuation are zero. Every operation records the weakest truncation it can
//! certify, so precision loss is always explicit and never silent.

use crate::error::{WfError, WfResult};
use crate::iota::IotaRat;
use crate::rat::{GaussRat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Threshold above which multiplication switches to Karatsuba.
const KARATSUBA_CUTOFF: usize = 64;

/// Truncated Laurent series ∑_{n=val}^{trunc} c_n q^n + O(q^{trunc+1}).
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    val: i64,
    trunc: i64,
    coeffs: Vec<IotaRat>,
}

impl QSeries {
    /// Build from a dense coefficient block starting at `val`; trims leading
    /// zeros so the stored leading coefficient is nonzero (or the series is
    /// identically zero to order `trunc`).
    pub fn new(val: i64, trunc: i64, mut coeffs: Vec<IotaRat>) -> Self {
        if trunc < val {
            return QSeries { val: trunc + 1, trunc, coeffs: Vec::new() };
        }
        let want = (trunc - val + 1) as usize;
        coeffs.resize(want, IotaRat::zero());
        let mut s = QSeries { val, trunc, coeffs };
        s.normalize();
        s
    }

    /// Zero to order `trunc` (all coefficients up to q^trunc known to vanish).
    pub fn zero(trunc: i64) -> Self {
        QSeries { val: trunc + 1, trunc, coeffs: Vec::new() }
    }

    /// Constant `c` with coefficients known to order `trunc`.
    pub fn constant(c: IotaRat, trunc: i64) -> Self {
        Self::monomial(0, c, trunc)
    }

    pub fn one(trunc: i64) -> Self {
        Self::constant(IotaRat::one(), trunc)
    }

    /// c·q^p known to order `trunc`.
    pub fn monomial(p: i64, c: IotaRat, trunc: i64) -> Self {
        if p > trunc || c.is_zero() {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![IotaRat::zero(); (trunc - p + 1) as usize];
        coeffs[0] = c;
        QSeries { val: p, trunc, coeffs }
    }

    pub fn from_rat_coeffs(val: i64, trunc: i64, rats: Vec<Rat>) -> Self {
        Self::new(val, trunc, rats.into_iter().map(IotaRat::from_rat).collect())
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.val = self.trunc + 1;
                self.coeffs.clear();
            }
            Some(k) if k > 0 => {
                self.coeffs.drain(..k);
                self.val += k as i64;
            }
            _ => {}
        }
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn truncation(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of q^n; `None` when n exceeds the truncation.
    pub fn coeff(&self, n: i64) -> Option<IotaRat> {
        if n > self.trunc {
            return None;
        }
        if n < self.val {
            return Some(IotaRat::zero());
        }
        Some(self.coeffs[(n - self.val) as usize].clone())
    }

    /// Coefficient of q^n, panicking past the truncation.
    pub fn coeff_or_panic(&self, n: i64) -> IotaRat {
        self.coeff(n)
            .unwrap_or_else(|| panic!("coefficient q^{} beyond truncation {}", n, self.trunc))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &IotaRat)> {
        self.coeffs.iter().enumerate().map(move |(k, c)| (self.val + k as i64, c))
    }

    /// Restrict to a weaker truncation (no-op when already weaker).
    pub fn truncate(&self, new_trunc: i64) -> Self {
        if new_trunc >= self.trunc {
            return self.clone();
        }
        let keep = (new_trunc - self.val + 1).max(0) as usize;
        QSeries::new(self.val, new_trunc, self.coeffs[..keep.min(self.coeffs.len())].to_vec())
    }

    /// Multiply by q^k (exact shift of the precision window).
    pub fn shift(&self, k: i64) -> Self {
        QSeries { val: self.val + k, trunc: self.trunc + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &IotaRat) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        QSeries::new(self.val, self.trunc, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        self.scale(&IotaRat::from_rat(c.clone()))
    }

    /// True iff every stored coefficient lies in ℚ (no i, no ι).
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_plain_rat())
    }

    /// True iff every stored coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero() || c.is_integer())
    }

    /// Sound truncation for a sum.
    fn sum_trunc(&self, rhs: &Self) -> i64 {
        self.trunc.min(rhs.trunc)
    }

    /// q·d/dq applied coefficientwise; truncation unchanged.
    pub fn derivative_qddq(&self) -> Self {
        let coeffs = self
            .iter()
            .map(|(n, c)| c.scale(&GaussRat::from_i64(n)))
            .collect();
        QSeries::new(self.val, self.trunc, coeffs)
    }

    /// Multiplicative inverse. Requires an invertible leading coefficient and
    /// a nonempty precision window.
    pub fn invert(&self) -> WfResult<Self> {
        if self.is_zero() {
            return Err(WfError::NonInvertible("series is zero to its truncation".into()));
        }
        let rel = (self.trunc - self.val) as usize;
        let lead_inv = self.coeffs[0]
            .inv()
            .ok_or_else(|| WfError::NonInvertible(format!("{}", self.coeffs[0])))?;
        // b with (∑ a_{v+k} q^k)(∑ b_k q^k) = 1, then shift by −v.
        let mut b = Vec::with_capacity(rel + 1);
        b.push(lead_inv.clone());
        for n in 1..=rel {
            let mut acc = IotaRat::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &b[n - k];
            }
            b.push(&(-&acc) * &lead_inv);
        }
        let out_val = -self.val;
        let out_trunc = out_val + rel as i64;
        if out_trunc < out_val {
            return Err(WfError::EmptyPrecision("inverse has no certified coefficients".into()));
        }
        Ok(QSeries::new(out_val, out_trunc, b))
    }

    /// Integer power; negative exponents go through `invert`.
    pub fn pow(&self, e: i64) -> WfResult<Self> {
        if e == 0 {
            // a⁰ = 1 with the relative precision of a.
            return Ok(QSeries::one(self.trunc - self.val));
        }
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc: Option<QSeries> = None;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc.unwrap())
    }

    /// Exact equality of all coefficients up to the common truncation.
    pub fn agrees_with(&self, rhs: &Self) -> bool {
        let t = self.sum_trunc(rhs);
        let lo = self.val.min(rhs.val);
        if t < lo {
            return true;
        }
        (lo..=t).all(|n| self.coeff(n) == rhs.coeff(n))
    }

    /// First exponent where the two series disagree (within the common
    /// window), as a failure certificate.
    pub fn first_disagreement(&self, rhs: &Self) -> Option<i64> {
        let t = self.sum_trunc(rhs);
        let lo = self.val.min(rhs.val);
        (lo..=t).find(|&n| self.coeff(n) != rhs.coeff(n))
    }

    fn mul_dense(a: &[IotaRat], b: &[IotaRat], keep: usize) -> Vec<IotaRat> {
        if a.len().min(b.len()) >= KARATSUBA_CUTOFF {
            return Self::mul_karatsuba(a, b, keep);
        }
        let mut out = vec![IotaRat::zero(); keep];
        for (i, ai) in a.iter().enumerate() {
            if i >= keep || ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if i + j >= keep {
                    break;
                }
                if !bj.is_zero() {
                    out[i + j] += ai * bj;
                }
            }
        }
        out
    }

    fn mul_karatsuba(a: &[IotaRat], b: &[IotaRat], keep: usize) -> Vec<IotaRat> {
        let n = a.len().max(b.len());
        if n < KARATSUBA_CUTOFF {
            return Self::mul_dense(a, b, keep);
        }
        let h = n / 2;
        let (a0, a1) = a.split_at(h.min(a.len()));
        let (b0, b1) = b.split_at(h.min(b.len()));
        let z0 = Self::mul_karatsuba(a0, b0, keep);
        let z2 = if a1.is_empty() || b1.is_empty() || 2 * h >= keep {
            Vec::new()
        } else {
            Self::mul_karatsuba(a1, b1, keep.saturating_sub(2 * h))
        };
        let asum: Vec<IotaRat> = sum_padded(a0, a1);
        let bsum: Vec<IotaRat> = sum_padded(b0, b1);
        let z1full = if h >= keep {
            Vec::new()
        } else {
            Self::mul_karatsuba(&asum, &bsum, keep.saturating_sub(h))
        };
        let mut out = vec![IotaRat::zero(); keep];
        for (i, c) in z0.iter().enumerate() {
            if i < keep {
                out[i] += c.clone();
            }
        }
        for (i, c) in z1full.iter().enumerate() {
            let idx = i + h;
            if idx < keep {
                out[idx] += c.clone();
                if i < z0.len() {
                    out[idx] -= z0[i].clone();
                }
                if i < z2.len() {
                    out[idx] -= z2[i].clone();
                }
            }
        }
        for (i, c) in z2.iter().enumerate() {
            let idx = i + 2 * h;
            if idx < keep {
                out[idx] += c.clone();
            }
        }
        out
    }

    /// Serialize in the exchange dialect: rationals as decimal strings.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|c| {
                let terms: Vec<Value> = c
                    .terms()
                    .map(|(&p, g)| {
                        let mut obj = json!({
                            "iota_pow": p,
                            "num": g.re.numer().to_string(),
                            "den": g.re.denom().to_string(),
                        });
                        if !g.im.is_zero() {
                            obj["i_num"] = json!(g.im.numer().to_string());
                            obj["i_den"] = json!(g.im.denom().to_string());
                        }
                        obj
                    })
                    .collect();
                Value::Array(terms)
            })
            .collect();
        json!({
            "valuation": self.val,
            "truncation": self.trunc,
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> WfResult<Self> {
        let val = v
            .get("valuation")
            .and_then(Value::as_i64)
            .ok_or_else(|| WfError::Malformed("missing valuation".into()))?;
        let trunc = v
            .get("truncation")
            .and_then(Value::as_i64)
            .ok_or_else(|| WfError::Malformed("missing truncation".into()))?;
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| WfError::Malformed("missing coeffs".into()))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for entry in arr {
            let terms = entry
                .as_array()
                .ok_or_else(|| WfError::Malformed("coefficient must be a term list".into()))?;
            let mut c = IotaRat::zero();
            for t in terms {
                let p = t
                    .get("iota_pow")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| WfError::Malformed("missing iota_pow".into()))?;
                let re = parse_rat_fields(t, "num", "den")?;
                let im = if t.get("i_num").is_some() {
                    parse_rat_fields(t, "i_num", "i_den")?
                } else {
                    Rat::zero()
                };
                c += IotaRat::iota_term(p as i32, GaussRat::new(re, im));
            }
            coeffs.push(c);
        }
        Ok(QSeries::new(val, trunc, coeffs))
    }

    /// Plain-text rendering like `1 + 240q + 2160q^2`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = render_signed(c);
            if out.is_empty() {
                if sign {
                    out.push('-');
                }
            } else {
                out.push_str(if sign { " - " } else { " + " });
            }
            let unit_mag = mag == "1";
            match (n, unit_mag) {
                (0, _) => out.push_str(&mag),
                (1, true) => out.push('q'),
                (1, false) => {
                    out.push_str(&mag);
                    out.push('q');
                }
                (_, true) => out.push_str(&format!("q^{}", n)),
                (_, false) => out.push_str(&format!("{}q^{}", mag, n)),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn parse_rat_fields(t: &Value, num: &str, den: &str) -> WfResult<Rat> {
    let n = t
        .get(num)
        .and_then(Value::as_str)
        .ok_or_else(|| WfError::Malformed(format!("missing {}", num)))?;
    let d = t.get(den).and_then(Value::as_str).unwrap_or("1");
    let n = BigInt::from_str(n).map_err(|e| WfError::Malformed(format!("bad numerator: {}", e)))?;
    let d = BigInt::from_str(d).map_err(|e| WfError::Malformed(format!("bad denominator: {}", e)))?;
    if d.is_zero() {
        return Err(WfError::Malformed("zero denominator".into()));
    }
    Ok(Rat::new(n, d))
}

/// Render a coefficient as (is_negative, magnitude-string) for pretty output.
fn render_signed(c: &IotaRat) -> (bool, String) {
    if let Some(r) = c.as_rat() {
        let neg = r.is_negative();
        let mag = if neg { -r.clone() } else { r };
        let s = if mag.denom().is_one() {
            mag.numer().to_string()
        } else {
            format!("{}/{}", mag.numer(), mag.denom())
        };
        (neg, s)
    } else {
        (false, format!("({})", c))
    }
}

fn sum_padded(a: &[IotaRat], b: &[IotaRat]) -> Vec<IotaRat> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let mut c = IotaRat::zero();
            if i < a.len() {
                c += a[i].clone();
            }
            if i < b.len() {
                c += b[i].clone();
            }
            c
        })
        .collect()
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let trunc = self.sum_trunc(rhs);
        let val = self.val.min(rhs.val).min(trunc + 1);
        let mut coeffs = Vec::new();
        for n in val..=trunc {
            let a = self.coeff(n).unwrap_or_else(IotaRat::zero);
            let b = rhs.coeff(n).unwrap_or_else(IotaRat::zero);
            coeffs.push(&a + &b);
        }
        QSeries::new(val, trunc, coeffs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        // Sound product window: min(t_a + v_b, t_b + v_a).
        let trunc = (self.trunc + rhs.val).min(rhs.trunc + self.val);
        if self.is_zero() || rhs.is_zero() {
            return QSeries::zero(trunc);
        }
        let val = self.val + rhs.val;
        if trunc < val {
            return QSeries::zero(trunc);
        }
        let keep = (trunc - val + 1) as usize;
        let coeffs = QSeries::mul_dense(&self.coeffs, &rhs.coeffs, keep);
        QSeries::new(val, trunc, coeffs)
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
forward_owned_binop!(QSeries, Add, add, AddAssign, add_assign);
forward_owned_binop!(QSeries, Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(QSeries, Mul, mul, MulAssign, mul_assign);

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^{})", self.to_text(), self.trunc + 1)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;

    fn geom(trunc: i64) -> QSeries {
        QSeries::from_rat_coeffs(0, trunc, (0..=trunc).map(|_| Rat::one()).collect())
    }

    #[test]
    fn geometric_series_inverse() {
        // (1 − q)·(1 + q + q² + …) = 1 to the stated order.
        let one_minus_q = QSeries::from_rat_coeffs(0, 8, vec![rat_i(1), rat_i(-1)]);
        let prod = &one_minus_q * &geom(8);
        assert!(prod.agrees_with(&QSeries::one(8)));
        // invert(1 − q, N=4) = 1 + q + q² + q³ + q⁴.
        let inv = QSeries::from_rat_coeffs(0, 4, vec![rat_i(1), rat_i(-1)]).invert().unwrap();
        assert_eq!(inv, geom(4));
    }

    #[test]
    fn qddq_on_monomial() {
        let m = QSeries::monomial(3, IotaRat::one(), 10);
        let d = m.derivative_qddq();
        assert_eq!(d.coeff(3).unwrap(), IotaRat::from_i64(3));
    }

    #[test]
    fn laurent_inverse_window() {
        // a = q⁻¹(1 − q), trunc 4: relative precision 5 coefficients.
        let a = QSeries::from_rat_coeffs(-1, 4, vec![rat_i(1), rat_i(-1)]);
        let b = a.invert().unwrap();
        assert_eq!(b.valuation(), 1);
        // a·a⁻¹ = 1 on the common window.
        assert!((&a * &b).agrees_with(&QSeries::one(10)));
    }

    #[test]
    fn zero_and_precision() {
        let z = QSeries::zero(5);
        assert!(z.is_zero());
        assert!(z.invert().is_err());
        assert_eq!(z.coeff(5).unwrap(), IotaRat::zero());
        assert_eq!(z.coeff(6), None);
    }

    #[test]
    fn json_round_trip() {
        let a = QSeries::from_rat_coeffs(-2, 3, vec![rat_i(5), Rat::new(1.into(), 3.into())]);
        let j = a.to_json();
        let b = QSeries::from_json(&j).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let n = 150i64;
        let a = QSeries::from_rat_coeffs(0, n, (0..=n).map(rat_i).collect());
        let b = QSeries::from_rat_coeffs(0, n, (0..=n).map(|k| rat_i(k * k % 7 - 3)).collect());
        let keep = (n + 1) as usize;
        // Cross-check the fast path against a direct convolution.
        let fast = &a * &b;
        let mut direct = vec![IotaRat::zero(); keep];
        for i in 0..a.coeffs.len() {
            for j in 0..b.coeffs.len() {
                if i + j < keep {
                    direct[i + j] += &a.coeffs[i] * &b.coeffs[j];
                }
            }
        }
        assert_eq!(fast, QSeries::new(0, n, direct));
    }
}
