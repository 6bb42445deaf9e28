//! The standard q-series: Bernoulli numbers, Eisenstein series, the
//! φ-product, the Dedekind η-function, and the two expansions of the
//! Weierstrass σ-function.
//!
//! Eisenstein normalization: we store the rational series
//! Ê_{2k} = 1 − (4k/B_{2k})·∑σ_{2k−1}(n)qⁿ, and the geometric combination
//! D_{2k} := −(B_{2k}/(2k)!)·Ê_{2k}, which is exactly E_{2k}/(2πi)^{2k}
//! under the lattice-sum convention E_{2k} = 2ζ(2k)·Ê_{2k}. All downstream
//! curvature formulas consume D_{2k}, so π never appears.

use crate::error::{WfError, WfResult};
use crate::iota::IotaRat;
use crate::qseries::QSeries;
use crate::rat::{binomial, factorial, rat, rat_i, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact Bernoulli number B_m for even m ≥ 2 (convention B₂ = 1/6).
pub fn bernoulli(m: u64) -> WfResult<Rat> {
    if m < 2 || m % 2 != 0 {
        return Err(WfError::InvalidArgument(format!(
            "bernoulli wants even m ≥ 2, got {}",
            m
        )));
    }
    Ok(bernoulli_table(m)[m as usize].clone())
}

/// B_0..B_m via ∑_{k=0}^{m} C(m+1,k)·B_k = 0.
fn bernoulli_table(m: u64) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(m as usize + 1);
    b.push(Rat::one());
    for n in 1..=m {
        let mut acc = Rat::zero();
        for k in 0..n {
            acc += Rat::from_integer(binomial(n + 1, k)) * &b[k as usize];
        }
        b.push(-acc / Rat::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// Divisor power sum σ_m(n) = ∑_{d | n} d^m.
pub fn sigma_divisor(m: u32, n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(m);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(m);
            }
        }
        d += 1;
    }
    acc
}

/// Normalized Eisenstein series Ê_{2k} of even weight `weight` ≥ 2, to order N.
pub fn eisenstein_q(weight: u64, n: i64) -> WfResult<QSeries> {
    if weight < 2 || weight % 2 != 0 {
        return Err(WfError::InvalidArgument(format!(
            "eisenstein weight must be even ≥ 2, got {}",
            weight
        )));
    }
    if n < 0 {
        return Err(WfError::InvalidArgument("negative truncation".into()));
    }
    let b = bernoulli(weight)?;
    // −(2·weight)/B_weight, i.e. −4k/B_{2k}.
    let factor = -Rat::from_integer(BigInt::from(2 * weight)) / b;
    let mut coeffs = vec![Rat::one()];
    for j in 1..=n {
        coeffs.push(&factor * Rat::from_integer(sigma_divisor(weight as u32 - 1, j as u64)));
    }
    Ok(QSeries::from_rat_coeffs(0, n, coeffs))
}

/// D_{2k} := −(B_{2k}/(2k)!)·Ê_{2k}, the exact rational stand-in for
/// E_{2k}/(2πi)^{2k}.
pub fn eisenstein_geometric(weight: u64, n: i64) -> WfResult<QSeries> {
    let e = eisenstein_q(weight, n)?;
    let scale = -(bernoulli(weight)? / Rat::from_integer(factorial(weight)));
    Ok(e.scale_rat(&scale))
}

/// φ(q) = ∏_{m>0}(1 − q^m), truncated at order N.
pub fn phi_product(n: i64) -> QSeries {
    let mut acc = QSeries::one(n);
    for m in 1..=n.max(0) {
        let mut c = vec![IotaRat::zero(); (n + 1) as usize];
        c[0] = IotaRat::one();
        c[m as usize] = IotaRat::from_i64(-1);
        acc = &acc * &QSeries::new(0, n, c);
    }
    acc
}

/// Dedekind η = q^{1/24}·∏(1−qⁿ): a fractional q-power times an honest series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracPowerSeries {
    /// Exponent a of the q^a prefactor; denominator divides 24.
    pub prefactor_exponent: Rat,
    /// Body series with valuation 0.
    pub body: QSeries,
}

impl FracPowerSeries {
    pub fn new(prefactor_exponent: Rat, body: QSeries) -> WfResult<Self> {
        if body.valuation() != 0 && !body.is_zero() {
            return Err(WfError::InvalidArgument(
                "FracPowerSeries body must have valuation 0".into(),
            ));
        }
        let den = prefactor_exponent.denom();
        if (BigInt::from(24) % den) != BigInt::zero() {
            return Err(WfError::InvalidArgument(
                "prefactor exponent denominator must divide 24".into(),
            ));
        }
        Ok(FracPowerSeries { prefactor_exponent, body })
    }

    /// k-th power: exponents add, bodies multiply.
    pub fn pow(&self, k: i64) -> WfResult<Self> {
        let body = self.body.pow(k)?;
        FracPowerSeries::new(&self.prefactor_exponent * rat_i(k), body)
    }

    /// When the total prefactor exponent is an integer, fold it into the body
    /// as an honest q-shift.
    pub fn to_qseries(&self) -> Option<QSeries> {
        if self.prefactor_exponent.denom().is_one() {
            let k: i64 = self.prefactor_exponent.numer().try_into().ok()?;
            Some(self.body.shift(k))
        } else {
            None
        }
    }

    pub fn to_text(&self) -> String {
        if self.prefactor_exponent.is_zero() {
            return self.body.to_text();
        }
        let e = &self.prefactor_exponent;
        let exp = if e.denom().is_one() {
            format!("{}", e.numer())
        } else {
            format!("{}/{}", e.numer(), e.denom())
        };
        format!("q^{{{}}}({})", exp, self.body.to_text())
    }
}

impl fmt::Display for FracPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// η(q) = q^{1/24}·φ(q) to body order N.
pub fn dedekind_eta(n: i64) -> FracPowerSeries {
    FracPowerSeries::new(rat(1, 24), phi_product(n)).expect("eta prefactor is 1/24")
}

/// Bivariate truncated series in (q, z): per q-power a polynomial in z of
/// degree ≤ z_order. q-valuation is fixed at 0, which covers every series this
/// crate manipulates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiSeries {
    pub q_trunc: i64,
    pub z_order: usize,
    /// data[m][j] = coefficient of q^m z^j.
    data: Vec<Vec<IotaRat>>,
}

impl BiSeries {
    pub fn zero(q_trunc: i64, z_order: usize) -> Self {
        let rows = (q_trunc + 1).max(0) as usize;
        BiSeries {
            q_trunc,
            z_order,
            data: vec![vec![IotaRat::zero(); z_order + 1]; rows],
        }
    }

    pub fn one(q_trunc: i64, z_order: usize) -> Self {
        let mut s = Self::zero(q_trunc, z_order);
        s.data[0][0] = IotaRat::one();
        s
    }

    pub fn coeff(&self, q_pow: i64, z_pow: usize) -> IotaRat {
        if q_pow < 0 || q_pow > self.q_trunc || z_pow > self.z_order {
            return IotaRat::zero();
        }
        self.data[q_pow as usize][z_pow].clone()
    }

    pub fn set(&mut self, q_pow: i64, z_pow: usize, c: IotaRat) {
        self.data[q_pow as usize][z_pow] = c;
    }

    /// The z-polynomial slice at a fixed q-power.
    pub fn q_slice(&self, q_pow: i64) -> Vec<IotaRat> {
        self.data[q_pow as usize].clone()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let q = self.q_trunc.min(rhs.q_trunc);
        let z = self.z_order.min(rhs.z_order);
        let mut out = Self::zero(q, z);
        for m in 0..=q {
            for j in 0..=z {
                out.data[m as usize][j] = &self.coeff(m, j) + &rhs.coeff(m, j);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let q = self.q_trunc.min(rhs.q_trunc);
        let z = self.z_order.min(rhs.z_order);
        let mut out = Self::zero(q, z);
        for m1 in 0..=q {
            for j1 in 0..=z {
                let a = self.coeff(m1, j1);
                if a.is_zero() {
                    continue;
                }
                for m2 in 0..=(q - m1) {
                    for j2 in 0..=(z - j1) {
                        let b = rhs.coeff(m2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        let cur = out.coeff(m1 + m2, j1 + j2);
                        out.set(m1 + m2, j1 + j2, &cur + &(&a * &b));
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &IotaRat) -> Self {
        let mut out = self.clone();
        for row in &mut out.data {
            for v in row {
                *v = &*v * c;
            }
        }
        out
    }

    /// Multiply by a plain q-series (z-degree 0).
    pub fn mul_qseries(&self, s: &QSeries) -> Self {
        assert!(s.valuation() >= 0, "q-valuation must be nonnegative here");
        let q = self.q_trunc.min(s.truncation());
        let mut out = Self::zero(q, self.z_order);
        for m1 in 0..=q {
            for j in 0..=self.z_order {
                let a = self.coeff(m1, j);
                if a.is_zero() {
                    continue;
                }
                for m2 in 0..=(q - m1) {
                    let b = s.coeff(m2).unwrap_or_else(IotaRat::zero);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.coeff(m1 + m2, j);
                    out.set(m1 + m2, j, &cur + &(&a * &b));
                }
            }
        }
        out
    }

    /// exp of a series with zero (q⁰, z⁰)-part... the z⁰ column may be nonzero
    /// in positive q-powers; termination comes from q- and z-truncation.
    pub fn exp(&self) -> WfResult<Self> {
        if !self.coeff(0, 0).is_zero() {
            return Err(WfError::InvalidArgument(
                "exp needs vanishing constant term".into(),
            ));
        }
        let mut acc = Self::one(self.q_trunc, self.z_order);
        let mut term = Self::one(self.q_trunc, self.z_order);
        // Each factor of self raises (q-order + z-order); the loop bound covers
        // the worst case.
        let bound = (self.q_trunc.max(0) as usize) + self.z_order + 1;
        for k in 1..=bound {
            term = term.mul(self);
            if term.data.iter().all(|row| row.iter().all(|c| c.is_zero())) {
                break;
            }
            let inv_k = IotaRat::from_rat(Rat::new(BigInt::one(), BigInt::from(k)));
            acc = acc.add(&term.scale(&inv_k));
        }
        Ok(acc)
    }

    /// All z-odd coefficients vanish.
    pub fn is_even_in_z(&self) -> bool {
        self.data
            .iter()
            .all(|row| row.iter().skip(1).step_by(2).all(|c| c.is_zero()))
    }
}

/// Expansion strategy for the Weierstrass σ-function.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SigmaMode {
    /// σ = sinh(z/2)/(z/2) · ∏_{k>0} (1−q^k e^z)(1−q^k e^{−z})/(1−q^k)².
    Product,
    /// σ = exp(−∑_{k≥1} D_{2k}(q) z^{2k}/(2k)).
    Exponential,
}

/// e^{c·z} as a z-polynomial of degree ≤ z_order, exact factorials.
fn exp_z(c: &Rat, q_trunc: i64, z_order: usize) -> BiSeries {
    let mut out = BiSeries::zero(q_trunc, z_order);
    let mut coef = Rat::one();
    for j in 0..=z_order {
        if j > 0 {
            coef = coef * c / Rat::from_integer(BigInt::from(j));
        }
        out.set(0, j, IotaRat::from_rat(coef.clone()));
    }
    out
}

/// Both expansions of σ(τ, z); their coefficientwise agreement is the module's
/// flagship identity check.
pub fn weierstrass_sigma(mode: SigmaMode, n_q: i64, m_z: usize) -> WfResult<BiSeries> {
    match mode {
        SigmaMode::Product => {
            // sinh(z/2)/(z/2) = ∑_j z^{2j} / (4^j (2j+1)!).
            let mut sigma0 = BiSeries::zero(n_q, m_z);
            let mut j = 0usize;
            while 2 * j <= m_z {
                let den = Rat::from_integer(BigInt::from(4).pow(j as u32) * factorial(2 * j as u64 + 1));
                sigma0.set(0, 2 * j, IotaRat::from_rat(Rat::one() / den));
                j += 1;
            }
            let mut acc = sigma0;
            let e_pos = exp_z(&Rat::one(), n_q, m_z);
            let e_neg = exp_z(&-Rat::one(), n_q, m_z);
            for k in 1..=n_q.max(0) {
                // (1 − q^k e^z)(1 − q^k e^{−z})
                let mut f_pos = BiSeries::one(n_q, m_z);
                let mut f_neg = BiSeries::one(n_q, m_z);
                for j in 0..=m_z {
                    if k <= n_q {
                        f_pos.set(k, j, -e_pos.coeff(0, j));
                        f_neg.set(k, j, -e_neg.coeff(0, j));
                    }
                }
                acc = acc.mul(&f_pos).mul(&f_neg);
                // divide by (1 − q^k)²
                let one_minus_qk = QSeries::new(
                    0,
                    n_q,
                    {
                        let mut c = vec![IotaRat::zero(); (n_q + 1) as usize];
                        c[0] = IotaRat::one();
                        if k <= n_q {
                            c[k as usize] = IotaRat::from_i64(-1);
                        }
                        c
                    },
                );
                let inv_sq = one_minus_qk.invert()?.pow(2)?;
                acc = acc.mul_qseries(&inv_sq);
            }
            Ok(acc)
        }
        SigmaMode::Exponential => {
            let mut exponent = BiSeries::zero(n_q, m_z);
            let mut k = 1u64;
            while (2 * k) as usize <= m_z {
                let d = eisenstein_geometric(2 * k, n_q)?;
                // − D_{2k}(q) z^{2k} / (2k)
                let scale = rat(-1, 2 * k as i64);
                for m in 0..=n_q {
                    let c = d.coeff(m).unwrap_or_else(IotaRat::zero);
                    let prev = exponent.coeff(m, (2 * k) as usize);
                    exponent.set(m, (2 * k) as usize, &prev + &c.scale(&crate::rat::GaussRat::from_rat(scale.clone())));
                }
                k += 1;
            }
            exponent.exp()
        }
    }
}

/// Euler's pentagonal-number expansion of φ(q); used as the independent
/// oracle against the literal product.
pub fn phi_pentagonal(n: i64) -> QSeries {
    let mut coeffs = vec![Rat::zero(); (n + 1).max(0) as usize];
    if n >= 0 {
        coeffs[0] = Rat::one();
    }
    let mut k: i64 = 1;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 > n && g2 > n {
            break;
        }
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        if g1 <= n {
            coeffs[g1 as usize] += &sign;
        }
        if g2 <= n {
            coeffs[g2 as usize] += &sign;
        }
        k += 1;
    }
    QSeries::from_rat_coeffs(0, n, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_frozen_values() {
        // Frozen via the Akiyama–Tanigawa oracle below.
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(0).is_err());
        for m in [2u64, 4, 6, 8, 10, 12, 14, 16] {
            assert_eq!(bernoulli(m).unwrap(), akiyama_tanigawa(m));
        }
    }

    /// Independent Bernoulli oracle (Akiyama–Tanigawa algorithm).
    fn akiyama_tanigawa(m: u64) -> Rat {
        let n = m as usize;
        let mut row: Vec<Rat> = (0..=n)
            .map(|j| Rat::new(BigInt::one(), BigInt::from(j as u64 + 1)))
            .collect();
        for j in 1..=n {
            for k in (j..=n).rev() {
                let diff = &row[k - 1] - &row[k];
                row[k] = Rat::from_integer(BigInt::from(k as u64)) * diff;
            }
        }
        // This produces B_n with B₁ = +1/2; even indices are unaffected.
        row[n].clone()
    }

    #[test]
    fn eisenstein_frozen_series() {
        let e2 = eisenstein_q(2, 3).unwrap();
        assert_eq!(e2.to_text(), "1 - 24q - 72q^2 - 96q^3");
        let e4 = eisenstein_q(4, 2).unwrap();
        assert_eq!(e4.to_text(), "1 + 240q + 2160q^2");
        let e6 = eisenstein_q(6, 1).unwrap();
        assert_eq!(e6.to_text(), "1 - 504q");
    }

    #[test]
    fn eisenstein_geometric_values() {
        let d2 = eisenstein_geometric(2, 1).unwrap();
        assert_eq!(d2.coeff(0).unwrap().as_rat().unwrap(), rat(-1, 12));
        assert_eq!(d2.coeff(1).unwrap().as_rat().unwrap(), rat_i(2));
        let d4 = eisenstein_geometric(4, 0).unwrap();
        assert_eq!(d4.coeff(0).unwrap().as_rat().unwrap(), rat(1, 720));
        let d6 = eisenstein_geometric(6, 0).unwrap();
        assert_eq!(d6.coeff(0).unwrap().as_rat().unwrap(), rat(-1, 30240));
        assert!(d2.is_rational());
    }

    #[test]
    fn phi_product_expansions() {
        assert_eq!(phi_product(2).to_text(), "1 - q - q^2");
        assert_eq!(phi_product(7).to_text(), "1 - q - q^2 + q^5 + q^7");
        assert_eq!(phi_product(0).to_text(), "1");
        // Pentagonal oracle to N = 200.
        assert!(phi_product(200).agrees_with(&phi_pentagonal(200)));
    }

    #[test]
    fn eta_and_its_powers() {
        let eta = dedekind_eta(1);
        assert_eq!(eta.to_text(), "q^{1/24}(1 - q)");
        let eta24 = eta.pow(24).unwrap();
        assert_eq!(eta24.prefactor_exponent, Rat::one());
        let delta = eta24.to_qseries().unwrap();
        assert_eq!(delta.valuation(), 1);
    }

    #[test]
    fn sigma_q0_slice_is_normalized_sinh() {
        let s = weierstrass_sigma(SigmaMode::Product, 2, 6).unwrap();
        assert_eq!(s.coeff(0, 0), IotaRat::one());
        assert_eq!(s.coeff(0, 2).as_rat().unwrap(), rat(1, 24));
        assert_eq!(s.coeff(0, 4).as_rat().unwrap(), rat(1, 1920));
    }

    #[test]
    fn sigma_modes_agree_smoke() {
        let p = weierstrass_sigma(SigmaMode::Product, 6, 6).unwrap();
        let e = weierstrass_sigma(SigmaMode::Exponential, 6, 6).unwrap();
        assert_eq!(p, e);
        assert!(p.is_even_in_z());
        // z⁰ slice of the exponential mode is 1.
        for m in 1..=6 {
            assert!(e.coeff(m, 0).is_zero());
        }
    }
}
