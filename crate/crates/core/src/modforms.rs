//! Modular forms as weight-tagged q-series: holomorphic and weakly
//! holomorphic bases in reduced row-echelon form, integrality tests, and
//! order computation in the quotient groups ℂ((q))/(c·ℤ((q)) + MF_w).
//!
//! The quotient computations take MF_w to be the ℚ-span of the weakly
//! holomorphic basis with pole bound P; the (P, N) pair is carried in every
//! answer since membership failures at higher precision are possible.

use crate::error::{WfError, WfResult};
use crate::qseries::QSeries;
use crate::rat::{rat_divisible_by, Rat};
use crate::special::{eisenstein_q, phi_product};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Weight-tagged q-series with a pole-order bound (0 = holomorphic at i∞).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModularForm {
    pub weight: i64,
    pub series: QSeries,
    pub pole_order: u32,
}

impl ModularForm {
    pub fn new(weight: i64, series: QSeries, pole_order: u32) -> WfResult<Self> {
        if weight % 2 != 0 {
            return Err(WfError::InvalidArgument("weight must be even".into()));
        }
        if !series.is_rational() {
            return Err(WfError::InvalidArgument(
                "modular-form series must have rational coefficients".into(),
            ));
        }
        if series.valuation() < -(pole_order as i64) {
            return Err(WfError::InvalidArgument(format!(
                "valuation {} below pole bound {}",
                series.valuation(),
                pole_order
            )));
        }
        Ok(ModularForm { weight, series, pole_order })
    }
}

/// Row-reduced basis: leading exponents strictly increasing, pivots 1, and
/// pivot exponents eliminated from all other rows.
#[derive(Clone, Debug)]
pub struct MFBasis {
    pub weight: i64,
    pub pole_bound: u32,
    pub truncation: i64,
    pub forms: Vec<ModularForm>,
}

impl MFBasis {
    pub fn dimension(&self) -> usize {
        self.forms.len()
    }

    pub fn pivots(&self) -> Vec<i64> {
        self.forms.iter().map(|f| f.series.valuation()).collect()
    }

    /// True iff every basis element has integer coefficients. Miller-style
    /// level-1 bases do; the c-divisibility decision in `class_order` is
    /// exact (not just sufficient) precisely in that case.
    pub fn is_integral(&self) -> bool {
        self.forms.iter().all(|f| f.series.is_integral())
    }
}

/// dim M_w(SL₂(ℤ)) for even w ≥ 0.
pub fn dim_holomorphic(w: i64) -> usize {
    if w < 0 || w % 2 != 0 {
        return 0;
    }
    let r = (w % 12) as usize;
    let q = (w / 12) as usize;
    if r == 2 {
        q
    } else {
        q + 1
    }
}

/// Reduced row echelon form keyed by leading q-exponent, pivots normalized
/// to 1 and cleared from every other row.
fn row_reduce(rows: Vec<QSeries>, trunc: i64) -> Vec<QSeries> {
    let mut rows: Vec<QSeries> = rows
        .into_iter()
        .map(|r| r.truncate(trunc))
        .filter(|r| !r.is_zero())
        .collect();
    let mut out: Vec<QSeries> = Vec::new();
    loop {
        rows.retain(|r| !r.is_zero());
        if rows.is_empty() {
            break;
        }
        // Pivot: row of minimal valuation.
        let (idx, _) = rows
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| r.valuation())
            .map(|(i, r)| (i, r.valuation()))
            .unwrap();
        let mut pivot = rows.swap_remove(idx);
        let p = pivot.valuation();
        let lead = pivot
            .coeff(p)
            .unwrap()
            .as_rat()
            .expect("rational coefficients");
        pivot = pivot.scale_rat(&(Rat::one() / lead));
        for r in rows.iter_mut() {
            let c = r.coeff(p).unwrap().as_rat().expect("rational coefficients");
            if !c.is_zero() {
                *r = &*r - &pivot.scale_rat(&c);
            }
        }
        for r in out.iter_mut() {
            let c = r.coeff(p).unwrap().as_rat().expect("rational coefficients");
            if !c.is_zero() {
                *r = &*r - &pivot.scale_rat(&c);
            }
        }
        out.push(pivot);
    }
    out.sort_by_key(|r| r.valuation());
    out
}

/// Holomorphic basis of M_w: row-reduced monomials Ê₄^a Ê₆^b with 4a+6b = w.
pub fn mf_basis(weight: i64, trunc: i64) -> WfResult<MFBasis> {
    if weight < 0 || weight % 2 != 0 {
        return Err(WfError::InvalidArgument(format!(
            "holomorphic basis wants even weight ≥ 0, got {}",
            weight
        )));
    }
    let mut rows = Vec::new();
    if weight == 0 {
        rows.push(QSeries::one(trunc));
    } else {
        let e4 = eisenstein_q(4, trunc)?;
        let e6 = eisenstein_q(6, trunc)?;
        let mut a = 0i64;
        while 4 * a <= weight {
            let rem = weight - 4 * a;
            if rem % 6 == 0 {
                let b = rem / 6;
                rows.push(&e4.pow(a)? * &e6.pow(b)?);
            }
            a += 1;
        }
    }
    let forms = row_reduce(rows, trunc)
        .into_iter()
        .map(|s| ModularForm::new(weight, s, 0))
        .collect::<WfResult<Vec<_>>>()?;
    let basis = MFBasis { weight, pole_bound: 0, truncation: trunc, forms };
    debug_assert_eq!(basis.dimension(), dim_holomorphic(weight));
    Ok(basis)
}

/// Δ = (Ê₄³ − Ê₆²)/1728 = η²⁴, the weight-12 cusp form, to order N ≥ 1.
pub fn delta(trunc: i64) -> WfResult<ModularForm> {
    if trunc < 1 {
        return Err(WfError::InvalidArgument("delta needs order ≥ 1".into()));
    }
    let e4 = eisenstein_q(4, trunc)?;
    let e6 = eisenstein_q(6, trunc)?;
    let num = &e4.pow(3)? - &e6.pow(2)?;
    let series = num.scale_rat(&Rat::new(BigInt::one(), BigInt::from(1728)));
    ModularForm::new(12, series, 0)
}

/// Weakly holomorphic basis with poles ≤ P, realized as Δ^{−P}·M_{w+12P}
/// and row-reduced.
pub fn weakly_holo_basis(weight: i64, pole_bound: u32, trunc: i64) -> WfResult<MFBasis> {
    if weight % 2 != 0 {
        return Err(WfError::InvalidArgument("weight must be even".into()));
    }
    let p = pole_bound as i64;
    if weight + 12 * p < 0 {
        return Err(WfError::InvalidArgument(format!(
            "w + 12P = {} is negative",
            weight + 12 * p
        )));
    }
    // Work with enough slack that every product is certified to `trunc`.
    let work = trunc + 2 * p + 4;
    let holo = mf_basis(weight + 12 * p, work)?;
    let rows: Vec<QSeries> = if p == 0 {
        holo.forms.into_iter().map(|f| f.series).collect()
    } else {
        let delta_inv_p = delta(work)?.series.invert()?.pow(p)?;
        holo.forms
            .into_iter()
            .map(|f| &f.series * &delta_inv_p)
            .collect()
    };
    let forms = row_reduce(rows, trunc)
        .into_iter()
        .map(|s| {
            let po = (-s.valuation()).max(0) as u32;
            ModularForm::new(weight, s, po.max(0))
        })
        .collect::<WfResult<Vec<_>>>()?;
    Ok(MFBasis { weight, pole_bound, truncation: trunc, forms })
}

/// Eliminate the basis pivots from f; returns the remainder and the
/// coordinates used. The remainder vanishes at every pivot exponent.
pub fn reduce_against_basis(f: &QSeries, basis: &MFBasis) -> WfResult<(QSeries, Vec<Rat>)> {
    if !f.is_rational() {
        return Err(WfError::InvalidArgument(
            "reduction wants rational coefficients".into(),
        ));
    }
    if f.truncation() < basis.truncation {
        return Err(WfError::InsufficientTruncation(format!(
            "series certified to q^{}, basis needs q^{}",
            f.truncation(),
            basis.truncation
        )));
    }
    let mut rem = f.truncate(basis.truncation);
    let mut coords = Vec::with_capacity(basis.forms.len());
    for b in &basis.forms {
        let p = b.series.valuation();
        let c = rem.coeff(p).unwrap().as_rat().expect("rational");
        if !c.is_zero() {
            rem = &rem - &b.series.scale_rat(&c);
        }
        coords.push(c);
    }
    Ok((rem, coords))
}

/// True iff every stored coefficient of f is an integer.
pub fn is_integral(f: &QSeries) -> bool {
    f.is_integral()
}

/// Element of ℂ((q))/(c·ℤ((q)) + MF_w) presented by a rational representative.
#[derive(Clone, Debug)]
pub struct QuotientClass {
    pub representative: QSeries,
    pub weight: i64,
    pub lattice_scale: BigInt,
    pub pole_bound: u32,
    pub truncation: i64,
}

impl QuotientClass {
    pub fn new(
        representative: QSeries,
        weight: i64,
        lattice_scale: i64,
        pole_bound: u32,
        truncation: i64,
    ) -> WfResult<Self> {
        if lattice_scale <= 0 {
            return Err(WfError::InvalidArgument("lattice scale must be positive".into()));
        }
        if representative.truncation() < truncation {
            return Err(WfError::InsufficientTruncation(format!(
                "representative certified to q^{}, class wants q^{}",
                representative.truncation(),
                truncation
            )));
        }
        Ok(QuotientClass {
            representative,
            weight,
            lattice_scale: BigInt::from(lattice_scale),
            pole_bound,
            truncation,
        })
    }
}

/// Result of the order scan, certified only at the stated precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassOrder {
    Order { d: u64, pole_bound: u32, truncation: i64 },
    NoneUpTo { max_d: u64, pole_bound: u32, truncation: i64 },
}

/// Smallest d ≤ max_d with d·representative ∈ c·ℤ((q)) + span of the weakly
/// holomorphic basis: reduce against the basis, then test coefficientwise
/// c-divisibility of the remainder on all stored coefficients.
pub fn class_order(x: &QuotientClass, max_d: u64) -> WfResult<ClassOrder> {
    let basis = weakly_holo_basis(x.weight, x.pole_bound, x.truncation)?;
    for piv in basis.pivots() {
        if piv > x.truncation {
            return Err(WfError::InsufficientTruncation(
                "truncation does not cover all basis pivots".into(),
            ));
        }
    }
    for d in 1..=max_d {
        let scaled = x
            .representative
            .scale_rat(&Rat::from_integer(BigInt::from(d)));
        let (rem, _) = reduce_against_basis(&scaled, &basis)?;
        let ok = rem
            .iter()
            .all(|(_, c)| c.is_zero() || rat_divisible_by(&c.as_rat().expect("rational"), &x.lattice_scale));
        if ok {
            return Ok(ClassOrder::Order { d, pole_bound: x.pole_bound, truncation: x.truncation });
        }
    }
    Ok(ClassOrder::NoneUpTo { max_d, pole_bound: x.pole_bound, truncation: x.truncation })
}

/// Symbolic coefficient-group descriptor for π_* of the KO-modular pullback,
/// one row per residue class mod 8.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KomfGroup {
    /// MF^ℤ_w — integral modular forms of weight w.
    IntegralForms { weight: i64 },
    /// ℤ/2((q)).
    ZmodTwoLaurent,
    /// ℂ((q))/(c·ℤ((q)) + MF_w).
    Quotient { lattice_scale: i64, weight: i64 },
    Zero,
}

impl KomfGroup {
    pub fn render(&self) -> String {
        match self {
            KomfGroup::IntegralForms { weight } => format!("MF^Z_{}", weight),
            KomfGroup::ZmodTwoLaurent => "Z/2((q))".to_string(),
            KomfGroup::Quotient { lattice_scale, weight } => {
                if *lattice_scale == 1 {
                    format!("C((q))/(Z((q))+MF_{})", weight)
                } else {
                    format!("C((q))/({}Z((q))+MF_{})", lattice_scale, weight)
                }
            }
            KomfGroup::Zero => "0".to_string(),
        }
    }
}

/// Coefficient group of the real theory in degree `d`:
///   8k ↦ MF^ℤ_{4k},  8k±1... the eight residue rows.
pub fn komf_descriptor(degree: i64) -> KomfGroup {
    // Nonnegative residue and the matching k with degree = 8k + r.
    let r = degree.rem_euclid(8);
    let k = (degree - r) / 8;
    match r {
        0 => KomfGroup::IntegralForms { weight: 4 * k },
        1 | 2 => KomfGroup::ZmodTwoLaurent,
        3 => KomfGroup::Quotient { lattice_scale: 2, weight: 4 * k + 2 },
        4 => KomfGroup::IntegralForms { weight: 4 * k + 2 },
        5 | 6 => KomfGroup::Zero,
        7 => KomfGroup::Quotient { lattice_scale: 1, weight: 4 * (k + 1) },
        _ => unreachable!(),
    }
}

/// Descriptor for the complex-theory coefficients: MF^ℤ_k in degree 2k,
/// ℂ((q))/(ℤ((q))+MF_{2k}) in odd degrees 2k−1 — kept for the CLI table.
pub fn kmf_descriptor(degree: i64) -> KomfGroup {
    if degree.rem_euclid(2) == 0 {
        KomfGroup::IntegralForms { weight: degree / 2 }
    } else {
        KomfGroup::Quotient { lattice_scale: 1, weight: degree + 1 }
    }
}

/// η²⁴ computed through the φ-product, as an independent route to Δ.
pub fn delta_via_eta(trunc: i64) -> WfResult<QSeries> {
    let eta = crate::special::dedekind_eta(trunc);
    let eta24 = eta.pow(24)?;
    eta24
        .to_qseries()
        .ok_or_else(|| WfError::InvalidArgument("η²⁴ exponent did not fold to an integer".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;

    #[test]
    fn holomorphic_dimensions_and_pivots() {
        let b2 = mf_basis(2, 10).unwrap();
        assert_eq!(b2.dimension(), 0);
        let b0 = mf_basis(0, 10).unwrap();
        assert_eq!(b0.dimension(), 1);
        assert_eq!(b0.forms[0].series.to_text(), "1");
        let b12 = mf_basis(12, 10).unwrap();
        assert_eq!(b12.dimension(), 2);
        assert_eq!(b12.pivots(), vec![0, 1]);
        for w in (0..=40).step_by(2) {
            assert_eq!(mf_basis(w, 45).unwrap().dimension(), dim_holomorphic(w));
        }
    }

    #[test]
    fn delta_expansion_and_eta_route() {
        let d = delta(4).unwrap();
        assert_eq!(d.series.to_text(), "q - 24q^2 + 252q^3 - 1472q^4");
        assert_eq!(d.series.coeff(1).unwrap().as_rat().unwrap(), rat_i(1));
        let via_eta = delta_via_eta(6).unwrap();
        assert!(d.series.agrees_with(&via_eta));
    }

    #[test]
    fn weakly_holomorphic_shapes() {
        let b = weakly_holo_basis(2, 0, 20).unwrap();
        assert_eq!(b.dimension(), 0);
        let b = weakly_holo_basis(2, 1, 20).unwrap();
        assert_eq!(b.dimension(), 1);
        assert_eq!(b.pivots(), vec![-1]);
        let b = weakly_holo_basis(0, 1, 20).unwrap();
        assert_eq!(b.dimension(), 2);
        assert_eq!(b.pivots(), vec![-1, 0]);
        // The j-type element has its constant term eliminated by the RREF.
        assert!(b.forms[0].series.coeff(0).unwrap().is_zero());
        assert_eq!(b.forms[0].series.coeff(1).unwrap().as_rat().unwrap(), rat_i(196884));
    }

    #[test]
    fn reduction_behaviour() {
        let b4 = mf_basis(4, 15).unwrap();
        let e4 = eisenstein_q(4, 15).unwrap();
        let half = e4.scale_rat(&crate::rat::rat(1, 2));
        let (rem, coords) = reduce_against_basis(&half, &b4).unwrap();
        assert!(rem.is_zero());
        assert_eq!(coords, vec![crate::rat::rat(1, 2)]);
        // Empty basis: remainder unchanged.
        let b2 = mf_basis(2, 15).unwrap();
        let e2 = eisenstein_q(2, 15).unwrap();
        let (rem, coords) = reduce_against_basis(&e2, &b2).unwrap();
        assert!(rem.agrees_with(&e2));
        assert!(coords.is_empty());
    }

    #[test]
    fn integrality() {
        assert!(is_integral(&eisenstein_q(4, 30).unwrap()));
        let e2_over_24 = eisenstein_q(2, 5).unwrap().scale_rat(&crate::rat::rat(1, 24));
        assert!(!is_integral(&e2_over_24));
        assert!(is_integral(&QSeries::zero(5)));
    }

    #[test]
    fn eisenstein_integrality_profile() {
        for w in [2u64, 4, 6, 8, 10, 14] {
            assert!(eisenstein_q(w, 50).unwrap().is_integral(), "E_{} integral", w);
        }
        // Weight 12 is the first non-integral normalized Eisenstein series.
        assert!(!eisenstein_q(12, 10).unwrap().is_integral());
    }

    #[test]
    fn trivial_class_orders() {
        // Integral representative, c = 1: order 1.
        let rep = eisenstein_q(4, 30).unwrap();
        let x = QuotientClass::new(rep, 4, 1, 0, 30).unwrap();
        assert_eq!(
            class_order(&x, 5).unwrap(),
            ClassOrder::Order { d: 1, pole_bound: 0, truncation: 30 }
        );
        // Ê₄/2 lies in the ℚ-span of MF₄: order 1.
        let rep = eisenstein_q(4, 30).unwrap().scale_rat(&crate::rat::rat(1, 2));
        let x = QuotientClass::new(rep, 4, 1, 0, 30).unwrap();
        assert_eq!(
            class_order(&x, 5).unwrap(),
            ClassOrder::Order { d: 1, pole_bound: 0, truncation: 30 }
        );
    }

    #[test]
    fn komf_rows() {
        assert_eq!(komf_descriptor(4).render(), "MF^Z_2");
        assert_eq!(komf_descriptor(5).render(), "0");
        assert_eq!(komf_descriptor(3).render(), "C((q))/(2Z((q))+MF_2)");
        assert_eq!(komf_descriptor(7).render(), "C((q))/(Z((q))+MF_4)");
        assert_eq!(komf_descriptor(8).render(), "MF^Z_4");
        assert_eq!(komf_descriptor(1).render(), "Z/2((q))");
    }
}
