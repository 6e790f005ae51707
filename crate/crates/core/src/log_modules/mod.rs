//! Membership in Ω(A,m) and D(A,m), the Saito–Ziegler criterion, the
//! pole-order lemma, and the one-step primitive filtration equivalence.

mod samples;

pub use samples::{invariant_derivation_samples, invariant_form_samples, ord_samples};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{CoxeterDatum, MultiplicityMap};
use crate::diffgeo::{
    apply_derivation, derivation_det, istar_pairing, nabla_on_derivation, nabla_on_form, wedge_top, DerivationField,
    GeoError, OneForm,
};
use crate::exact_algebra::{AlgebraError, ExactScalar, LinearForm, RatFunc};
use crate::primitive::PrimitiveDerivation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogError {
    #[error("zero {0} has no pole orders")]
    ZeroObject(&'static str),
    #[error("member {index} fails the membership precondition at hyperplane {hyperplane}")]
    Precondition { index: usize, hyperplane: String },
    #[error("form is not W-invariant")]
    NotInvariant,
    #[error("multiplicity map has {found} values, arrangement has {expected} hyperplanes")]
    MultiplicitySize { expected: usize, found: usize },
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Ω(A, m)
    Omega,
    /// D(A, m)
    Der,
}

impl Side {
    pub fn symbol(&self) -> &'static str {
        match self {
            Side::Omega => "Omega",
            Side::Der => "D",
        }
    }
}

/// Pole data of one form or derivation, independent of any multiplicity.
#[derive(Clone, Debug)]
pub struct PoleProfile {
    pub side: Side,
    /// `ord_H I*(dα_H, ω)` resp. `ord_H ξ(α_H)`; `None` when it vanishes.
    pub pairing: Vec<Option<i64>>,
    /// Worst pole order along H of the part tangent to H (`dα_H ∧ ω`, resp.
    /// `ξ(β)` for β ⊥ α_H); `None` when that part vanishes.
    pub tangential: Vec<Option<i64>>,
    /// Denominator factors that are not hyperplane forms.
    pub foreign_poles: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneWitness {
    pub hyperplane: usize,
    pub alpha: String,
    pub pairing_order: Option<i64>,
    /// Largest admissible pairing order.
    pub bound: i64,
    pub tangential_order: Option<i64>,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    pub side: Side,
    pub multiplicity: String,
    pub member: bool,
    /// The Ω(A,∞) / D(A,∞) part of the test.
    pub regular_off_arrangement: bool,
    pub foreign_poles: Vec<String>,
    pub witnesses: Vec<HyperplaneWitness>,
    /// First violated hyperplane, or the one with the least slack.
    pub binding: Option<usize>,
}

impl MembershipVerdict {
    /// The verdict recomputed from the witnesses alone.
    pub fn recheck(&self) -> bool {
        self.foreign_poles.is_empty()
            && self.witnesses.iter().all(|w| {
                w.pairing_order.is_none_or(|o| o <= w.bound) && w.tangential_order.is_none_or(|o| o <= 0)
            })
    }

    pub fn binding_witness(&self) -> Option<&HyperplaneWitness> {
        self.binding.and_then(|i| self.witnesses.iter().find(|w| w.hyperplane == i))
    }
}

fn check_multiplicity(d: &CoxeterDatum, m: &MultiplicityMap) -> Result<(), LogError> {
    let (expected, found) = (d.hyperplanes().len(), m.values().len());
    if expected != found {
        return Err(LogError::MultiplicitySize { expected, found });
    }
    Ok(())
}

fn ord_or_none(f: &RatFunc, alpha: &LinearForm) -> Result<Option<i64>, LogError> {
    if f.is_zero() {
        return Ok(None);
    }
    Ok(Some(f.ord_along(alpha)?))
}

fn combination_order<'a>(
    terms: impl IntoIterator<Item = (ExactScalar, &'a RatFunc)>,
    alpha: &LinearForm,
) -> Result<Option<i64>, LogError> {
    let terms: Vec<_> = terms.into_iter().collect();
    Ok(RatFunc::ord_of_combination(&terms, alpha)?)
}

fn max_order(values: impl IntoIterator<Item = Option<i64>>) -> Option<i64> {
    values.into_iter().flatten().max()
}

fn foreign_poles(coeffs: &[RatFunc], d: &CoxeterDatum) -> Vec<String> {
    let forms = d.hyperplane_forms();
    let mut out = Vec::new();
    for c in coeffs {
        for (a, _) in c.linear_den() {
            let t = a.to_text(d.vars());
            if !forms.contains(a) && !out.contains(&t) {
                out.push(t);
            }
        }
        if !c.residual_den().is_constant() {
            let t = c.residual_den().to_text();
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

impl PoleProfile {
    pub fn of_form(omega: &OneForm, d: &CoxeterDatum) -> Result<PoleProfile, LogError> {
        if omega.is_zero() {
            return Err(LogError::ZeroObject("form"));
        }
        let n = d.rank();
        let mut pairing = Vec::new();
        let mut tangential = Vec::new();
        for h in d.hyperplanes() {
            let a = h.alpha.coeffs();
            let f = omega.coeffs();
            let g = d.metric().inverse_gram();
            let weights: Vec<ExactScalar> =
                (0..n).map(|j| (0..n).fold(ExactScalar::zero(), |acc, i| &acc + &(&a[i] * &g[i][j]))).collect();
            pairing.push(combination_order(weights.into_iter().zip(f), &h.alpha)?);
            // components of dα ∧ ω
            let mut comps = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    comps.push(combination_order([(a[i].clone(), &f[j]), (-&a[j], &f[i])], &h.alpha)?);
                }
            }
            tangential.push(max_order(comps));
        }
        Ok(PoleProfile { side: Side::Omega, pairing, tangential, foreign_poles: foreign_poles(omega.coeffs(), d) })
    }

    pub fn of_derivation(xi: &DerivationField, d: &CoxeterDatum) -> Result<PoleProfile, LogError> {
        if xi.is_zero() {
            return Err(LogError::ZeroObject("derivation"));
        }
        let mut pairing = Vec::new();
        let mut tangential = Vec::new();
        for h in d.hyperplanes() {
            pairing.push(combination_order(h.alpha.coeffs().iter().cloned().zip(xi.coeffs()), &h.alpha)?);
            let comps = orthogonal_complement(d, &h.alpha)
                .iter()
                .map(|beta| combination_order(beta.coeffs().iter().cloned().zip(xi.coeffs()), &h.alpha))
                .collect::<Result<Vec<_>, _>>()?;
            tangential.push(max_order(comps));
        }
        Ok(PoleProfile { side: Side::Der, pairing, tangential, foreign_poles: foreign_poles(xi.coeffs(), d) })
    }

    /// Membership for `m`: Ω side `ord ≤ m(H)`, D side `ord ≤ −m(H)`.
    pub fn verdict(&self, d: &CoxeterDatum, m: &MultiplicityMap) -> Result<MembershipVerdict, LogError> {
        check_multiplicity(d, m)?;
        let mut witnesses = Vec::with_capacity(self.pairing.len());
        let mut binding: Option<(usize, i64)> = None;
        let mut member = self.foreign_poles.is_empty();
        let mut regular = self.foreign_poles.is_empty();
        for (i, h) in d.hyperplanes().iter().enumerate() {
            let bound = match self.side {
                Side::Omega => m.values()[i],
                Side::Der => -m.values()[i],
            };
            let tang_ok = self.tangential[i].is_none_or(|o| o <= 0);
            let pair_ok = self.pairing[i].is_none_or(|o| o <= bound);
            let ok = tang_ok && pair_ok;
            regular &= tang_ok;
            member &= ok;
            let slack = if !ok {
                i64::MIN
            } else {
                self.pairing[i].map_or(i64::MAX, |o| bound - o)
            };
            if slack != i64::MAX && binding.is_none_or(|(_, s)| slack < s) {
                binding = Some((i, slack));
            }
            witnesses.push(HyperplaneWitness {
                hyperplane: i,
                alpha: h.alpha.to_text(d.vars()),
                pairing_order: self.pairing[i],
                bound,
                tangential_order: self.tangential[i],
                ok,
            });
        }
        Ok(MembershipVerdict {
            side: self.side,
            multiplicity: m.description().to_string(),
            member,
            regular_off_arrangement: regular,
            foreign_poles: self.foreign_poles.clone(),
            witnesses,
            binding: binding.map(|(i, _)| i),
        })
    }
}

/// Linear forms spanning `{β : I*(dα, dβ) = 0}`.
fn orthogonal_complement(d: &CoxeterDatum, alpha: &LinearForm) -> Vec<LinearForm> {
    let ig = d.metric().inverse_gram();
    let n = d.rank();
    let v: Vec<ExactScalar> = (0..n)
        .map(|i| (0..n).fold(ExactScalar::zero(), |acc, j| &acc + &(&ig[i][j] * &alpha.coeffs()[j])))
        .collect();
    let p = v.iter().position(|c| !c.is_zero()).expect("nonzero form");
    let vp_inv = v[p].inv().expect("nonzero");
    (0..n)
        .filter(|&i| i != p)
        .map(|i| {
            let mut b = vec![ExactScalar::zero(); n];
            b[i] = ExactScalar::one();
            b[p] = -&(&v[i] * &vp_inv);
            LinearForm::new(&b).expect("nonzero")
        })
        .collect()
}

pub fn omega_membership(omega: &OneForm, d: &CoxeterDatum, m: &MultiplicityMap) -> Result<MembershipVerdict, LogError> {
    PoleProfile::of_form(omega, d)?.verdict(d, m)
}

pub fn der_membership(xi: &DerivationField, d: &CoxeterDatum, m: &MultiplicityMap) -> Result<MembershipVerdict, LogError> {
    PoleProfile::of_derivation(xi, d)?.verdict(d, m)
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub side: Side,
    pub multiplicity: String,
    /// `Q^m·(ω_1∧⋯∧ω_ℓ)`, resp. `Q^{-m}·det[ξ_1,…,ξ_ℓ]`.
    pub product_scalar: RatFunc,
    pub is_regular: bool,
    pub is_constant: bool,
    pub constant: Option<ExactScalar>,
}

impl CriterionReport {
    fn new(side: Side, m: &MultiplicityMap, product: RatFunc) -> CriterionReport {
        let constant = product.constant_value().filter(|c| !c.is_zero());
        CriterionReport {
            side,
            multiplicity: m.description().to_string(),
            is_regular: product.is_polynomial(),
            is_constant: constant.is_some(),
            constant,
            product_scalar: product,
        }
    }

    pub fn passed(&self) -> bool {
        self.is_constant
    }
}

fn precondition(verdicts: Vec<MembershipVerdict>) -> Result<(), LogError> {
    for (index, v) in verdicts.into_iter().enumerate() {
        if !v.member {
            let hyperplane = v
                .binding_witness()
                .map(|w| w.alpha.clone())
                .or_else(|| v.foreign_poles.first().cloned())
                .unwrap_or_default();
            return Err(LogError::Precondition { index, hyperplane });
        }
    }
    Ok(())
}

/// Saito–Ziegler criterion on the form side: the members lie in Ω(A,m)
/// and `Q^m` times their top wedge is a nonzero constant.
pub fn saito_ziegler_check(forms: &[OneForm], d: &CoxeterDatum, m: &MultiplicityMap) -> Result<CriterionReport, LogError> {
    check_multiplicity(d, m)?;
    precondition(forms.iter().map(|w| omega_membership(w, d, m)).collect::<Result<_, _>>()?)?;
    let product = wedge_top(forms)?.mul_linear_powers(&d.q_powers(m));
    Ok(CriterionReport::new(Side::Omega, m, product))
}

/// Dual criterion: the members lie in D(A,m) and `Q^{-m}` times their
/// determinant is a nonzero constant.
pub fn saito_ziegler_check_der(
    fields: &[DerivationField],
    d: &CoxeterDatum,
    m: &MultiplicityMap,
) -> Result<CriterionReport, LogError> {
    check_multiplicity(d, m)?;
    precondition(fields.iter().map(|x| der_membership(x, d, m)).collect::<Result<_, _>>()?)?;
    let product = derivation_det(fields)?.mul_linear_powers(&d.q_powers(&m.negated()));
    Ok(CriterionReport::new(Side::Der, m, product))
}

/// Fixed by every generating reflection.
pub fn invariance_check<T: crate::diffgeo::Reflect + PartialEq>(x: &T, d: &CoxeterDatum) -> bool {
    d.is_invariant(x)
}

/// Negated by every generating reflection.
pub fn anti_invariance_check(f: &RatFunc, d: &CoxeterDatum) -> bool {
    use crate::diffgeo::Reflect;
    let neg = f.neg();
    d.generators().iter().all(|s| f.reflect(s) == neg)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdPair {
    pub sample: usize,
    pub hyperplane: usize,
    pub ord_f: i64,
    pub ord_df: Option<i64>,
    pub ok: bool,
}

#[derive(Clone, Debug, Default)]
pub struct OrdLemmaReport {
    /// `ord_α D(α)` per hyperplane.
    pub d_alpha: Vec<Option<i64>>,
    pub pairs: Vec<OrdPair>,
    /// (sample, hyperplane) pairs with `ord_α f = 0`, not tested.
    pub skipped: Vec<(usize, usize)>,
    /// Samples that are zero, not tested.
    pub zero_samples: Vec<usize>,
}

impl OrdLemmaReport {
    pub fn part_one(&self) -> bool {
        self.d_alpha.iter().all(|o| *o == Some(1))
    }

    pub fn part_two(&self) -> bool {
        self.pairs.iter().all(|p| p.ok)
    }

    pub fn passed(&self) -> bool {
        self.part_one() && self.part_two()
    }

    /// Samples with at least one tested hyperplane.
    pub fn tested_samples(&self) -> usize {
        let mut s: Vec<usize> = self.pairs.iter().map(|p| p.sample).collect();
        s.dedup();
        s.len()
    }
}

/// `ord_α D(α) = 1` on every hyperplane and `ord_α D(f) = ord_α f + 2`
/// for every sample and hyperplane with `ord_α f ≠ 0`.
pub fn ord_lemma_check(d: &CoxeterDatum, pd: &PrimitiveDerivation, samples: &[RatFunc]) -> Result<OrdLemmaReport, LogError> {
    let mut report = OrdLemmaReport::default();
    for h in d.hyperplanes() {
        report.d_alpha.push(ord_or_none(&pd.total.on_linear(h.alpha.coeffs()), &h.alpha)?);
    }
    for (si, f) in samples.iter().enumerate() {
        if f.is_zero() {
            report.zero_samples.push(si);
            continue;
        }
        let df = apply_derivation(&pd.total, f);
        for (hi, h) in d.hyperplanes().iter().enumerate() {
            let ord_f = f.ord_along(&h.alpha)?;
            if ord_f == 0 {
                report.skipped.push((si, hi));
                continue;
            }
            let ord_df = ord_or_none(&df, &h.alpha)?;
            report.pairs.push(OrdPair { sample: si, hyperplane: hi, ord_f, ord_df, ok: ord_df == Some(ord_f + 2) });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiInvarianceReport {
    /// `ord_H I*(dα_H, ω)` per hyperplane, `None` for a zero pairing.
    pub orders: Vec<Option<i64>>,
    /// Hyperplanes with a zero pairing; vacuous, reported separately.
    pub zero_pairings: Vec<usize>,
    pub holds: bool,
}

/// `ord_H I*(dα_H, ω) ≠ 0` on every hyperplane with a nonzero pairing.
pub fn antiinvariance_order_check(omega: &OneForm, d: &CoxeterDatum) -> Result<AntiInvarianceReport, LogError> {
    if omega.is_zero() {
        return Err(LogError::ZeroObject("form"));
    }
    if !d.is_invariant(omega) {
        return Err(LogError::NotInvariant);
    }
    let mut orders = Vec::new();
    let mut zero_pairings = Vec::new();
    for (i, h) in d.hyperplanes().iter().enumerate() {
        let da = OneForm::of_linear(d.vars(), &h.alpha);
        let o = ord_or_none(&istar_pairing(&da, omega, d.metric())?, &h.alpha)?;
        if o.is_none() {
            zero_pairings.push(i);
        }
        orders.push(o);
    }
    let holds = orders.iter().all(|o| *o != Some(0));
    Ok(AntiInvarianceReport { orders, zero_pairings, holds })
}

#[derive(Clone, Debug)]
pub struct ShiftCase {
    pub sample: usize,
    pub before: MembershipVerdict,
    pub after: MembershipVerdict,
}

impl ShiftCase {
    pub fn agrees(&self) -> bool {
        self.before.member == self.after.member
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationReport {
    pub side: Side,
    pub multiplicity: String,
    pub shifted: String,
    pub cases: Vec<ShiftCase>,
}

impl FiltrationReport {
    /// Membership before implies membership after.
    pub fn forward(&self) -> bool {
        self.cases.iter().all(|c| !c.before.member || c.after.member)
    }

    /// Membership after implies membership before.
    pub fn backward(&self) -> bool {
        self.cases.iter().all(|c| !c.after.member || c.before.member)
    }

    pub fn passed(&self) -> bool {
        self.forward() && self.backward()
    }

    pub fn members(&self) -> usize {
        self.cases.iter().filter(|c| c.before.member).count()
    }
}

/// Pole profiles of samples and their ∇_D images, computed once and then
/// judged against any number of multiplicities.
pub struct ShiftProfiles {
    side: Side,
    pairs: Vec<(PoleProfile, PoleProfile)>,
}

impl ShiftProfiles {
    pub fn of_forms(d: &CoxeterDatum, pd: &PrimitiveDerivation, samples: &[OneForm]) -> Result<ShiftProfiles, LogError> {
        let pairs = samples
            .iter()
            .map(|w| Ok((PoleProfile::of_form(w, d)?, PoleProfile::of_form(&nabla_on_form(&pd.total, w), d)?)))
            .collect::<Result<_, LogError>>()?;
        Ok(ShiftProfiles { side: Side::Omega, pairs })
    }

    pub fn of_derivations(
        d: &CoxeterDatum,
        pd: &PrimitiveDerivation,
        samples: &[DerivationField],
    ) -> Result<ShiftProfiles, LogError> {
        let pairs = samples
            .iter()
            .map(|x| {
                Ok((PoleProfile::of_derivation(x, d)?, PoleProfile::of_derivation(&nabla_on_derivation(&pd.total, x), d)?))
            })
            .collect::<Result<_, LogError>>()?;
        Ok(ShiftProfiles { side: Side::Der, pairs })
    }

    /// Ω side: `ω ∈ Ω(A,m) ⟺ ∇_D ω ∈ Ω(A,m+2)`; D side:
    /// `ξ ∈ D(A,m) ⟺ ∇_D ξ ∈ D(A,m−2)`.
    pub fn judge(&self, d: &CoxeterDatum, m: &MultiplicityMap) -> Result<FiltrationReport, LogError> {
        let shifted = match self.side {
            Side::Omega => m.shifted(2),
            Side::Der => m.shifted(-2),
        };
        let cases = self
            .pairs
            .iter()
            .enumerate()
            .map(|(sample, (b, a))| Ok(ShiftCase { sample, before: b.verdict(d, m)?, after: a.verdict(d, &shifted)? }))
            .collect::<Result<_, LogError>>()?;
        Ok(FiltrationReport { side: self.side, multiplicity: m.description().to_string(), shifted: shifted.description().to_string(), cases })
    }
}

pub fn filtration_shift_check(
    d: &CoxeterDatum,
    pd: &PrimitiveDerivation,
    m: &MultiplicityMap,
    samples: &[OneForm],
) -> Result<FiltrationReport, LogError> {
    ShiftProfiles::of_forms(d, pd, samples)?.judge(d, m)
}

pub fn filtration_shift_check_der(
    d: &CoxeterDatum,
    pd: &PrimitiveDerivation,
    m: &MultiplicityMap,
    samples: &[DerivationField],
) -> Result<FiltrationReport, LogError> {
    ShiftProfiles::of_derivations(d, pd, samples)?.judge(d, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::text::parse_ratfunc;
    use crate::primitive::{generate_families, primitive_derivation};

    fn form(d: &CoxeterDatum, texts: &[&str]) -> OneForm {
        OneForm::from_texts(d.vars(), texts).unwrap()
    }

    #[test]
    fn a1_membership_examples() {
        let d = CoxeterDatum::from_type_string("A1").unwrap();
        let inv_x = form(&d, &["1/x"]);
        assert!(omega_membership(&inv_x, &d, &MultiplicityMap::constant(&d, 1)).unwrap().member);
        let v = omega_membership(&inv_x, &d, &MultiplicityMap::constant(&d, 0)).unwrap();
        assert!(!v.member);
        assert_eq!(v.binding_witness().unwrap().pairing_order, Some(1));
        assert_eq!(v.recheck(), v.member);
        let cube = form(&d, &["1/3*x^3"]);
        assert!(omega_membership(&cube, &d, &MultiplicityMap::constant(&d, -3)).unwrap().member);
        let x_dx = DerivationField::from_texts(d.vars(), &["x"]).unwrap();
        assert!(der_membership(&x_dx, &d, &MultiplicityMap::constant(&d, 1)).unwrap().member);
        let dx = DerivationField::from_texts(d.vars(), &["1"]).unwrap();
        assert!(!der_membership(&dx, &d, &MultiplicityMap::constant(&d, 1)).unwrap().member);
        assert_eq!(omega_membership(&OneForm::zero(d.vars()), &d, &MultiplicityMap::constant(&d, 0)).unwrap_err(), LogError::ZeroObject("form"));
    }

    #[test]
    fn criterion_examples() {
        let d = CoxeterDatum::from_type_string("A1").unwrap();
        let r = saito_ziegler_check(&[form(&d, &["x"])], &d, &MultiplicityMap::constant(&d, -1)).unwrap();
        assert_eq!(r.constant, Some(ExactScalar::one()));
        let d = CoxeterDatum::from_type_string("A1xA1").unwrap();
        let r = saito_ziegler_check(&[form(&d, &["x", "0"]), form(&d, &["0", "y"])], &d, &MultiplicityMap::constant(&d, -1))
            .unwrap();
        assert_eq!(r.constant, Some(ExactScalar::one()));
        let err = saito_ziegler_check(&[form(&d, &["1/x", "0"]), form(&d, &["0", "y"])], &d, &MultiplicityMap::constant(&d, -1));
        assert!(matches!(err, Err(LogError::Precondition { index: 0, .. })));
    }

    #[test]
    fn b2_unit_checks() {
        let d = CoxeterDatum::from_type_string("B2").unwrap();
        let pd = primitive_derivation(&d).unwrap();
        let fam = generate_families(&d, &pd, 1, 1).unwrap();
        let theta = &fam.get(1).unwrap().forms;
        let r = saito_ziegler_check(theta, &d, &MultiplicityMap::constant(&d, 1)).unwrap();
        assert_eq!(r.constant, Some(ExactScalar::from_i64(-6)));
        let rep = antiinvariance_order_check(&theta[0], &d).unwrap();
        assert!(rep.holds && rep.zero_pairings.is_empty());
        let x = parse_ratfunc("x", d.vars()).unwrap();
        let rep = ord_lemma_check(&d, &pd, &[x]).unwrap();
        assert!(rep.passed());
        assert!(anti_invariance_check(&RatFunc::from_poly(d.q().clone()), &d));
        assert!(!invariance_check(&form(&d, &["1", "0"]), &d));
    }

    #[test]
    fn membership_duality() {
        let d = CoxeterDatum::from_type_string("A2").unwrap();
        let xi = DerivationField::from_texts(d.vars(), &["1/x", "y/(x + y)"]).unwrap();
        let w = crate::diffgeo::istar_inverse(&xi, d.metric()).unwrap();
        for k in -2..=2 {
            let m = MultiplicityMap::constant(&d, k);
            assert_eq!(der_membership(&xi, &d, &m).unwrap().member, omega_membership(&w, &d, &m.negated()).unwrap().member);
        }
    }

    #[test]
    fn a1_shift() {
        let d = CoxeterDatum::from_type_string("A1").unwrap();
        let pd = primitive_derivation(&d).unwrap();
        let r = filtration_shift_check(&d, &pd, &MultiplicityMap::constant(&d, 1), &[form(&d, &["1/x"])]).unwrap();
        assert!(r.passed() && r.members() == 1);
        assert_eq!(r.cases[0].after.witnesses[0].pairing_order, Some(3));
    }
}
