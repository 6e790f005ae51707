use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coxeter::CoxeterDatum;
use crate::diffgeo::{random_poly, DerivationField, OneForm};
use crate::exact_algebra::{ExactScalar, MultiPoly, RatFunc};
use crate::primitive::FamilySet;

/// A random invariant coefficient `c + c′·P_a` with small integers.
fn small_invariant(d: &CoxeterDatum, rng: &mut ChaCha8Rng) -> MultiPoly {
    let vars = d.vars();
    let c = ExactScalar::from_i64(rng.gen_range(-3..=3));
    let mut r = MultiPoly::constant(vars, c);
    if rng.gen_bool(0.5) {
        // the quadratic invariant of a random factor keeps degrees low
        let f = &d.factors()[rng.gen_range(0..d.factors().len())];
        r = &r + &f.invariants[0].scale(&ExactScalar::from_i64(rng.gen_range(1..=3)));
    }
    r
}

/// Indices of the families to combine: one or two distinct k.
fn pick_families(fams: &FamilySet, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let ks: Vec<i64> = fams.iter().map(|f| f.k).collect();
    let first = ks[rng.gen_range(0..ks.len())];
    let mut out = vec![first];
    if ks.len() > 1 && rng.gen_bool(0.5) {
        let second = ks[rng.gen_range(0..ks.len())];
        if second != first {
            out.push(second);
        }
    }
    out
}

/// Every Θ^(k) member, then `count` random R-combinations of members of one
/// or two families.
pub fn invariant_form_samples(d: &CoxeterDatum, fams: &FamilySet, count: usize, seed: u64) -> Vec<OneForm> {
    let mut out: Vec<OneForm> = fams.iter().flat_map(|f| f.forms.iter().cloned()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < fams.iter().map(|f| f.forms.len()).sum::<usize>() + count {
        let mut acc = OneForm::zero(d.vars());
        for k in pick_families(fams, &mut rng) {
            for w in &fams.get(k).expect("listed").forms {
                let r = RatFunc::from_poly(small_invariant(d, &mut rng));
                acc = &acc + &w.scale_by(&r);
            }
        }
        if !acc.is_zero() {
            out.push(acc);
        }
    }
    out
}

/// The derivation-side counterpart of [`invariant_form_samples`].
pub fn invariant_derivation_samples(d: &CoxeterDatum, fams: &FamilySet, count: usize, seed: u64) -> Vec<DerivationField> {
    let mut out: Vec<DerivationField> = fams.iter().flat_map(|f| f.derivations.iter().cloned()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < fams.iter().map(|f| f.derivations.len()).sum::<usize>() + count {
        let mut acc = DerivationField::zero(d.vars());
        for k in pick_families(fams, &mut rng) {
            for x in &fams.get(k).expect("listed").derivations {
                let r = RatFunc::from_poly(small_invariant(d, &mut rng));
                acc = &acc + &x.scale_by(&r);
            }
        }
        if !acc.is_zero() {
            out.push(acc);
        }
    }
    out
}

/// Rational functions `g · Π α_H^{-e_H}` with a random polynomial `g` and
/// nonzero exponents on one or two hyperplanes, kept only when some pole
/// order is nonzero.
pub fn ord_samples(d: &CoxeterDatum, count: usize, seed: u64) -> Vec<RatFunc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hs = d.hyperplanes();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = random_poly(d.vars(), 3, 3, &mut rng);
        if g.is_zero() {
            continue;
        }
        let mut powers = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let h = &hs[rng.gen_range(0..hs.len())];
            let e = [-2, -1, 1, 2][rng.gen_range(0..4)];
            powers.push((h.alpha.clone(), e));
        }
        let f = RatFunc::from_poly(g).mul_linear_powers(&powers);
        if hs.iter().any(|h| f.ord_along(&h.alpha).is_ok_and(|o| o != 0)) {
            out.push(f);
        }
    }
    out
}
