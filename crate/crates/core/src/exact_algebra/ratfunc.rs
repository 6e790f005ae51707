//! Elements of the fraction field, kept in lowest terms.
//!
//! The denominator is stored partially factored: a list of monic linear
//! forms with exponents, times a monic residue. Hyperplane denominators
//! (the only kind the arrangement code produces) therefore never go through
//! a general gcd; numerator cancellation against a linear form is a trial
//! division screened by evaluation at a point of the hyperplane.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gcd::poly_gcd;
use super::modular::{PrimeField, PRIMES};
use super::linear::LinearForm;
use super::poly::{MultiPoly, Vars};
use super::scalar::ExactScalar;
use super::AlgebraError;

#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    lin: Vec<(LinearForm, u32)>,
    rest: MultiPoly,
}

/// `num / α` when `α` divides `num`.
pub(crate) fn divide_by_linear(num: &MultiPoly, alpha: &LinearForm, alpha_poly: &MultiPoly) -> Option<MultiPoly> {
    if num.is_zero() {
        return Some(num.clone());
    }
    if num.is_constant() {
        return None;
    }
    if !num.eval(&alpha.sample_point()).is_zero() {
        return None;
    }
    num.div_exact(alpha_poly)
}

/// Multiplicity of `α` in `p` (p ≠ 0) and the cofactor.
///
/// The order of `p` mod a prime along a line through a point of the
/// hyperplane bounds the multiplicity from above, so that many exact
/// divisions settle it: a failing division pins it at the step it fails.
pub(crate) fn linear_multiplicity(p: &MultiPoly, alpha: &LinearForm) -> (u32, MultiPoly) {
    let ap = alpha.to_poly(p.vars());
    let mut k = 0;
    let mut cur = p.clone();
    if let Some(bound) = modular_multiplicity_bound(p, alpha) {
        while k < bound {
            match cur.div_exact(&ap) {
                Some(q) => {
                    cur = q;
                    k += 1;
                }
                None => break,
            }
        }
        return (k, cur);
    }
    while let Some(q) = divide_by_linear(&cur, alpha, &ap) {
        cur = q;
        k += 1;
    }
    (k, cur)
}

/// A random point of the hyperplane `α = 0` mod p and a random direction.
fn line_through_hyperplane(
    field: &PrimeField,
    alpha: &LinearForm,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<u64>, Vec<u64>)> {
    let coeffs: Vec<u64> = alpha.coeffs().iter().map(|c| field.reduce(c)).collect::<Option<_>>()?;
    let piv = coeffs.iter().position(|&c| c != 0)?;
    let mut point: Vec<u64> = (0..n).map(|_| rng.gen_range(0..field.p)).collect();
    point[piv] = 0;
    let s = coeffs.iter().zip(&point).fold(0, |acc, (&c, &x)| field.add(acc, field.mul(c, x)));
    point[piv] = field.mul(field.sub(0, s), field.inv(coeffs[piv])?);
    let dir: Vec<u64> = (0..n).map(|_| rng.gen_range(0..field.p)).collect();
    Some((point, dir))
}

fn modular_multiplicity_bound(p: &MultiPoly, alpha: &LinearForm) -> Option<u32> {
    let disc = p
        .terms()
        .map(|(_, c)| c.discriminant())
        .chain(alpha.coeffs().iter().map(|c| c.discriminant()))
        .find(|&d| d != 0)
        .unwrap_or(0);
    let field = PRIMES.iter().find_map(|&q| PrimeField::new(q, disc))?;
    let reduced = field.reduce_poly(p)?;
    if reduced.is_zero() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd5);
    let (point, dir) = line_through_hyperplane(&field, alpha, p.nvars(), &mut rng)?;
    Some(reduced.order_on_line(&field, &point, &dir, p.degree()? as u32))
}

const BULK_CANCEL_TERMS: usize = 48;

/// Multiplicities of the candidate forms in `num`, bounded by their
/// exponents in `lin`, read off modulo a prime (which can only overcount),
/// then removed in one exact division that confirms them.
fn bulk_cancel(
    num: &MultiPoly,
    lin: &BTreeMap<LinearForm, u32>,
    candidates: Option<&[LinearForm]>,
) -> Option<(MultiPoly, Vec<(LinearForm, u32)>)> {
    let disc = num.terms().map(|(_, c)| c.discriminant()).chain(lin.keys().flat_map(|a| a.coeffs().iter().map(|c| c.discriminant()))).find(|&d| d != 0).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x11e4);
    let field = PRIMES.iter().find_map(|&p| PrimeField::new(p, disc))?;
    let reduced = field.reduce_poly(num)?;
    if reduced.is_zero() {
        return None;
    }
    let n = num.nvars();
    let mut found = Vec::new();
    for (a, &e) in lin {
        if candidates.is_some_and(|c| !c.contains(a)) {
            continue;
        }
        let (point, dir) = line_through_hyperplane(&field, a, n, &mut rng)?;
        let m = reduced.order_on_line(&field, &point, &dir, e);
        if m > 0 {
            found.push((a.clone(), m));
        }
    }
    if found.is_empty() {
        return Some((num.clone(), found));
    }
    let vars = num.vars();
    let divisor = found.iter().fold(MultiPoly::one(vars), |acc, (a, m)| {
        let ap = a.to_poly(vars);
        (0..*m).fold(acc, |acc, _| &acc * &ap)
    });
    Some((num.div_exact(&divisor)?, found))
}

fn merge_lin(parts: impl IntoIterator<Item = (LinearForm, u32)>) -> BTreeMap<LinearForm, u32> {
    let mut m = BTreeMap::new();
    for (a, e) in parts {
        if e > 0 {
            *m.entry(a).or_insert(0) += e;
        }
    }
    m
}

fn lin_product(vars: &Vars, lin: &BTreeMap<LinearForm, u32>) -> MultiPoly {
    let mut acc = MultiPoly::one(vars);
    for (a, &e) in lin {
        let ap = a.to_poly(vars);
        for _ in 0..e {
            acc = &acc * &ap;
        }
    }
    acc
}

impl RatFunc {
    pub fn zero(vars: &Vars) -> Self {
        RatFunc { num: MultiPoly::zero(vars), lin: Vec::new(), rest: MultiPoly::one(vars) }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(MultiPoly::one(vars))
    }

    pub fn constant(vars: &Vars, c: ExactScalar) -> Self {
        Self::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let rest = MultiPoly::one(p.vars());
        RatFunc { num: p, lin: Vec::new(), rest }
    }

    /// `num / den` reduced to lowest terms.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if num.vars() != den.vars() {
            return Err(AlgebraError::VariableMismatch);
        }
        if let Some((c, a)) = LinearForm::from_poly(&den) {
            let num = num.scale(&c.inv().expect("nonzero"));
            return Ok(Self::assemble(num, vec![(a, 1)], None, None));
        }
        Ok(Self::assemble(num, Vec::new(), Some(den), None))
    }

    /// `num / Π α^e` with the α normalized forms.
    pub fn with_linear_den(num: MultiPoly, den: &[(LinearForm, u32)]) -> Self {
        Self::assemble(num, den.to_vec(), None, None)
    }

    /// `num / (Π α^e · rest)`, reduced.
    pub fn from_parts(num: MultiPoly, lin: Vec<(LinearForm, u32)>, rest: MultiPoly) -> Self {
        if rest.is_zero() {
            panic!("zero denominator");
        }
        let rest = if rest.is_one() { None } else { Some(rest) };
        Self::assemble(num, lin, rest, None)
    }

    /// `Π α^k` for integer exponents.
    pub fn from_linear_powers(vars: &Vars, powers: &[(LinearForm, i64)]) -> Self {
        RatFunc::one(vars).mul_linear_powers(powers)
    }

    fn assemble(
        num: MultiPoly,
        lin: Vec<(LinearForm, u32)>,
        rest: Option<MultiPoly>,
        candidates: Option<&[LinearForm]>,
    ) -> Self {
        let vars = num.vars().clone();
        if num.is_zero() {
            return Self::zero(&vars);
        }
        let mut num = num;
        let mut rest = rest.unwrap_or_else(|| MultiPoly::one(&vars));
        if let Some(c) = rest.constant_value() {
            num = num.scale(&c.inv().expect("nonzero denominator"));
            rest = MultiPoly::one(&vars);
        } else {
            let lc = rest.leading_coeff();
            if !lc.is_one() {
                num = num.scale(&lc.inv().expect("nonzero"));
                rest = rest.monic();
            }
        }
        let mut lin = merge_lin(lin);
        if num.num_terms() > BULK_CANCEL_TERMS {
            if let Some((q, found)) = bulk_cancel(&num, &lin, candidates) {
                num = q;
                for (a, m) in found {
                    *lin.get_mut(&a).expect("from lin") -= m;
                }
            }
        }
        for (a, e) in lin.iter_mut() {
            if let Some(c) = candidates {
                if !c.contains(a) {
                    continue;
                }
            }
            let ap = a.to_poly(&vars);
            while *e > 0 {
                match divide_by_linear(&num, a, &ap) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        lin.retain(|_, e| *e > 0);
        if !rest.is_constant() {
            let g = poly_gcd(&num, &rest);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides");
                rest = rest.div_exact(&g).expect("gcd divides");
            }
        }
        RatFunc { num, lin: lin.into_iter().collect(), rest }
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    /// Linear part of the denominator.
    pub fn linear_den(&self) -> &[(LinearForm, u32)] {
        &self.lin
    }

    /// Non-linear residue of the denominator (1 when absent).
    pub fn residual_den(&self) -> &MultiPoly {
        &self.rest
    }

    /// The expanded monic denominator.
    pub fn denominator(&self) -> MultiPoly {
        let lin: BTreeMap<_, _> = self.lin.iter().cloned().collect();
        &lin_product(self.vars(), &lin) * &self.rest
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.lin.is_empty() && self.rest.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<ExactScalar> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// `deg num − deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        let dl: i64 = self.lin.iter().map(|(_, e)| *e as i64).sum();
        let dr = self.rest.degree().unwrap_or(0) as i64;
        Some(dn - dl - dr)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.num.is_homogeneous() && self.rest.is_homogeneous()
    }

    /// Moves any factors of the residue equal to one of `forms` into the
    /// linear part.
    pub fn absorb_linear_factors(&self, forms: &[LinearForm]) -> RatFunc {
        if self.rest.is_constant() {
            return self.clone();
        }
        let mut rest = self.rest.clone();
        let mut lin = self.lin.clone();
        for a in forms {
            let (k, cof) = linear_multiplicity(&rest, a);
            if k > 0 {
                rest = cof;
                lin.push((a.clone(), k));
            }
        }
        let lc = rest.leading_coeff();
        let num = self.num.scale(&lc.inv().expect("nonzero"));
        RatFunc { num, lin: merge_lin(lin).into_iter().collect(), rest: rest.monic() }
    }

    /// Pole order along the hyperplane `α = 0`: multiplicity of α in the
    /// denominator minus its multiplicity in the numerator.
    pub fn ord_along(&self, alpha: &LinearForm) -> Result<i64, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroOrder);
        }
        if alpha.dim() != self.vars().len() {
            return Err(AlgebraError::DimensionMismatch { expected: self.vars().len(), found: alpha.dim() });
        }
        let mut den = self.lin.iter().find(|(a, _)| a == alpha).map(|(_, e)| *e as i64).unwrap_or(0);
        if !self.rest.is_constant() {
            den += linear_multiplicity(&self.rest, alpha).0 as i64;
        }
        let num = linear_multiplicity(&self.num, alpha).0 as i64;
        Ok(den - num)
    }

    /// `ord_α (Σ c_i f_i)`, `None` when the sum vanishes. The sum is taken
    /// over a common denominator and never reduced, since the order only
    /// depends on the two multiplicities of `α`.
    pub fn ord_of_combination(terms: &[(ExactScalar, &RatFunc)], alpha: &LinearForm) -> Result<Option<i64>, AlgebraError> {
        let live: Vec<_> = terms.iter().filter(|(c, f)| !c.is_zero() && !f.is_zero()).collect();
        let Some((_, first)) = live.first() else { return Ok(None) };
        let vars = first.vars().clone();
        if alpha.dim() != vars.len() {
            return Err(AlgebraError::DimensionMismatch { expected: vars.len(), found: alpha.dim() });
        }
        let mut common: BTreeMap<LinearForm, u32> = BTreeMap::new();
        let mut rests: Vec<&MultiPoly> = Vec::new();
        for (_, f) in &live {
            for (a, e) in &f.lin {
                let slot = common.entry(a.clone()).or_insert(0);
                *slot = (*slot).max(*e);
            }
            if !f.rest.is_constant() && !rests.contains(&&f.rest) {
                rests.push(&f.rest);
            }
        }
        let mut sum = MultiPoly::zero(&vars);
        for (c, f) in &live {
            let own: BTreeMap<&LinearForm, u32> = f.lin.iter().map(|(a, e)| (a, *e)).collect();
            let missing: BTreeMap<LinearForm, u32> =
                common.iter().map(|(a, e)| (a.clone(), e - own.get(a).copied().unwrap_or(0))).filter(|(_, e)| *e > 0).collect();
            let mut term = &f.num * &lin_product(&vars, &missing);
            for r in rests.iter().filter(|r| ***r != f.rest) {
                term = &term * r;
            }
            sum = &sum + &term.scale(c);
        }
        if sum.is_zero() {
            return Ok(None);
        }
        let mut den = common.get(alpha).copied().unwrap_or(0) as i64;
        for r in &rests {
            den += linear_multiplicity(r, alpha).0 as i64;
        }
        Ok(Some(den - linear_multiplicity(&sum, alpha).0 as i64))
    }

    pub fn scale(&self, c: &ExactScalar) -> RatFunc {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RatFunc { num: self.num.scale(c), lin: self.lin.clone(), rest: self.rest.clone() }
    }

    pub fn neg(&self) -> RatFunc {
        self.scale(&-ExactScalar::one())
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> RatFunc {
        self * &RatFunc::from_poly(p.clone())
    }

    /// Multiplies by `Π α^k` without expanding the factors against the
    /// denominator.
    pub fn mul_linear_powers(&self, powers: &[(LinearForm, i64)]) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        let vars = self.vars().clone();
        let mut lin: BTreeMap<LinearForm, u32> = self.lin.iter().cloned().collect();
        let mut num = self.num.clone();
        let mut candidates = Vec::new();
        for (a, k) in merge_signed(powers) {
            let e = lin.get(&a).copied().unwrap_or(0) as i64;
            if e == 0 && k < 0 {
                candidates.push(a.clone());
            }
            let ne = e - k;
            if ne >= 0 {
                if ne == 0 {
                    lin.remove(&a);
                } else {
                    lin.insert(a, ne as u32);
                }
            } else {
                lin.remove(&a);
                let ap = a.to_poly(&vars);
                for _ in 0..(-ne) {
                    num = &num * &ap;
                }
            }
        }
        let mut r = Self::assemble(num, lin.into_iter().collect(), Some(self.rest.clone()), Some(&candidates));
        if !r.rest.is_constant() {
            // the numerator grew; restore coprimality with the residue
            let g = poly_gcd(&r.num, &r.rest);
            if !g.is_constant() {
                r.num = r.num.div_exact(&g).expect("gcd divides");
                r.rest = r.rest.div_exact(&g).expect("gcd divides");
            }
        }
        r
    }

    pub fn inv(&self) -> Result<RatFunc, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let new_num = self.denominator();
        if let Some((c, a)) = LinearForm::from_poly(&self.num) {
            let n = new_num.scale(&c.inv().expect("nonzero"));
            return Ok(RatFunc { num: n, lin: vec![(a, 1)], rest: MultiPoly::one(self.vars()) });
        }
        if let Some(c) = self.num.constant_value() {
            return Ok(RatFunc::from_poly(new_num.scale(&c.inv().expect("nonzero"))));
        }
        let lc = self.num.leading_coeff();
        Ok(RatFunc {
            num: new_num.scale(&lc.inv().expect("nonzero")),
            lin: Vec::new(),
            rest: self.num.monic(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one(self.vars());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn try_div(&self, other: &RatFunc) -> Result<RatFunc, AlgebraError> {
        Ok(self * &other.inv()?)
    }

    /// ∂/∂x_var, with the quotient rule applied on the factored denominator.
    pub fn partial(&self, var: usize) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        let vars = self.vars().clone();
        let (l, m) = self.log_derivative_parts(&[var]);
        let r = &self.rest;
        let dn = self.num.partial(var);
        let numer = if r.is_one() {
            &(&dn * &l) - &(&self.num * &m[0])
        } else {
            let dr = r.partial(var);
            let left = &(&dn * &l) * r;
            let right = &self.num * &(&(&m[0] * r) + &(&l * &dr));
            &left - &right
        };
        let lin = self.lin.iter().map(|(a, e)| (a.clone(), e + 1));
        let rest = if r.is_one() { None } else { Some(r * r) };
        let _ = vars;
        Self::assemble(numer, lin.collect(), rest, None)
    }

    /// `L = Π α` over the linear denominator factors and, for each requested
    /// variable `i`, `M_i = Σ_k e_k ∂_i(α_k) Π_{j≠k} α_j`, so that the
    /// linear part's logarithmic derivative is `M_i / L`.
    fn log_derivative_parts(&self, vars_idx: &[usize]) -> (MultiPoly, Vec<MultiPoly>) {
        let vars = self.vars();
        let polys: Vec<MultiPoly> = self.lin.iter().map(|(a, _)| a.to_poly(vars)).collect();
        let n = polys.len();
        // prefix/suffix products give Π_{j≠k} α_j without division
        let mut prefix = vec![MultiPoly::one(vars)];
        for p in &polys {
            let next = prefix.last().expect("nonempty") * p;
            prefix.push(next);
        }
        let mut suffix = vec![MultiPoly::one(vars); n + 1];
        for k in (0..n).rev() {
            suffix[k] = &suffix[k + 1] * &polys[k];
        }
        let l = prefix[n].clone();
        let others: Vec<MultiPoly> = (0..n).map(|k| &prefix[k] * &suffix[k + 1]).collect();
        let ms = vars_idx
            .iter()
            .map(|&i| {
                let mut acc = MultiPoly::zero(vars);
                for (k, (a, e)) in self.lin.iter().enumerate() {
                    let c = &a.coeffs()[i] * &ExactScalar::from_i64(*e as i64);
                    if !c.is_zero() {
                        acc = &acc + &others[k].scale(&c);
                    }
                }
                acc
            })
            .collect();
        (l, ms)
    }

    /// `Σ_i h_i ∂f/∂x_i` for a derivation with coefficients `h`, computed
    /// over one common denominator and reduced once.
    pub fn apply_derivation(h: &[RatFunc], f: &RatFunc) -> RatFunc {
        let vars = f.vars().clone();
        assert_eq!(h.len(), vars.len(), "derivation dimension");
        if f.is_zero() || h.iter().all(|c| c.is_zero()) {
            return RatFunc::zero(&vars);
        }
        // common denominator E of the coefficients
        let (e_lin, e_rest, hn) = common_denominator(h);
        let active: Vec<usize> = (0..h.len()).filter(|&i| !hn[i].is_zero()).collect();
        let (l, m) = f.log_derivative_parts(&active);
        let r = &f.rest;
        let mut sum_dn = MultiPoly::zero(&vars);
        let mut sum_b = MultiPoly::zero(&vars);
        for (idx, &i) in active.iter().enumerate() {
            let dn = f.num.partial(i);
            if !dn.is_zero() {
                sum_dn = &sum_dn + &(&hn[i] * &dn);
            }
            let b = if r.is_one() { m[idx].clone() } else { &(&m[idx] * r) + &(&l * &r.partial(i)) };
            if !b.is_zero() {
                sum_b = &sum_b + &(&hn[i] * &b);
            }
        }
        let lr = if r.is_one() { l } else { &l * r };
        let numer = &(&lr * &sum_dn) - &(&f.num * &sum_b);
        let mut lin: Vec<(LinearForm, u32)> = f.lin.iter().map(|(a, e)| (a.clone(), e + 1)).collect();
        lin.extend(e_lin);
        let mut rest = if r.is_one() { MultiPoly::one(&vars) } else { r * r };
        if !e_rest.is_one() {
            rest = &rest * &e_rest;
        }
        let rest = if rest.is_one() { None } else { Some(rest) };
        Self::assemble(numer, lin, rest, None)
    }

    /// Image under the ring map `x_i ↦ images[i]`, the images being
    /// homogeneous linear polynomials forming an invertible substitution.
    pub fn substitute_linear(&self, images: &[MultiPoly]) -> RatFunc {
        let target = images.first().map(|p| p.vars().clone()).unwrap_or_else(|| self.vars().clone());
        let mut num = self.num.substitute(images);
        let mut lin = Vec::with_capacity(self.lin.len());
        for (a, e) in &self.lin {
            let img = a.to_poly(self.vars()).substitute(images);
            let (c, b) = LinearForm::from_poly(&img).expect("substitution maps linear forms to linear forms");
            let ci = c.inv().expect("nonzero").pow(*e);
            num = num.scale(&ci);
            lin.push((b, *e));
        }
        let rest = if self.rest.is_one() { None } else { Some(self.rest.substitute(images)) };
        let _ = target;
        Self::assemble(num, lin, rest, Some(&[]))
    }

    /// Re-express in a larger ring (see [`MultiPoly::embed`]).
    pub fn embed(&self, vars: &Vars, mapping: &[usize]) -> RatFunc {
        let num = self.num.embed(vars, mapping);
        let mut out_num = num;
        let mut lin = Vec::new();
        for (a, e) in &self.lin {
            let p = a.to_poly(self.vars()).embed(vars, mapping);
            let (c, b) = LinearForm::from_poly(&p).expect("embedding keeps linear forms");
            out_num = out_num.scale(&c.inv().expect("nonzero").pow(*e));
            lin.push((b, *e));
        }
        let rest = if self.rest.is_one() { None } else { Some(self.rest.embed(vars, mapping)) };
        Self::assemble(out_num, lin, rest, Some(&[]))
    }

    /// Canonical text, e.g. `(2*x^2*y - y^3)/(x*y*(x - y)*(x + y))`.
    pub fn to_text(&self) -> String {
        if self.is_polynomial() {
            return self.num.to_text();
        }
        let vars = self.vars();
        let n = self.num.to_text();
        let num = if self.num.num_terms() > 1 { format!("({n})") } else { n };
        let mut factors = Vec::new();
        for (a, e) in &self.lin {
            let p = a.to_poly(vars);
            let t = if p.num_terms() > 1 { format!("({})", p.to_text()) } else { p.to_text() };
            factors.push(if *e > 1 { format!("{t}^{e}") } else { t });
        }
        if !self.rest.is_one() {
            factors.push(format!("({})", self.rest.to_text()));
        }
        let den = if factors.len() == 1 { factors.pop().expect("one factor") } else { format!("({})", factors.join("*")) };
        format!("{num}/{den}")
    }
}

fn merge_signed(powers: &[(LinearForm, i64)]) -> Vec<(LinearForm, i64)> {
    let mut m: BTreeMap<LinearForm, i64> = BTreeMap::new();
    for (a, k) in powers {
        *m.entry(a.clone()).or_insert(0) += k;
    }
    m.into_iter().filter(|(_, k)| *k != 0).collect()
}

/// Common denominator `E = Π α^e · rest` of a list, and each entry's
/// numerator rescaled to `E`.
pub(crate) fn common_denominator(fs: &[RatFunc]) -> (Vec<(LinearForm, u32)>, MultiPoly, Vec<MultiPoly>) {
    let vars = fs[0].vars().clone();
    let mut lin: BTreeMap<LinearForm, u32> = BTreeMap::new();
    for f in fs.iter().filter(|f| !f.is_zero()) {
        for (a, e) in &f.lin {
            let slot = lin.entry(a.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
    }
    let mut rest = MultiPoly::one(&vars);
    for f in fs.iter().filter(|f| !f.rest.is_one()) {
        let g = poly_gcd(&rest, &f.rest);
        rest = &rest * &f.rest.div_exact(&g).expect("gcd divides");
    }
    let nums = fs
        .iter()
        .map(|f| {
            if f.is_zero() {
                return MultiPoly::zero(&vars);
            }
            let mut missing: BTreeMap<LinearForm, u32> = BTreeMap::new();
            for (a, &e) in &lin {
                let have = f.lin.iter().find(|(b, _)| b == a).map(|(_, k)| *k).unwrap_or(0);
                if e > have {
                    missing.insert(a.clone(), e - have);
                }
            }
            let mut n = &f.num * &lin_product(&vars, &missing);
            if !rest.is_one() {
                n = &n * &rest.div_exact(&f.rest).expect("residue divides lcm");
            }
            n
        })
        .collect();
    (lin.into_iter().collect(), rest, nums)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.vars() != other.vars() {
            return false;
        }
        if self.lin == other.lin && self.rest == other.rest {
            return self.num == other.num;
        }
        self.num == other.num && self.denominator() == other.denominator()
    }
}

impl Eq for RatFunc {}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> std::ops::Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        let pair = [self.clone(), rhs.clone()];
        let (lin, rest, nums) = common_denominator(&pair);
        // a factor can only cancel where both exponents agree
        let candidates: Vec<LinearForm> = lin
            .iter()
            .filter(|(a, _)| {
                let ea = self.lin.iter().find(|(b, _)| b == a).map(|(_, k)| *k).unwrap_or(0);
                let eb = rhs.lin.iter().find(|(b, _)| b == a).map(|(_, k)| *k).unwrap_or(0);
                ea == eb
            })
            .map(|(a, _)| a.clone())
            .collect();
        let numer = &nums[0] + &nums[1];
        let rest = if rest.is_one() { None } else { Some(rest) };
        RatFunc::assemble(numer, lin, rest, Some(&candidates))
    }
}

impl<'a> std::ops::Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &rhs.neg()
    }
}

impl<'a> std::ops::Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        let vars = self.vars().clone();
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(&vars);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut na = self.num.clone();
        let mut nb = rhs.num.clone();
        let mut la: BTreeMap<LinearForm, u32> = self.lin.iter().cloned().collect();
        let mut lb: BTreeMap<LinearForm, u32> = rhs.lin.iter().cloned().collect();
        cancel_against(&mut na, &mut lb);
        cancel_against(&mut nb, &mut la);
        let mut ra = self.rest.clone();
        let mut rb = rhs.rest.clone();
        if !rb.is_one() {
            let g = poly_gcd(&na, &rb);
            if !g.is_constant() {
                na = na.div_exact(&g).expect("gcd divides");
                rb = rb.div_exact(&g).expect("gcd divides");
            }
        }
        if !ra.is_one() {
            let g = poly_gcd(&nb, &ra);
            if !g.is_constant() {
                nb = nb.div_exact(&g).expect("gcd divides");
                ra = ra.div_exact(&g).expect("gcd divides");
            }
        }
        let num = &na * &nb;
        let lin: Vec<_> = la.into_iter().chain(lb).collect();
        let rest = &ra * &rb;
        let rest = if rest.is_one() { None } else { Some(rest) };
        RatFunc::assemble(num, lin, rest, Some(&[]))
    }
}

fn cancel_against(num: &mut MultiPoly, den: &mut BTreeMap<LinearForm, u32>) {
    if num.is_constant() {
        return;
    }
    let vars = num.vars().clone();
    for (a, e) in den.iter_mut() {
        let ap = a.to_poly(&vars);
        while *e > 0 {
            match divide_by_linear(num, a, &ap) {
                Some(q) => {
                    *num = q;
                    *e -= 1;
                }
                None => break,
            }
        }
    }
    den.retain(|_, e| *e > 0);
}

impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> (Vars, MultiPoly, MultiPoly) {
        let v = Vars::new(&["x", "y"]);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        (v, x, y)
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let (_, x, y) = ring();
        let f = RatFunc::new(&x.pow(2) - &y.pow(2), (&x - &y).scale(&ExactScalar::from_i64(2))).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.to_text(), "1/2*x + 1/2*y");
        let g = RatFunc::new(&x + &y, &(&x * &x) + &(&y * &y)).unwrap();
        assert_eq!(g.to_text(), "(x + y)/(x^2 + y^2)");
    }

    #[test]
    fn ord_along_examples() {
        let (v, x, _) = ring();
        let ax = LinearForm::from_poly(&x).unwrap().1;
        let inv_x = RatFunc::new(MultiPoly::one(&v), x.clone()).unwrap();
        assert_eq!(inv_x.ord_along(&ax).unwrap(), 1);
        assert_eq!(RatFunc::from_poly(x.pow(2)).ord_along(&ax).unwrap(), -2);
        assert_eq!(RatFunc::constant(&v, ExactScalar::from_i64(2)).ord_along(&ax).unwrap(), 0);
        assert_eq!(RatFunc::zero(&v).ord_along(&ax), Err(AlgebraError::ZeroOrder));
    }

    #[test]
    fn combination_orders_match_reduced_sums() {
        let (v, x, y) = ring();
        let ax = LinearForm::from_poly(&x).unwrap().1;
        let one = MultiPoly::one(&v);
        let f = RatFunc::new(y.clone(), x.clone()).unwrap();
        let g = RatFunc::new(&y + &x, x.pow(2)).unwrap();
        let h = RatFunc::new(one.clone(), &x + &y).unwrap();
        let c = |k| ExactScalar::from_i64(k);
        let cases: Vec<Vec<(ExactScalar, &RatFunc)>> = vec![
            vec![(c(1), &f), (c(-1), &f)],
            vec![(c(1), &g), (c(1), &h)],
            vec![(c(2), &f), (c(3), &g), (c(-1), &h)],
            vec![(c(1), &h)],
        ];
        for terms in cases {
            let mut sum = RatFunc::zero(&v);
            for (k, t) in &terms {
                sum = &sum + &t.scale(k);
            }
            let expect = if sum.is_zero() { None } else { Some(sum.ord_along(&ax).unwrap()) };
            assert_eq!(RatFunc::ord_of_combination(&terms, &ax).unwrap(), expect);
        }
    }

    #[test]
    fn sums_cancel_common_factors() {
        let (v, x, y) = ring();
        // 1/(x-y) - 1/(x+y) = 2y/(x²-y²)
        let a = RatFunc::new(MultiPoly::one(&v), &x - &y).unwrap();
        let b = RatFunc::new(MultiPoly::one(&v), &x + &y).unwrap();
        let s = &a - &b;
        assert_eq!(s, RatFunc::new(y.scale(&ExactScalar::from_i64(2)), &x.pow(2) - &y.pow(2)).unwrap());
        // x/(x-y) - y/(x-y) = 1
        let c = RatFunc::new(x.clone(), &x - &y).unwrap();
        let d = RatFunc::new(y.clone(), &x - &y).unwrap();
        assert_eq!(&c - &d, RatFunc::one(&v));
    }

    #[test]
    fn quotient_rule() {
        let (v, x, y) = ring();
        // ∂_x (y / x²) = -2y / x³
        let f = RatFunc::new(y.clone(), x.pow(2)).unwrap();
        let expected = RatFunc::new(y.scale(&ExactScalar::from_i64(-2)), x.pow(3)).unwrap();
        assert_eq!(f.partial(0), expected);
        // general residue: ∂_x 1/(x²+y²) = -2x/(x²+y²)²
        let g = RatFunc::new(MultiPoly::one(&v), &x.pow(2) + &y.pow(2)).unwrap();
        let e2 = RatFunc::new(x.scale(&ExactScalar::from_i64(-2)), (&x.pow(2) + &y.pow(2)).pow(2)).unwrap();
        assert_eq!(g.partial(0), e2);
    }

    #[test]
    fn linear_power_multiplication() {
        let (v, x, y) = ring();
        let ax = LinearForm::from_poly(&x).unwrap().1;
        let axy = LinearForm::from_poly(&(&x - &y)).unwrap().1;
        let f = RatFunc::from_linear_powers(&v, &[(ax.clone(), -2), (axy.clone(), 1)]);
        assert_eq!(f, RatFunc::new(&x - &y, x.pow(2)).unwrap());
        let g = f.mul_linear_powers(&[(ax, 3), (axy, -1)]);
        assert_eq!(g, RatFunc::from_poly(x));
    }

    #[test]
    fn text_rendering_of_fractions() {
        let (v, x, y) = ring();
        let q = &(&x.pow(3) * &y) - &(&x * &y.pow(3));
        let f = RatFunc::new(y.scale(&ExactScalar::from_i64(-2)), q).unwrap();
        assert_eq!(f.to_text(), "-2/(x^3 - x*y^2)");
        let forms: Vec<LinearForm> = [&x - &y, x.clone(), &x + &y]
            .iter()
            .map(|p| LinearForm::from_poly(p).unwrap().1)
            .collect();
        assert_eq!(f.absorb_linear_factors(&forms).to_text(), "-2/((x - y)*x*(x + y))");
        let g = RatFunc::new(MultiPoly::one(&v), x.clone()).unwrap();
        assert_eq!(g.to_text(), "1/x");
    }
}
