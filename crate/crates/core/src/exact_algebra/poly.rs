//! Sparse multivariate polynomials over [`ExactScalar`], graded-lex ordered.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use super::scalar::ExactScalar;
use super::AlgebraError;

/// Ordered list of variable names shared by every polynomial of a ring.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector. Ordered graded-lexicographically with the first
/// variable largest.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub(crate) SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, ExactScalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation; fails when the variable lists differ.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly, AlgebraError> {
    if a.vars != b.vars {
        return Err(AlgebraError::VariableMismatch);
    }
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Sub => a - b,
        PolyOp::Mul => a * b,
    })
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, ExactScalar::one())
    }

    pub fn constant(vars: &Vars, c: ExactScalar) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial::var(vars.len(), i), ExactScalar::one());
        p
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self, AlgebraError> {
        let i = vars.index_of(name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, i))
    }

    /// `Σ c_i x_i`.
    pub fn linear(vars: &Vars, coeffs: &[ExactScalar]) -> Self {
        let mut p = Self::zero(vars);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(vars.len(), i), c.clone());
            }
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ExactScalar)>>(vars: &Vars, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the leading one down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.last_key_value()
    }

    pub fn leading_coeff(&self) -> ExactScalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The constant value when the polynomial is a constant.
    pub fn constant_value(&self) -> Option<ExactScalar> {
        if self.is_zero() {
            return Some(ExactScalar::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.low_degree()
    }

    /// True when only variables with indices in `allowed` occur.
    pub fn supported_in(&self, allowed: &[usize]) -> bool {
        self.terms.keys().all(|m| m.0.iter().enumerate().all(|(i, &e)| e == 0 || allowed.contains(&i)))
    }

    fn add_term(&mut self, m: Monomial, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn sub_term(&mut self, m: Monomial, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(-c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() -= c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &ExactScalar) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn partial(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] = e - 1;
            out.terms.insert(m2, c * &ExactScalar::from_i64(e as i64));
        }
        out
    }

    pub fn partial_named(&self, name: &str) -> Result<MultiPoly, AlgebraError> {
        let i = self.vars.index_of(name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(self.partial(i))
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &MultiPoly) -> Option<MultiPoly> {
        let (glm, glc) = g.leading()?;
        if self.is_zero() {
            return Some(Self::zero(&self.vars));
        }
        let glc_inv = glc.inv()?;
        if g.terms.len() == 1 && glm.is_one() {
            return Some(self.scale(&glc_inv));
        }
        if self.degree()? < g.degree()? {
            return None;
        }
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.last_key_value() {
            let t = m.checked_div(glm)?;
            let tc = c * &glc_inv;
            for (gm, gc) in &g.terms {
                let key = gm.mul(&t);
                let val = gc * &tc;
                use std::collections::btree_map::Entry;
                match rem.entry(key) {
                    Entry::Vacant(v) => {
                        v.insert(-val);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() -= &val;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quot.insert(t, tc);
        }
        Some(MultiPoly { vars: self.vars.clone(), terms: quot })
    }

    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        assert_eq!(point.len(), self.nvars(), "evaluation point has wrong dimension");
        let mut powers: Vec<Vec<ExactScalar>> = Vec::with_capacity(point.len());
        for (i, p) in point.iter().enumerate() {
            let top = self.degree_in(i) as usize;
            let mut v = Vec::with_capacity(top + 1);
            v.push(ExactScalar::one());
            for k in 1..=top {
                let next = &v[k - 1] * p;
                v.push(next);
            }
            powers.push(v);
        }
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            acc += &t;
        }
        acc
    }

    /// `p(images[0], …, images[n-1])` by nested Horner evaluation. The
    /// images may live in a different ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_else(|| self.vars.clone());
        let terms: Vec<(&[u32], &ExactScalar)> =
            self.terms.iter().map(|(m, c)| (m.exponents(), c)).collect();
        subst_rec(&terms, 0, images, &target)
    }

    /// Re-express in a larger ring; variable `i` becomes `mapping[i]`.
    pub fn embed(&self, vars: &Vars, mapping: &[usize]) -> MultiPoly {
        let n = vars.len();
        let mut out = MultiPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = SmallVec::from_elem(0u32, n);
            for (i, &k) in m.0.iter().enumerate() {
                e[mapping[i]] += k;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Same polynomial read in another ring with identical variable names.
    pub fn with_vars(&self, vars: &Vars) -> Result<MultiPoly, AlgebraError> {
        if vars != &self.vars {
            return Err(AlgebraError::VariableMismatch);
        }
        Ok(MultiPoly { vars: vars.clone(), terms: self.terms.clone() })
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms().enumerate() {
            let t = term_text(&self.vars, m, c);
            if idx == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

fn monomial_text(vars: &Vars, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars.names()[i].clone()),
            _ => parts.push(format!("{}^{}", vars.names()[i], e)),
        }
    }
    parts.join("*")
}

fn term_text(vars: &Vars, m: &Monomial, c: &ExactScalar) -> String {
    if m.is_one() {
        return c.to_text();
    }
    let mono = monomial_text(vars, m);
    if c.is_one() {
        mono
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{}*{mono}", c.to_text())
    }
}

fn subst_rec(terms: &[(&[u32], &ExactScalar)], var: usize, images: &[MultiPoly], target: &Vars) -> MultiPoly {
    if terms.is_empty() {
        return MultiPoly::zero(target);
    }
    if var == images.len() {
        let mut c = ExactScalar::zero();
        for (_, v) in terms {
            c += v;
        }
        return MultiPoly::constant(target, c);
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &ExactScalar)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[var]).or_default().push((e, c));
    }
    let top = *groups.keys().next_back().expect("nonempty");
    let mut acc = MultiPoly::zero(target);
    for e in (0..=top).rev() {
        if !acc.is_zero() {
            acc = &acc * &images[var];
        }
        if let Some(g) = groups.get(&e) {
            acc = &acc + &subst_rec(g, var + 1, images, target);
        }
    }
    acc
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.vars == rhs.vars, "polynomials from different rings");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.vars == rhs.vars, "polynomials from different rings");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.sub_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.vars == rhs.vars, "polynomials from different rings");
        let mut out = MultiPoly::zero(&self.vars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        if let Some(c) = small.constant_value() {
            return big.scale(&c);
        }
        let mut acc: std::collections::HashMap<Monomial, ExactScalar> =
            std::collections::HashMap::with_capacity((big.terms.len() * small.terms.len()).min(1 << 16));
        for (ms, cs) in &small.terms {
            for (mb, cb) in &big.terms {
                let p = cs * cb;
                match acc.entry(ms.mul(mb)) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += &p;
                    }
                }
            }
        }
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Vars, MultiPoly, MultiPoly) {
        let v = Vars::new(&["x", "y"]);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        (v, x, y)
    }

    #[test]
    fn cancellation_and_difference_of_squares() {
        let (_, x, y) = xy();
        assert_eq!((&(&x + &y) + &(&x - &y)).to_text(), "2*x");
        assert_eq!((&(&x + &y) * &(&x - &y)).to_text(), "x^2 - y^2");
        let f = &(&x.pow(3) * &y) - &(&x * &y.pow(3));
        assert_eq!((&f * &MultiPoly::one(x.vars())).to_text(), "x^3*y - x*y^3");
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let (_, x, _) = xy();
        let other = MultiPoly::var(&Vars::new(&["u"]), 0);
        assert_eq!(poly_arith(&x, &other, PolyOp::Add), Err(AlgebraError::VariableMismatch));
    }

    #[test]
    fn partial_derivatives() {
        let (_, x, y) = xy();
        let quarter = ExactScalar::ratio(1, 4);
        let f = (&x.pow(2) * &y.pow(2)).scale(&quarter);
        assert_eq!(f.partial_named("x").unwrap().to_text(), "1/2*x*y^2");
        assert!(MultiPoly::constant(x.vars(), ExactScalar::from_i64(7)).partial(0).is_zero());
        let g = &(&x.pow(3) * &y) - &(&x * &y.pow(3));
        assert_eq!(g.partial_named("y").unwrap().to_text(), "x^3 - 3*x*y^2");
        assert_eq!(g.partial_named("z"), Err(AlgebraError::UnknownVariable("z".into())));
    }

    #[test]
    fn exact_division() {
        let (_, x, y) = xy();
        let f = &(&x.pow(3) * &y) - &(&x * &y.pow(3));
        let q = f.div_exact(&(&x - &y)).unwrap();
        assert_eq!(q.to_text(), "x^2*y + x*y^2");
        assert!(f.div_exact(&(&x + &y.scale(&ExactScalar::from_i64(2)))).is_none());
    }

    #[test]
    fn horner_substitution_matches_expansion() {
        let (_, x, y) = xy();
        let f = &(&x.pow(3) * &y) - &(&x * &y.pow(3));
        // swap x and y
        let s = f.substitute(&[y.clone(), x.clone()]);
        assert_eq!(s, -&f);
        let shifted = f.substitute(&[&x + &y, y.clone()]);
        let direct = &(&(&x + &y).pow(3) * &y) - &(&(&x + &y) * &y.pow(3));
        assert_eq!(shifted, direct);
    }

    #[test]
    fn grlex_leading_term() {
        let (_, x, y) = xy();
        let f = &(&y.pow(3) + &(&x * &y)) + &x.pow(2);
        assert_eq!(f.to_text(), "y^3 + x^2 + x*y");
    }
}
