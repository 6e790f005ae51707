//! Rational 1-forms and derivations on V, the pairing I*, top wedges,
//! covariant derivatives along a derivation, and reflections.

mod metric;
mod reflect;

pub use metric::Metric;
pub use reflect::{Reflect, Reflection};

use rand::Rng;
use thiserror::Error;

use crate::exact_algebra::{
    ratfunc_matrix_det, text::parse_ratfunc, AlgebraError, ExactScalar, LinearForm, MultiPoly, RatFunc, Vars,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeoError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} forms, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `ω = Σ f_i dx_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    coeffs: Vec<RatFunc>,
}

/// `ξ = Σ h_i ∂_{x_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationField {
    coeffs: Vec<RatFunc>,
}

macro_rules! coefficient_vector {
    ($t:ident) => {
        impl $t {
            pub fn new(coeffs: Vec<RatFunc>) -> Self {
                assert!(!coeffs.is_empty(), "empty coefficient vector");
                $t { coeffs }
            }

            pub fn zero(vars: &Vars) -> Self {
                $t { coeffs: vec![RatFunc::zero(vars); vars.len()] }
            }

            pub fn coeffs(&self) -> &[RatFunc] {
                &self.coeffs
            }

            pub fn into_coeffs(self) -> Vec<RatFunc> {
                self.coeffs
            }

            pub fn dim(&self) -> usize {
                self.coeffs.len()
            }

            pub fn vars(&self) -> &Vars {
                self.coeffs[0].vars()
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.iter().all(|c| c.is_zero())
            }

            pub fn scale_by(&self, f: &RatFunc) -> Self {
                $t { coeffs: self.coeffs.iter().map(|c| c * f).collect() }
            }

            pub fn scale(&self, c: &ExactScalar) -> Self {
                $t { coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect() }
            }

            pub fn mul_linear_powers(&self, powers: &[(LinearForm, i64)]) -> Self {
                $t { coeffs: self.coeffs.iter().map(|f| f.mul_linear_powers(powers)).collect() }
            }

            pub fn to_texts(&self) -> Vec<String> {
                self.coeffs.iter().map(|c| c.to_text()).collect()
            }

            pub fn from_texts<S: AsRef<str>>(vars: &Vars, texts: &[S]) -> Result<Self, GeoError> {
                if texts.len() != vars.len() {
                    return Err(GeoError::DimensionMismatch { expected: vars.len(), found: texts.len() });
                }
                let coeffs = texts.iter().map(|t| parse_ratfunc(t.as_ref(), vars)).collect::<Result<_, _>>()?;
                Ok($t { coeffs })
            }

            /// Common homogeneity degree of the nonzero coefficients.
            pub fn degree(&self) -> Option<i64> {
                let mut d = None;
                for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
                    if !c.is_homogeneous() {
                        return None;
                    }
                    let cd = c.degree();
                    if d.is_some() && d != cd {
                        return None;
                    }
                    d = cd;
                }
                d
            }
        }

        impl<'a> std::ops::Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
                $t { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
            }
        }

        impl<'a> std::ops::Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
                $t { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
            }
        }
    };
}

coefficient_vector!(OneForm);
coefficient_vector!(DerivationField);

impl OneForm {
    /// `dx_i`.
    pub fn dx(vars: &Vars, i: usize) -> OneForm {
        let coeffs = (0..vars.len())
            .map(|j| if i == j { RatFunc::one(vars) } else { RatFunc::zero(vars) })
            .collect();
        OneForm { coeffs }
    }

    /// `df` for a polynomial `f`.
    pub fn differential(f: &MultiPoly) -> OneForm {
        OneForm { coeffs: (0..f.nvars()).map(|i| RatFunc::from_poly(f.partial(i))).collect() }
    }

    /// `dα` for a linear form.
    pub fn of_linear(vars: &Vars, a: &LinearForm) -> OneForm {
        OneForm { coeffs: a.coeffs().iter().map(|c| RatFunc::constant(vars, c.clone())).collect() }
    }
}

impl DerivationField {
    /// `∂_{x_i}`.
    pub fn partial(vars: &Vars, i: usize) -> DerivationField {
        DerivationField { coeffs: OneForm::dx(vars, i).coeffs }
    }

    /// `ξ(α) = Σ h_i a_i` for a linear form with coefficients `a`.
    pub fn on_linear(&self, a: &[ExactScalar]) -> RatFunc {
        let mut acc = RatFunc::zero(self.vars());
        for (h, c) in self.coeffs.iter().zip(a) {
            if !c.is_zero() && !h.is_zero() {
                acc = &acc + &h.scale(c);
            }
        }
        acc
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), GeoError> {
    if expected != found {
        return Err(GeoError::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn mat_vec(m: &[Vec<ExactScalar>], v: &[RatFunc]) -> Vec<RatFunc> {
    let vars = v[0].vars().clone();
    m.iter()
        .map(|row| {
            let mut acc = RatFunc::zero(&vars);
            for (c, f) in row.iter().zip(v) {
                if !c.is_zero() && !f.is_zero() {
                    acc = &acc + &f.scale(c);
                }
            }
            acc
        })
        .collect()
}

/// `coeffs(ω)ᵀ · inverse_gram · coeffs(η)`.
pub fn istar_pairing(omega: &OneForm, eta: &OneForm, g: &Metric) -> Result<RatFunc, GeoError> {
    check_dim(g.dim(), omega.dim())?;
    check_dim(g.dim(), eta.dim())?;
    let v = mat_vec(g.inverse_gram(), &eta.coeffs);
    let mut acc = RatFunc::zero(omega.vars());
    for (a, b) in omega.coeffs.iter().zip(&v) {
        if !a.is_zero() && !b.is_zero() {
            acc = &acc + &(a * b);
        }
    }
    Ok(acc)
}

/// The derivation `I*(ω)` with `I*(ω)(α) = I*(ω, dα)`.
pub fn istar_map(omega: &OneForm, g: &Metric) -> Result<DerivationField, GeoError> {
    check_dim(g.dim(), omega.dim())?;
    Ok(DerivationField { coeffs: mat_vec(g.inverse_gram(), &omega.coeffs) })
}

pub fn istar_inverse(xi: &DerivationField, g: &Metric) -> Result<OneForm, GeoError> {
    check_dim(g.dim(), xi.dim())?;
    Ok(OneForm { coeffs: mat_vec(g.gram(), &xi.coeffs) })
}

/// The scalar `c` with `ω_1 ∧ ⋯ ∧ ω_ℓ = c · dx_1 ∧ ⋯ ∧ dx_ℓ`.
pub fn wedge_top(forms: &[OneForm]) -> Result<RatFunc, GeoError> {
    let n = forms.first().map(|f| f.dim()).unwrap_or(0);
    if forms.len() != n || n == 0 {
        return Err(GeoError::WrongCount { expected: n, found: forms.len() });
    }
    for f in forms {
        check_dim(n, f.dim())?;
    }
    let rows: Vec<Vec<RatFunc>> = forms.iter().map(|f| f.coeffs.clone()).collect();
    Ok(ratfunc_matrix_det(&rows)?)
}

/// `det[ξ_j(x_i)]`, the coefficient determinant of ℓ derivations.
pub fn derivation_det(fields: &[DerivationField]) -> Result<RatFunc, GeoError> {
    let forms: Vec<OneForm> = fields.iter().map(|x| OneForm { coeffs: x.coeffs.clone() }).collect();
    wedge_top(&forms)
}

pub fn apply_derivation(xi: &DerivationField, f: &RatFunc) -> RatFunc {
    RatFunc::apply_derivation(&xi.coeffs, f)
}

/// `∇_D ω = Σ D(f_i) dx_i`.
pub fn nabla_on_form(d: &DerivationField, omega: &OneForm) -> OneForm {
    OneForm { coeffs: omega.coeffs.iter().map(|f| apply_derivation(d, f)).collect() }
}

/// `(∇_D ξ)(α) = D(ξ(α))`.
pub fn nabla_on_derivation(d: &DerivationField, xi: &DerivationField) -> DerivationField {
    DerivationField { coeffs: xi.coeffs.iter().map(|f| apply_derivation(d, f)).collect() }
}

/// A random polynomial with small integer coefficients and total degree at
/// most `max_deg`.
pub fn random_poly<R: Rng>(vars: &Vars, max_deg: u32, terms: usize, rng: &mut R) -> MultiPoly {
    let n = vars.len();
    let mut acc = MultiPoly::zero(vars);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        let c = ExactScalar::from_i64(rng.gen_range(-3..=3));
        let m = crate::exact_algebra::Monomial::from_exponents(&e);
        acc = &acc + &MultiPoly::one(vars).mul_monomial(&m, &c);
    }
    acc
}

/// A random rational 1-form whose coefficient denominators are products of
/// the given linear forms.
pub fn random_form<R: Rng>(vars: &Vars, poles: &[LinearForm], rng: &mut R) -> OneForm {
    let coeffs = (0..vars.len())
        .map(|_| {
            let num = random_poly(vars, 2, 3, rng);
            let mut den = Vec::new();
            if !poles.is_empty() {
                for _ in 0..rng.gen_range(0..=2) {
                    den.push((poles[rng.gen_range(0..poles.len())].clone(), -1));
                }
            }
            RatFunc::from_poly(num).mul_linear_powers(&den)
        })
        .collect();
    OneForm { coeffs }
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
    fn pairing_examples() {
        let (v, x, _) = ring();
        let g = Metric::euclidean(2);
        let dx = OneForm::dx(&v, 0);
        let dy = OneForm::dx(&v, 1);
        assert_eq!(istar_pairing(&dx, &dx, &g).unwrap(), RatFunc::one(&v));
        assert!(istar_pairing(&dx, &dy, &g).unwrap().is_zero());
        let xdx = dx.scale_by(&RatFunc::from_poly(x.clone()));
        assert_eq!(istar_pairing(&xdx, &dx, &g).unwrap(), RatFunc::from_poly(x));
    }

    #[test]
    fn wedge_examples() {
        let (v, x, y) = ring();
        let dx = OneForm::dx(&v, 0);
        let dy = OneForm::dx(&v, 1);
        assert_eq!(wedge_top(&[dx.clone(), dy.clone()]).unwrap(), RatFunc::one(&v));
        let a = dx.scale_by(&RatFunc::from_poly(x.clone()));
        let b = dy.scale_by(&RatFunc::from_poly(y.clone()));
        assert_eq!(wedge_top(&[a, b]).unwrap(), RatFunc::from_poly(&x * &y));
        assert!(matches!(wedge_top(&[dx]), Err(GeoError::WrongCount { .. })));
    }

    #[test]
    fn one_variable_covariant_derivative() {
        let v = Vars::new(&["x"]);
        let x = MultiPoly::var(&v, 0);
        let ax = LinearForm::from_poly(&x).unwrap().1;
        let d = DerivationField::new(vec![RatFunc::from_linear_powers(&v, &[(ax.clone(), -1)])]);
        let half_x2 = RatFunc::from_poly(x.pow(2).scale(&ExactScalar::ratio(1, 2)));
        assert_eq!(apply_derivation(&d, &half_x2), RatFunc::one(&v));
        let cubic = OneForm::new(vec![RatFunc::from_poly(x.pow(3).scale(&ExactScalar::ratio(1, 3)))]);
        assert_eq!(nabla_on_form(&d, &cubic), OneForm::new(vec![RatFunc::from_poly(x.clone())]));
        let xdx = OneForm::new(vec![RatFunc::from_poly(x.clone())]);
        assert_eq!(nabla_on_form(&d, &xdx), OneForm::new(vec![RatFunc::from_linear_powers(&v, &[(ax, -1)])]));
        assert!(nabla_on_form(&d, &OneForm::dx(&v, 0)).is_zero());
    }
}
