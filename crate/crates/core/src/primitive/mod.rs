//! Primitive derivations, the basis families Θ^(k) / Ξ^(k), and the
//! matrices G, G_k, D[G].

mod families;
mod gmatrix;

pub use families::{generate_families, BasisFamily, FamilySet, Member};
pub use gmatrix::{d_of_g, g_k_matrix, g_matrix, GMatrix, GKind};

use thiserror::Error;

use crate::coxeter::CoxeterDatum;
use crate::diffgeo::{apply_derivation, DerivationField, GeoError};
use crate::exact_algebra::{
    poly_matrix_det, ratfunc_matrix_det, AlgebraError, ExactScalar, LinearForm, MultiPoly, RatFunc,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitiveError {
    #[error("Jacobian of the invariants of factor {0} is singular")]
    SingularJacobian(usize),
    #[error("primitive derivation check failed: {0}")]
    Check(String),
    #[error("input is not W-invariant")]
    NotInvariant,
    #[error("ansatz for θ_{j}^({k}) on factor {factor} is inconsistent")]
    Inconsistent { factor: usize, j: usize, k: i64 },
    #[error("ansatz for θ_{j}^({k}) on factor {factor} has a kernel of dimension {dim}")]
    Underdetermined { factor: usize, j: usize, k: i64, dim: usize },
    #[error("k range [{0}, {1}] is invalid")]
    BadRange(i64, i64),
    #[error("{0}")]
    NotInR(String),
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug)]
pub struct PrimitiveDerivation {
    pub total: DerivationField,
    /// `D̂[i]`, zero outside factor i.
    pub per_factor: Vec<DerivationField>,
    /// Per factor, `J[j][i] = ∂P_j/∂x_i` over the factor's variables.
    pub jacobians: Vec<Vec<Vec<MultiPoly>>>,
    /// Per factor, `c` with `det J = c·Q[i]`.
    pub jacobian_constants: Vec<ExactScalar>,
}

/// Hyperplane forms of one factor.
pub(crate) fn factor_forms(d: &CoxeterDatum, factor: usize) -> Vec<LinearForm> {
    d.hyperplanes()[d.factors()[factor].hyperplanes.clone()].iter().map(|h| h.alpha.clone()).collect()
}

/// `Q[i]^k` as linear powers.
pub(crate) fn factor_q_power(d: &CoxeterDatum, factor: usize, k: i64) -> Vec<(LinearForm, i64)> {
    factor_forms(d, factor).into_iter().map(|a| (a, k)).collect()
}

/// Per factor, the derivation dual to the top invariant: the solution of
/// `Σ_i h_i ∂P_j/∂x_i = δ_{jℓ}`, by the adjugate of the Jacobian.
pub fn primitive_derivation(d: &CoxeterDatum) -> Result<PrimitiveDerivation, PrimitiveError> {
    let vars = d.vars().clone();
    let n = d.rank();
    let mut per_factor = Vec::new();
    let mut jacobians = Vec::new();
    let mut constants = Vec::new();
    for (fi, f) in d.factors().iter().enumerate() {
        let cols: Vec<usize> = f.variables().collect();
        let jac: Vec<Vec<MultiPoly>> =
            f.invariants.iter().map(|p| cols.iter().map(|&c| p.partial(c)).collect()).collect();
        let l = f.rank;
        let det = poly_matrix_det(&jac)?;
        let qf = factor_forms(d, fi).iter().fold(MultiPoly::one(&vars), |acc, a| &acc * &a.to_poly(&vars));
        let c = det
            .div_exact(&qf)
            .and_then(|q| q.constant_value())
            .filter(|c| !c.is_zero())
            .ok_or(PrimitiveError::SingularJacobian(fi))?;
        let c_inv = c.inv().expect("nonzero");
        let den: Vec<(LinearForm, u32)> = factor_forms(d, fi).into_iter().map(|a| (a, 1)).collect();
        let mut coeffs = vec![RatFunc::zero(&vars); n];
        for (i, &col) in cols.iter().enumerate() {
            let minor_poly = if l == 1 {
                MultiPoly::one(&vars)
            } else {
                let minor: Vec<Vec<MultiPoly>> = jac[..l - 1]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, p)| p.clone()).collect())
                    .collect();
                poly_matrix_det(&minor)?
            };
            let sign = if (i + l - 1) % 2 == 0 { c_inv.clone() } else { -&c_inv };
            coeffs[col] = RatFunc::with_linear_den(minor_poly.scale(&sign), &den);
        }
        per_factor.push(DerivationField::new(coeffs));
        jacobians.push(jac);
        constants.push(c);
    }
    let total = per_factor.iter().skip(1).fold(per_factor[0].clone(), |acc, x| &acc + x);
    let pd = PrimitiveDerivation { total, per_factor, jacobians, jacobian_constants: constants };
    pd.check(d)?;
    Ok(pd)
}

impl PrimitiveDerivation {
    /// `D̂[i](P_j[i']) = δ_{ii'} δ_{j,ℓ[i]}` and `Q·D` polynomial.
    pub fn check(&self, d: &CoxeterDatum) -> Result<(), PrimitiveError> {
        let vars = d.vars();
        for (i, dh) in self.per_factor.iter().enumerate() {
            for (i2, f) in d.factors().iter().enumerate() {
                for (j, p) in f.invariants.iter().enumerate() {
                    let v = apply_derivation(dh, &RatFunc::from_poly(p.clone()));
                    let want = if i == i2 && j + 1 == f.rank { RatFunc::one(vars) } else { RatFunc::zero(vars) };
                    if v != want {
                        return Err(PrimitiveError::Check(format!(
                            "D[{i}] applied to P_{}[{i2}] gives {}",
                            j + 1,
                            v.to_text()
                        )));
                    }
                }
            }
        }
        let q = d.q_power_constant(1);
        for h in self.total.coeffs() {
            if !h.mul_linear_powers(&q).is_polynomial() {
                return Err(PrimitiveError::Check(format!("Q·D is not polynomial: {}", h.to_text())));
            }
        }
        Ok(())
    }

    /// `c′` with `det[∂h_j/∂x_i] = c′·Q[i]^{-2}` over factor i's variables.
    pub fn coefficient_jacobian_constant(&self, d: &CoxeterDatum, factor: usize) -> Result<Option<ExactScalar>, PrimitiveError> {
        let cols: Vec<usize> = d.factors()[factor].variables().collect();
        let h = self.per_factor[factor].coeffs();
        let m: Vec<Vec<RatFunc>> = cols.iter().map(|&j| cols.iter().map(|&i| h[j].partial(i)).collect()).collect();
        let det = ratfunc_matrix_det(&m)?;
        let scaled = det.mul_linear_powers(&factor_q_power(d, factor, 2));
        Ok(scaled.constant_value().filter(|c| !c.is_zero()))
    }
}

/// `D(f) = 0` for an invariant polynomial `f`.
pub fn t_membership(f: &MultiPoly, d: &CoxeterDatum, pd: &PrimitiveDerivation) -> Result<bool, PrimitiveError> {
    if !d.is_invariant_poly(f) {
        return Err(PrimitiveError::NotInvariant);
    }
    Ok(apply_derivation(&pd.total, &RatFunc::from_poly(f.clone())).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::text::parse_ratfunc;

    #[test]
    fn a1_and_b2() {
        let d = CoxeterDatum::from_type_string("A1").unwrap();
        let pd = primitive_derivation(&d).unwrap();
        assert_eq!(pd.total.to_texts(), vec!["1/x"]);
        let b2 = CoxeterDatum::from_type_string("B2").unwrap();
        let pd = primitive_derivation(&b2).unwrap();
        let v = b2.vars();
        let expected = [
            parse_ratfunc("-2*y/(x^3*y - x*y^3)", v).unwrap(),
            parse_ratfunc("2*x/(x^3*y - x*y^3)", v).unwrap(),
        ];
        assert_eq!(pd.total.coeffs(), &expected);
    }

    #[test]
    fn t_membership_examples() {
        let d = CoxeterDatum::from_type_string("A1xA1").unwrap();
        let pd = primitive_derivation(&d).unwrap();
        assert_eq!(pd.total.to_texts(), vec!["1/x", "1/y"]);
        let p: Vec<&MultiPoly> = d.invariants().collect();
        assert!(t_membership(&(p[1] - p[0]), &d, &pd).unwrap());
        assert!(!t_membership(p[1], &d, &pd).unwrap());
        let x = MultiPoly::var(d.vars(), 0);
        assert_eq!(t_membership(&x, &d, &pd), Err(PrimitiveError::NotInvariant));
    }
}
