use std::cmp::Ordering;
use std::fmt;

use super::poly::{MultiPoly, Vars};
use super::scalar::ExactScalar;
use super::AlgebraError;

/// Nonzero linear form `Σ a_i x_i`, scaled so the first nonzero coefficient
/// is 1. Two forms define the same hyperplane iff they are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<ExactScalar>,
}

impl LinearForm {
    /// Normalizes `coeffs`, returning the form and the scalar `c` with
    /// `raw = c · form`.
    pub fn normalize(coeffs: &[ExactScalar]) -> Result<(ExactScalar, LinearForm), AlgebraError> {
        let lead = coeffs.iter().find(|c| !c.is_zero()).ok_or(AlgebraError::ZeroLinearForm)?.clone();
        let inv = lead.inv().expect("nonzero");
        let coeffs = coeffs.iter().map(|c| c * &inv).collect();
        Ok((lead, LinearForm { coeffs }))
    }

    pub fn new(coeffs: &[ExactScalar]) -> Result<LinearForm, AlgebraError> {
        Ok(Self::normalize(coeffs)?.1)
    }

    /// Reads a homogeneous degree-one polynomial.
    pub fn from_poly(p: &MultiPoly) -> Option<(ExactScalar, LinearForm)> {
        if p.degree() != Some(1) || !p.is_homogeneous() {
            return None;
        }
        let n = p.nvars();
        let coeffs: Vec<ExactScalar> =
            (0..n).map(|i| p.coefficient(&super::poly::Monomial::var(n, i))).collect();
        Self::normalize(&coeffs).ok()
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn pivot(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).expect("normalized form is nonzero")
    }

    pub fn to_poly(&self, vars: &Vars) -> MultiPoly {
        MultiPoly::linear(vars, &self.coeffs)
    }

    /// A fixed point on the hyperplane `α = 0`, used for cheap
    /// non-divisibility screening.
    pub fn sample_point(&self) -> Vec<ExactScalar> {
        const SEEDS: [i64; 8] = [2, -3, 5, 7, -11, 13, 17, -19];
        let p = self.pivot();
        let mut point: Vec<ExactScalar> =
            (0..self.dim()).map(|i| ExactScalar::from_i64(SEEDS[i % SEEDS.len()])).collect();
        let mut s = ExactScalar::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if j != p {
                s += &(c * &point[j]);
            }
        }
        point[p] = -s;
        point
    }

    pub fn to_text(&self, vars: &Vars) -> String {
        self.to_poly(vars).to_text()
    }
}

impl PartialOrd for LinearForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_makes_hyperplanes_comparable() {
        let a = LinearForm::new(&[ExactScalar::from_i64(2), ExactScalar::from_i64(-2)]).unwrap();
        let b = LinearForm::new(&[ExactScalar::from_i64(-1), ExactScalar::from_i64(1)]).unwrap();
        assert_eq!(a, b);
        assert!(LinearForm::new(&[ExactScalar::zero(), ExactScalar::zero()]).is_err());
    }

    #[test]
    fn sample_point_lies_on_hyperplane() {
        let v = Vars::new(&["x", "y", "z"]);
        let a = LinearForm::new(&[ExactScalar::zero(), ExactScalar::from_i64(3), ExactScalar::ratio(1, 2)])
            .unwrap();
        assert!(a.to_poly(&v).eval(&a.sample_point()).is_zero());
    }
}
