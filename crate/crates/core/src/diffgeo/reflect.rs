use crate::exact_algebra::{ExactScalar, MultiPoly, RatFunc, Vars};

use super::{DerivationField, Metric, OneForm};

/// Orthogonal reflection through `ker α`, acting on coordinates by
/// `s(x_i) = Σ_k S_ik x_k`.
#[derive(Clone, Debug)]
pub struct Reflection {
    root: Vec<ExactScalar>,
    matrix: Vec<Vec<ExactScalar>>,
    images: Vec<MultiPoly>,
}

impl Reflection {
    /// `β ↦ β − 2 I*(β, α) / I*(α, α) · α` on V*.
    pub fn new(vars: &Vars, root: &[ExactScalar], g: &Metric) -> Reflection {
        let n = root.len();
        assert_eq!(n, g.dim(), "root dimension");
        let norm = g.dual_pairing(root, root);
        assert!(!norm.is_zero(), "zero root");
        let two_over = &ExactScalar::from_i64(2) / &norm;
        let u: Vec<ExactScalar> = (0..n)
            .map(|i| {
                let mut s = ExactScalar::zero();
                for (j, a) in root.iter().enumerate() {
                    s += &(&g.inverse_gram()[i][j] * a);
                }
                s
            })
            .collect();
        let matrix: Vec<Vec<ExactScalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let delta = if i == k { ExactScalar::one() } else { ExactScalar::zero() };
                        &delta - &(&(&two_over * &u[i]) * &root[k])
                    })
                    .collect()
            })
            .collect();
        let images = matrix.iter().map(|row| MultiPoly::linear(vars, row)).collect();
        Reflection { root: root.to_vec(), matrix, images }
    }

    pub fn root(&self) -> &[ExactScalar] {
        &self.root
    }

    pub fn matrix(&self) -> &[Vec<ExactScalar>] {
        &self.matrix
    }

    /// Image of a covector's coefficient vector.
    pub fn apply_covector(&self, b: &[ExactScalar]) -> Vec<ExactScalar> {
        let n = b.len();
        (0..n)
            .map(|k| {
                let mut s = ExactScalar::zero();
                for (i, bi) in b.iter().enumerate() {
                    if !bi.is_zero() {
                        s += &(bi * &self.matrix[i][k]);
                    }
                }
                s
            })
            .collect()
    }

    fn mix(&self, v: &[RatFunc], transpose: bool) -> Vec<RatFunc> {
        let n = v.len();
        let vars = v[0].vars().clone();
        (0..n)
            .map(|out| {
                let mut acc = RatFunc::zero(&vars);
                for (inp, f) in v.iter().enumerate() {
                    let c = if transpose { &self.matrix[inp][out] } else { &self.matrix[out][inp] };
                    if !c.is_zero() && !f.is_zero() {
                        acc = &acc + &f.scale(c);
                    }
                }
                acc
            })
            .collect()
    }
}

pub trait Reflect {
    fn reflect(&self, s: &Reflection) -> Self;
}

impl Reflect for MultiPoly {
    fn reflect(&self, s: &Reflection) -> MultiPoly {
        self.substitute(&s.images)
    }
}

impl Reflect for RatFunc {
    fn reflect(&self, s: &Reflection) -> RatFunc {
        self.substitute_linear(&s.images)
    }
}

impl Reflect for OneForm {
    fn reflect(&self, s: &Reflection) -> OneForm {
        let moved: Vec<RatFunc> = self.coeffs().iter().map(|f| f.reflect(s)).collect();
        OneForm::new(s.mix(&moved, true))
    }
}

impl Reflect for DerivationField {
    fn reflect(&self, s: &Reflection) -> DerivationField {
        let moved: Vec<RatFunc> = self.coeffs().iter().map(|f| f.reflect(s)).collect();
        DerivationField::new(s.mix(&moved, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_reflection() {
        let v = Vars::new(&["x", "y"]);
        let g = Metric::euclidean(2);
        let s = Reflection::new(&v, &[ExactScalar::one(), ExactScalar::zero()], &g);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        assert_eq!(x.reflect(&s), -&x);
        assert_eq!(y.reflect(&s), y);
    }
}
