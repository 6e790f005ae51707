use crate::exact_algebra::{scalar_det, solve_linear, ExactScalar, LinearSolution};

use super::GeoError;

/// Inner product on V together with the induced pairing on V*.
///
/// `inverse_gram[i][j] = I*(dx_i, dx_j)`; `gram` is its inverse, the Gram
/// matrix of the basis of V dual to the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    gram: Vec<Vec<ExactScalar>>,
    inverse_gram: Vec<Vec<ExactScalar>>,
}

fn invert(m: &[Vec<ExactScalar>]) -> Result<Vec<Vec<ExactScalar>>, GeoError> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<ExactScalar> = (0..n).map(|i| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect();
        match solve_linear(m, &e)? {
            LinearSolution::Unique(c) => cols.push(c),
            _ => return Err(GeoError::NotPositiveDefinite),
        }
    }
    Ok((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

fn validate(m: &[Vec<ExactScalar>]) -> Result<(), GeoError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(GeoError::DimensionMismatch { expected: n, found: m.iter().map(|r| r.len()).max().unwrap_or(0) });
    }
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(GeoError::NotSymmetric);
            }
        }
    }
    for k in 1..=n {
        let lead: Vec<Vec<ExactScalar>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        if scalar_det(&lead)?.signum() <= 0 {
            return Err(GeoError::NotPositiveDefinite);
        }
    }
    Ok(())
}

impl Metric {
    pub fn from_gram(gram: Vec<Vec<ExactScalar>>) -> Result<Metric, GeoError> {
        validate(&gram)?;
        let inverse_gram = invert(&gram)?;
        Ok(Metric { gram, inverse_gram })
    }

    pub fn from_inverse_gram(inverse_gram: Vec<Vec<ExactScalar>>) -> Result<Metric, GeoError> {
        validate(&inverse_gram)?;
        let gram = invert(&inverse_gram)?;
        Ok(Metric { gram, inverse_gram })
    }

    pub fn euclidean(n: usize) -> Metric {
        let id: Vec<Vec<ExactScalar>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect())
            .collect();
        Metric { gram: id.clone(), inverse_gram: id }
    }

    pub fn block_diag(blocks: &[Metric]) -> Metric {
        let n: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut gram = vec![vec![ExactScalar::zero(); n]; n];
        let mut inv = gram.clone();
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    gram[off + i][off + j] = b.gram[i][j].clone();
                    inv[off + i][off + j] = b.inverse_gram[i][j].clone();
                }
            }
            off += b.dim();
        }
        Metric { gram, inverse_gram: inv }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<ExactScalar>] {
        &self.gram
    }

    pub fn inverse_gram(&self) -> &[Vec<ExactScalar>] {
        &self.inverse_gram
    }

    /// `I*(a, b)` for constant covectors.
    pub fn dual_pairing(&self, a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let g = &self.inverse_gram[i][j];
                if !g.is_zero() && !bj.is_zero() {
                    acc += &(&(ai * g) * bj);
                }
            }
        }
        acc
    }
}
