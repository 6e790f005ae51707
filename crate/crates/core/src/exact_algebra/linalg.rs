use std::collections::HashMap;

use super::poly::MultiPoly;
use super::ratfunc::{common_denominator, RatFunc};
use super::scalar::ExactScalar;
use super::AlgebraError;

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<ExactScalar>),
    NoSolution { rank: usize },
    /// Affine family `particular + span(kernel)`.
    Family { particular: Vec<ExactScalar>, kernel: Vec<Vec<ExactScalar>> },
}

impl LinearSolution {
    pub fn kernel_dim(&self) -> usize {
        match self {
            LinearSolution::Unique(_) | LinearSolution::NoSolution { .. } => 0,
            LinearSolution::Family { kernel, .. } => kernel.len(),
        }
    }

    pub fn particular(&self) -> Option<&[ExactScalar]> {
        match self {
            LinearSolution::Unique(x) => Some(x),
            LinearSolution::Family { particular, .. } => Some(particular),
            LinearSolution::NoSolution { .. } => None,
        }
    }
}

/// Solves `A x = b` exactly by reduction to reduced row echelon form.
pub fn solve_linear(a: &[Vec<ExactScalar>], b: &[ExactScalar]) -> Result<LinearSolution, AlgebraError> {
    if a.len() != b.len() {
        return Err(AlgebraError::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    if let Some(r) = a.iter().find(|r| r.len() != ncols) {
        return Err(AlgebraError::DimensionMismatch { expected: ncols, found: r.len() });
    }
    let mut m: Vec<Vec<ExactScalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| row.iter().cloned().chain(std::iter::once(rhs.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("nonzero pivot");
        for v in m[row].iter_mut().skip(col) {
            *v = &*v * &inv;
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=ncols {
                let delta = &f * &m[row][c];
                m[r][c] -= &delta;
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let rank = pivots.len();
    if m[rank..].iter().any(|r| !r[ncols].is_zero()) {
        return Ok(LinearSolution::NoSolution { rank });
    }
    let mut particular = vec![ExactScalar::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = m[r][ncols].clone();
    }
    if rank == ncols {
        return Ok(LinearSolution::Unique(particular));
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![ExactScalar::zero(); ncols];
            v[f] = ExactScalar::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -&m[r][f];
            }
            v
        })
        .collect();
    Ok(LinearSolution::Family { particular, kernel })
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize, AlgebraError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::NonSquare);
    }
    Ok(n)
}

pub fn scalar_det(m: &[Vec<ExactScalar>]) -> Result<ExactScalar, AlgebraError> {
    let n = check_square(m)?;
    let mut a = m.to_vec();
    let mut det = ExactScalar::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else { return Ok(ExactScalar::zero()) };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        let inv = a[k][k].inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= &d;
            }
        }
    }
    Ok(det)
}

/// Fraction-free (Bareiss) determinant over the polynomial ring.
pub fn poly_matrix_det(m: &[Vec<MultiPoly>]) -> Result<MultiPoly, AlgebraError> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(AlgebraError::NonSquare);
    }
    if n <= MINOR_EXPANSION_MAX {
        return Ok(minor_expansion_det(m));
    }
    let vars = m[0][0].vars().clone();
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = MultiPoly::one(&vars);
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else { return Ok(MultiPoly::zero(&vars)) };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = if prev.is_one() { t } else { t.div_exact(&prev).expect("Bareiss division is exact") };
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

const MINOR_EXPANSION_MAX: usize = 6;

/// Division-free expansion by minors, bottom row up, memoized over column
/// subsets. For small matrices of large polynomials this beats Bareiss,
/// whose exact divisions dominate.
fn minor_expansion_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    let vars = m[0][0].vars().clone();
    // minors of the last `n - r` rows, keyed by column bitmask
    let mut prev: HashMap<u32, MultiPoly> = HashMap::from([(0, MultiPoly::one(&vars))]);
    for r in (0..n).rev() {
        let size = n - r;
        let mut next = HashMap::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = MultiPoly::zero(&vars);
            for (pos, j) in (0..n).filter(|j| mask & (1 << j) != 0).enumerate() {
                if m[r][j].is_zero() {
                    continue;
                }
                let sub = &prev[&(mask & !(1 << j))];
                if sub.is_zero() {
                    continue;
                }
                let t = &m[r][j] * sub;
                acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            next.insert(mask, acc);
        }
        prev = next;
    }
    prev.remove(&((1u32 << n) - 1)).expect("full minor")
}

/// Determinant of a rational-function matrix: each row is brought to a
/// common denominator, the polynomial determinant is taken fraction-free,
/// and the row denominators are divided back out.
pub fn ratfunc_matrix_det(m: &[Vec<RatFunc>]) -> Result<RatFunc, AlgebraError> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(AlgebraError::NonSquare);
    }
    let vars = m[0][0].vars().clone();
    let mut rows = Vec::with_capacity(n);
    let mut lin = Vec::new();
    let mut rest = MultiPoly::one(&vars);
    for row in m {
        let (l, r, nums) = common_denominator(row);
        lin.extend(l);
        if !r.is_one() {
            rest = &rest * &r;
        }
        rows.push(nums);
    }
    let det = poly_matrix_det(&rows)?;
    Ok(RatFunc::from_parts(det, lin, rest))
}

/// Laplace expansion along the first row; the independent oracle for
/// [`ratfunc_matrix_det`].
pub fn cofactor_det(m: &[Vec<RatFunc>]) -> Result<RatFunc, AlgebraError> {
    let n = check_square(m)?;
    match n {
        0 => Err(AlgebraError::NonSquare),
        1 => Ok(m[0][0].clone()),
        _ => {
            let vars = m[0][0].vars().clone();
            let mut acc = RatFunc::zero(&vars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor = minor(m, 0, j);
                let t = &m[0][j] * &cofactor_det(&minor)?;
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            Ok(acc)
        }
    }
}

fn minor<T: Clone>(m: &[Vec<T>], row: usize, col: usize) -> Vec<Vec<T>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| v.clone()).collect())
        .collect()
}

/// Classical adjugate, `adj(M)·M = det(M)·I`.
pub fn ratfunc_adjugate(m: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>, AlgebraError> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(AlgebraError::NonSquare);
    }
    let vars = m[0][0].vars().clone();
    if n == 1 {
        return Ok(vec![vec![RatFunc::one(&vars)]]);
    }
    let mut adj = vec![vec![RatFunc::zero(&vars); n]; n];
    for (i, row) in m.iter().enumerate() {
        for j in 0..row.len() {
            let c = ratfunc_matrix_det(&minor(m, i, j))?;
            adj[j][i] = if (i + j) % 2 == 0 { c } else { c.neg() };
        }
    }
    Ok(adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::Vars;

    fn s(v: i64) -> ExactScalar {
        ExactScalar::from_i64(v)
    }

    #[test]
    fn solves_small_systems() {
        let id = vec![vec![s(1), s(0)], vec![s(0), s(1)]];
        assert_eq!(solve_linear(&id, &[s(1), s(0)]).unwrap(), LinearSolution::Unique(vec![s(1), s(0)]));
        let zero = vec![vec![s(0), s(0)], vec![s(0), s(0)]];
        assert_eq!(solve_linear(&zero, &[s(1), s(0)]).unwrap(), LinearSolution::NoSolution { rank: 0 });
        let a = vec![vec![s(1), s(1)], vec![s(1), s(-1)]];
        assert_eq!(solve_linear(&a, &[s(2), s(0)]).unwrap(), LinearSolution::Unique(vec![s(1), s(1)]));
        assert!(solve_linear(&a, &[s(2)]).is_err());
    }

    #[test]
    fn reports_kernel() {
        let a = vec![vec![s(1), s(2), s(3)]];
        let sol = solve_linear(&a, &[s(6)]).unwrap();
        assert_eq!(sol.kernel_dim(), 2);
    }

    #[test]
    fn determinants_agree() {
        let v = Vars::new(&["x", "y"]);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let half = ExactScalar::ratio(1, 2);
        let m = vec![
            vec![RatFunc::from_poly(x.clone()), RatFunc::from_poly(y.clone())],
            vec![
                RatFunc::from_poly((&x * &y.pow(2)).scale(&half)),
                RatFunc::from_poly((&x.pow(2) * &y).scale(&half)),
            ],
        ];
        let expected = (&(&x * &y) * &(&x.pow(2) - &y.pow(2))).scale(&half);
        assert_eq!(ratfunc_matrix_det(&m).unwrap(), RatFunc::from_poly(expected));
        assert_eq!(cofactor_det(&m).unwrap(), ratfunc_matrix_det(&m).unwrap());
        let diag = vec![
            vec![RatFunc::from_poly(x.clone()), RatFunc::zero(&v)],
            vec![RatFunc::zero(&v), RatFunc::from_poly(y.clone())],
        ];
        assert_eq!(ratfunc_matrix_det(&diag).unwrap(), RatFunc::from_poly(&x * &y));
        assert_eq!(ratfunc_matrix_det(&[vec![RatFunc::from_poly(x.clone()), RatFunc::zero(&v)]]), Err(AlgebraError::NonSquare));
    }

    #[test]
    fn scalar_determinant() {
        let m = vec![vec![s(2), s(-1), s(0)], vec![s(-1), s(2), s(-1)], vec![s(0), s(-1), s(2)]];
        assert_eq!(scalar_det(&m).unwrap(), s(4));
    }
}
