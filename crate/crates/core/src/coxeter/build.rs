//! Closed-form data for the irreducible types.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exact_algebra::{ExactScalar, Monomial, MultiPoly, Vars};

use super::FactorType;

pub(super) struct RawFactor {
    pub inverse_gram: Vec<Vec<ExactScalar>>,
    pub simple_roots: Vec<Vec<ExactScalar>>,
    pub invariants: Vec<MultiPoly>,
    pub coxeter_number: u32,
}

fn q(n: i64, d: i64) -> ExactScalar {
    ExactScalar::ratio(n, d)
}

fn int(n: i64) -> ExactScalar {
    ExactScalar::from_i64(n)
}

fn identity(n: usize) -> Vec<Vec<ExactScalar>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect()
}

fn unit(n: usize, i: usize) -> Vec<ExactScalar> {
    (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect()
}

fn diff(n: usize, i: usize, j: usize, sign: i64) -> Vec<ExactScalar> {
    let mut v = unit(n, i);
    v[j] = int(-sign);
    v
}

/// Elementary symmetric polynomials e_1..e_n of the given polynomials.
fn elementary(ps: &[MultiPoly], vars: &Vars) -> Vec<MultiPoly> {
    let mut e = vec![MultiPoly::one(vars)];
    for p in ps {
        let mut next = e.clone();
        next.push(MultiPoly::zero(vars));
        for k in 1..next.len() {
            next[k] = &e.get(k).cloned().unwrap_or_else(|| MultiPoly::zero(vars)) + &(&e[k - 1] * p);
        }
        e = next;
    }
    e.into_iter().skip(1).collect()
}

fn type_a(n: usize, vars: &Vars) -> RawFactor {
    // coordinates are the simple roots; u_i are the restricted ε_i
    let xs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(vars, i)).collect();
    let mut c = MultiPoly::zero(vars);
    for (j, x) in xs.iter().enumerate() {
        c = &c + &x.scale(&int(j as i64 + 1));
    }
    let c = c.scale(&q(-1, n as i64 + 1));
    let u: Vec<MultiPoly> = (0..=n)
        .map(|i| {
            let mut s = c.clone();
            for x in &xs[i..] {
                s = &s + x;
            }
            s
        })
        .collect();
    let invariants = (2..=n as u32 + 1)
        .map(|k| u.iter().fold(MultiPoly::zero(vars), |acc, ui| &acc + &ui.pow(k)))
        .collect();
    let inverse_gram = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => int(1),
                    1 => q(-1, 2),
                    _ => int(0),
                })
                .collect()
        })
        .collect();
    RawFactor { inverse_gram, simple_roots: (0..n).map(|i| unit(n, i)).collect(), invariants, coxeter_number: n as u32 + 1 }
}

fn squares(n: usize, vars: &Vars) -> Vec<MultiPoly> {
    (0..n).map(|i| MultiPoly::var(vars, i).pow(2)).collect()
}

fn type_b(n: usize, vars: &Vars) -> RawFactor {
    let e = elementary(&squares(n, vars), vars);
    let invariants = e.iter().enumerate().map(|(k, p)| p.scale(&q(1, 1 << (k + 1)))).collect();
    let mut simple_roots: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1, 1)).collect();
    simple_roots.push(unit(n, n - 1));
    RawFactor { inverse_gram: identity(n), simple_roots, invariants, coxeter_number: 2 * n as u32 }
}

fn type_d(n: usize, vars: &Vars) -> RawFactor {
    let e = elementary(&squares(n, vars), vars);
    let pf = (0..n).fold(MultiPoly::one(vars), |acc, i| &acc * &MultiPoly::var(vars, i));
    let mut invariants: Vec<MultiPoly> =
        e[..n - 1].iter().enumerate().map(|(k, p)| p.scale(&q(1, 1 << (k + 1)))).collect();
    // x_1⋯x_n has degree n; keep degrees sorted with the top one last
    let pos = invariants.iter().position(|p| p.degree().unwrap_or(0) > n as u32).unwrap_or(invariants.len());
    invariants.insert(pos, pf);
    let mut simple_roots: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1, 1)).collect();
    simple_roots.push(diff(n, n - 2, n - 1, -1));
    RawFactor { inverse_gram: identity(n), simple_roots, invariants, coxeter_number: 2 * (n as u32 - 1) }
}

/// `cos(2π/m)` for the supported m.
fn cos_2pi_over(m: u32) -> ExactScalar {
    match m {
        3 => q(-1, 2),
        4 => int(0),
        5 => ExactScalar::quadratic(
            BigRational::new(BigInt::from(-1), BigInt::from(4)),
            BigRational::new(BigInt::from(1), BigInt::from(4)),
            5,
        )
        .expect("5 is square-free"),
        6 => q(1, 2),
        _ => unreachable!("checked by the caller"),
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

fn type_i2(m: u32, vars: &Vars) -> RawFactor {
    let c = cos_2pi_over(m);
    let x = MultiPoly::var(vars, 0);
    let y = MultiPoly::var(vars, 1);
    let p1 = (&(&x.pow(2) + &y.pow(2)) + &(&x * &y).scale(&(&c * &int(2)))).scale(&q(1, 2));
    // cos(2πk/m) = T_k(c)
    let mut cheb = vec![int(1), c.clone()];
    for k in 2..=m as usize {
        let next = &(&(&int(2) * &c) * &cheb[k - 1]) - &cheb[k - 2];
        cheb.push(next);
    }
    let mut p2 = MultiPoly::zero(vars);
    for k in 0..=m {
        let coeff = &int(binomial(m, k)) * &cheb[k as usize];
        if !coeff.is_zero() {
            p2 = &p2 + &MultiPoly::one(vars).mul_monomial(&Monomial::from_exponents(&[m - k, k]), &coeff);
        }
    }
    let det = &int(1) - &(&c * &c);
    let inv = det.inv().expect("|c| < 1");
    let inverse_gram = vec![vec![inv.clone(), -&(&c * &inv)], vec![-&(&c * &inv), inv]];
    let simple_roots = vec![vec![int(0), int(1)], vec![int(1), int(-1)]];
    RawFactor { inverse_gram, simple_roots, invariants: vec![p1, p2], coxeter_number: m }
}

fn type_h3(vars: &Vars) -> RawFactor {
    let half = q(1, 2);
    let sqrt5 = ExactScalar::sqrt_of(5).expect("5 is square-free");
    let tau = &(&int(1) + &sqrt5) * &half;
    let xs: Vec<MultiPoly> = (0..3).map(|i| MultiPoly::var(vars, i)).collect();
    let axes = [
        [int(0), int(1), tau.clone()],
        [int(0), int(1), -&tau],
        [int(1), tau.clone(), int(0)],
        [int(1), -&tau, int(0)],
        [tau.clone(), int(0), int(1)],
        [-&tau, int(0), int(1)],
    ];
    let lin: Vec<MultiPoly> = axes.iter().map(|a| MultiPoly::linear(vars, a)).collect();
    let power_sum = |k: u32| lin.iter().fold(MultiPoly::zero(vars), |acc, l| &acc + &l.pow(k));
    let p1 = xs.iter().fold(MultiPoly::zero(vars), |acc, x| &acc + &x.pow(2)).scale(&half);
    let quarter = q(1, 4);
    let simple_roots = vec![
        vec![int(1), int(0), int(0)],
        vec![-&(&(&int(1) + &sqrt5) * &quarter), -&half, &(&sqrt5 - &int(1)) * &quarter],
        vec![int(0), int(1), int(0)],
    ];
    RawFactor {
        inverse_gram: identity(3),
        simple_roots,
        invariants: vec![p1, power_sum(6), power_sum(10)],
        coxeter_number: 10,
    }
}

pub(super) fn raw_factor(t: FactorType, vars: &Vars) -> RawFactor {
    match t {
        FactorType::A(n) => type_a(n, vars),
        FactorType::B(n) => type_b(n, vars),
        FactorType::D(n) => type_d(n, vars),
        FactorType::I2(m) => type_i2(m, vars),
        FactorType::H3 => type_h3(vars),
    }
}
