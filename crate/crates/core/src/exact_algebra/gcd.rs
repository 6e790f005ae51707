//! Multivariate gcd by recursive content / primitive-part PRS.
//!
//! Only general (non-linear) denominator residues reach this code; the
//! hyperplane factors that dominate real workloads are handled by trial
//! division in [`super::ratfunc`].

use std::collections::BTreeMap;

use super::poly::{Monomial, MultiPoly};

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    gcd_from(a, b, 0).monic()
}

fn coeffs_in(p: &MultiPoly, v: usize) -> BTreeMap<u32, MultiPoly> {
    let mut out: BTreeMap<u32, Vec<(Monomial, _)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut m2 = m.clone();
        let e = m2.0[v];
        m2.0[v] = 0;
        out.entry(e).or_default().push((m2, c.clone()));
    }
    out.into_iter().map(|(e, ts)| (e, MultiPoly::from_terms(p.vars(), ts))).collect()
}

fn content(p: &MultiPoly, v: usize) -> MultiPoly {
    if p.degree_in(v) == 0 {
        return p.monic();
    }
    let mut g: Option<MultiPoly> = None;
    for c in coeffs_in(p, v).into_values() {
        let next = match g {
            None => c.monic(),
            Some(prev) => gcd_from(&prev, &c, v + 1).monic(),
        };
        if next.is_constant() {
            return MultiPoly::one(p.vars());
        }
        g = Some(next);
    }
    g.unwrap_or_else(|| MultiPoly::one(p.vars()))
}

fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content(p, v);
    p.div_exact(&c).expect("content divides")
}

fn lead_in(p: &MultiPoly, v: usize) -> (u32, MultiPoly) {
    let d = p.degree_in(v);
    let c = coeffs_in(p, v).remove(&d).expect("leading coefficient");
    (d, c)
}

fn pseudo_rem(p: &MultiPoly, q: &MultiPoly, v: usize) -> MultiPoly {
    let (dq, lcq) = lead_in(q, v);
    let n = p.nvars();
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let (dr, lcr) = lead_in(&r, v);
        let mut shift = Monomial::one(n);
        shift.0[v] = dr - dq;
        let sub = &lcr * &q.mul_monomial(&shift, &super::ExactScalar::one());
        r = &(&lcq * &r) - &sub;
    }
    r
}

fn gcd_from(a: &MultiPoly, b: &MultiPoly, start: usize) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.vars());
    }
    let n = a.nvars();
    let mut v = start;
    while v < n && a.degree_in(v) == 0 && b.degree_in(v) == 0 {
        v += 1;
    }
    if v == n {
        return MultiPoly::one(a.vars());
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd_from(&ca, &cb, v + 1).monic();
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree_in(v) == 0 {
            // primitive of degree zero in v: a unit
            p = MultiPoly::one(a.vars());
            break;
        }
        let r = pseudo_rem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { primitive_part(&r, v) };
    }
    let g = if p.degree_in(v) == 0 { MultiPoly::one(a.vars()) } else { primitive_part(&p, v) };
    &c * &g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{ExactScalar, Vars};

    #[test]
    fn shared_factor_is_found() {
        let v = Vars::new(&["x", "y", "z"]);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let z = MultiPoly::var(&v, 2);
        let common = &(&x * &y) + &(&z.pow(2) + &MultiPoly::one(&v));
        let a = &common * &(&x - &z);
        let b = &common * &(&y.pow(2) + &x.scale(&ExactScalar::from_i64(3)));
        assert_eq!(poly_gcd(&a, &b), common.monic());
        assert!(poly_gcd(&(&x - &z), &(&x + &z)).is_one());
    }

    #[test]
    fn gcd_with_content() {
        let v = Vars::new(&["x", "y"]);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let a = &y.pow(2) * &(&x + &MultiPoly::one(&v));
        let b = &y * &(&x - &MultiPoly::one(&v));
        assert_eq!(poly_gcd(&a, &b), y);
    }
}
