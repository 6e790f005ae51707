use std::sync::OnceLock;

use primfilt::coxeter::CoxeterDatum;
use primfilt::diffgeo::{
    apply_derivation, istar_map, istar_pairing, nabla_on_derivation, nabla_on_form, random_form, random_poly, wedge_top,
    OneForm, Reflect,
};
use primfilt::exact_algebra::{ratfunc_adjugate, ratfunc_matrix_det, solve_linear, ExactScalar, RatFunc};
use primfilt::primitive::{primitive_derivation, PrimitiveDerivation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Fixture {
    d: CoxeterDatum,
    pd: PrimitiveDerivation,
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        ["A2", "B2", "I2(5)", "A1xA1"]
            .iter()
            .map(|t| {
                let d = CoxeterDatum::from_type_string(t).unwrap();
                let pd = primitive_derivation(&d).unwrap();
                Fixture { d, pd }
            })
            .collect()
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero random function with poles along the arrangement.
fn random_fn(f: &Fixture, r: &mut ChaCha8Rng) -> RatFunc {
    loop {
        let num = random_poly(f.d.vars(), 3, 3, r);
        if num.is_zero() {
            continue;
        }
        let hs = f.d.hyperplane_forms();
        let den: Vec<_> = (0..r.gen_range(0..3)).map(|_| (hs[r.gen_range(0..hs.len())].clone(), -1)).collect();
        return RatFunc::from_poly(num).mul_linear_powers(&den);
    }
}

fn random_forms(f: &Fixture, count: usize, r: &mut ChaCha8Rng) -> Vec<OneForm> {
    let poles = f.d.hyperplane_forms();
    (0..count).map(|_| random_form(f.d.vars(), &poles, r)).collect()
}

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(24)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn pole_orders_add_under_products(which in 0..4usize, seed in any::<u64>()) {
        let f = &fixtures()[which];
        let mut r = rng(seed);
        let (a, b) = (random_fn(f, &mut r), random_fn(f, &mut r));
        for h in f.d.hyperplanes() {
            let lhs = (&a * &b).ord_along(&h.alpha).unwrap();
            prop_assert_eq!(lhs, a.ord_along(&h.alpha).unwrap() + b.ord_along(&h.alpha).unwrap());
        }
    }

    #[test]
    fn solutions_satisfy_the_system(
        a in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 3),
        x in prop::collection::vec(-5i64..=5, 4),
    ) {
        let a: Vec<Vec<ExactScalar>> = a.iter().map(|r| r.iter().map(|&v| ExactScalar::from_i64(v)).collect()).collect();
        let x: Vec<ExactScalar> = x.iter().map(|&v| ExactScalar::from_i64(v)).collect();
        let dot = |row: &[ExactScalar], v: &[ExactScalar]| {
            row.iter().zip(v).fold(ExactScalar::zero(), |acc, (p, q)| &acc + &(p * q))
        };
        let b: Vec<ExactScalar> = a.iter().map(|row| dot(row, &x)).collect();
        let sol = solve_linear(&a, &b).unwrap();
        let p = sol.particular().expect("consistent by construction");
        for (row, bi) in a.iter().zip(&b) {
            prop_assert_eq!(&dot(row, p), bi);
        }
        if let primfilt::exact_algebra::LinearSolution::Family { kernel, .. } = &sol {
            for v in kernel {
                prop_assert!(a.iter().all(|row| dot(row, v).is_zero()));
            }
        }
    }

    #[test]
    fn adjugate_times_matrix_is_det(which in 0..4usize, n in 1..4usize, seed in any::<u64>()) {
        let f = &fixtures()[which];
        let mut r = rng(seed);
        let m: Vec<Vec<RatFunc>> = (0..n).map(|_| (0..n).map(|_| random_fn(f, &mut r)).collect()).collect();
        let adj = ratfunc_adjugate(&m).unwrap();
        let det = ratfunc_matrix_det(&m).unwrap();
        let zero = RatFunc::zero(f.d.vars());
        for i in 0..n {
            for j in 0..n {
                let s = (0..n).fold(zero.clone(), |acc, t| &acc + &(&adj[i][t] * &m[t][j]));
                prop_assert_eq!(&s, if i == j { &det } else { &zero });
            }
        }
    }

    #[test]
    fn istar_pairing_is_symmetric_and_bilinear(which in 0..4usize, seed in any::<u64>()) {
        let f = &fixtures()[which];
        let mut r = rng(seed);
        let w = random_forms(f, 3, &mut r);
        let c = random_fn(f, &mut r);
        let g = f.d.metric();
        let p = |a: &OneForm, b: &OneForm| istar_pairing(a, b, g).unwrap();
        prop_assert_eq!(p(&w[0], &w[1]), p(&w[1], &w[0]));
        prop_assert_eq!(p(&(&w[0] + &w[1]), &w[2]), &p(&w[0], &w[2]) + &p(&w[1], &w[2]));
        prop_assert_eq!(p(&w[0].scale_by(&c), &w[2]), &p(&w[0], &w[2]) * &c);
    }

    #[test]
    fn top_wedge_is_alternating(which in 0..4usize, seed in any::<u64>()) {
        let f = &fixtures()[which];
        let mut r = rng(seed);
        let mut w = random_forms(f, f.d.rank(), &mut r);
        let base = wedge_top(&w).unwrap();
        w.swap(0, 1);
        prop_assert_eq!(wedge_top(&w).unwrap(), base.neg());
        w[1] = w[0].clone();
        prop_assert!(wedge_top(&w).unwrap().is_zero());
    }

    #[test]
    fn primitive_derivation_obeys_leibniz(which in 0..4usize, seed in any::<u64>()) {
        let f = &fixtures()[which];
        let mut r = rng(seed);
        let (a, b) = (random_fn(f, &mut r), random_fn(f, &mut r));
        let dd = |x: &RatFunc| apply_derivation(&f.pd.total, x);
        prop_assert_eq!(dd(&(&a * &b)), &(&dd(&a) * &b) + &(&a * &dd(&b)));
    }

    #[test]
    fn reflections_preserve_the_metric(which in 0..4usize, seed in any::<u64>()) {
        let f = &fixtures()[which];
        let mut r = rng(seed);
        let w = random_forms(f, 2, &mut r);
        let g = f.d.metric();
        for s in f.d.generators() {
            let moved = istar_pairing(&w[0].reflect(s), &w[1].reflect(s), g).unwrap();
            prop_assert_eq!(moved, istar_pairing(&w[0], &w[1], g).unwrap().reflect(s));
        }
    }

    #[test]
    fn istar_commutes_with_nabla(which in 0..4usize, seed in any::<u64>()) {
        let f = &fixtures()[which];
        let mut r = rng(seed);
        let w = &random_forms(f, 1, &mut r)[0];
        let g = f.d.metric();
        let lhs = istar_map(&nabla_on_form(&f.pd.total, w), g).unwrap();
        let rhs = nabla_on_derivation(&f.pd.total, &istar_map(w, g).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
