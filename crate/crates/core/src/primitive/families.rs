use std::collections::{BTreeMap, HashMap};

use crate::coxeter::CoxeterDatum;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use rand_chacha::ChaCha8Rng;

use crate::diffgeo::{apply_derivation, istar_map, nabla_on_derivation, nabla_on_form, DerivationField, OneForm};
use crate::exact_algebra::modular::{solve_mod, ModSolution, PowerTable, PrimeField, Reconstructor, PRIMES};
use crate::exact_algebra::{solve_linear, ExactScalar, LinearSolution, Monomial, MultiPoly, RatFunc};

use super::{factor_q_power, PrimitiveDerivation, PrimitiveError};

/// Position of a basis member: factor `i`, invariant index `j` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Member {
    pub factor: usize,
    pub j: usize,
}

#[derive(Clone, Debug)]
pub struct BasisFamily {
    pub k: i64,
    pub members: Vec<Member>,
    /// θ_j^(k), ordered by (factor, j).
    pub forms: Vec<OneForm>,
    /// ξ_j^(k) = I*(θ_j^(k)).
    pub derivations: Vec<DerivationField>,
    /// ξ_j^(k) computed directly on the derivation side.
    pub derivations_direct: Vec<DerivationField>,
    /// Expected coefficient degree m_j − k·h.
    pub degrees: Vec<i64>,
    /// Kernel dimension of the form-side ansatz (negative k only).
    pub kernel_dims: Vec<Option<usize>>,
    /// Kernel dimension of the derivation-side ansatz (negative k only).
    pub kernel_dims_direct: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct FamilySet {
    pub k_min: i64,
    pub k_max: i64,
    families: BTreeMap<i64, BasisFamily>,
}

impl FamilySet {
    pub fn get(&self, k: i64) -> Option<&BasisFamily> {
        self.families.get(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasisFamily> {
        self.families.range(self.k_min..=self.k_max).map(|(_, f)| f)
    }

    /// Families given in any order; their k must form one unbroken range.
    pub fn from_families(list: Vec<BasisFamily>) -> Option<FamilySet> {
        let families: BTreeMap<i64, BasisFamily> = list.into_iter().map(|f| (f.k, f)).collect();
        let k_min = *families.keys().next()?;
        let k_max = *families.keys().next_back()?;
        (families.len() as i64 == k_max - k_min + 1).then_some(FamilySet { k_min, k_max, families })
    }

    /// The families with `k_min ≤ k ≤ k_max`, or `None` if that is empty.
    pub fn truncated(&self, k_min: i64, k_max: i64) -> Option<FamilySet> {
        Self::from_families(self.families.range(k_min..=k_max).map(|(_, f)| f.clone()).collect())
    }
}

fn members(d: &CoxeterDatum) -> Vec<Member> {
    d.factors()
        .iter()
        .enumerate()
        .flat_map(|(factor, f)| (0..f.rank).map(move |j| Member { factor, j }))
        .collect()
}

/// Θ^(k) and Ξ^(k) for `k_min ≤ k ≤ k_max`. Positive steps apply
/// `∇_{D̂[i]}`; negative steps solve for the unique invariant preimage.
pub fn generate_families(
    d: &CoxeterDatum,
    pd: &PrimitiveDerivation,
    k_min: i64,
    k_max: i64,
) -> Result<FamilySet, PrimitiveError> {
    if k_min > k_max {
        return Err(PrimitiveError::BadRange(k_min, k_max));
    }
    let g = d.metric();
    let mem = members(d);
    let dp: Vec<OneForm> =
        mem.iter().map(|m| OneForm::differential(&d.factors()[m.factor].invariants[m.j])).collect();
    let dp_star: Vec<DerivationField> = dp.iter().map(|w| istar_map(w, g)).collect::<Result<_, _>>()?;
    let degree = |m: &Member, k: i64| {
        let f = &d.factors()[m.factor];
        f.exponents[m.j] as i64 - k * f.coxeter_number as i64
    };
    let mut forms: BTreeMap<i64, Vec<OneForm>> = BTreeMap::new();
    let mut direct: BTreeMap<i64, Vec<DerivationField>> = BTreeMap::new();
    let mut kernels: BTreeMap<i64, (Vec<Option<usize>>, Vec<Option<usize>>)> = BTreeMap::new();
    forms.insert(0, dp.clone());
    direct.insert(0, dp_star.clone());
    // the first positive step is always needed by the negative ansatz
    let top = k_max.max(if k_min < 0 { 1 } else { 0 });
    for k in 1..=top {
        let prev_f = &forms[&(k - 1)];
        let prev_d = &direct[&(k - 1)];
        let next_f = mem.iter().zip(prev_f).map(|(m, w)| nabla_on_form(&pd.per_factor[m.factor], w)).collect();
        let next_d = mem.iter().zip(prev_d).map(|(m, x)| nabla_on_derivation(&pd.per_factor[m.factor], x)).collect();
        forms.insert(k, next_f);
        direct.insert(k, next_d);
    }
    for k in (k_min..0).rev() {
        let theta1 = &forms[&1];
        let xi1 = &direct[&1];
        let mut fk = Vec::new();
        let mut dk = Vec::new();
        let mut kf = Vec::new();
        let mut kd = Vec::new();
        for (idx, m) in mem.iter().enumerate() {
            let target = forms[&(k + 1)][idx].coeffs().to_vec();
            let (w, kern) = preimage(d, &pd.per_factor[m.factor], m, k, degree(m, k), &dp, theta1, &target)?;
            fk.push(OneForm::new(w));
            kf.push(Some(kern));
            let target = direct[&(k + 1)][idx].coeffs().to_vec();
            let dp_star_coeffs: Vec<OneForm> = dp_star.iter().map(|x| OneForm::new(x.coeffs().to_vec())).collect();
            let xi1_coeffs: Vec<OneForm> = xi1.iter().map(|x| OneForm::new(x.coeffs().to_vec())).collect();
            let (x, kern) = preimage(d, &pd.per_factor[m.factor], m, k, degree(m, k), &dp_star_coeffs, &xi1_coeffs, &target)?;
            dk.push(DerivationField::new(x));
            kd.push(Some(kern));
        }
        forms.insert(k, fk);
        direct.insert(k, dk);
        kernels.insert(k, (kf, kd));
    }
    let mut families = BTreeMap::new();
    for k in k_min..=k_max {
        let fs = forms[&k].clone();
        let derivations = fs.iter().map(|w| istar_map(w, g)).collect::<Result<_, _>>()?;
        let (kf, kd) = kernels.remove(&k).unwrap_or_else(|| (vec![None; mem.len()], vec![None; mem.len()]));
        families.insert(
            k,
            BasisFamily {
                k,
                members: mem.clone(),
                degrees: mem.iter().map(|m| degree(m, k)).collect(),
                forms: fs,
                derivations,
                derivations_direct: direct[&k].clone(),
                kernel_dims: kf,
                kernel_dims_direct: kd,
            },
        );
    }
    Ok(FamilySet { k_min, k_max, families })
}

/// Exponent vectors `e` with `Σ e_a·deg_a = target`.
fn weighted_monomials(degs: &[u32], target: i64) -> Vec<Vec<u32>> {
    fn rec(degs: &[u32], target: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == degs.len() {
            if target == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = degs[cur.len()] as i64;
        let mut e = 0;
        while e * d <= target {
            cur.push(e as u32);
            rec(degs, target - e * d, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    if target >= 0 {
        rec(degs, target, &mut Vec::new(), &mut out);
    }
    out
}

struct PowerCache<'a> {
    invariants: &'a [MultiPoly],
    cache: HashMap<Vec<u32>, MultiPoly>,
}

impl PowerCache<'_> {
    fn get(&mut self, e: &[u32]) -> MultiPoly {
        if let Some(p) = self.cache.get(e) {
            return p.clone();
        }
        let p = match e.iter().rposition(|&x| x > 0) {
            None => MultiPoly::one(self.invariants[0].vars()),
            Some(a) => {
                let mut lower = e.to_vec();
                lower[a] -= 1;
                &self.get(&lower) * &self.invariants[a]
            }
        };
        self.cache.insert(e.to_vec(), p.clone());
        p
    }
}

/// Solves `∇_D(Σ_s u_s ω_s) = target` over the invariant ansatz
/// `ω_s = P^e · b_{j′}` on the member's factor, where `b` is `dP` (or its
/// I*-image) and `nb` its ∇_D-image. Returns the coefficients and the
/// kernel dimension of the linear system.
///
/// The system is first sampled at integer points: each sampled equation is
/// a combination of the coefficient equations, so full column rank there
/// already proves the kernel trivial, and the candidate is then checked
/// exactly. Otherwise the full coefficient system is solved.
#[allow(clippy::too_many_arguments)]
fn preimage(
    d: &CoxeterDatum,
    dh: &DerivationField,
    m: &Member,
    k: i64,
    degree: i64,
    basis: &[OneForm],
    nabla_basis: &[OneForm],
    target: &[RatFunc],
) -> Result<(Vec<RatFunc>, usize), PrimitiveError> {
    let f = &d.factors()[m.factor];
    let first = members(d).iter().position(|x| x.factor == m.factor).expect("factor has members");
    let l = f.rank;
    let q = factor_q_power(d, m.factor, 1);
    let cols: Vec<usize> = f.variables().collect();
    // unknowns: (j′, exponent vector)
    let mut unknowns: Vec<(usize, Vec<u32>)> = Vec::new();
    for jp in 0..l {
        for e in weighted_monomials(&f.degrees, degree - f.exponents[jp] as i64) {
            unknowns.push((jp, e));
        }
    }
    let poly_of = |r: &RatFunc| -> Result<MultiPoly, PrimitiveError> {
        r.mul_linear_powers(&q).as_polynomial().cloned().ok_or_else(|| {
            PrimitiveError::Check(format!("Q·∇ image has poles: {}", r.to_text()))
        })
    };
    let qb: Vec<Vec<MultiPoly>> = (0..l)
        .map(|jp| cols.iter().map(|&c| poly_of(&basis[first + jp].coeffs()[c])).collect())
        .collect::<Result<_, _>>()?;
    let qnb: Vec<Vec<MultiPoly>> = (0..l)
        .map(|jp| cols.iter().map(|&c| poly_of(&nabla_basis[first + jp].coeffs()[c])).collect())
        .collect::<Result<_, _>>()?;
    let rhs: Vec<MultiPoly> = cols.iter().map(|&c| poly_of(&target[c])).collect::<Result<_, _>>()?;
    let mut powers = PowerCache { invariants: &f.invariants, cache: HashMap::new() };
    let assemble = |u: &[ExactScalar], powers: &mut PowerCache| {
        let mut coeffs = vec![MultiPoly::zero(d.vars()); d.rank()];
        for ((jp, e), us) in unknowns.iter().zip(u) {
            if us.is_zero() {
                continue;
            }
            let pe = powers.get(e).scale(us);
            for &c in &cols {
                let bc = basis[first + jp].coeffs()[c].as_polynomial().expect("polynomial basis");
                coeffs[c] = &coeffs[c] + &(&pe * bc);
            }
        }
        coeffs.into_iter().map(RatFunc::from_poly).collect::<Vec<_>>()
    };
    let n = unknowns.len();
    if n == 0 {
        return if rhs.iter().all(|p| p.is_zero()) {
            Ok((vec![RatFunc::zero(d.vars()); d.rank()], 0))
        } else {
            Err(PrimitiveError::Inconsistent { factor: m.factor, j: m.j, k })
        };
    }
    if let Some(u) = modular_solution(l, d.rank(), &unknowns, &f.invariants, &qb, &qnb, &rhs) {
        let coeffs = assemble(&u, &mut powers);
        if coeffs.iter().zip(target).all(|(c, t)| &apply_derivation(dh, c) == t) {
            return Ok((coeffs, 0));
        }
    }
    // Q·∇(P^e b) = Q·∂_{P_ℓ}(P^e)·b + P^e·Q·∇b, using D(P_a) = δ_{aℓ}
    let mut columns: Vec<Vec<MultiPoly>> = Vec::with_capacity(n);
    for (jp, e) in &unknowns {
        let pe = powers.get(e);
        let mut dpe = None;
        if e[l - 1] > 0 {
            let mut lower = e.clone();
            lower[l - 1] -= 1;
            dpe = Some(powers.get(&lower).scale(&ExactScalar::from_i64(e[l - 1] as i64)));
        }
        let col: Vec<MultiPoly> = (0..cols.len())
            .map(|c| {
                let mut v = &pe * &qnb[*jp][c];
                if let Some(dp) = &dpe {
                    v = &v + &(dp * &qb[*jp][c]);
                }
                v
            })
            .collect();
        columns.push(col);
    }
    // one equation per (component, monomial)
    let mut rows: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let register = |c: usize, p: &MultiPoly, rows: &mut BTreeMap<(usize, Monomial), usize>| {
        for (mono, _) in p.terms() {
            let len = rows.len();
            rows.entry((c, mono.clone())).or_insert(len);
        }
    };
    for col in &columns {
        for (c, p) in col.iter().enumerate() {
            register(c, p, &mut rows);
        }
    }
    for (c, p) in rhs.iter().enumerate() {
        register(c, p, &mut rows);
    }
    let mut a = vec![vec![ExactScalar::zero(); n]; rows.len()];
    let mut b = vec![ExactScalar::zero(); rows.len()];
    for (s, col) in columns.iter().enumerate() {
        for (c, p) in col.iter().enumerate() {
            for (mono, coef) in p.terms() {
                a[rows[&(c, mono.clone())]][s] = coef.clone();
            }
        }
    }
    for (c, p) in rhs.iter().enumerate() {
        for (mono, coef) in p.terms() {
            b[rows[&(c, mono.clone())]] = coef.clone();
        }
    }
    let sol = solve_linear(&a, &b)?;
    let kernel = sol.kernel_dim();
    match sol {
        LinearSolution::Unique(u) => Ok((assemble(&u, &mut powers), kernel)),
        LinearSolution::NoSolution { .. } => Err(PrimitiveError::Inconsistent { factor: m.factor, j: m.j, k }),
        LinearSolution::Family { .. } => Err(PrimitiveError::Underdetermined { factor: m.factor, j: m.j, k, dim: kernel }),
    }
}

/// Unique solution of the ansatz, found by sampling it at random points of
/// word-size prime fields. A full-rank sample over `F_p` certifies the
/// exact system has a trivial kernel (sampling and reduction only lose
/// rank); the values are lifted by CRT and rational reconstruction and must
/// still be checked by the caller. `None` when a sample is rank deficient.
fn modular_solution(
    l: usize,
    rank: usize,
    unknowns: &[(usize, Vec<u32>)],
    invariants: &[MultiPoly],
    qb: &[Vec<MultiPoly>],
    qnb: &[Vec<MultiPoly>],
    rhs: &[MultiPoly],
) -> Option<Vec<ExactScalar>> {
    let comps = rhs.len();
    let n = unknowns.len();
    let all = invariants.iter().chain(qb.iter().flatten()).chain(qnb.iter().flatten()).chain(rhs);
    let disc = all.clone().flat_map(|f| f.terms().map(|(_, c)| c.discriminant())).find(|&d| d != 0).unwrap_or(0);
    let max_deg = all.filter_map(|f| f.degree()).max().unwrap_or(0);
    let points = n.div_ceil(comps) + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rec = vec![Reconstructor::default(); n];
    let mut last: Option<Vec<ExactScalar>> = None;
    for &p in PRIMES.iter() {
        let Some(plus) = PrimeField::new(p, disc) else { continue };
        let mut images = Vec::with_capacity(2);
        for field in [plus, plus.conjugate()] {
            let reduce = |f: &MultiPoly| field.reduce_poly(f);
            let Some(inv) = invariants.iter().map(reduce).collect::<Option<Vec<_>>>() else { break };
            let Some(rqb) = qb.iter().map(|r| r.iter().map(reduce).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>() else { break };
            let Some(rqnb) = qnb.iter().map(|r| r.iter().map(reduce).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>() else { break };
            let Some(rrhs) = rhs.iter().map(reduce).collect::<Option<Vec<_>>>() else { break };
            let mut a = Vec::with_capacity(points * comps);
            let mut b = Vec::with_capacity(points * comps);
            for _ in 0..points {
                let point: Vec<u64> = (0..rank).map(|_| rng.gen_range(0..p)).collect();
                let mut table = PowerTable::new(field, &point);
                table.reserve(max_deg);
                let pv: Vec<u64> = inv.iter().map(|f| f.eval(&field, &table)).collect();
                let pow = |e: &[u32]| e.iter().zip(&pv).fold(1, |acc, (&x, &v)| field.mul(acc, field.pow(v, x as u64)));
                let qbv: Vec<Vec<u64>> = rqb.iter().map(|r| r.iter().map(|f| f.eval(&field, &table)).collect()).collect();
                let qnbv: Vec<Vec<u64>> = rqnb.iter().map(|r| r.iter().map(|f| f.eval(&field, &table)).collect()).collect();
                for c in 0..comps {
                    let row = unknowns
                        .iter()
                        .map(|(jp, e)| {
                            let mut v = field.mul(pow(e), qnbv[*jp][c]);
                            if e[l - 1] > 0 {
                                let mut lower = e.clone();
                                lower[l - 1] -= 1;
                                let t = field.mul(field.mul(pow(&lower), e[l - 1] as u64), qbv[*jp][c]);
                                v = field.add(v, t);
                            }
                            v
                        })
                        .collect();
                    a.push(row);
                    b.push(rrhs[c].eval(&field, &table));
                }
            }
            match solve_mod(&field, a, b) {
                ModSolution::Unique(u) => images.push(u),
                _ => return None,
            }
        }
        let [up, um] = images.as_slice() else { continue };
        for (r, (x, y)) in rec.iter_mut().zip(up.iter().zip(um)) {
            r.push(&plus, *x, *y);
        }
        let current: Option<Vec<ExactScalar>> = rec.iter().map(|r| r.reconstruct(disc)).collect();
        if current.is_some() && current == last {
            return current;
        }
        last = current;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitive::primitive_derivation;

    #[test]
    fn a1_families() {
        let d = CoxeterDatum::from_type_string("A1").unwrap();
        let pd = primitive_derivation(&d).unwrap();
        let fam = generate_families(&d, &pd, -1, 1).unwrap();
        let texts: Vec<String> = fam.iter().map(|f| f.forms[0].to_texts()[0].clone()).collect();
        assert_eq!(texts, vec!["1/3*x^3", "x", "1/x"]);
        assert_eq!(fam.get(-1).unwrap().kernel_dims, vec![Some(0)]);
        assert_eq!(fam.get(1).unwrap().derivations[0].to_texts(), vec!["1/x"]);
    }

    #[test]
    fn weighted_enumeration() {
        assert_eq!(weighted_monomials(&[2, 4], 4), vec![vec![0, 1], vec![2, 0]]);
        assert!(weighted_monomials(&[2, 4], -1).is_empty());
    }
}
