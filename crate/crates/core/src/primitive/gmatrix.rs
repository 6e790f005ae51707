use crate::coxeter::CoxeterDatum;
use crate::diffgeo::{apply_derivation, istar_pairing, wedge_top, OneForm};
use crate::exact_algebra::{ratfunc_matrix_det, ExactScalar, RatFunc};

use super::{PrimitiveDerivation, PrimitiveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GKind {
    G,
    Gk(i64),
    DofG,
}

#[derive(Clone, Debug)]
pub struct GMatrix {
    pub kind: GKind,
    pub entries: Vec<Vec<RatFunc>>,
}

impl GMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Every entry is an invariant polynomial.
    pub fn entries_in_r(&self, d: &CoxeterDatum) -> bool {
        self.entries.iter().flatten().all(|e| e.as_polynomial().is_some_and(|p| d.is_invariant_poly(p)))
    }

    /// Every entry is an invariant polynomial killed by D.
    pub fn entries_in_t(&self, d: &CoxeterDatum, pd: &PrimitiveDerivation) -> bool {
        self.entries_in_r(d) && self.entries.iter().flatten().all(|e| apply_derivation(&pd.total, e).is_zero())
    }

    pub fn det(&self) -> Result<RatFunc, PrimitiveError> {
        Ok(ratfunc_matrix_det(&self.entries)?)
    }

    pub fn to_texts(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.to_text()).collect()).collect()
    }
}

/// `G = [I*(dP_a, dP_b)]`.
pub fn g_matrix(d: &CoxeterDatum) -> Result<GMatrix, PrimitiveError> {
    let dp: Vec<OneForm> = d.invariants().map(OneForm::differential).collect();
    let entries = dp
        .iter()
        .map(|a| dp.iter().map(|b| istar_pairing(a, b, d.metric())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    Ok(GMatrix { kind: GKind::G, entries })
}

/// Entrywise `D` applied to `G`.
pub fn d_of_g(g: &GMatrix, pd: &PrimitiveDerivation) -> GMatrix {
    let entries = g.entries.iter().map(|r| r.iter().map(|e| apply_derivation(&pd.total, e)).collect()).collect();
    GMatrix { kind: GKind::DofG, entries }
}

/// `G_k` with `[θ^(k)] = [θ^(k+1)] G_k`, by Cramer's rule: entry (i, j) is
/// `Q^{2k+1}` times the top wedge of Θ^(k+1) with its i-th member replaced
/// by θ_j^(k), divided by the criterion constant of Θ^(k+1).
pub fn g_k_matrix(d: &CoxeterDatum, k: i64, lower: &[OneForm], upper: &[OneForm]) -> Result<GMatrix, PrimitiveError> {
    let n = upper.len();
    if lower.len() != n || n != d.rank() {
        return Err(PrimitiveError::NotInR(format!("G_{k} needs two families of {} forms", d.rank())));
    }
    let q = d.q_power_constant(2 * k + 1);
    let base = wedge_top(upper)?.mul_linear_powers(&q);
    let c: ExactScalar = base
        .constant_value()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| PrimitiveError::NotInR(format!("Θ^({}) criterion value {} is not a nonzero constant", k + 1, base.to_text())))?;
    let c_inv = c.inv().expect("nonzero");
    let mut entries = vec![Vec::with_capacity(n); n];
    for (i, row) in entries.iter_mut().enumerate() {
        for w in lower {
            let mut forms = upper.to_vec();
            forms[i] = w.clone();
            row.push(wedge_top(&forms)?.mul_linear_powers(&q).scale(&c_inv));
        }
    }
    Ok(GMatrix { kind: GKind::Gk(k), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitive::{generate_families, primitive_derivation};

    #[test]
    fn a1_matrices() {
        let d = CoxeterDatum::from_type_string("A1").unwrap();
        let pd = primitive_derivation(&d).unwrap();
        let g = g_matrix(&d).unwrap();
        assert_eq!(g.to_texts(), vec![vec!["x^2"]]);
        let fam = generate_families(&d, &pd, 0, 1).unwrap();
        let g0 = g_k_matrix(&d, 0, &fam.get(0).unwrap().forms, &fam.get(1).unwrap().forms).unwrap();
        assert_eq!(g0.to_texts(), vec![vec!["x^2"]]);
        assert_eq!(d_of_g(&g, &pd).to_texts(), vec![vec!["2"]]);
    }

    #[test]
    fn b2_d_of_g() {
        let d = CoxeterDatum::from_type_string("B2").unwrap();
        let pd = primitive_derivation(&d).unwrap();
        let dg = d_of_g(&g_matrix(&d).unwrap(), &pd);
        assert_eq!(dg.to_texts(), vec![vec!["0", "4"], vec!["4", "x^2 + y^2"]]);
        assert_eq!(dg.det().unwrap().constant_value(), Some(ExactScalar::from_i64(-16)));
        assert!(dg.entries_in_t(&d, &pd));
    }
}
