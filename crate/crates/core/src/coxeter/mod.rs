//! Coxeter arrangements: irreducible factors from a fixed catalog and their
//! products, with roots, hyperplanes, basic invariants and `Q`.

mod build;
mod multiplicity;

pub use multiplicity::MultiplicityMap;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::diffgeo::{Metric, Reflect, Reflection};
use crate::exact_algebra::{poly_matrix_det, ExactScalar, LinearForm, MultiPoly, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("cannot parse arrangement `{0}`")]
    BadTypeString(String),
    #[error("unsupported type {0}")]
    Unsupported(String),
    #[error("invariant set for {0} failed its self-test: {1}")]
    InvalidInvariants(String, String),
    #[error("bad multiplicity `{0}`: {1}")]
    BadMultiplicity(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorType {
    A(usize),
    B(usize),
    D(usize),
    I2(u32),
    H3,
}

impl FactorType {
    pub fn rank(&self) -> usize {
        match *self {
            FactorType::A(n) | FactorType::B(n) | FactorType::D(n) => n,
            FactorType::I2(_) => 2,
            FactorType::H3 => 3,
        }
    }

    fn check(&self) -> Result<(), CoxeterError> {
        let ok = match *self {
            FactorType::A(n) => (1..=4).contains(&n),
            FactorType::B(n) => (2..=3).contains(&n),
            FactorType::D(n) => n == 4,
            FactorType::I2(m) => (3..=6).contains(&m),
            FactorType::H3 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(CoxeterError::Unsupported(self.to_string()))
        }
    }
}

impl fmt::Display for FactorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorType::A(n) => write!(f, "A{n}"),
            FactorType::B(n) => write!(f, "B{n}"),
            FactorType::D(n) => write!(f, "D{n}"),
            FactorType::I2(m) => write!(f, "I2({m})"),
            FactorType::H3 => write!(f, "H3"),
        }
    }
}

/// Parses `TYPE := FACTOR ('x' FACTOR)*`, case-insensitive.
pub fn parse_type_string(s: &str) -> Result<Vec<FactorType>, CoxeterError> {
    let bad = || CoxeterError::BadTypeString(s.to_string());
    let lower = s.trim().to_ascii_lowercase();
    if lower.is_empty() {
        return Err(bad());
    }
    lower
        .split('x')
        .map(|part| {
            let part = part.trim();
            let t = if part == "h3" {
                FactorType::H3
            } else if let Some(inner) = part.strip_prefix("i2(").and_then(|r| r.strip_suffix(')')) {
                FactorType::I2(inner.parse().map_err(|_| bad())?)
            } else {
                let (head, num) = part.split_at(part.len().min(1));
                let n: usize = num.parse().map_err(|_| bad())?;
                match head {
                    "a" => FactorType::A(n),
                    "b" => FactorType::B(n),
                    "d" => FactorType::D(n),
                    _ => return Err(bad()),
                }
            };
            t.check()?;
            Ok(t)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub kind: FactorType,
    /// Index of the factor's first coordinate in the ambient space.
    pub offset: usize,
    pub rank: usize,
    pub simple_roots: Vec<Vec<ExactScalar>>,
    pub positive_roots: Vec<Vec<ExactScalar>>,
    /// Basic invariants in the ambient ring, by increasing degree.
    pub invariants: Vec<MultiPoly>,
    pub degrees: Vec<u32>,
    pub exponents: Vec<u32>,
    pub coxeter_number: u32,
    /// Range of this factor's hyperplanes in the datum's list.
    pub hyperplanes: std::ops::Range<usize>,
}

impl Factor {
    pub fn variables(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.rank
    }

    pub fn top_invariant(&self) -> &MultiPoly {
        self.invariants.last().expect("rank ≥ 1")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub alpha: LinearForm,
    /// A root defining the hyperplane, as produced by the reflection closure.
    pub root: Vec<ExactScalar>,
    pub orbit_id: usize,
    pub factor: usize,
}

#[derive(Clone, Debug)]
pub struct CoxeterDatum {
    name: String,
    vars: Vars,
    metric: Metric,
    factors: Vec<Factor>,
    hyperplanes: Vec<Hyperplane>,
    orbit_names: Vec<Vec<String>>,
    generators: Vec<Reflection>,
    q: MultiPoly,
}

pub fn variable_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn closure(simple: &[Vec<ExactScalar>], gens: &[Reflection]) -> Vec<(LinearForm, Vec<ExactScalar>)> {
    let mut seen: BTreeMap<LinearForm, ()> = BTreeMap::new();
    let mut out = Vec::new();
    let mut queue: std::collections::VecDeque<Vec<ExactScalar>> = simple.iter().cloned().collect();
    while let Some(r) = queue.pop_front() {
        let a = LinearForm::new(&r).expect("roots are nonzero");
        if seen.insert(a.clone(), ()).is_some() {
            continue;
        }
        for s in gens {
            queue.push_back(s.apply_covector(&r));
        }
        out.push((a, r));
    }
    out
}

impl CoxeterDatum {
    /// One irreducible factor.
    pub fn irreducible(t: FactorType) -> Result<CoxeterDatum, CoxeterError> {
        Self::product_of(&[t])
    }

    pub fn from_type_string(s: &str) -> Result<CoxeterDatum, CoxeterError> {
        Self::product_of(&parse_type_string(s)?)
    }

    /// `A[1] × ⋯ × A[t]` on `V[1] ⊕ ⋯ ⊕ V[t]`.
    pub fn product_of(types: &[FactorType]) -> Result<CoxeterDatum, CoxeterError> {
        if types.is_empty() {
            return Err(CoxeterError::BadTypeString(String::new()));
        }
        for t in types {
            t.check()?;
        }
        let n: usize = types.iter().map(|t| t.rank()).sum();
        let vars = Vars::new(&variable_names(n));
        let mut metrics = Vec::new();
        let mut raws = Vec::new();
        let mut offset = 0;
        for t in types {
            let r = t.rank();
            let local = Vars::new(&variable_names(r));
            let raw = build::raw_factor(*t, &local);
            metrics.push(Metric::from_inverse_gram(raw.inverse_gram.clone()).expect("catalog metrics are valid"));
            raws.push((offset, raw));
            offset += r;
        }
        let metric = Metric::block_diag(&metrics);
        let mut factors = Vec::new();
        let mut hyperplanes = Vec::new();
        let mut generators = Vec::new();
        let mut orbit_names = Vec::new();
        for (fi, (t, (offset, raw))) in types.iter().zip(raws).enumerate() {
            let r = t.rank();
            let mapping: Vec<usize> = (offset..offset + r).collect();
            let widen = |v: &Vec<ExactScalar>| {
                let mut w = vec![ExactScalar::zero(); n];
                for (i, c) in v.iter().enumerate() {
                    w[offset + i] = c.clone();
                }
                w
            };
            let simple: Vec<Vec<ExactScalar>> = raw.simple_roots.iter().map(widen).collect();
            let gens: Vec<Reflection> = simple.iter().map(|a| Reflection::new(&vars, a, &metric)).collect();
            let roots = closure(&simple, &gens);
            let start = hyperplanes.len();
            let first_orbit = orbit_names.len();
            let orbit_of = orbits(&roots, &gens);
            let norbits = orbit_of.iter().max().map(|m| m + 1).unwrap_or(0);
            for ((a, root), o) in roots.iter().zip(&orbit_of) {
                hyperplanes.push(Hyperplane { alpha: a.clone(), root: root.clone(), orbit_id: first_orbit + o, factor: fi });
            }
            // name orbits by index, and long/short when two root lengths occur
            let mut lengths: Vec<Option<ExactScalar>> = vec![None; norbits];
            for ((_, root), &o) in roots.iter().zip(&orbit_of) {
                lengths[o].get_or_insert_with(|| metric.dual_pairing(root, root));
            }
            for o in 0..norbits {
                let mut names = vec![(first_orbit + o).to_string()];
                if norbits == 2 {
                    let other = &lengths[1 - o];
                    if lengths[o] > *other {
                        names.push("long".into());
                    } else if lengths[o] < *other {
                        names.push("short".into());
                    }
                }
                orbit_names.push(names);
            }
            let invariants: Vec<MultiPoly> = raw.invariants.iter().map(|p| p.embed(&vars, &mapping)).collect();
            let degrees: Vec<u32> = invariants.iter().map(|p| p.degree().expect("nonzero invariant")).collect();
            factors.push(Factor {
                kind: *t,
                offset,
                rank: r,
                positive_roots: roots.iter().map(|(_, root)| root.clone()).collect(),
                simple_roots: simple,
                exponents: degrees.iter().map(|d| d - 1).collect(),
                degrees,
                invariants,
                coxeter_number: raw.coxeter_number,
                hyperplanes: start..hyperplanes.len(),
            });
            generators.extend(gens);
        }
        let q = hyperplanes.iter().fold(MultiPoly::one(&vars), |acc, h| &acc * &h.alpha.to_poly(&vars));
        let name = types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("x");
        let datum = CoxeterDatum { name, vars, metric, factors, hyperplanes, orbit_names, generators, q };
        datum.self_test()?;
        Ok(datum)
    }

    fn self_test(&self) -> Result<(), CoxeterError> {
        let fail = |msg: String| CoxeterError::InvalidInvariants(self.name.clone(), msg);
        for (fi, f) in self.factors.iter().enumerate() {
            if f.exponents.iter().sum::<u32>() as usize != f.hyperplanes.len() {
                return Err(fail(format!("exponent sum ≠ |A| on factor {fi}")));
            }
            let k = f.degrees.len();
            if k >= 2 && f.degrees[k - 2] >= f.degrees[k - 1] {
                return Err(fail(format!("top degree not strict on factor {fi}")));
            }
            if *f.degrees.last().expect("nonempty") != f.coxeter_number {
                return Err(fail(format!("top degree ≠ h on factor {fi}")));
            }
        }
        for p in self.invariants() {
            if !self.is_invariant_poly(p) {
                return Err(fail(format!("{} is not invariant", p.to_text())));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.vars.len()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn generators(&self) -> &[Reflection] {
        &self.generators
    }

    /// `Q = Π α_H` with each α_H normalized.
    pub fn q(&self) -> &MultiPoly {
        &self.q
    }

    pub fn invariants(&self) -> impl Iterator<Item = &MultiPoly> {
        self.factors.iter().flat_map(|f| f.invariants.iter())
    }

    /// `Q^m` as linear-form powers.
    pub fn q_powers(&self, m: &MultiplicityMap) -> Vec<(LinearForm, i64)> {
        self.hyperplanes.iter().zip(m.values()).map(|(h, &k)| (h.alpha.clone(), k)).collect()
    }

    pub fn q_power_constant(&self, k: i64) -> Vec<(LinearForm, i64)> {
        self.hyperplanes.iter().map(|h| (h.alpha.clone(), k)).collect()
    }

    pub fn hyperplane_forms(&self) -> Vec<LinearForm> {
        self.hyperplanes.iter().map(|h| h.alpha.clone()).collect()
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_names.len()
    }

    /// Index name first, then any alias (`long` / `short`).
    pub fn orbit_names(&self, orbit: usize) -> &[String] {
        &self.orbit_names[orbit]
    }

    /// Partition of hyperplane indices into W-orbits.
    pub fn orbit_decomposition(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.orbit_count()];
        for (i, h) in self.hyperplanes.iter().enumerate() {
            out[h.orbit_id].push(i);
        }
        out
    }

    pub fn is_invariant_poly(&self, p: &MultiPoly) -> bool {
        self.generators.iter().all(|s| &p.reflect(s) == p)
    }

    pub fn is_invariant<T: Reflect + PartialEq>(&self, x: &T) -> bool {
        self.generators.iter().all(|s| &x.reflect(s) == x)
    }

    /// `c` with `det[∂P_j/∂x_i] = c·Q`, or `None` if the determinant is not
    /// a nonzero multiple of `Q`.
    pub fn jacobian_constant(&self) -> Option<ExactScalar> {
        let ps: Vec<&MultiPoly> = self.invariants().collect();
        let n = self.rank();
        let m: Vec<Vec<MultiPoly>> = ps.iter().map(|p| (0..n).map(|i| p.partial(i)).collect()).collect();
        let det = poly_matrix_det(&m).ok()?;
        det.div_exact(&self.q)?.constant_value().filter(|c| !c.is_zero())
    }

    /// Short description of the fixed normalizations.
    pub fn normalization_note(&self) -> String {
        let inv: Vec<String> = self.invariants().map(|p| p.to_text()).collect();
        format!("invariants [{}]; Q = product of hyperplane forms with leading coefficient 1", inv.join(", "))
    }
}

fn orbits(roots: &[(LinearForm, Vec<ExactScalar>)], gens: &[Reflection]) -> Vec<usize> {
    let index: BTreeMap<&LinearForm, usize> = roots.iter().enumerate().map(|(i, (a, _))| (a, i)).collect();
    let n = roots.len();
    let mut orbit = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if orbit[start] != usize::MAX {
            continue;
        }
        orbit[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for s in gens {
                let img = LinearForm::new(&s.apply_covector(&roots[i].1)).expect("nonzero");
                let j = index[&img];
                if orbit[j] == usize::MAX {
                    orbit[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    orbit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_type_strings() {
        assert_eq!(parse_type_string("a1XB2").unwrap(), vec![FactorType::A(1), FactorType::B(2)]);
        assert_eq!(parse_type_string("I2(5)xH3").unwrap(), vec![FactorType::I2(5), FactorType::H3]);
        assert!(parse_type_string("E8").is_err());
        assert!(parse_type_string("I2(7)").is_err());
        assert!(parse_type_string("").is_err());
    }

    #[test]
    fn hyperplane_counts() {
        for (s, n) in [("A1", 1), ("A2", 3), ("A3", 6), ("A4", 10), ("B2", 4), ("B3", 9), ("D4", 12), ("I2(5)", 5), ("H3", 15)] {
            let d = CoxeterDatum::from_type_string(s).unwrap();
            assert_eq!(d.hyperplanes().len(), n, "{s}");
            assert_eq!(d.q().degree(), Some(n as u32), "{s}");
        }
    }

    #[test]
    fn b2_orbits_are_named() {
        let d = CoxeterDatum::from_type_string("B2").unwrap();
        let names: Vec<_> = (0..d.orbit_count()).map(|o| d.orbit_names(o).to_vec()).collect();
        assert_eq!(names.len(), 2);
        assert!(names.iter().any(|n| n.contains(&"long".to_string())));
        assert!(names.iter().any(|n| n.contains(&"short".to_string())));
    }
}
