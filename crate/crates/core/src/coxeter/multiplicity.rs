use std::collections::BTreeMap;

use super::{CoxeterDatum, CoxeterError};

/// An integer `m(H)` for every hyperplane of a datum, in hyperplane order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMap {
    values: Vec<i64>,
    description: String,
}

impl MultiplicityMap {
    pub fn constant(d: &CoxeterDatum, k: i64) -> MultiplicityMap {
        MultiplicityMap { values: vec![k; d.hyperplanes().len()], description: format!("const:{k}") }
    }

    pub fn from_values(values: Vec<i64>, description: impl Into<String>) -> MultiplicityMap {
        MultiplicityMap { values, description: description.into() }
    }

    /// Orbit-constant map; keys are orbit names (index or `long`/`short`),
    /// `*` sets a default.
    pub fn by_orbit(d: &CoxeterDatum, named: &BTreeMap<String, i64>) -> Result<MultiplicityMap, CoxeterError> {
        let mut per_orbit = Vec::with_capacity(d.orbit_count());
        for o in 0..d.orbit_count() {
            let v = d
                .orbit_names(o)
                .iter()
                .find_map(|n| named.get(n))
                .or_else(|| named.get("*"))
                .ok_or_else(|| {
                    CoxeterError::BadMultiplicity(describe(named), format!("orbit {} of {} is not covered", o, d.name()))
                })?;
            per_orbit.push(*v);
        }
        for key in named.keys() {
            if key != "*" && !(0..d.orbit_count()).any(|o| d.orbit_names(o).contains(key)) {
                return Err(CoxeterError::BadMultiplicity(describe(named), format!("no orbit named `{key}`")));
            }
        }
        let values = d.hyperplanes().iter().map(|h| per_orbit[h.orbit_id]).collect();
        Ok(MultiplicityMap { values, description: format!("orbit:{}", describe(named)) })
    }

    /// `const:K`, `orbit:NAME=K,...`.
    pub fn parse(d: &CoxeterDatum, s: &str) -> Result<MultiplicityMap, CoxeterError> {
        let bad = |why: &str| CoxeterError::BadMultiplicity(s.to_string(), why.to_string());
        if let Some(k) = s.strip_prefix("const:") {
            return Ok(Self::constant(d, k.trim().parse().map_err(|_| bad("expected an integer"))?));
        }
        if let Some(body) = s.strip_prefix("orbit:") {
            let mut named = BTreeMap::new();
            for part in body.split(',') {
                let (k, v) = part.split_once('=').ok_or_else(|| bad("expected NAME=VALUE"))?;
                named.insert(k.trim().to_string(), v.trim().parse().map_err(|_| bad("expected an integer"))?);
            }
            return Self::by_orbit(d, &named);
        }
        Err(bad("expected const:K or orbit:NAME=K,..."))
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// `m + k` on every hyperplane.
    pub fn shifted(&self, k: i64) -> MultiplicityMap {
        MultiplicityMap {
            values: self.values.iter().map(|v| v + k).collect(),
            description: format!("{}{:+}", self.description, k),
        }
    }

    pub fn negated(&self) -> MultiplicityMap {
        MultiplicityMap { values: self.values.iter().map(|v| -v).collect(), description: format!("-({})", self.description) }
    }
}

fn describe(named: &BTreeMap<String, i64>) -> String {
    named.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_spec_on_b2() {
        let d = CoxeterDatum::from_type_string("B2").unwrap();
        let m = MultiplicityMap::parse(&d, "orbit:long=1,short=-1").unwrap();
        let mut vals = m.values().to_vec();
        vals.sort();
        assert_eq!(vals, vec![-1, -1, 1, 1]);
        assert!(MultiplicityMap::parse(&d, "orbit:long=1").is_err());
        assert!(MultiplicityMap::parse(&d, "const:x").is_err());
        assert_eq!(MultiplicityMap::parse(&d, "const:-1").unwrap().values(), &[-1, -1, -1, -1]);
    }
}
