use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coxeter::{CoxeterDatum, MultiplicityMap};
use crate::diffgeo::{istar_map, nabla_on_derivation, nabla_on_form, DerivationField, OneForm};
use crate::exact_algebra::text::parse_poly;
use crate::exact_algebra::{poly_matrix_det, MultiPoly, RatFunc};
use crate::log_modules::{
    der_membership, omega_membership, ord_lemma_check, saito_ziegler_check, saito_ziegler_check_der, LogError,
    MembershipVerdict, ShiftProfiles, Side,
};
use crate::primitive::{
    d_of_g, g_k_matrix, g_matrix, primitive_derivation, t_membership, GMatrix, Member, PrimitiveDerivation,
};

use super::{Certificate, CertifyError, Verdict, TOOL_VERSION};

/// The datum and primitive derivation every check of one arrangement uses.
pub struct Context {
    pub arrangement: String,
    pub datum: CoxeterDatum,
    pub pd: PrimitiveDerivation,
}

impl Context {
    pub fn new(arrangement: &str) -> Result<Context, CertifyError> {
        let datum = CoxeterDatum::from_type_string(arrangement).map_err(|e| CertifyError::Usage(e.to_string()))?;
        let pd = primitive_derivation(&datum).map_err(|e| CertifyError::Failure(format!("{arrangement}: {e}")))?;
        Ok(Context { arrangement: datum.name().to_string(), datum, pd })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInputs {
    pub k: i64,
    pub members: Vec<Member>,
    pub degrees: Vec<i64>,
    pub forms: Vec<Vec<String>>,
    /// Θ^(k+1), when it was generated, for the ∇ step.
    pub next: Option<Vec<Vec<String>>>,
    pub kernel_dims: Vec<Option<usize>>,
    pub kernel_dims_direct: Vec<Option<usize>>,
}

/// A check with its inputs as canonical text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "inputs", rename_all = "kebab-case")]
pub enum Check {
    Family(FamilyInputs),
    BasisCriterion { side: Side, k: i64, elements: Vec<Vec<String>> },
    Membership { side: Side, label: String, multiplicity: String, element: Vec<String> },
    OrdLemma { samples: Vec<String> },
    FiltrationShift { side: Side, multiplicities: Vec<String>, samples: Vec<Vec<String>> },
    /// With `k`: `I*(θ_j)` against the directly computed `ξ_j`. Without:
    /// `I*(∇_D ω) = ∇_D(I* ω)` on the given forms.
    CommutingDiagram { k: Option<i64>, forms: Vec<Vec<String>>, derivations: Vec<Vec<String>> },
    Jacobian { invariants: Vec<String> },
    GMatrix { matrix: String, k: Option<i64>, lower: Vec<Vec<String>>, upper: Vec<Vec<String>> },
    TMembership { polynomial: String, expected: bool },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Family(_) => "family",
            Check::BasisCriterion { .. } => "basis-criterion",
            Check::Membership { .. } => "membership",
            Check::OrdLemma { .. } => "ord-lemma",
            Check::FiltrationShift { .. } => "filtration-shift",
            Check::CommutingDiagram { .. } => "commuting-diagram",
            Check::Jacobian { .. } => "jacobian",
            Check::GMatrix { .. } => "g-matrix",
            Check::TMembership { .. } => "t-membership",
        }
    }

    fn multiplicity(&self) -> Option<String> {
        match self {
            Check::BasisCriterion { side, k, .. } => Some(format!("const:{}", criterion_multiplicity(*side, *k))),
            Check::Membership { multiplicity, .. } => Some(multiplicity.clone()),
            Check::FiltrationShift { multiplicities, .. } => Some(multiplicities.join(" ")),
            _ => None,
        }
    }
}

/// `2k−1` on the form side, `−2k+1` on the derivation side.
pub fn criterion_multiplicity(side: Side, k: i64) -> i64 {
    match side {
        Side::Omega => 2 * k - 1,
        Side::Der => 1 - 2 * k,
    }
}

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
    pub witness: Value,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>, witness: Value) -> Outcome {
        Outcome { pass, detail: detail.into(), witness }
    }

    fn error(e: impl std::fmt::Display) -> Outcome {
        Outcome::new(false, format!("check failed: {e}"), Value::Null)
    }
}

/// Runs `check` and wraps the outcome. Errors are reserved for inputs that
/// do not parse; a check that cannot be carried out is a failed verdict.
pub fn evaluate(ctx: &Context, id: &str, check: &Check, seed: u64) -> Result<Certificate, CertifyError> {
    let outcome = match check {
        Check::Family(f) => family(ctx, f)?,
        Check::BasisCriterion { side, k, elements } => basis_criterion(ctx, *side, *k, elements)?,
        Check::Membership { side, multiplicity, element, .. } => {
            let m = multiplicity_map(&ctx.datum, multiplicity)?;
            membership(ctx, *side, &m, element)?
        }
        Check::OrdLemma { samples } => ord_lemma(ctx, samples)?,
        Check::FiltrationShift { side, multiplicities, samples } => filtration(ctx, *side, multiplicities, samples)?,
        Check::CommutingDiagram { k, forms, derivations } => commuting(ctx, *k, forms, derivations)?,
        Check::Jacobian { invariants } => jacobian(ctx, invariants)?,
        Check::GMatrix { matrix, k, lower, upper } => g_check(ctx, matrix, *k, lower, upper)?,
        Check::TMembership { polynomial, expected } => t_check(ctx, polynomial, *expected)?,
    };
    Ok(Certificate {
        id: id.to_string(),
        arrangement: ctx.arrangement.clone(),
        multiplicity: check.multiplicity(),
        check: check.clone(),
        verdict: if outcome.pass { Verdict::Pass } else { Verdict::Fail },
        detail: outcome.detail,
        witness: outcome.witness,
        tool_version: TOOL_VERSION.to_string(),
        seed,
        normalization: ctx.datum.normalization_note(),
        elapsed_ms: None,
    })
}

fn input_error(e: impl std::fmt::Display) -> CertifyError {
    CertifyError::Input(e.to_string())
}

pub(crate) fn parse_form(d: &CoxeterDatum, texts: &[String]) -> Result<OneForm, CertifyError> {
    OneForm::from_texts(d.vars(), texts).map_err(input_error)
}

pub(crate) fn parse_derivation(d: &CoxeterDatum, texts: &[String]) -> Result<DerivationField, CertifyError> {
    DerivationField::from_texts(d.vars(), texts).map_err(input_error)
}

fn parse_forms(d: &CoxeterDatum, list: &[Vec<String>]) -> Result<Vec<OneForm>, CertifyError> {
    list.iter().map(|t| parse_form(d, t)).collect()
}

fn parse_derivations(d: &CoxeterDatum, list: &[Vec<String>]) -> Result<Vec<DerivationField>, CertifyError> {
    list.iter().map(|t| parse_derivation(d, t)).collect()
}

pub(crate) fn multiplicity_map(d: &CoxeterDatum, text: &str) -> Result<MultiplicityMap, CertifyError> {
    MultiplicityMap::parse(d, text).map_err(|e| CertifyError::Usage(e.to_string()))
}

fn verdict_json(v: &MembershipVerdict) -> Value {
    let hyperplanes: Vec<Value> = v
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "alpha": w.alpha,
                "pairing_order": w.pairing_order,
                "bound": w.bound,
                "tangential_order": w.tangential_order,
                "ok": w.ok,
            })
        })
        .collect();
    json!({
        "member": v.member,
        "regular_off_arrangement": v.regular_off_arrangement,
        "foreign_poles": v.foreign_poles,
        "binding": v.binding_witness().map(|w| w.alpha.clone()),
        "hyperplanes": hyperplanes,
    })
}

/// Why a verdict says "not a member", naming the hyperplane and the order.
fn violation(v: &MembershipVerdict) -> String {
    if let Some(p) = v.foreign_poles.first() {
        return format!("pole along {p}, which is not a hyperplane of the arrangement");
    }
    match v.binding_witness() {
        Some(w) if w.pairing_order.is_some_and(|o| o > w.bound) => format!(
            "hyperplane {}: pairing has pole order {} above the bound {}",
            w.alpha,
            w.pairing_order.expect("checked"),
            w.bound
        ),
        Some(w) => format!("hyperplane {}: tangential part has pole order {}", w.alpha, w.tangential_order.unwrap_or(0)),
        None => "not a member".to_string(),
    }
}

fn membership_verdict(ctx: &Context, side: Side, m: &MultiplicityMap, element: &[String]) -> Result<Result<MembershipVerdict, LogError>, CertifyError> {
    let d = &ctx.datum;
    Ok(match side {
        Side::Omega => omega_membership(&parse_form(d, element)?, d, m),
        Side::Der => der_membership(&parse_derivation(d, element)?, d, m),
    })
}

fn membership(ctx: &Context, side: Side, m: &MultiplicityMap, element: &[String]) -> Result<Outcome, CertifyError> {
    Ok(match membership_verdict(ctx, side, m, element)? {
        Err(e) => Outcome::error(e),
        Ok(v) if v.member => Outcome::new(true, format!("member of {}(A, {})", side.symbol(), m.description()), verdict_json(&v)),
        Ok(v) => Outcome::new(false, violation(&v), verdict_json(&v)),
    })
}

fn basis_criterion(ctx: &Context, side: Side, k: i64, elements: &[Vec<String>]) -> Result<Outcome, CertifyError> {
    let d = &ctx.datum;
    let m = MultiplicityMap::constant(d, criterion_multiplicity(side, k));
    let report = match side {
        Side::Omega => saito_ziegler_check(&parse_forms(d, elements)?, d, &m),
        Side::Der => saito_ziegler_check_der(&parse_derivations(d, elements)?, d, &m),
    };
    Ok(match report {
        Ok(r) => {
            let witness = json!({
                "product": r.product_scalar.to_text(),
                "regular": r.is_regular,
                "constant": r.constant.as_ref().map(|c| c.to_text()),
            });
            match &r.constant {
                Some(c) => Outcome::new(true, format!("constant={}", c.to_text()), witness),
                None => Outcome::new(false, format!("product {} is not a nonzero constant", r.product_scalar.to_text()), witness),
            }
        }
        Err(LogError::Precondition { index, .. }) => {
            let v = membership_verdict(ctx, side, &m, &elements[index])?.map_err(input_error)?;
            let detail = format!("member {} is outside {}(A, {}): {}", index + 1, side.symbol(), m.description(), violation(&v));
            Outcome::new(false, detail, json!({ "member": index + 1, "verdict": verdict_json(&v) }))
        }
        Err(e) => Outcome::error(e),
    })
}

fn family(ctx: &Context, f: &FamilyInputs) -> Result<Outcome, CertifyError> {
    let d = &ctx.datum;
    let forms = parse_forms(d, &f.forms)?;
    let n = d.rank();
    if forms.len() != n || f.members.len() != n || f.degrees.len() != n {
        return Err(CertifyError::Input(format!("family needs {n} members")));
    }
    let mut problems = Vec::new();
    for (i, (w, m)) in forms.iter().zip(&f.members).enumerate() {
        let factor = d.factors().get(m.factor).ok_or_else(|| CertifyError::Input(format!("no factor {}", m.factor)))?;
        let expected = *factor.exponents.get(m.j).ok_or_else(|| CertifyError::Input(format!("no exponent {}", m.j)))?
            as i64
            - f.k * factor.coxeter_number as i64;
        if f.degrees[i] != expected || w.degree() != Some(expected) {
            problems.push(format!("member {}: degree {:?}, expected {expected}", i + 1, w.degree()));
        }
        if !d.is_invariant(w) {
            problems.push(format!("member {} is not invariant", i + 1));
        }
    }
    let mut nabla = Vec::new();
    if let Some(next) = &f.next {
        let next = parse_forms(d, next)?;
        for (i, ((w, m), want)) in forms.iter().zip(&f.members).zip(&next).enumerate() {
            let ok = &nabla_on_form(&ctx.pd.per_factor[m.factor], w) == want;
            nabla.push(ok);
            if !ok {
                problems.push(format!("∇ of member {} is not member {} of Θ^({})", i + 1, i + 1, f.k + 1));
            }
        }
    }
    let kernels: Vec<usize> = f.kernel_dims.iter().chain(&f.kernel_dims_direct).flatten().copied().collect();
    if kernels.iter().any(|&k| k != 0) {
        problems.push(format!("ansatz kernel dimensions {kernels:?}"));
    }
    let witness = json!({ "nabla_step": nabla, "kernel_dims": f.kernel_dims, "kernel_dims_direct": f.kernel_dims_direct });
    Ok(if problems.is_empty() {
        let detail = if f.k < 0 { format!("Θ^({}) invariant, degrees match, kernel 0", f.k) } else { format!("Θ^({}) invariant, degrees match", f.k) };
        Outcome::new(true, detail, witness)
    } else {
        Outcome::new(false, problems.join("; "), witness)
    })
}

fn ord_lemma(ctx: &Context, samples: &[String]) -> Result<Outcome, CertifyError> {
    let d = &ctx.datum;
    let fs: Vec<RatFunc> =
        samples.iter().map(|s| crate::exact_algebra::text::parse_ratfunc(s, d.vars()).map_err(input_error)).collect::<Result<_, _>>()?;
    let r = match ord_lemma_check(d, &ctx.pd, &fs) {
        Ok(r) => r,
        Err(e) => return Ok(Outcome::error(e)),
    };
    let pairs: Vec<Value> =
        r.pairs.iter().map(|p| json!([p.sample, d.hyperplanes()[p.hyperplane].alpha.to_text(d.vars()), p.ord_f, p.ord_df])).collect();
    let witness = json!({ "d_alpha": r.d_alpha, "pairs": pairs, "tested_samples": r.tested_samples(), "zero_samples": r.zero_samples });
    if let Some(i) = r.d_alpha.iter().position(|o| *o != Some(1)) {
        let detail = format!("hyperplane {}: ord D(α) = {:?}", d.hyperplanes()[i].alpha.to_text(d.vars()), r.d_alpha[i]);
        return Ok(Outcome::new(false, detail, witness));
    }
    if let Some(p) = r.pairs.iter().find(|p| !p.ok) {
        let detail = format!(
            "sample {}, hyperplane {}: ord f = {}, ord D(f) = {:?}",
            p.sample,
            d.hyperplanes()[p.hyperplane].alpha.to_text(d.vars()),
            p.ord_f,
            p.ord_df
        );
        return Ok(Outcome::new(false, detail, witness));
    }
    let detail = format!("ord D(α) = 1 on {} hyperplanes; ord D(f) = ord f + 2 on {} pairs from {} samples", r.d_alpha.len(), r.pairs.len(), r.tested_samples());
    Ok(Outcome::new(true, detail, witness))
}

fn filtration(ctx: &Context, side: Side, specs: &[String], samples: &[Vec<String>]) -> Result<Outcome, CertifyError> {
    let d = &ctx.datum;
    let maps = specs.iter().map(|s| multiplicity_map(d, s)).collect::<Result<Vec<_>, _>>()?;
    let profiles = match side {
        Side::Omega => ShiftProfiles::of_forms(d, &ctx.pd, &parse_forms(d, samples)?),
        Side::Der => ShiftProfiles::of_derivations(d, &ctx.pd, &parse_derivations(d, samples)?),
    };
    let profiles = match profiles {
        Ok(p) => p,
        Err(e) => return Ok(Outcome::error(e)),
    };
    let mut runs = Vec::new();
    let mut first_problem = None;
    for m in &maps {
        let r = match profiles.judge(d, m) {
            Ok(r) => r,
            Err(e) => return Ok(Outcome::error(e)),
        };
        if first_problem.is_none() {
            if let Some(c) = r.cases.iter().find(|c| !c.agrees()) {
                first_problem = Some(format!(
                    "sample {} under {}: member before = {}, after (m = {}) = {}",
                    c.sample, r.multiplicity, c.before.member, r.shifted, c.after.member
                ));
            }
        }
        let cases: Vec<Value> = r.cases.iter().map(|c| json!([c.sample, c.before.member, c.after.member])).collect();
        runs.push(json!({
            "multiplicity": r.multiplicity,
            "shifted": r.shifted,
            "forward": r.forward(),
            "backward": r.backward(),
            "members": r.members(),
            "cases": cases,
        }));
    }
    let witness = json!({ "runs": runs });
    Ok(match first_problem {
        Some(p) => Outcome::new(false, p, witness),
        None => Outcome::new(true, format!("{} samples agree under {} multiplicities", samples.len(), maps.len()), witness),
    })
}

fn commuting(ctx: &Context, k: Option<i64>, forms: &[Vec<String>], derivations: &[Vec<String>]) -> Result<Outcome, CertifyError> {
    let d = &ctx.datum;
    let forms = parse_forms(d, forms)?;
    let mut bad = Vec::new();
    if k.is_some() {
        let xs = parse_derivations(d, derivations)?;
        if xs.len() != forms.len() {
            return Err(CertifyError::Input("forms and derivations differ in number".into()));
        }
        for (i, (w, x)) in forms.iter().zip(&xs).enumerate() {
            match istar_map(w, d.metric()) {
                Ok(y) if &y == x => {}
                Ok(_) => bad.push(i),
                Err(e) => return Ok(Outcome::error(e)),
            }
        }
    } else {
        for (i, w) in forms.iter().enumerate() {
            let lhs = istar_map(&nabla_on_form(&ctx.pd.total, w), d.metric());
            let rhs = istar_map(w, d.metric()).map(|x| nabla_on_derivation(&ctx.pd.total, &x));
            match (lhs, rhs) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(_), Ok(_)) => bad.push(i),
                (Err(e), _) | (_, Err(e)) => return Ok(Outcome::error(e)),
            }
        }
    }
    let witness = json!({ "checked": forms.len(), "mismatches": bad });
    Ok(if bad.is_empty() {
        let what = match k {
            Some(k) => format!("I*(θ_j^({k})) equals the directly computed ξ_j^({k}) for all {} members", forms.len()),
            None => format!("I*(∇_D ω) = ∇_D(I* ω) on {} forms", forms.len()),
        };
        Outcome::new(true, what, witness)
    } else {
        Outcome::new(false, format!("paths disagree at entries {bad:?}"), witness)
    })
}

fn jacobian(ctx: &Context, invariants: &[String]) -> Result<Outcome, CertifyError> {
    let d = &ctx.datum;
    let ps: Vec<MultiPoly> = invariants.iter().map(|s| parse_poly(s, d.vars()).map_err(input_error)).collect::<Result<_, _>>()?;
    if ps.len() != d.rank() {
        return Err(CertifyError::Input(format!("expected {} invariants", d.rank())));
    }
    let m: Vec<Vec<MultiPoly>> = ps.iter().map(|p| (0..d.rank()).map(|i| p.partial(i)).collect()).collect();
    let det = match poly_matrix_det(&m) {
        Ok(det) => det,
        Err(e) => return Ok(Outcome::error(e)),
    };
    let c = det.div_exact(d.q()).and_then(|q| q.constant_value()).filter(|c| !c.is_zero());
    let mut factor_constants = Vec::new();
    for i in 0..d.factors().len() {
        match ctx.pd.coefficient_jacobian_constant(d, i) {
            Ok(c) => factor_constants.push(c),
            Err(e) => return Ok(Outcome::error(e)),
        }
    }
    let texts: Vec<Option<String>> = factor_constants.iter().map(|c| c.as_ref().map(|c| c.to_text())).collect();
    let witness = json!({ "c": c.as_ref().map(|c| c.to_text()), "factor_c_prime": texts });
    Ok(match (&c, factor_constants.iter().position(Option::is_none)) {
        (None, _) => Outcome::new(false, format!("det[∂P_j/∂x_i] = {} is not a nonzero multiple of Q", det.to_text()), witness),
        (Some(_), Some(i)) => Outcome::new(false, format!("factor {i}: det[∂h_j/∂x_i]·Q² is not a nonzero constant"), witness),
        (Some(c), None) => {
            let primes: Vec<String> = texts.into_iter().flatten().collect();
            Outcome::new(true, format!("c={}; c'={}", c.to_text(), primes.join(",")), witness)
        }
    })
}

fn matrix_json(g: &GMatrix) -> Value {
    json!(g.to_texts())
}

fn g_check(ctx: &Context, which: &str, k: Option<i64>, lower: &[Vec<String>], upper: &[Vec<String>]) -> Result<Outcome, CertifyError> {
    let d = &ctx.datum;
    let g = match g_matrix(d) {
        Ok(g) => g,
        Err(e) => return Ok(Outcome::error(e)),
    };
    Ok(match which {
        "G" => {
            let (sym, in_r) = (g.is_symmetric(), g.entries_in_r(d));
            let witness = json!({ "entries": matrix_json(&g), "symmetric": sym, "entries_in_R": in_r });
            Outcome::new(sym && in_r, format!("symmetric={sym}; entries in R={in_r}"), witness)
        }
        "D[G]" => {
            let dg = d_of_g(&g, &ctx.pd);
            let in_t = dg.entries_in_t(d, &ctx.pd);
            let det = match dg.det() {
                Ok(det) => det,
                Err(e) => return Ok(Outcome::error(e)),
            };
            let c = det.constant_value().filter(|c| !c.is_zero());
            let witness = json!({ "entries": matrix_json(&dg), "entries_in_T": in_t, "det": det.to_text() });
            Outcome::new(in_t && c.is_some(), format!("entries in T={in_t}; det={}", det.to_text()), witness)
        }
        "G_k" => {
            let k = k.ok_or_else(|| CertifyError::Input("G_k needs k".into()))?;
            match g_k_matrix(d, k, &parse_forms(d, lower)?, &parse_forms(d, upper)?) {
                Ok(gk) => {
                    let in_r = gk.entries_in_r(d);
                    Outcome::new(in_r, format!("G_{k} entries in R={in_r}"), json!({ "entries": matrix_json(&gk), "entries_in_R": in_r }))
                }
                Err(e) => Outcome::error(e),
            }
        }
        other => return Err(CertifyError::Input(format!("unknown matrix `{other}`"))),
    })
}

fn t_check(ctx: &Context, polynomial: &str, expected: bool) -> Result<Outcome, CertifyError> {
    let d = &ctx.datum;
    let f = parse_poly(polynomial, d.vars()).map_err(input_error)?;
    Ok(match t_membership(&f, d, &ctx.pd) {
        Ok(r) => {
            let image = crate::diffgeo::apply_derivation(&ctx.pd.total, &RatFunc::from_poly(f));
            let witness = json!({ "image": image.to_text(), "in_T": r, "expected": expected });
            Outcome::new(r == expected, format!("in T={r} (expected {expected})"), witness)
        }
        Err(e) => Outcome::error(e),
    })
}
