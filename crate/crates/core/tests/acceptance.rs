//! Acceptance suite. Each test prints one `PASS`/`FAIL` line with a short
//! summary; run with `--nocapture` to see them. The tests share a lock so
//! that timings are not distorted by other tests running alongside.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use primfilt::certify::{self, CertificateFile, FamilyDocument};
use primfilt::coxeter::{CoxeterDatum, MultiplicityMap};
use primfilt::diffgeo::{apply_derivation, istar_map, nabla_on_derivation, nabla_on_form, random_form, DerivationField, OneForm};
use primfilt::exact_algebra::text::{parse_poly, parse_ratfunc};
use primfilt::exact_algebra::{cofactor_det, ExactScalar, MultiPoly, RatFunc};
use primfilt::log_modules::{
    filtration_shift_check, filtration_shift_check_der, invariant_derivation_samples, invariant_form_samples,
    ord_samples, saito_ziegler_check, saito_ziegler_check_der, ShiftProfiles,
};
use primfilt::primitive::{d_of_g, g_k_matrix, g_matrix, generate_families, primitive_derivation, t_membership, FamilySet, PrimitiveDerivation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CRITERION_TYPES: [&str; 10] = ["A2", "A3", "B2", "B3", "I2(4)", "I2(6)", "H3", "A1xA1", "A1xB2", "A2xB2"];
const IRREDUCIBLE: [&str; 12] = ["A1", "A2", "A3", "A4", "B2", "B3", "D4", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "H3"];
const PRODUCTS: [&str; 3] = ["A1xA1", "A1xB2", "A2xB2"];
const SEED: u64 = 42;

fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

struct Entry {
    d: CoxeterDatum,
    pd: PrimitiveDerivation,
    fams: FamilySet,
}

/// Datum, D and Θ^(k), Ξ^(k) for k in [-2, 2], built once per type.
fn entry(name: &str) -> Arc<Entry> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Entry>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(name) {
        return e.clone();
    }
    let d = CoxeterDatum::from_type_string(name).unwrap();
    let pd = primitive_derivation(&d).unwrap();
    let fams = generate_families(&d, &pd, -2, 2).unwrap();
    let e = Arc::new(Entry { d, pd, fams });
    cache.lock().unwrap().insert(name.to_string(), e.clone());
    e
}

fn finish(name: &str, failures: &[String], summary: &str) {
    let ok = failures.is_empty();
    println!("{} {name}: {summary}", if ok { "PASS" } else { "FAIL" });
    for f in failures {
        println!("    {f}");
    }
    assert!(ok, "{name}: {}", failures.join("; "));
}

fn ratfunc(d: &CoxeterDatum, s: &str) -> RatFunc {
    parse_ratfunc(s, d.vars()).unwrap()
}

fn q(d: &CoxeterDatum) -> RatFunc {
    RatFunc::from_poly(d.q().clone())
}

fn constant_of(f: &RatFunc) -> Option<ExactScalar> {
    f.constant_value().filter(|c| !c.is_zero())
}

fn coefficient_matrix(forms: &[OneForm]) -> Vec<Vec<RatFunc>> {
    forms.iter().map(|w| w.coeffs().to_vec()).collect()
}

#[test]
fn a1_closed_forms() {
    let _g = serial();
    let start = Instant::now();
    let d = CoxeterDatum::from_type_string("A1").unwrap();
    let pd = primitive_derivation(&d).unwrap();
    let fams = generate_families(&d, &pd, -1, 1).unwrap();
    let mut failures = Vec::new();
    let expected_d = DerivationField::new(vec![ratfunc(&d, "1/x")]);
    if pd.total != expected_d {
        failures.push(format!("D = {:?}, expected (1/x)∂_x", pd.total.to_texts()));
    }
    let x3_over_3 = RatFunc::from_poly(parse_poly("x^3", d.vars()).unwrap().scale(&ExactScalar::ratio(1, 3)));
    let expected = [(-1, x3_over_3), (0, ratfunc(&d, "x")), (1, ratfunc(&d, "1/x"))];
    let mut constants = Vec::new();
    for (k, coeff) in expected {
        let theta = &fams.get(k).unwrap().forms[0];
        if theta.coeffs() != [coeff.clone()] {
            failures.push(format!("θ^({k}) = {:?}, expected {coeff}", theta.to_texts()));
        }
        // θ ∧ ... = f dx, so Q^{2k-1} f is the criterion constant.
        let c = constant_of(&theta.coeffs()[0].mul_linear_powers(&d.q_power_constant(2 * k - 1)));
        let m = MultiplicityMap::constant(&d, 2 * k - 1);
        let report = saito_ziegler_check(std::slice::from_ref(theta), &d, &m).unwrap();
        if report.constant != c || c.is_none() {
            failures.push(format!("k={k}: checker constant {:?}, direct {:?}", report.constant, c));
        }
        constants.push(c.map(|c| c.to_text()).unwrap_or_default());
    }
    if constants != ["1/3", "1", "1"] {
        failures.push(format!("constants {constants:?}, expected [1/3, 1, 1]"));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    finish("A1 closed forms", &failures, &format!("D=(1/x)∂_x, constants {constants:?}, {elapsed:.2?}"));
}

#[test]
fn saito_criterion_all_types() {
    let _g = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut table = Vec::new();
    let mut b2_k1 = None;
    for name in CRITERION_TYPES {
        let d = CoxeterDatum::from_type_string(name).unwrap();
        let pd = primitive_derivation(&d).unwrap();
        let fams = generate_families(&d, &pd, -1, 2).unwrap();
        for fam in fams.iter() {
            let k = fam.k;
            let omega = saito_ziegler_check(&fam.forms, &d, &MultiplicityMap::constant(&d, 2 * k - 1)).unwrap();
            let der = saito_ziegler_check_der(&fam.derivations, &d, &MultiplicityMap::constant(&d, 1 - 2 * k)).unwrap();
            for r in [&omega, &der] {
                match &r.constant {
                    Some(c) if r.passed() && !c.is_zero() => {}
                    _ => failures.push(format!("{name} k={k} {:?}: {:?}", r.side, r.product_scalar.to_text())),
                }
            }
            let show = |c: &Option<ExactScalar>| c.as_ref().map(|c| c.to_text()).unwrap_or_else(|| "-".into());
            table.push(format!("{name} k={k}: Ω {} D {}", show(&omega.constant), show(&der.constant)));
            if name == "B2" && k == 1 {
                b2_k1 = omega.constant.clone();
                // Independent 2×2 cofactor: (a d - b c)·Q^{2k-1}.
                let m = coefficient_matrix(&fam.forms);
                let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
                let by_hand = constant_of(&(&det * &q(&d)));
                if by_hand != omega.constant || by_hand != Some(ExactScalar::from_i64(-6)) {
                    failures.push(format!("B2 k=1 hand cofactor {by_hand:?} vs checker {:?}", omega.constant));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    for line in &table {
        println!("    {line}");
    }
    if elapsed >= Duration::from_secs(120) {
        failures.push(format!("took {elapsed:?}"));
    }
    let b2 = b2_k1.map(|c| c.to_text()).unwrap_or_default();
    finish(
        "Saito criterion",
        &failures,
        &format!("{} types, k=-1..2, both sides nonzero constants; B2 k=1 constant {b2} by hand; {elapsed:.1?}", CRITERION_TYPES.len()),
    );
}

#[test]
fn jacobian_identities() {
    let _g = serial();
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for name in IRREDUCIBLE.iter().chain(PRODUCTS.iter()) {
        let e = entry(name);
        let (d, pd) = (&e.d, &e.pd);
        let n = d.rank();
        let invariants: Vec<&MultiPoly> = d.invariants().collect();
        let m: Vec<Vec<RatFunc>> =
            invariants.iter().map(|p| (0..n).map(|i| RatFunc::from_poly(p.partial(i))).collect()).collect();
        let c = constant_of(&cofactor_det(&m).unwrap().try_div(&q(d)).unwrap());
        if c.is_none() || c != d.jacobian_constant() {
            failures.push(format!("{name}: det∂P/Q = {c:?}, library {:?}", d.jacobian_constant()));
        }
        let mut line = format!("{name}: c={}", c.map(|c| c.to_text()).unwrap_or_default());
        if d.factors().len() == 1 {
            let h = pd.total.coeffs();
            let m: Vec<Vec<RatFunc>> = (0..n).map(|j| (0..n).map(|i| h[j].partial(i)).collect()).collect();
            let q2 = q(d).pow(2).unwrap();
            let c2 = constant_of(&(&cofactor_det(&m).unwrap() * &q2));
            if c2.is_none() || c2 != pd.coefficient_jacobian_constant(d, 0).unwrap() {
                failures.push(format!("{name}: det∂h·Q² = {c2:?}"));
            }
            line += &format!(" c'={}", c2.map(|c| c.to_text()).unwrap_or_default());
        }
        summary.push(line);
    }
    finish("Jacobian identities", &failures, &summary.join(", "));
}

struct OrdOutcome {
    failures: Vec<String>,
    hyperplanes: usize,
    samples: usize,
}

/// `ord_α D(α) = 1` for every hyperplane, and `ord D(f) = ord f + 2` on
/// seeded samples, computed directly from pole orders.
fn ord_outcome(name: &str, e: &Entry) -> OrdOutcome {
    let (d, pd) = (&e.d, &e.pd);
    let mut failures = Vec::new();
    for h in d.hyperplanes() {
        let alpha = RatFunc::from_poly(h.alpha.to_poly(d.vars()));
        let o = apply_derivation(&pd.total, &alpha).ord_along(&h.alpha).unwrap();
        if o != 1 {
            failures.push(format!("{name}: ord D({}) = {o}", h.alpha.to_text(d.vars())));
        }
    }
    let samples = ord_samples(d, 8, SEED);
    let mut tested = 0;
    for f in &samples {
        let df = apply_derivation(&pd.total, f);
        let mut any = false;
        for h in d.hyperplanes() {
            let of = f.ord_along(&h.alpha).unwrap();
            if of == 0 {
                continue;
            }
            any = true;
            let odf = df.ord_along(&h.alpha).unwrap();
            if df.is_zero() || odf != of + 2 {
                failures.push(format!("{name}: ord f = {of}, ord D(f) = {odf} along {}", h.alpha.to_text(d.vars())));
            }
        }
        tested += any as usize;
    }
    if tested < 8 {
        failures.push(format!("{name}: only {tested} samples with a nonzero order"));
    }
    let check = primfilt::log_modules::ord_lemma_check(d, pd, &samples).unwrap();
    if !check.passed() {
        failures.push(format!("{name}: library ord lemma check failed"));
    }
    OrdOutcome { failures, hyperplanes: d.hyperplanes().len(), samples: tested }
}

#[test]
fn ord_lemma() {
    let _g = serial();
    let mut failures = Vec::new();
    let (mut planes, mut samples) = (0, 0);
    for name in IRREDUCIBLE {
        let o = ord_outcome(name, &entry(name));
        failures.extend(o.failures);
        planes += o.hyperplanes;
        samples += o.samples;
    }
    finish(
        "ord lemma",
        &failures,
        &format!("{} types, {planes} hyperplanes with ord D(α)=1, {samples} samples with ord D(f)=ord f+2", IRREDUCIBLE.len()),
    );
}

/// ∇_{D̂} carries each member to the next family and the negative-k
/// solves have trivial kernels.
fn nabla_chain_failures(name: &str, e: &Entry) -> Vec<String> {
    let mut failures = Vec::new();
    for k in -2..=1 {
        let (lo, hi) = (e.fams.get(k).unwrap(), e.fams.get(k + 1).unwrap());
        for (idx, member) in lo.members.iter().enumerate() {
            let dhat = &e.pd.per_factor[member.factor];
            if nabla_on_form(dhat, &lo.forms[idx]) != hi.forms[idx] {
                failures.push(format!("{name}: ∇θ_{}^({k}) ≠ θ_{}^({})", member.j, member.j, k + 1));
            }
            if nabla_on_derivation(dhat, &lo.derivations_direct[idx]) != hi.derivations_direct[idx] {
                failures.push(format!("{name}: ∇ξ_{}^({k}) ≠ ξ_{}^({})", member.j, member.j, k + 1));
            }
        }
    }
    for fam in e.fams.iter().filter(|f| f.k < 0) {
        if fam.kernel_dims.iter().chain(&fam.kernel_dims_direct).any(|k| *k != Some(0)) {
            failures.push(format!("{name} k={}: kernels {:?} {:?}", fam.k, fam.kernel_dims, fam.kernel_dims_direct));
        }
    }
    failures
}

#[test]
fn nabla_chain() {
    let _g = serial();
    let mut failures = Vec::new();
    for name in CRITERION_TYPES {
        failures.extend(nabla_chain_failures(name, &entry(name)));
    }
    finish("∇ chain", &failures, &format!("{} types, k=-2..2 on both sides, negative-k kernels 0", CRITERION_TYPES.len()));
}

/// Both directions of the shift for every multiplicity on both sides.
fn filtration_failures(name: &str, e: &Entry, multiplicities: &[MultiplicityMap]) -> (Vec<String>, usize) {
    let pool = e.fams.truncated(-1, 1).unwrap();
    let forms = invariant_form_samples(&e.d, &pool, 8, SEED);
    let fields = invariant_derivation_samples(&e.d, &pool, 8, SEED);
    let omega = ShiftProfiles::of_forms(&e.d, &e.pd, &forms).unwrap();
    let der = ShiftProfiles::of_derivations(&e.d, &e.pd, &fields).unwrap();
    let mut failures = Vec::new();
    let mut cases = 0;
    for m in multiplicities {
        for r in [omega.judge(&e.d, m).unwrap(), der.judge(&e.d, m).unwrap()] {
            if !r.passed() || r.cases.len() < 8 {
                failures.push(format!(
                    "{name} {} {:?}: forward {} backward {} over {} cases",
                    r.multiplicity,
                    r.side,
                    r.forward(),
                    r.backward(),
                    r.cases.len()
                ));
            }
            cases += r.cases.len();
        }
    }
    // The one-shot entry points agree with the shared profiles.
    let m = &multiplicities[0];
    let direct = [
        filtration_shift_check(&e.d, &e.pd, m, &forms).unwrap(),
        filtration_shift_check_der(&e.d, &e.pd, m, &fields).unwrap(),
    ];
    for (r, p) in direct.iter().zip([&omega, &der]) {
        let shared = p.judge(&e.d, m).unwrap();
        if r.passed() != shared.passed() || r.cases.len() != shared.cases.len() {
            failures.push(format!("{name} {}: one-shot check disagrees with shared profiles", r.multiplicity));
        }
    }
    (failures, cases)
}

fn constant_range(d: &CoxeterDatum) -> Vec<MultiplicityMap> {
    (-3..=3).map(|k| MultiplicityMap::constant(d, k)).collect()
}

#[test]
fn filtration_shift() {
    let _g = serial();
    let mut failures = Vec::new();
    let mut cases = 0;
    for name in CRITERION_TYPES {
        let e = entry(name);
        let mut ms = constant_range(&e.d);
        if name == "B2" || name == "B3" {
            ms.push(MultiplicityMap::parse(&e.d, "orbit:long=1,short=-1").unwrap());
        }
        let (f, c) = filtration_failures(name, &e, &ms);
        failures.extend(f);
        cases += c;
    }
    finish(
        "filtration shift",
        &failures,
        &format!("constant m=-3..3 on {} types plus orbit m on B2, B3; {cases} cases", CRITERION_TYPES.len()),
    );
}

/// The irreducible factor's object re-expressed in the product's variables.
fn embed_form(w: &OneForm, d: &CoxeterDatum, offset: usize) -> OneForm {
    OneForm::new(embed_coeffs(w.coeffs(), d, offset))
}

fn embed_field(x: &DerivationField, d: &CoxeterDatum, offset: usize) -> DerivationField {
    DerivationField::new(embed_coeffs(x.coeffs(), d, offset))
}

fn embed_coeffs(coeffs: &[RatFunc], d: &CoxeterDatum, offset: usize) -> Vec<RatFunc> {
    let mapping: Vec<usize> = (offset..offset + coeffs.len()).collect();
    let mut out = vec![RatFunc::zero(d.vars()); d.rank()];
    for (i, c) in coeffs.iter().enumerate() {
        out[offset + i] = c.embed(d.vars(), &mapping);
    }
    out
}

#[test]
fn reducible_products() {
    let _g = serial();
    let mut failures = Vec::new();
    for name in ["A1xA1", "A1xB2"] {
        let e = entry(name);
        let (d, pd) = (&e.d, &e.pd);
        let mut sum = DerivationField::zero(d.vars());
        for (i, factor) in d.factors().iter().enumerate() {
            let fd = CoxeterDatum::irreducible(factor.kind).unwrap();
            let fpd = primitive_derivation(&fd).unwrap();
            let ffams = generate_families(&fd, &fpd, -2, 2).unwrap();
            if pd.per_factor[i] != embed_field(&fpd.total, d, factor.offset) {
                failures.push(format!("{name}: D̂ of factor {i} is not the embedded factor D"));
            }
            sum = &sum + &pd.per_factor[i];
            for fam in e.fams.iter() {
                let ffam = ffams.get(fam.k).unwrap();
                let ours: Vec<&OneForm> =
                    fam.members.iter().zip(&fam.forms).filter(|(m, _)| m.factor == i).map(|(_, w)| w).collect();
                let theirs: Vec<OneForm> = ffam.forms.iter().map(|w| embed_form(w, d, factor.offset)).collect();
                if ours.len() != theirs.len() || ours.iter().zip(&theirs).any(|(a, b)| *a != b) {
                    failures.push(format!("{name} k={}: factor {i} members differ from the factor family", fam.k));
                }
            }
            let p = &factor.invariants;
            let top = factor.top_invariant();
            for (j, pj) in p.iter().enumerate() {
                let in_t = t_membership(pj, d, pd).unwrap();
                if in_t == (pj == top) {
                    failures.push(format!("{name}: P_{j} of factor {i} has T-membership {in_t}"));
                }
            }
        }
        if sum != pd.total {
            failures.push(format!("{name}: D is not the sum of the factor derivations"));
        }
        let tops: Vec<&MultiPoly> = d.factors().iter().map(|f| f.top_invariant()).collect();
        let diff = tops[1].clone() - tops[0].clone();
        if !t_membership(&diff, d, pd).unwrap() {
            failures.push(format!("{name}: difference of top invariants not in T"));
        }
        // The remaining criteria on the product itself.
        let fams = generate_families(d, pd, -1, 2).unwrap();
        for fam in fams.iter() {
            let k = fam.k;
            let a = saito_ziegler_check(&fam.forms, d, &MultiplicityMap::constant(d, 2 * k - 1)).unwrap();
            let b = saito_ziegler_check_der(&fam.derivations, d, &MultiplicityMap::constant(d, 1 - 2 * k)).unwrap();
            if !a.passed() || !b.passed() {
                failures.push(format!("{name} k={k}: criterion failed"));
            }
        }
        if d.jacobian_constant().is_none() {
            failures.push(format!("{name}: Jacobian is not a multiple of Q"));
        }
        for (i, _) in d.factors().iter().enumerate() {
            if pd.coefficient_jacobian_constant(d, i).unwrap().is_none() {
                failures.push(format!("{name}: factor {i} coefficient Jacobian"));
            }
        }
        failures.extend(ord_outcome(name, &e).failures);
        failures.extend(nabla_chain_failures(name, &e));
        failures.extend(filtration_failures(name, &e, &constant_range(d)).0);
    }
    finish(
        "reducible products",
        &failures,
        "A1xA1, A1xB2: D = Σ D̂_i, Θ^(k) = ∪ factor families, P_top differences in T, remaining criteria hold",
    );
}

#[test]
fn g_matrices() {
    let _g = serial();
    let mut failures = Vec::new();
    let mut dets = Vec::new();
    for name in CRITERION_TYPES {
        let e = entry(name);
        let (d, pd) = (&e.d, &e.pd);
        let g = g_matrix(d).unwrap();
        if !g.is_symmetric() || !g.entries_in_r(d) {
            failures.push(format!("{name}: G symmetric {} in R {}", g.is_symmetric(), g.entries_in_r(d)));
        }
        for k in -1..=1 {
            let gk = g_k_matrix(d, k, &e.fams.get(k).unwrap().forms, &e.fams.get(k + 1).unwrap().forms).unwrap();
            if !gk.entries_in_r(d) {
                failures.push(format!("{name}: G_{k} has entries outside R"));
            }
        }
        let dg = d_of_g(&g, pd);
        if !dg.entries_in_t(d, pd) {
            failures.push(format!("{name}: D[G] has entries outside T"));
        }
        let det = cofactor_det(&dg.entries).unwrap();
        match constant_of(&det) {
            Some(c) if Some(&c) == dg.det().unwrap().constant_value().as_ref() => dets.push(format!("{name} {}", c.to_text())),
            _ => failures.push(format!("{name}: det D[G] = {}", det.to_text())),
        }
    }
    finish("G-matrix", &failures, &format!("det D[G]: {}", dets.join(", ")));
}

#[test]
fn commuting_diagram() {
    let _g = serial();
    let mut failures = Vec::new();
    let mut checked = 0;
    for name in CRITERION_TYPES {
        let e = entry(name);
        let (d, pd) = (&e.d, &e.pd);
        for fam in e.fams.iter() {
            for (w, xi) in fam.forms.iter().zip(&fam.derivations_direct) {
                checked += 1;
                if &istar_map(w, d.metric()).unwrap() != xi {
                    failures.push(format!("{name} k={}: I*θ differs from the direct ξ", fam.k));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let poles = d.hyperplane_forms();
        for s in 0..16 {
            let w = random_form(d.vars(), &poles, &mut rng);
            let via_forms = istar_map(&nabla_on_form(&pd.total, &w), d.metric()).unwrap();
            let via_fields = nabla_on_derivation(&pd.total, &istar_map(&w, d.metric()).unwrap());
            checked += 1;
            if via_forms != via_fields {
                failures.push(format!("{name}: random form {s} gives different paths"));
            }
        }
    }
    finish("commuting diagram", &failures, &format!("{checked} forms, both paths agree"));
}

#[test]
fn negative_control() {
    let _g = serial();
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let bad = dir.path().join("bad.json");
    let certs = dir.path().join("certs.json");
    let path = |p: &std::path::Path| p.to_str().unwrap().to_string();
    let mut failures = Vec::new();
    let code = certify::run(["primfilt", "generate", "--type", "B2", "--k-min", "0", "--k-max", "1", "--out", &path(&good)]);
    assert_eq!(code, 0);
    let mut doc: FamilyDocument = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    let fam = doc.families.iter_mut().find(|f| f.k == 1).unwrap();
    for c in fam.forms[0].iter_mut() {
        *c = format!("({c})/(x)");
    }
    std::fs::write(&bad, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let verify = |fams: &std::path::Path| {
        certify::run(["primfilt", "verify", "--families", &path(fams), "--samples", "2", "--out", &path(&certs)])
    };
    let clean = verify(&good);
    if clean != 0 {
        failures.push(format!("unperturbed fixture exited {clean}"));
    }
    let code = verify(&bad);
    if code != 1 {
        failures.push(format!("perturbed fixture exited {code}"));
    }
    let file = CertificateFile::from_json(&std::fs::read_to_string(&certs).unwrap()).unwrap();
    let named = file
        .failures()
        .find(|c| c.kind() == "membership" && c.detail.contains("hyperplane x") && c.detail.contains("order 2"));
    match named {
        Some(c) => println!("    {}: {}", c.id, c.detail),
        None => failures.push("no failing membership names hyperplane x and order 2".into()),
    }
    finish("negative control", &failures, &format!("verify exit {code} on θ_1^(1)/x"));
}
