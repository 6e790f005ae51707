use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffgeo::random_form;
use crate::log_modules::{invariant_derivation_samples, invariant_form_samples, ord_samples, Side};
use crate::primitive::{generate_families, BasisFamily, FamilySet, Member};

use super::check::{multiplicity_map, parse_derivation, parse_form};
use super::{evaluate, Certificate, CertificateFile, CertifyError, Check, Context, FamilyInputs, K_BOUND, SCHEMA, TOOL_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub types: Vec<String>,
    /// Family documents written by `generate`, used instead of generating.
    pub families: Vec<PathBuf>,
    pub k_min: i64,
    pub k_max: i64,
    /// Multiplicities for the filtration checks; empty means const:-3..3.
    pub multiplicities: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            types: Vec::new(),
            families: Vec::new(),
            k_min: -1,
            k_max: 2,
            multiplicities: Vec::new(),
            samples: 8,
            seed: 42,
            jobs: 1,
            out: None,
            timing: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), CertifyError> {
        let bad = |m: String| Err(CertifyError::Usage(m));
        if self.types.is_empty() && self.families.is_empty() {
            return bad("nothing to verify: give --type or --families".into());
        }
        if self.k_min > self.k_max {
            return bad(format!("k range [{}, {}] is empty", self.k_min, self.k_max));
        }
        if self.k_min < -K_BOUND || self.k_max > K_BOUND {
            return bad(format!("k range must lie within [{}, {}]", -K_BOUND, K_BOUND));
        }
        if self.jobs == 0 || self.samples == 0 {
            return bad("--jobs and --samples must be positive".into());
        }
        Ok(())
    }

    fn filtration_multiplicities(&self) -> Vec<String> {
        if self.multiplicities.is_empty() {
            (-3..=3).map(|m| format!("const:{m}")).collect()
        } else {
            self.multiplicities.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorSummary {
    pub kind: String,
    pub degrees: Vec<u32>,
    pub exponents: Vec<u32>,
    pub coxeter_number: u32,
    pub invariants: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneSummary {
    pub alpha: String,
    pub orbit: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatumSummary {
    pub name: String,
    pub rank: usize,
    pub variables: Vec<String>,
    pub factors: Vec<FactorSummary>,
    pub hyperplanes: Vec<HyperplaneSummary>,
    pub q: String,
    pub normalization: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub k: i64,
    pub members: Vec<Member>,
    pub degrees: Vec<i64>,
    pub forms: Vec<Vec<String>>,
    pub derivations: Vec<Vec<String>>,
    pub derivations_direct: Vec<Vec<String>>,
    pub kernel_dims: Vec<Option<usize>>,
    pub kernel_dims_direct: Vec<Option<usize>>,
}

/// What `generate` writes: the datum, D, and every Θ^(k), Ξ^(k) in range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub schema: u32,
    pub tool_version: String,
    pub arrangement: String,
    pub datum: DatumSummary,
    pub primitive_derivation: Vec<String>,
    pub k_min: i64,
    pub k_max: i64,
    pub families: Vec<FamilyRecord>,
}

fn texts_of<T, F: Fn(&T) -> Vec<String>>(items: &[T], f: F) -> Vec<Vec<String>> {
    items.iter().map(f).collect()
}

fn summary(ctx: &Context) -> DatumSummary {
    let d = &ctx.datum;
    DatumSummary {
        name: d.name().to_string(),
        rank: d.rank(),
        variables: d.vars().names().to_vec(),
        factors: d
            .factors()
            .iter()
            .map(|f| FactorSummary {
                kind: f.kind.to_string(),
                degrees: f.degrees.clone(),
                exponents: f.exponents.clone(),
                coxeter_number: f.coxeter_number,
                invariants: f.invariants.iter().map(|p| p.to_text()).collect(),
            })
            .collect(),
        hyperplanes: d
            .hyperplanes()
            .iter()
            .map(|h| HyperplaneSummary { alpha: h.alpha.to_text(d.vars()), orbit: d.orbit_names(h.orbit_id).join("/") })
            .collect(),
        q: d.q().to_text(),
        normalization: d.normalization_note(),
    }
}

fn record(f: &BasisFamily) -> FamilyRecord {
    FamilyRecord {
        k: f.k,
        members: f.members.clone(),
        degrees: f.degrees.clone(),
        forms: texts_of(&f.forms, |w| w.to_texts()),
        derivations: texts_of(&f.derivations, |x| x.to_texts()),
        derivations_direct: texts_of(&f.derivations_direct, |x| x.to_texts()),
        kernel_dims: f.kernel_dims.clone(),
        kernel_dims_direct: f.kernel_dims_direct.clone(),
    }
}

pub fn family_document(arrangement: &str, k_min: i64, k_max: i64) -> Result<FamilyDocument, CertifyError> {
    if k_min > k_max || k_min < -K_BOUND || k_max > K_BOUND {
        return Err(CertifyError::Usage(format!("k range [{k_min}, {k_max}] must be nonempty and within ±{K_BOUND}")));
    }
    let ctx = Context::new(arrangement)?;
    let fams = generate_families(&ctx.datum, &ctx.pd, k_min, k_max).map_err(|e| CertifyError::Failure(format!("{arrangement}: {e}")))?;
    Ok(FamilyDocument {
        schema: SCHEMA,
        tool_version: TOOL_VERSION.to_string(),
        arrangement: ctx.arrangement.clone(),
        datum: summary(&ctx),
        primitive_derivation: ctx.pd.total.to_texts(),
        k_min,
        k_max,
        families: fams.iter().map(record).collect(),
    })
}

/// Parses a family document back into the context and families it was
/// generated from. The recorded normalizations must match this build.
pub fn load_family_document(text: &str) -> Result<(Context, FamilySet), CertifyError> {
    let doc: FamilyDocument = serde_json::from_str(text).map_err(|e| CertifyError::Input(e.to_string()))?;
    if doc.schema != SCHEMA {
        return Err(CertifyError::Input(format!("unsupported schema {}", doc.schema)));
    }
    let ctx = Context::new(&doc.arrangement)?;
    if doc.datum != summary(&ctx) {
        return Err(CertifyError::Input(format!("datum recorded for {} does not match this build", doc.arrangement)));
    }
    let d = &ctx.datum;
    let mut list = Vec::new();
    for r in &doc.families {
        let forms = r.forms.iter().map(|t| parse_form(d, t)).collect::<Result<_, _>>()?;
        let derivations = r.derivations.iter().map(|t| parse_derivation(d, t)).collect::<Result<_, _>>()?;
        let derivations_direct = r.derivations_direct.iter().map(|t| parse_derivation(d, t)).collect::<Result<_, _>>()?;
        list.push(BasisFamily {
            k: r.k,
            members: r.members.clone(),
            forms,
            derivations,
            derivations_direct,
            degrees: r.degrees.clone(),
            kernel_dims: r.kernel_dims.clone(),
            kernel_dims_direct: r.kernel_dims_direct.clone(),
        });
    }
    let fams = FamilySet::from_families(list).ok_or_else(|| CertifyError::Input("families must cover one unbroken k range".into()))?;
    Ok((ctx, fams))
}

struct Task {
    ctx: usize,
    id: String,
    check: Check,
}

/// The checks for one arrangement, in a fixed order.
fn plan(ctx: &Context, fams: &FamilySet, config: &SuiteConfig, ci: usize) -> Result<Vec<Task>, CertifyError> {
    let d = &ctx.datum;
    let arr = &ctx.arrangement;
    let mut tasks = Vec::new();
    let mut push = |id: String, check: Check| tasks.push(Task { ctx: ci, id: format!("{arr}/{id}"), check });

    push("jacobian".into(), Check::Jacobian { invariants: d.invariants().map(|p| p.to_text()).collect() });

    for (i, f) in d.factors().iter().enumerate() {
        for (j, p) in f.invariants.iter().enumerate() {
            let top = j + 1 == f.rank;
            push(format!("t-membership/P{}[{i}]", j + 1), Check::TMembership { polynomial: p.to_text(), expected: !top });
        }
    }
    for i in 0..d.factors().len() {
        for j in i + 1..d.factors().len() {
            let diff = d.factors()[j].top_invariant() - d.factors()[i].top_invariant();
            push(format!("t-membership/P[{j}]-P[{i}]"), Check::TMembership { polynomial: diff.to_text(), expected: true });
        }
    }

    for f in fams.iter() {
        let k = f.k;
        let forms = texts_of(&f.forms, |w| w.to_texts());
        let ders = texts_of(&f.derivations, |x| x.to_texts());
        push(
            format!("family/k={k}"),
            Check::Family(FamilyInputs {
                k,
                members: f.members.clone(),
                degrees: f.degrees.clone(),
                forms: forms.clone(),
                next: fams.get(k + 1).filter(|_| k < fams.k_max).map(|n| texts_of(&n.forms, |w| w.to_texts())),
                kernel_dims: f.kernel_dims.clone(),
                kernel_dims_direct: f.kernel_dims_direct.clone(),
            }),
        );
        push(format!("basis-criterion/omega/k={k}"), Check::BasisCriterion { side: Side::Omega, k, elements: forms.clone() });
        push(format!("basis-criterion/der/k={k}"), Check::BasisCriterion { side: Side::Der, k, elements: ders.clone() });
        for (side, list, name, tag) in [(Side::Omega, &forms, "theta", "omega"), (Side::Der, &ders, "xi", "der")] {
            let m = format!("const:{}", super::check::criterion_multiplicity(side, k));
            for (j, element) in list.iter().enumerate() {
                let label = format!("{name}_{}^({k})", j + 1);
                push(
                    format!("membership/{tag}/{label}"),
                    Check::Membership { side, label, multiplicity: m.clone(), element: element.clone() },
                );
            }
        }
        push(
            format!("commuting-diagram/k={k}"),
            Check::CommutingDiagram { k: Some(k), forms, derivations: texts_of(&f.derivations_direct, |x| x.to_texts()) },
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let random: Vec<Vec<String>> =
        (0..2 * config.samples).map(|_| random_form(d.vars(), &d.hyperplane_forms(), &mut rng).to_texts()).collect();
    push("commuting-diagram/random".into(), Check::CommutingDiagram { k: None, forms: random, derivations: Vec::new() });

    let ord: Vec<String> = ord_samples(d, config.samples, config.seed).iter().map(|f| f.to_text()).collect();
    push("ord-lemma".into(), Check::OrdLemma { samples: ord });

    // Samples come from families with k ≤ 1: the higher ones cost far more
    // and add nothing to a pointwise equivalence.
    let pool = fams.truncated(fams.k_min, fams.k_max.min(1)).unwrap_or_else(|| fams.clone());
    let mults = config.filtration_multiplicities();
    for m in &mults {
        multiplicity_map(d, m)?;
    }
    let forms = invariant_form_samples(d, &pool, config.samples, config.seed);
    push(
        "filtration-shift/omega".into(),
        Check::FiltrationShift { side: Side::Omega, multiplicities: mults.clone(), samples: texts_of(&forms, |w| w.to_texts()) },
    );
    let ders = invariant_derivation_samples(d, &pool, config.samples, config.seed);
    push(
        "filtration-shift/der".into(),
        Check::FiltrationShift { side: Side::Der, multiplicities: mults, samples: texts_of(&ders, |x| x.to_texts()) },
    );

    let none = Vec::new;
    push("g-matrix/G".into(), Check::GMatrix { matrix: "G".into(), k: None, lower: none(), upper: none() });
    push("g-matrix/D[G]".into(), Check::GMatrix { matrix: "D[G]".into(), k: None, lower: none(), upper: none() });
    for k in -1..=1 {
        if let (Some(lo), Some(up)) = (fams.get(k), fams.get(k + 1)) {
            if k >= fams.k_min && k < fams.k_max {
                push(
                    format!("g-matrix/G_{k}"),
                    Check::GMatrix {
                        matrix: "G_k".into(),
                        k: Some(k),
                        lower: texts_of(&lo.forms, |w| w.to_texts()),
                        upper: texts_of(&up.forms, |w| w.to_texts()),
                    },
                );
            }
        }
    }
    Ok(tasks)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CertifyError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CertifyError::Failure(e.to_string()))
}

fn timed(ctx: &Context, id: &str, check: &Check, seed: u64, timing: bool) -> Result<Certificate, CertifyError> {
    let start = Instant::now();
    let mut cert = evaluate(ctx, id, check, seed)?;
    if timing {
        cert.elapsed_ms = Some((start.elapsed().as_secs_f64() * 1e3).round());
    }
    Ok(cert)
}

/// Generates (or loads) the families of every arrangement, then runs all
/// checks on a pool of `jobs` workers. Output order is the plan order.
pub fn run_suite(config: &SuiteConfig) -> Result<CertificateFile, CertifyError> {
    config.validate()?;
    let workers = pool(config.jobs)?;
    let mut sources: Vec<(Context, FamilySet)> = Vec::new();
    for path in &config.families {
        let text = std::fs::read_to_string(path).map_err(|e| CertifyError::Usage(format!("{}: {e}", path.display())))?;
        sources.push(load_family_document(&text)?);
    }
    let generated: Vec<Result<(Context, FamilySet), CertifyError>> = workers.install(|| {
        config
            .types
            .par_iter()
            .map(|t| {
                let ctx = Context::new(t)?;
                let fams = generate_families(&ctx.datum, &ctx.pd, config.k_min, config.k_max)
                    .map_err(|e| CertifyError::Failure(format!("{t}: {e}")))?;
                Ok((ctx, fams))
            })
            .collect()
    });
    for g in generated {
        sources.push(g?);
    }
    let mut tasks = Vec::new();
    for (i, (ctx, fams)) in sources.iter().enumerate() {
        tasks.extend(plan(ctx, fams, config, i)?);
    }
    let certificates: Vec<Certificate> = workers.install(|| {
        tasks.par_iter().map(|t| timed(&sources[t.ctx].0, &t.id, &t.check, config.seed, config.timing)).collect::<Result<_, _>>()
    })?;
    Ok(CertificateFile {
        schema: SCHEMA,
        tool_version: TOOL_VERSION.to_string(),
        seed: config.seed,
        arrangements: sources.iter().map(|(c, _)| c.arrangement.clone()).collect(),
        certificates,
    })
}

/// Re-evaluates every certificate from its recorded inputs. Returns the ids
/// whose recomputed record differs from the stored one.
pub fn recheck_file(file: &CertificateFile, jobs: usize) -> Result<Vec<String>, CertifyError> {
    let mut contexts: Vec<Context> = Vec::new();
    for a in &file.arrangements {
        contexts.push(Context::new(a)?);
    }
    let find = |a: &str| contexts.iter().find(|c| c.arrangement == a).ok_or_else(|| CertifyError::Input(format!("unlisted arrangement {a}")));
    let workers = pool(jobs)?;
    let results: Vec<Result<Option<String>, CertifyError>> = workers.install(|| {
        file.certificates
            .par_iter()
            .map(|c| {
                let mut again = evaluate(find(&c.arrangement)?, &c.id, &c.check, c.seed)?;
                again.elapsed_ms = c.elapsed_ms;
                Ok((&again != c).then(|| c.id.clone()))
            })
            .collect()
    });
    results.into_iter().filter_map(Result::transpose).collect()
}
