//! Job specifications and task execution. A job names one algebra and a list
//! of analyses; every task contributes one report section, in order, and a
//! failing task is reported without aborting the rest.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use gwa_core::error::{MathError, MathResult};
use gwa_core::factored::FactoredElement;
use gwa_core::gwa::GwaSpec;
use gwa_core::json::{
    matrix_from_json, matrix_to_json, poly_from_json, poly_to_json, FactoredJson, GwaSpecJson,
    WeightDataJson,
};
use gwa_core::oracle::{relation_counterexample_rank1, relation_counterexample_rankn};
use gwa_core::polyring::{Poly, Scalar};
use gwa_core::rank1::{MaximalKind, Rank1Module, SimplicityWitness};
use gwa_core::rankn::{construct_simple_vn, construct_sl2_family, MatrixModule};
use gwa_core::sampling::Rng;

use crate::diagram;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JobSpec {
    pub gwa: GwaSpecJson,
    pub tasks: Vec<Task>,
}

/// A divisor can be given densely (coefficient strings) or in factored form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DivisorJson {
    Dense(Vec<String>),
    Factored(FactoredJson),
}

impl DivisorJson {
    /// Resolve against the factors of `a`: dense input is divided out by the
    /// known irreducibles, so only genuine divisors are accepted.
    pub fn resolve(&self, spec: &GwaSpec) -> MathResult<FactoredElement> {
        match self {
            DivisorJson::Factored(raw) => {
                let element = raw.to_element(spec.field())?;
                if !element.divides(spec.a()) {
                    return Err(MathError::NotADivisor(element.to_string()));
                }
                Ok(element)
            }
            DivisorJson::Dense(coeffs) => {
                let dense = poly_from_json(spec.field(), coeffs)?;
                if dense.is_zero() {
                    return Err(MathError::ZeroPolynomial);
                }
                let mut remaining = dense;
                let mut factors: Vec<(Poly, u32)> = Vec::new();
                for (factor, mult) in spec.a().factors() {
                    let mut taken = 0u32;
                    while taken < *mult {
                        match remaining.exact_div(factor) {
                            Some(next) => {
                                remaining = next;
                                taken += 1;
                            }
                            None => break,
                        }
                    }
                    if taken > 0 {
                        factors.push((factor.clone(), taken));
                    }
                }
                if !remaining.is_constant() {
                    return Err(MathError::NotADivisor(remaining.to_string()));
                }
                FactoredElement::new(remaining.coeff(0), factors)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    AnalyzeVp {
        p: DivisorJson,
    },
    ClassifyAllDivisors {},
    Rankn {
        #[serde(rename = "P")]
        p: Vec<Vec<Vec<String>>>,
    },
    ConstructVn {
        a0: DivisorJson,
        n: usize,
    },
    Sl2 {
        b: String,
        n: usize,
    },
    Hom {
        p: DivisorJson,
        #[serde(alias = "p'")]
        p_prime: DivisorJson,
        max_deg: Option<usize>,
    },
    Diagram {
        p: DivisorJson,
    },
}

pub struct RunOptions {
    pub seed: u64,
    pub max_divisor_degree: u64,
    pub ansi: bool,
    pub diagrams_dir: Option<std::path::PathBuf>,
}

pub struct RunOutcome {
    pub report: Value,
    pub failed_tasks: usize,
}

pub fn run(job: &JobSpec, options: &RunOptions) -> MathResult<RunOutcome> {
    let spec = job.gwa.to_spec()?;
    let mut sections = Vec::with_capacity(job.tasks.len());
    let mut failed = 0usize;
    for (index, task) in job.tasks.iter().enumerate() {
        let task_echo = serde_json::to_value(task).expect("tasks serialize");
        let section = match run_task(&spec, task, index, options) {
            Ok(result) => json!({
                "task": task_echo,
                "status": "ok",
                "result": result,
            }),
            Err(err) => {
                failed += 1;
                json!({
                    "task": task_echo,
                    "status": "error",
                    "error": err.to_string(),
                })
            }
        };
        sections.push(section);
    }
    let report = json!({
        "gwa": serde_json::to_value(GwaSpecJson::from_spec(&spec)).unwrap(),
        "seed": options.seed,
        "max_divisor_degree": options.max_divisor_degree,
        "asserted_factors": spec.has_asserted_factors(),
        "tasks": sections,
    });
    Ok(RunOutcome {
        report,
        failed_tasks: failed,
    })
}

fn run_task(
    spec: &GwaSpec,
    task: &Task,
    index: usize,
    options: &RunOptions,
) -> MathResult<Value> {
    match task {
        Task::AnalyzeVp { p } => analyze_vp(spec, &p.resolve(spec)?, options),
        Task::ClassifyAllDivisors {} => classify_all_divisors(spec, options),
        Task::Rankn { p } => {
            let matrix = matrix_from_json(spec.field(), p)?;
            let module = MatrixModule::new(spec, matrix)?;
            let mut rng = Rng::new(options.seed);
            Ok(json!({
                "rank": module.size(),
                "invariant_factors": module.invariant_factors().iter().map(poly_to_json).collect::<Vec<_>>(),
                "Q": matrix_to_json(module.q_matrix()),
                "compatibility": module.compatibility_holds(),
                "snf_duality": module.snf_duality_holds(),
                "oracle": oracle_json_rankn(&module, &mut rng, options.seed, 10),
            }))
        }
        Task::ConstructVn { a0, n } => {
            let selection = a0.resolve(spec)?;
            if !selection.is_squarefree() {
                return Err(MathError::Invalid(
                    "a0 must be a squarefree product of factors of a".into(),
                ));
            }
            let factors: Vec<Poly> = selection.factors().iter().map(|(f, _)| f.clone()).collect();
            let vn = construct_simple_vn(spec, &factors, *n)?;
            let mut rng = Rng::new(options.seed);
            Ok(json!({
                "n": n,
                "a0": FactoredJson::from_element(&vn.a0),
                "P": matrix_to_json(vn.module.p_matrix()),
                "Q": matrix_to_json(vn.module.q_matrix()),
                "snf": vn.module.invariant_factors().iter().map(poly_to_json).collect::<Vec<_>>(),
                "checks": {
                    "xn_diagonal": vn.certificate.xn_diagonal,
                    "snf_shape": vn.certificate.snf_shape,
                    "snf_duality": vn.certificate.snf_duality,
                    "displayed_q": vn.certificate.displayed_q,
                    "subalgebra_minimality": vn.certificate.subalgebra_minimality,
                    "subalgebra_simple": vn.certificate.subalgebra_simple,
                },
                "certified": vn.certificate.certified(),
                "note": "simplicity is certified through the construction ingredients above",
                "oracle": oracle_json_rankn(&vn.module, &mut rng, options.seed, 10),
            }))
        }
        Task::Sl2 { b, n } => {
            let b = Scalar::parse(gwa_core::polyring::FieldTag::Q, b)?;
            let family = construct_sl2_family(&b, *n)?;
            let identities = family.verify_identities(6)?;
            let mut rng = Rng::new(options.seed);
            Ok(json!({
                "b": b.to_string(),
                "n": n,
                "chi": family.casimir_scalar.to_string(),
                "identities": {
                    "bracket_he": identities.bracket_he,
                    "bracket_hf": identities.bracket_hf,
                    "bracket_ef": identities.bracket_ef,
                    "casimir": identities.casimir,
                },
                "all_hold": identities.all_hold(),
                "P": matrix_to_json(family.module.p_matrix()),
                "Q": matrix_to_json(family.module.q_matrix()),
                "oracle": oracle_json_rankn(&family.module, &mut rng, options.seed, 10),
            }))
        }
        Task::Hom { p, p_prime, max_deg } => {
            let src = Rank1Module::make_vp(spec, &p.resolve(spec)?)?;
            let dst = Rank1Module::make_vp(spec, &p_prime.resolve(spec)?)?;
            let bound = max_deg.unwrap_or_else(|| src.suggested_hom_degree());
            let hom = src.hom_basis(&dst, bound)?;
            Ok(json!({
                "max_deg": bound,
                "basis": hom.basis.iter().map(poly_to_json).collect::<Vec<_>>(),
                "iso": hom.iso,
            }))
        }
        Task::Diagram { p } => {
            let module = Rank1Module::make_vp(spec, &p.resolve(spec)?)?;
            let text = diagram::render_module_diagram(&module, options.ansi)?;
            let socle_text = diagram::render_socle_diagram(&module, options.ansi)?;
            if let Some(dir) = &options.diagrams_dir {
                std::fs::create_dir_all(dir)
                    .map_err(|e| MathError::Invalid(format!("cannot create {dir:?}: {e}")))?;
                let path = dir.join(format!("task_{index}.txt"));
                let mut contents = text.clone();
                if let Some(socle) = &socle_text {
                    contents.push('\n');
                    contents.push_str(socle);
                }
                std::fs::write(&path, contents)
                    .map_err(|e| MathError::Invalid(format!("cannot write {path:?}: {e}")))?;
            }
            Ok(json!({
                "text": text,
                "socle_text": socle_text,
            }))
        }
    }
}

fn oracle_json_rank1(m: &Rank1Module, rng: &mut Rng, seed: u64, samples: usize) -> Value {
    let counterexample = relation_counterexample_rank1(m, rng, samples);
    json!({
        "seed": seed,
        "samples": samples,
        "relation_suite": counterexample.is_none(),
        "counterexample": counterexample,
    })
}

fn oracle_json_rankn(m: &MatrixModule, rng: &mut Rng, seed: u64, samples: usize) -> Value {
    let counterexample = relation_counterexample_rankn(m, rng, samples);
    json!({
        "seed": seed,
        "samples": samples,
        "relation_suite": counterexample.is_none(),
        "counterexample": counterexample,
    })
}

fn witness_json(witness: &Option<SimplicityWitness>) -> Value {
    match witness {
        None => Value::Null,
        Some(SimplicityWitness::FiniteOrbit { member }) => json!({
            "finite_orbit": poly_to_json(member),
        }),
        Some(SimplicityWitness::OmegaPair { z, w, shift }) => json!({
            "pair": {"z": poly_to_json(z), "w": poly_to_json(w), "shift": shift},
        }),
    }
}

fn analyze_vp(spec: &GwaSpec, selection: &FactoredElement, options: &RunOptions) -> MathResult<Value> {
    let m = Rank1Module::make_vp(spec, selection)?;
    let verdict = m.is_simple();
    let omega: Vec<Value> = m
        .omega()
        .iter()
        .map(|pair| {
            json!({
                "z": poly_to_json(&pair.z),
                "w": poly_to_json(&pair.w),
                "shift": pair.shift,
                "multiplicity": pair.multiplicity,
            })
        })
        .collect();
    let maxima = m.maximal_submodules();
    let maximal: Vec<Value> = maxima
        .certs
        .iter()
        .map(|cert| {
            json!({
                "kind": match cert.kind {
                    MaximalKind::BasicChain => "basic",
                    MaximalKind::FullFiniteOrbit => "full-finite-orbit",
                },
                "generator": FactoredJson::from_element(&cert.cert.generator),
                "induced_p": FactoredJson::from_element(&cert.cert.induced_p),
            })
        })
        .collect();
    let (length, series, socle) = match m.composition_series() {
        Ok(series) => {
            let socle = series.socle_parameter().clone();
            let steps: Vec<Value> = series
                .steps
                .iter()
                .map(|step| {
                    json!({
                        "p": FactoredJson::from_element(&step.parameter),
                        "generator": FactoredJson::from_element(&step.absolute_generator),
                        "quotient": step.quotient.as_ref().map(WeightDataJson::from_data),
                    })
                })
                .collect();
            (
                json!(series.length()),
                Value::Array(steps),
                serde_json::to_value(FactoredJson::from_element(&socle)).unwrap(),
            )
        }
        Err(MathError::InfiniteLength(_)) => (json!("infinite"), Value::Null, Value::Null),
        Err(err) => return Err(err),
    };
    let mut rng = Rng::new(options.seed);
    Ok(json!({
        "p": FactoredJson::from_element(m.p()),
        "q": FactoredJson::from_element(m.q()),
        "simple": verdict.simple,
        "witness": witness_json(&verdict.witness),
        "omega": omega,
        "length": length,
        "series": series,
        "socle": socle,
        "maximal": maximal,
        "maximal_unlisted_family": maxima.has_unlisted_finite_orbit_family,
        "oracle": oracle_json_rank1(&m, &mut rng, options.seed, 20),
    }))
}

fn classify_all_divisors(spec: &GwaSpec, options: &RunOptions) -> MathResult<Value> {
    let degree = spec.a().irreducible_count();
    if degree > options.max_divisor_degree {
        return Err(MathError::Invalid(format!(
            "a has {degree} irreducible factors, above the enumeration guard {}",
            options.max_divisor_degree
        )));
    }
    let mut divisors = vec![FactoredElement::one(spec.field())];
    for (factor, mult) in spec.a().factors() {
        let mut next = Vec::with_capacity(divisors.len() * (*mult as usize + 1));
        for existing in &divisors {
            for take in 0..=*mult {
                let mut d = existing.clone();
                if take > 0 {
                    d = d.mul(
                        &FactoredElement::new(
                            Scalar::one(spec.field()),
                            vec![(factor.clone(), take)],
                        )
                        .expect("monic factor"),
                    );
                }
                next.push(d);
            }
        }
        divisors = next;
    }
    let mut rows = Vec::with_capacity(divisors.len());
    for selection in divisors {
        let m = Rank1Module::make_vp(spec, &selection)?;
        let verdict = m.is_simple();
        let (length, socle) = match m.composition_series() {
            Ok(series) => (
                json!(series.length()),
                serde_json::to_value(FactoredJson::from_element(series.socle_parameter()))
                    .unwrap(),
            ),
            Err(MathError::InfiniteLength(_)) => (json!("infinite"), Value::Null),
            Err(err) => return Err(err),
        };
        rows.push(json!({
            "p": FactoredJson::from_element(&selection),
            "simple": verdict.simple,
            "witness": witness_json(&verdict.witness),
            "length": length,
            "socle": socle,
        }));
    }
    Ok(json!({ "divisors": rows }))
}
