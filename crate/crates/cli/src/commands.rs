//! Subcommand bodies. Each returns the report and the exit code; the binary
//! only handles argument parsing and printing.

use std::time::Instant;

use formality_core::exactlin::Matrix;
use formality_core::formality::{run_pipeline, PipelineOptions, Verdict};
use formality_core::minimal_model::{self, verify_minimal, GeneratorRole, MinimalModel};
use formality_core::operad::{grading_action_little_disks, operadic_minimal_model, operadic_pipeline, StepRole};
use formality_core::rational::{format_rational, pow};
use formality_core::transfer::triple_massey;
use formality_core::unipotent::twist_action;
use formality_core::Rational;
use serde_json::{json, Value};

use crate::doc::{load, CliError, DocumentOut, GeneratorOut, Input, Kind, Overrides, ParametersOut};
use crate::report::{self, rat};

pub const EXIT_FORMAL: i32 = 0;
pub const EXIT_NONFORMAL: i32 = 10;
pub const EXIT_INCONCLUSIVE: i32 = 20;
pub const EXIT_ERROR: i32 = 1;

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::FormalCertified => EXIT_FORMAL,
        Verdict::NonformalCertified => EXIT_NONFORMAL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Cdga => "cdga",
        Kind::Operad => "operad",
    }
}

fn sigma_source(ov: &Overrides, has_sigma: bool) -> &'static str {
    if ov.search || !has_sigma {
        "search"
    } else if ov.sigma_text.is_some() {
        "sigma_file"
    } else {
        "input"
    }
}

pub fn analyze(text: &str, ov: &Overrides, timing: bool) -> Result<(Value, i32), CliError> {
    let start = Instant::now();
    let loaded = load(text, ov)?;
    let mut out = report::header("analyze", text, kind_name(loaded.kind), loaded.name.as_deref());
    let verdict = match &loaded.input {
        Input::Cdga(a) => {
            let cert = run_pipeline(&a.algebra, &a.q, a.truncation, a.sigma.as_ref(), &PipelineOptions::default())?;
            out.insert("sigma_source".into(), json!(sigma_source(ov, a.sigma.is_some())));
            out.insert("certificate".into(), report::cdga_certificate(&a.algebra, &cert));
            cert.verdict
        }
        Input::Operad(p) => {
            let cert = operadic_pipeline(&p.operad, &p.q, p.sigma.as_ref(), None)?;
            out.insert("sigma_source".into(), json!(sigma_source(ov, p.sigma.is_some())));
            out.insert("certificate".into(), report::operad_certificate(&cert, p.operad.convention().name()));
            cert.verdict
        }
    };
    out.insert("verdict".into(), json!(verdict.code()));
    if timing {
        out.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
    }
    Ok((Value::Object(out), exit_code(verdict)))
}

fn cdga_model(a: &std::sync::Arc<formality_core::gca::Cdga>, truncation: u32) -> Result<MinimalModel, CliError> {
    if verify_minimal(a) {
        Ok(MinimalModel::identity_of(a.clone()))
    } else {
        Ok(minimal_model::construct(a, truncation)?)
    }
}

fn comment_block(lines: &[String]) -> String {
    lines.iter().map(|l| format!("# {l}\n")).collect()
}

/// Model listing as a loadable document, with the construction log and the
/// map to the input as comments.
pub fn minimal_model_listing(text: &str, ov: &Overrides) -> Result<String, CliError> {
    let loaded = load(text, &Overrides { search: true, ..ov.clone() })?;
    let base = loaded.name.clone().unwrap_or_else(|| "input".into());
    match &loaded.input {
        Input::Cdga(a) => {
            let mm = cdga_model(&a.algebra, a.truncation)?;
            let m = &mm.model;
            let mut lines = vec![format!("minimal model of {base} through degree {}", a.truncation)];
            if mm.construction_log.is_empty() {
                lines.push("input is already minimal".into());
            }
            for e in &mm.construction_log {
                let role = match e.role {
                    GeneratorRole::Cohomology => "cohomology",
                    GeneratorRole::Obstruction => "obstruction",
                };
                lines.push(format!("degree {}: {role} generator {}, d = {}, maps to {}", e.degree, e.generator, e.differential, e.image));
            }
            lines.push("map to the input:".into());
            for (g, img) in mm.quasi_iso.format_images() {
                lines.push(format!("  {g} -> {img}"));
            }
            let doc = DocumentOut {
                version: 1,
                kind: Kind::Cdga,
                name: format!("{base}-model"),
                relations: Vec::new(),
                parameters: ParametersOut { truncation: a.truncation, max_arity: None, convention: None },
                generators: m
                    .generators()
                    .generators()
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let d = m.generator_differential(i);
                        GeneratorOut {
                            name: g.name.clone(),
                            degree: g.degree as i32,
                            arity: None,
                            symmetry: None,
                            d: (!d.is_zero()).then(|| m.format(d)),
                        }
                    })
                    .collect(),
            };
            Ok(comment_block(&lines) + &toml::to_string_pretty(&doc).expect("document serializes"))
        }
        Input::Operad(p) => {
            let mm = operadic_minimal_model(&p.operad)?;
            let m = &mm.model;
            let conv = m.convention();
            let mut lines = vec![format!(
                "operadic minimal model of {base} in arities <= {}, degrees |d| <= {}",
                m.max_arity(),
                m.truncation()
            )];
            if mm.steps.is_empty() {
                lines.push("input is free with decomposable differential".into());
            }
            for s in &mm.steps {
                let role = match s.role {
                    StepRole::Cohomology => "cohomology",
                    StepRole::Obstruction => "obstruction",
                };
                let names: Vec<&str> = s.generators.iter().map(|&g| m.generators()[g].name.as_str()).collect();
                lines.push(format!(
                    "arity {}, degree {}: {role} module of dim {} on {}",
                    s.arity,
                    conv.display(s.degree),
                    s.dim,
                    names.join(", ")
                ));
            }
            lines.push("map to the input:".into());
            for (g, img) in mm.quasi_iso.format_images() {
                lines.push(format!("  {g} -> {img}"));
            }
            let doc = DocumentOut {
                version: 1,
                kind: Kind::Operad,
                name: format!("{base}-model"),
                relations: m.relations().iter().map(|r| m.format(r)).collect(),
                parameters: ParametersOut {
                    truncation: m.truncation(),
                    max_arity: Some(m.max_arity()),
                    convention: Some(conv.name().to_string()),
                },
                generators: m
                    .generators()
                    .iter()
                    .enumerate()
                    .map(|(g, gen)| {
                        let d = m.differential_of(g);
                        GeneratorOut {
                            name: gen.name.clone(),
                            degree: m.display_degree(g),
                            arity: Some(gen.arity),
                            symmetry: Some(gen.symmetry.name().to_string()),
                            d: (!d.is_zero()).then(|| m.format(d)),
                        }
                    })
                    .collect(),
            };
            Ok(comment_block(&lines) + &toml::to_string_pretty(&doc).expect("document serializes"))
        }
    }
}

pub fn massey(text: &str, ov: &Overrides, triple: [&str; 3]) -> Result<Value, CliError> {
    let loaded = load(text, &Overrides { search: true, ..ov.clone() })?;
    let Input::Cdga(a) = &loaded.input else {
        return Err(CliError::input("massey needs a cdga input"));
    };
    let polys = triple.iter().map(|s| a.algebra.parse(s)).collect::<formality_core::Result<Vec<_>>>()?;
    let coset = triple_massey(&a.algebra, &polys[0], &polys[1], &polys[2])?;
    let mut out = report::header("massey", text, "cdga", loaded.name.as_deref());
    out.insert("triple".into(), json!(triple));
    out.insert("massey".into(), report::massey_json(&a.algebra, &coset));
    out.insert("verdict".into(), json!(if coset.contains_zero() { "CONTAINS_ZERO" } else { "NONZERO" }));
    Ok(Value::Object(out))
}

fn block_diagonal(blocks: &[Matrix]) -> Matrix {
    let n: usize = blocks.iter().map(Matrix::rows).sum();
    let mut m = Matrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                m.set(off + r, off + c, b.get(r, c).clone());
            }
        }
        off += b.rows();
    }
    m
}

/// Action of `m ↦ m, b ↦ λb` on the cohomology of each component of the
/// Gerstenhaber preset, with the expected scalar `λ^d`.
pub fn demo_gerstenhaber(lambda: &Rational, max_arity: usize, truncation: u32) -> Result<Value, CliError> {
    let f = grading_action_little_disks(lambda, max_arity, truncation)?;
    let p = f.source().clone();
    let conv = p.convention();
    let mut components = Vec::new();
    let mut by_arity: std::collections::BTreeMap<usize, Vec<(i32, Matrix)>> = Default::default();
    for comp in p.components() {
        let (n, c) = (comp.arity, comp.degree);
        let h = f.on_cohomology(n, c);
        if h.rows() == 0 {
            continue;
        }
        let d = conv.display(c);
        let scalar = pow(lambda, d as i64);
        let is_scalar = h == Matrix::identity(h.rows()).scale(&scalar);
        components.push(json!({
            "arity": n,
            "degree": d,
            "dim": h.rows(),
            "matrix": report::matrix(&h),
            "expected_scalar": rat(&scalar),
            "scalar": is_scalar,
        }));
        by_arity.entry(n).or_default().push((d, h));
    }
    components.sort_by_key(|v| (v["arity"].as_u64(), v["degree"].as_i64()));
    let arities: Vec<Value> = by_arity
        .into_iter()
        .map(|(n, mut blocks)| {
            blocks.sort_by_key(|(d, _)| *d);
            let mats: Vec<Matrix> = blocks.into_iter().map(|(_, m)| m).collect();
            json!({ "arity": n, "matrix": report::matrix(&block_diagonal(&mats)) })
        })
        .collect();
    Ok(json!({
        "tool": "formality",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "demo gerstenhaber",
        "lambda": rat(lambda),
        "max_arity": max_arity,
        "truncation": truncation,
        "images": report::operad_morphism_images(&f),
        "components": components,
        "arities": arities,
    }))
}

/// `(H₀, H₁)` scalars of `τ² ↦ (τ²)^λ` for each λ, and the check that the
/// composite of all of them acts on `H₁` by the product.
pub fn demo_twist(lambdas: &[Rational]) -> Value {
    let rows: Vec<Value> = lambdas
        .iter()
        .map(|l| {
            let (h0, h1) = twist_action(l);
            json!({ "lambda": rat(l), "h0": rat(&h0), "h1": rat(&h1) })
        })
        .collect();
    let product = lambdas.iter().fold(Rational::from_integer(1.into()), |acc, l| acc * l);
    let product_of_h1 = lambdas.iter().fold(Rational::from_integer(1.into()), |acc, l| acc * twist_action(l).1);
    let composite = twist_action(&product).1;
    json!({
        "tool": "formality",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "demo twist",
        "twist": rows,
        "composition": {
            "lambda": format_rational(&product),
            "h1_of_composite": rat(&composite),
            "product_of_h1": rat(&product_of_h1),
            "multiplicative": composite == product_of_h1,
        },
    })
}
