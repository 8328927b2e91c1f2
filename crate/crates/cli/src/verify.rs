//! Re-checks an `analyze` report against its input. Nothing is searched for:
//! the model, the map to the input and both automorphisms are read from the
//! report, then weights, splitting and quotient are recomputed from them and
//! compared with what the report claims.

use std::sync::Arc;

use formality_core::formality::certify_from_lift;
use formality_core::gca::{Cdga, CdgaMorphism, Generator, GeneratorSet};
use formality_core::grading::is_grading_lift;
use formality_core::minimal_model::{verify_minimal, MinimalModel};
use formality_core::operad::{
    is_operad_grading_lift, operadic_certify_from_lift, Convention, DgOperad, OpGenerator, OperadMorphism,
    OperadicMinimalModel, Symmetry, TreePoly,
};
use formality_core::rational::parse_rational;
use formality_core::transfer::triple_massey;
use serde_json::Value;

use crate::doc::{load, CliError, Input, Overrides};
use crate::report;

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub verdict: String,
    pub checks: Vec<(String, bool)>,
}

impl VerifyOutcome {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn field<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Value, CliError> {
    let mut cur = v;
    for k in path {
        cur = cur.get(k).ok_or_else(|| CliError::input(format!("report is missing {}", path.join("."))))?;
    }
    Ok(cur)
}

fn string<'a>(v: &'a Value, path: &[&str]) -> Result<&'a str, CliError> {
    field(v, path)?.as_str().ok_or_else(|| CliError::input(format!("{} must be a string", path.join("."))))
}

fn uint(v: &Value, path: &[&str]) -> Result<u64, CliError> {
    field(v, path)?.as_u64().ok_or_else(|| CliError::input(format!("{} must be a non-negative integer", path.join("."))))
}

fn array<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Vec<Value>, CliError> {
    field(v, path)?.as_array().ok_or_else(|| CliError::input(format!("{} must be an array", path.join("."))))
}

fn image_list(v: &Value, path: &[&str]) -> Result<Vec<(String, String)>, CliError> {
    array(v, path)?
        .iter()
        .map(|e| Ok((string(e, &["generator"])?.to_string(), string(e, &["image"])?.to_string())))
        .collect()
}

/// Images in the order of `names`; the report must list exactly those generators.
fn ordered_images(list: &[(String, String)], names: &[String], what: &str) -> Result<Vec<String>, CliError> {
    if list.len() != names.len() || list.iter().zip(names).any(|((g, _), n)| g != n) {
        return Err(CliError::input(format!("{what} does not list the expected generators")));
    }
    Ok(list.iter().map(|(_, i)| i.clone()).collect())
}

pub fn verify(input_text: &str, report_value: &Value) -> Result<VerifyOutcome, CliError> {
    let mut checks = Vec::new();
    let hash = string(report_value, &["input", "sha256"])?;
    checks.push(("input_sha256".to_string(), hash == report::sha256_hex(input_text)));
    if string(report_value, &["command"])? != "analyze" {
        return Err(CliError::input("only analyze reports carry certificates"));
    }
    let cert = field(report_value, &["certificate"])?;
    let verdict = string(cert, &["verdict"])?.to_string();
    let q = parse_rational(string(cert, &["q"])?)?;
    let truncation = uint(cert, &["truncation"])? as u32;
    let max_arity = cert.get("max_arity").and_then(Value::as_u64).map(|a| a as usize);
    let ov = Overrides { q: Some(q.clone()), truncation: Some(truncation), max_arity, sigma_text: None, search: true };
    let loaded = load(input_text, &ov)?;
    match (verdict.as_str(), loaded.input) {
        ("FORMAL_CERTIFIED", Input::Cdga(a)) => verify_cdga_formal(&a.algebra, cert, &q, &mut checks)?,
        ("NONFORMAL_CERTIFIED", Input::Cdga(a)) => verify_cdga_nonformal(&a.algebra, cert, &mut checks)?,
        ("FORMAL_CERTIFIED", Input::Operad(p)) => verify_operad_formal(&p.operad, cert, &q, &mut checks)?,
        ("NONFORMAL_CERTIFIED", Input::Operad(_)) => {
            return Err(CliError::input("operad reports never carry a non-formality certificate"))
        }
        ("INCONCLUSIVE", _) => checks.push(("no_certificate".to_string(), true)),
        (other, _) => return Err(CliError::input(format!("unknown verdict {other}"))),
    }
    Ok(VerifyOutcome { verdict, checks })
}

fn verify_cdga_formal(
    a: &Arc<Cdga>,
    cert: &Value,
    q: &formality_core::Rational,
    checks: &mut Vec<(String, bool)>,
) -> Result<(), CliError> {
    let w = field(cert, &["formal"])?;
    let gens = array(w, &["model", "generators"])?;
    let mut list = Vec::new();
    for g in gens {
        list.push(Generator { name: string(g, &["name"])?.to_string(), degree: uint(g, &["degree"])? as u32 });
    }
    let gs = GeneratorSet::new(list)?;
    let diffs = gens
        .iter()
        .map(|g| Ok(formality_core::gca::parse_polynomial(&gs, string(g, &["d"])?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let model = Arc::new(Cdga::new(gs, diffs, a.truncation())?);
    let model_names: Vec<String> = model.generators().generators().iter().map(|g| g.name.clone()).collect();
    let a_names: Vec<String> = a.generators().generators().iter().map(|g| g.name.clone()).collect();
    let parse_all = |alg: &Cdga, imgs: Vec<String>| imgs.iter().map(|s| alg.parse(s)).collect::<formality_core::Result<Vec<_>>>();
    let map = ordered_images(&image_list(w, &["model", "map"])?, &model_names, "model.map")?;
    let quasi_iso = CdgaMorphism::new(model.clone(), a.clone(), parse_all(a, map)?)?;
    let sigma_imgs = ordered_images(&image_list(w, &["sigma"])?, &a_names, "sigma")?;
    let sigma = CdgaMorphism::new(a.clone(), a.clone(), parse_all(a, sigma_imgs)?)?;
    let st_imgs = ordered_images(&image_list(w, &["sigma_tilde"])?, &model_names, "sigma_tilde")?;
    let sigma_tilde = CdgaMorphism::new(model.clone(), model.clone(), parse_all(&model, st_imgs)?)?;

    checks.push(("model_is_minimal".to_string(), verify_minimal(&model)));
    checks.push(("sigma_lifts_grading".to_string(), is_grading_lift(a, &sigma, q, a.truncation())?.holds()));
    let mm = MinimalModel { model, quasi_iso, construction_log: Vec::new() };
    match certify_from_lift(&mm, &sigma, &sigma_tilde, q, None) {
        Ok(again) => {
            checks.push(("certify_from_lift".to_string(), true));
            checks.push(("weights_match".to_string(), &report::weights_json(&again) == field(w, &["weights"])?));
            checks.push((
                "quotient_dims_match".to_string(),
                serde_json::json!(again.quotient.dims()) == *field(w, &["quotient_dims"])?,
            ));
            checks.push((
                "projection_matches".to_string(),
                report::images(again.projection.formatted_images(&again.quotient)) == *field(w, &["projection"])?,
            ));
            checks.push((
                "weights_at_least_degree".to_string(),
                again.weights.degrees.iter().all(|d| d.parts.iter().all(|(j, _)| *j >= d.degree)),
            ));
        }
        Err(e) => checks.push((format!("certify_from_lift: {}", e.code()), false)),
    }
    Ok(())
}

fn verify_cdga_nonformal(a: &Arc<Cdga>, cert: &Value, checks: &mut Vec<(String, bool)>) -> Result<(), CliError> {
    let w = field(cert, &["nonformal"])?;
    let reps = array(w, &["representatives"])?
        .iter()
        .map(|r| Ok(a.parse(r.as_str().ok_or_else(|| CliError::input("representatives must be strings"))?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    if reps.len() != 3 {
        return Err(CliError::input("a Massey witness has three representatives"));
    }
    match triple_massey(a, &reps[0], &reps[1], &reps[2]) {
        Ok(c) => {
            checks.push(("coset_excludes_zero".to_string(), !c.contains_zero()));
            checks.push(("coset_matches".to_string(), report::massey_json(a, &c) == *field(w, &["coset"])?));
        }
        Err(e) => checks.push((format!("triple_massey: {}", e.code()), false)),
    }
    Ok(())
}

fn verify_operad_formal(
    p: &Arc<DgOperad>,
    cert: &Value,
    q: &formality_core::Rational,
    checks: &mut Vec<(String, bool)>,
) -> Result<(), CliError> {
    let w = field(cert, &["formal"])?;
    let convention = Convention::parse(string(cert, &["convention"])?)?;
    let gens_json = array(w, &["model", "generators"])?;
    let mut gens = Vec::new();
    for g in gens_json {
        let degree = field(g, &["degree"])?.as_i64().ok_or_else(|| CliError::input("degree must be an integer"))?;
        gens.push(OpGenerator {
            name: string(g, &["name"])?.to_string(),
            arity: uint(g, &["arity"])? as usize,
            degree: convention.internal(degree as i32),
            symmetry: Symmetry::parse(string(g, &["symmetry"])?)?,
        });
    }
    let parse = |s: &str| formality_core::operad::parse_tree_poly(&gens, s);
    let relations = array(w, &["model", "relations"])?
        .iter()
        .map(|r| Ok(parse(r.as_str().ok_or_else(|| CliError::input("relations must be strings"))?)?))
        .collect::<Result<Vec<TreePoly>, CliError>>()?;
    let diffs = gens_json.iter().map(|g| Ok(parse(string(g, &["d"])?)?)).collect::<Result<Vec<_>, CliError>>()?;
    let model = Arc::new(DgOperad::new(gens.clone(), relations, diffs, p.max_arity(), p.truncation(), convention)?);
    let model_names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    let p_names: Vec<String> = p.generators().iter().map(|g| g.name.clone()).collect();
    let parse_in = |o: &DgOperad, imgs: Vec<String>| imgs.iter().map(|s| o.parse(s)).collect::<formality_core::Result<Vec<_>>>();
    let map = ordered_images(&image_list(w, &["model", "map"])?, &model_names, "model.map")?;
    let quasi_iso = OperadMorphism::new(model.clone(), p.clone(), parse_in(p, map)?)?;
    let sigma_imgs = ordered_images(&image_list(w, &["sigma"])?, &p_names, "sigma")?;
    let sigma = OperadMorphism::new(p.clone(), p.clone(), parse_in(p, sigma_imgs)?)?;
    let st_imgs = ordered_images(&image_list(w, &["sigma_tilde"])?, &model_names, "sigma_tilde")?;
    let sigma_tilde = OperadMorphism::new(model.clone(), model.clone(), parse_in(&model, st_imgs)?)?;

    let mm = OperadicMinimalModel { model, quasi_iso, steps: Vec::new() };
    checks.push(("model_is_decomposable".to_string(), mm.is_decomposable()));
    checks.push((
        "sigma_lifts_grading".to_string(),
        is_operad_grading_lift(p, &sigma, q)?.iter().all(|(_, _, ok)| *ok),
    ));
    match operadic_certify_from_lift(&mm, &sigma, &sigma_tilde, q, None) {
        Ok(again) => {
            checks.push(("certify_from_lift".to_string(), true));
            checks.push(("weights_match".to_string(), report::operad_weights_json(&again) == *field(w, &["weights"])?));
            checks.push((
                "ideal_dim_matches".to_string(),
                serde_json::json!(again.ideal_dim()) == *field(w, &["ideal_dim"])?,
            ));
            let dims: Vec<Value> = again
                .quotient_dims()
                .iter()
                .map(|(n, d, k)| serde_json::json!({ "arity": n, "degree": d, "dim": k }))
                .collect();
            checks.push(("quotient_dims_match".to_string(), Value::Array(dims) == *field(w, &["quotient_dims"])?));
        }
        Err(e) => checks.push((format!("certify_from_lift: {}", e.code()), false)),
    }
    Ok(())
}
