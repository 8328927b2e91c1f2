//! JSON reports. Object keys are sorted (serde_json's default map), arrays
//! follow engine order, so identical inputs give identical bytes.

use formality_core::exactlin::{Matrix, SubspaceBasis};
use formality_core::formality::{FormalWitness, FormalityCertificate, NonformalWitness, StageRecord};
use formality_core::operad::{DgOperad, OperadCertificate, OperadFormalWitness, OperadMorphism};
use formality_core::gca::{Cdga, CdgaMorphism};
use formality_core::rational::format_rational;
use formality_core::transfer::MasseyCoset;
use formality_core::Rational;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| vector(m.row(r))).collect())
}

pub fn subspace(s: &SubspaceBasis) -> Value {
    Value::Array(s.vectors().iter().map(|v| vector(v)).collect())
}

/// `[{generator, image}]` in generator order.
pub fn images(pairs: Vec<(String, String)>) -> Value {
    Value::Array(pairs.into_iter().map(|(g, i)| json!({ "generator": g, "image": i })).collect())
}

pub fn stages(stages: &[StageRecord]) -> Value {
    Value::Array(
        stages
            .iter()
            .map(|s| {
                json!({
                    "stage": s.stage,
                    "status": s.status.code(),
                    "detail": s.detail,
                    "error": s.error,
                })
            })
            .collect(),
    )
}

/// Common header: tool, version, command and input identity.
pub fn header(command: &str, input_text: &str, kind: &str, name: Option<&str>) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), json!("formality"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("input".into(), json!({ "sha256": sha256_hex(input_text), "kind": kind, "name": name }));
    m
}

pub fn cdga_generators(a: &Cdga) -> Value {
    Value::Array(
        a.generators()
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| json!({ "name": g.name, "degree": g.degree, "d": a.format(a.generator_differential(i)) }))
            .collect(),
    )
}

pub fn cdga_formal(w: &FormalWitness) -> Value {
    let m = &w.model.model;
    json!({
        "model": {
            "generators": cdga_generators(m),
            "map": images(w.model.quasi_iso.format_images()),
            "construction_log": w.model.construction_log.iter().map(|e| json!({
                "degree": e.degree,
                "role": format!("{:?}", e.role).to_lowercase(),
                "generator": e.generator,
                "d": e.differential,
                "image": e.image,
            })).collect::<Vec<_>>(),
            "quasi_iso": w.model_quasi_iso.iter().map(|(n, ok)| json!({ "degree": n, "ok": ok })).collect::<Vec<_>>(),
        },
        "sigma": images(w.sigma.format_images()),
        "sigma_tilde": images(w.sigma_tilde.format_images()),
        "weights": weights_json(w),
        "splitting": w.splitting.degrees.iter().map(|d| json!({
            "degree": d.degree,
            "surface": d.surface.dim(),
            "ideal": d.ideal.dim(),
        })).collect::<Vec<_>>(),
        "quotient_dims": w.quotient.dims(),
        "projection": images(w.projection.formatted_images(&w.quotient)),
        "checks": {
            "kills_differential": w.checks.kills_differential,
            "multiplicative": w.checks.multiplicative,
            "quasi_iso": w.checks.quasi_iso.iter().map(|(n, ok)| json!({ "degree": n, "ok": ok })).collect::<Vec<_>>(),
        },
    })
}

pub fn weights_json(w: &FormalWitness) -> Value {
    Value::Array(
        w.weights
            .degrees
            .iter()
            .map(|d| {
                json!({
                    "degree": d.degree,
                    "parts": d.parts.iter().map(|(j, s)| json!({ "weight": j, "dim": s.dim() })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn massey_json(a: &Cdga, c: &MasseyCoset) -> Value {
    json!({
        "degree": c.degree,
        "representative": a.format(&c.representative),
        "value": vector(&c.value),
        "indeterminacy": subspace(&c.indeterminacy),
        "contains_zero": c.contains_zero(),
    })
}

pub fn cdga_nonformal(a: &Cdga, w: &NonformalWitness) -> Value {
    json!({
        "classes": w.classes.iter().map(|(d, k)| json!({ "degree": d, "index": k })).collect::<Vec<_>>(),
        "representatives": w.representatives.iter().map(|p| a.format(p)).collect::<Vec<_>>(),
        "coset": massey_json(a, &w.coset),
    })
}

pub fn cdga_certificate(a: &Cdga, c: &FormalityCertificate) -> Value {
    json!({
        "verdict": c.verdict.code(),
        "q": rat(&c.q),
        "truncation": c.truncation,
        "stages": stages(&c.stages),
        "unchecked_hypotheses": c.unchecked_hypotheses,
        "formal": c.formal.as_ref().map(cdga_formal),
        "nonformal": c.nonformal.as_ref().map(|w| cdga_nonformal(a, w)),
    })
}

pub fn operad_generators(p: &DgOperad) -> Value {
    Value::Array(
        p.generators()
            .iter()
            .enumerate()
            .map(|(g, gen)| {
                json!({
                    "name": gen.name,
                    "arity": gen.arity,
                    "degree": p.display_degree(g),
                    "symmetry": gen.symmetry.name(),
                    "d": p.format(p.differential_of(g)),
                })
            })
            .collect(),
    )
}

pub fn operad_morphism_images(f: &OperadMorphism) -> Value {
    images(f.format_images())
}

pub fn operad_formal(w: &OperadFormalWitness) -> Value {
    let m = &w.model.model;
    json!({
        "model": {
            "generators": operad_generators(m),
            "relations": m.relations().iter().map(|r| m.format(r)).collect::<Vec<_>>(),
            "map": operad_morphism_images(&w.model.quasi_iso),
            "generator_dims": w.model.generator_counts().iter().map(|((n, d), k)| json!({
                "arity": n, "degree": d, "dim": k,
            })).collect::<Vec<_>>(),
            "steps": w.model.steps.iter().map(|s| json!({
                "arity": s.arity,
                "degree": m.convention().display(s.degree),
                "role": s.role.name(),
                "dim": s.dim,
            })).collect::<Vec<_>>(),
        },
        "sigma": operad_morphism_images(&w.sigma),
        "sigma_tilde": operad_morphism_images(&w.sigma_tilde),
        "weights": operad_weights_json(w),
        "ideal_dim": w.ideal_dim(),
        "quotient_dims": w.quotient_dims().iter().map(|(n, d, k)| json!({ "arity": n, "degree": d, "dim": k })).collect::<Vec<_>>(),
        "checks": {
            "kills_differential": w.checks.kills_differential,
            "compatible_with_composition": w.checks.compatible_with_composition,
            "equivariant": w.checks.equivariant,
            "quasi_iso": w.checks.quasi_iso.iter().map(|(n, d, ok)| json!({ "arity": n, "degree": d, "ok": ok })).collect::<Vec<_>>(),
        },
    })
}

pub fn operad_weights_json(w: &OperadFormalWitness) -> Value {
    Value::Array(
        w.weight_table()
            .iter()
            .map(|(n, d, parts)| {
                json!({
                    "arity": n,
                    "degree": d,
                    "parts": parts.iter().map(|(j, k)| json!({ "weight": j, "dim": k })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn operad_certificate(c: &OperadCertificate, convention: &str) -> Value {
    json!({
        "verdict": c.verdict.code(),
        "q": rat(&c.q),
        "truncation": c.truncation,
        "max_arity": c.max_arity,
        "convention": convention,
        "stages": stages(&c.stages),
        "formal": c.formal.as_ref().map(operad_formal),
        "nonformal": Value::Null,
    })
}

pub fn cdga_morphism_images(f: &CdgaMorphism) -> Value {
    images(f.format_images())
}

/// Indented `key: value` rendering for `--pretty`.
pub fn render_text(v: &Value) -> String {
    fn scalar(v: &Value) -> Option<String> {
        match v {
            Value::Null => Some("-".into()),
            Value::Bool(b) => Some(b.to_string()),
            Value::Number(n) => Some(n.to_string()),
            Value::String(s) => Some(s.clone()),
            Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
                Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
            }
            _ => None,
        }
    }
    fn go(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    match scalar(x) {
                        Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            go(x, indent + 1, out);
                        }
                    }
                }
            }
            Value::Array(a) => {
                for x in a {
                    match scalar(x) {
                        Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                        None => {
                            out.push_str(&format!("{pad}-\n"));
                            go(x, indent + 1, out);
                        }
                    }
                }
            }
            other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap())),
        }
    }
    let mut out = String::new();
    go(v, 0, &mut out);
    out
}
