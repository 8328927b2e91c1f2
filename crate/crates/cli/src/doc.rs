//! Presentation documents (TOML) and their conversion into engine inputs.
//!
//! ```toml
//! version = 1
//! kind = "cdga"            # or "operad"
//! name = "sphere2"
//! relations = []           # operads only, tree syntax
//!
//! [parameters]
//! q = "2"                  # integer or "p/q" string
//! truncation = 6
//! max_arity = 3            # operads only
//! convention = "homological"
//!
//! [[generators]]
//! name = "e3"
//! degree = 3
//! d = "e2^2"               # omitted means closed
//! arity = 2                # operads only
//! symmetry = "trivial"     # operads only: trivial | sign | regular
//!
//! [sigma]                  # optional candidate automorphism, by generator
//! e3 = "8 e3"
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use formality_core::gca::{parse_polynomial, Cdga, CdgaMorphism, Generator, GeneratorSet};
use formality_core::operad::{Convention, DgOperad, OpGenerator, OperadMorphism, Symmetry, TreePoly};
use formality_core::rational::parse_rational;
use formality_core::{Error, Rational};
use serde::{Deserialize, Serialize};
use toml::Spanned;

/// Environment variable capping the number of basis elements the engine may enumerate.
pub const MAX_BASIS_ENV: &str = "FORMALITY_MAX_BASIS";
pub const DEFAULT_MAX_BASIS: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::new("INVALID_INPUT", message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { code: e.code(), message: e.to_string() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cdga,
    Operad,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: u32,
    kind: Kind,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    relations: Vec<Spanned<String>>,
    #[serde(default)]
    parameters: RawParameters,
    generators: Vec<RawGenerator>,
    #[serde(default)]
    sigma: Option<BTreeMap<String, Spanned<String>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParameters {
    q: Option<Spanned<toml::Value>>,
    truncation: Option<u32>,
    max_arity: Option<usize>,
    convention: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    degree: i32,
    #[serde(default)]
    d: Option<Spanned<String>>,
    #[serde(default)]
    arity: Option<usize>,
    #[serde(default)]
    symmetry: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSigmaFile {
    #[serde(default)]
    #[allow(dead_code)]
    version: Option<u32>,
    sigma: BTreeMap<String, Spanned<String>>,
}

/// Command-line values that take precedence over the document's parameters.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub q: Option<Rational>,
    pub truncation: Option<u32>,
    pub max_arity: Option<usize>,
    /// Replaces the document's `[sigma]` table (TOML text with a `[sigma]` table).
    pub sigma_text: Option<String>,
    /// Ignore any sigma and run the diagonal search.
    pub search: bool,
}

pub struct CdgaInput {
    pub algebra: Arc<Cdga>,
    pub sigma: Option<CdgaMorphism>,
    pub q: Rational,
    pub truncation: u32,
}

pub struct OperadInput {
    pub operad: Arc<DgOperad>,
    pub sigma: Option<OperadMorphism>,
    pub q: Rational,
}

pub enum Input {
    Cdga(CdgaInput),
    Operad(OperadInput),
}

pub struct Loaded {
    pub name: Option<String>,
    pub kind: Kind,
    pub input: Input,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |p| before.len() - p - 1) + 1;
    (line, col)
}

/// Error for an expression stored in a TOML string value; the position is that
/// of the string literal.
fn at(text: &str, span: std::ops::Range<usize>, what: &str, e: Error) -> CliError {
    let (line, col) = line_col(text, span.start);
    CliError { code: e.code(), message: format!("{what} (line {line}, column {col}): {e}") }
}

fn parse_q(text: &str, v: &Spanned<toml::Value>) -> Result<Rational, CliError> {
    let (line, col) = line_col(text, v.span().start);
    match v.get_ref() {
        toml::Value::Integer(i) => Ok(Rational::from_integer((*i).into())),
        toml::Value::String(s) => parse_rational(s).map_err(|e| at(text, v.span(), "parameters.q", e)),
        toml::Value::Float(_) => Err(CliError::input(format!(
            "parameters.q (line {line}, column {col}): floats are not accepted, write q as an integer or \"p/q\""
        ))),
        _ => Err(CliError::input(format!("parameters.q (line {line}, column {col}) must be an integer or a \"p/q\" string"))),
    }
}

fn parse_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| {
        let pos = e.span().map(|s| line_col(text, s.start));
        let msg = e.message().to_string();
        CliError::new(
            "PARSE_ERROR",
            match pos {
                Some((l, c)) => format!("line {l}, column {c}: {msg}"),
                None => msg,
            },
        )
    })
}

/// Upper bound on the number of monomials of degree `<= n` in a free
/// graded-commutative algebra.
pub fn cdga_basis_bound(degrees: &[u32], n: u32) -> u64 {
    let n = n as usize;
    let mut series = vec![0u64; n + 1];
    series[0] = 1;
    for &d in degrees {
        let d = d as usize;
        if d == 0 || d > n {
            continue;
        }
        if d % 2 == 0 {
            for k in d..=n {
                series[k] = series[k].saturating_add(series[k - d]);
            }
        } else {
            for k in (d..=n).rev() {
                series[k] = series[k].saturating_add(series[k - d]);
            }
        }
    }
    series.iter().fold(0u64, |a, &b| a.saturating_add(b))
}

/// Number of free trees with leaves labeled `1..=n`, summed over `n <= max_arity`.
/// Generators of trivial or sign symmetry count once per unordered set of
/// inputs, regular ones once per ordering.
pub fn operad_basis_bound(gens: &[(usize, bool)], max_arity: usize) -> u64 {
    let binom = |n: usize, k: usize| -> f64 { (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64) };
    let mut a = vec![0f64; max_arity + 1];
    if max_arity >= 1 {
        a[1] = 1.0;
    }
    for n in 2..=max_arity {
        let mut total = 0.0;
        for &(k, regular) in gens {
            if k < 2 || k > n {
                continue;
            }
            // ordered k-tuples of nonempty disjoint blocks covering n labels, each carrying a tree
            let mut p = vec![vec![0f64; n + 1]; k + 1];
            p[0][0] = 1.0;
            for j in 1..=k {
                for m in 1..=n {
                    let mut s = 0.0;
                    for b in 1..=m {
                        s += binom(m - 1, b - 1) * a[b] * p[j - 1][m - b];
                    }
                    p[j][m] = s;
                }
            }
            // the recursion fixes the block of the smallest label first, which
            // already counts unordered block sets
            let unordered = p[k][n];
            let orders: f64 = if regular { (1..=k).map(|i| i as f64).product() } else { 1.0 };
            total += unordered * orders;
        }
        a[n] = total;
    }
    let sum: f64 = a.iter().sum();
    if sum >= u64::MAX as f64 {
        u64::MAX
    } else {
        sum as u64
    }
}

pub fn basis_cap() -> Result<u64, CliError> {
    match std::env::var(MAX_BASIS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("{MAX_BASIS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_BASIS),
    }
}

fn check_cap(bound: u64, what: &str) -> Result<(), CliError> {
    let cap = basis_cap()?;
    if bound > cap {
        return Err(CliError::new(
            "TRUNCATION_EXCEEDED",
            format!("{what} needs up to {bound} basis elements, above the cap {cap} set by {MAX_BASIS_ENV}"),
        ));
    }
    Ok(())
}

/// Parses, validates and builds the engine objects.
pub fn load(text: &str, ov: &Overrides) -> Result<Loaded, CliError> {
    let raw: RawDocument = parse_toml(text)?;
    if raw.version != 1 {
        return Err(CliError::input(format!("unsupported document version {}", raw.version)));
    }
    let _ = &raw.description;
    let q = match (&ov.q, &raw.parameters.q) {
        (Some(q), _) => q.clone(),
        (None, Some(v)) => parse_q(text, v)?,
        (None, None) => Rational::from_integer(2.into()),
    };
    let sigma_table = if ov.search {
        None
    } else if let Some(s) = &ov.sigma_text {
        let f: RawSigmaFile = parse_toml(s)?;
        Some((f.sigma, s.as_str()))
    } else {
        raw.sigma.clone().map(|s| (s, text))
    };
    let input = match raw.kind {
        Kind::Cdga => Input::Cdga(load_cdga(text, &raw, q, ov, sigma_table)?),
        Kind::Operad => Input::Operad(load_operad(text, &raw, q, ov, sigma_table)?),
    };
    Ok(Loaded { name: raw.name, kind: raw.kind, input })
}

type SigmaTable<'a> = Option<(BTreeMap<String, Spanned<String>>, &'a str)>;

fn sigma_images<T>(
    names: &[String],
    table: &BTreeMap<String, Spanned<String>>,
    src: &str,
    mut parse: impl FnMut(&str) -> formality_core::Result<T>,
) -> Result<Vec<T>, CliError> {
    if let Some(extra) = table.keys().find(|k| !names.contains(k)) {
        return Err(CliError::input(format!("sigma names unknown generator {extra}")));
    }
    names
        .iter()
        .map(|n| {
            let v = table.get(n).ok_or_else(|| CliError::input(format!("sigma is missing generator {n}")))?;
            parse(v.get_ref()).map_err(|e| at(src, v.span(), &format!("sigma.{n}"), e))
        })
        .collect()
}

fn load_cdga(text: &str, raw: &RawDocument, q: Rational, ov: &Overrides, sigma: SigmaTable) -> Result<CdgaInput, CliError> {
    if !raw.relations.is_empty() {
        return Err(CliError::input("relations are only allowed for operads"));
    }
    if raw.parameters.max_arity.is_some() || raw.parameters.convention.is_some() {
        return Err(CliError::input("max_arity and convention are only allowed for operads"));
    }
    let mut gens = Vec::with_capacity(raw.generators.len());
    for g in &raw.generators {
        if g.arity.is_some() || g.symmetry.is_some() {
            return Err(CliError::input(format!("generator {}: arity and symmetry are only allowed for operads", g.name)));
        }
        if g.degree <= 0 {
            return Err(CliError::input(format!("generator {} must have positive degree", g.name)));
        }
        gens.push(Generator { name: g.name.clone(), degree: g.degree as u32 });
    }
    let gs = GeneratorSet::new(gens)?;
    let truncation = ov
        .truncation
        .or(raw.parameters.truncation)
        .ok_or_else(|| CliError::input("parameters.truncation is required (or pass --truncate)"))?;
    let degrees: Vec<u32> = gs.generators().iter().map(|g| g.degree).collect();
    check_cap(cdga_basis_bound(&degrees, truncation), &format!("truncation N = {truncation}"))?;
    let mut diffs = Vec::with_capacity(raw.generators.len());
    for g in &raw.generators {
        diffs.push(match &g.d {
            Some(d) => parse_polynomial(&gs, d.get_ref()).map_err(|e| at(text, d.span(), &format!("d({})", g.name), e))?,
            None => formality_core::gca::Polynomial::zero(),
        });
    }
    let algebra = Arc::new(Cdga::new(gs, diffs, truncation)?);
    let sigma = match sigma {
        Some((table, src)) => {
            let names: Vec<String> = algebra.generators().generators().iter().map(|g| g.name.clone()).collect();
            let images = sigma_images(&names, &table, src, |s| algebra.parse(s))?;
            Some(CdgaMorphism::new(algebra.clone(), algebra.clone(), images)?)
        }
        None => None,
    };
    Ok(CdgaInput { algebra, sigma, q, truncation })
}

fn load_operad(text: &str, raw: &RawDocument, q: Rational, ov: &Overrides, sigma: SigmaTable) -> Result<OperadInput, CliError> {
    let convention = match &raw.parameters.convention {
        Some(c) => Convention::parse(c)?,
        None => Convention::Homological,
    };
    let mut gens = Vec::with_capacity(raw.generators.len());
    for g in &raw.generators {
        let arity = g.arity.ok_or_else(|| CliError::input(format!("generator {} needs an arity", g.name)))?;
        let symmetry = match &g.symmetry {
            Some(s) => Symmetry::parse(s)?,
            None => Symmetry::Regular,
        };
        gens.push(OpGenerator { name: g.name.clone(), arity, degree: convention.internal(g.degree), symmetry });
    }
    let max_arity = ov.max_arity.or(raw.parameters.max_arity).unwrap_or(3);
    let truncation = ov.truncation.or(raw.parameters.truncation).unwrap_or(3);
    let shape: Vec<(usize, bool)> = gens.iter().map(|g| (g.arity, g.symmetry == Symmetry::Regular)).collect();
    check_cap(operad_basis_bound(&shape, max_arity), &format!("arity window A = {max_arity}"))?;
    let parse = |s: &Spanned<String>, what: &str| {
        formality_core::operad::parse_tree_poly(&gens, s.get_ref()).map_err(|e| at(text, s.span(), what, e))
    };
    let relations = raw
        .relations
        .iter()
        .enumerate()
        .map(|(k, r)| parse(r, &format!("relations[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let differential = raw
        .generators
        .iter()
        .map(|g| match &g.d {
            Some(d) => parse(d, &format!("d({})", g.name)),
            None => Ok(TreePoly::zero()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let operad = Arc::new(DgOperad::new(gens, relations, differential, max_arity, truncation, convention)?);
    let sigma = match sigma {
        Some((table, src)) => {
            let names: Vec<String> = operad.generators().iter().map(|g| g.name.clone()).collect();
            let images = sigma_images(&names, &table, src, |s| operad.parse(s))?;
            Some(OperadMorphism::new(operad.clone(), operad.clone(), images)?)
        }
        None => None,
    };
    Ok(OperadInput { operad, sigma, q })
}

/// Output form of a document, used for model listings.
#[derive(Debug, Serialize)]
pub struct DocumentOut {
    pub version: u32,
    pub kind: Kind,
    pub name: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
    pub parameters: ParametersOut,
    pub generators: Vec<GeneratorOut>,
}

#[derive(Debug, Serialize)]
pub struct ParametersOut {
    pub truncation: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_arity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct GeneratorOut {
    pub name: String,
    pub degree: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<String>,
}
