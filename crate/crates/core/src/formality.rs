//! Weight splittings of minimal models, the quotient onto cohomology, and the
//! end-to-end formality pipeline with re-checkable certificates.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{complement_in, independent_subset, Matrix, SubspaceBasis, Vector};
use crate::gca::{Cdga, CdgaMorphism, Monomial, Polynomial};
use crate::grading::{is_grading_lift, search_diagonal_lift, weight_decompose_model, WeightDecomposition};
use crate::minimal_model::{self, lift_endomorphism, verify_minimal, MinimalModel};
use crate::rational::{check_non_root_of_unity, pow, Rational};
use crate::transfer::{triple_massey, MasseyCoset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDegree {
    pub degree: u32,
    pub basis: Vec<Monomial>,
    /// `S^i = M^i_i`.
    pub surface: SubspaceBasis,
    /// `𝕴^i`, the sum of the weight spaces of weight `> i`.
    pub ideal: SubspaceBasis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSplitting {
    pub degrees: Vec<SplitDegree>,
}

impl WeightSplitting {
    pub fn degree(&self, i: u32) -> &SplitDegree {
        &self.degrees[i as usize]
    }
}

/// Splits each `M^i` into `S^i ⊕ 𝕴^i` and checks the dimension count, `dS = 0`
/// and closure of `𝕴` under multiplication by generators.
pub fn build_splitting(model: &Cdga, wd: &WeightDecomposition) -> Result<WeightSplitting> {
    let n = model.truncation();
    let mut degrees = Vec::new();
    for i in 0..n {
        let dw = wd
            .degree(i)
            .ok_or_else(|| Error::SplittingInvariantFailed(format!("no weight data in degree {i}")))?;
        let dim = dw.basis.len();
        let mut surface = SubspaceBasis::empty(dim);
        let mut ideal = SubspaceBasis::empty(dim);
        for (j, s) in &dw.parts {
            if *j < i {
                return Err(Error::SplittingInvariantFailed(format!("weight {j} below degree {i}")));
            }
            if *j == i {
                surface = surface.sum(s);
            } else {
                ideal = ideal.sum(s);
            }
        }
        if surface.dim() + ideal.dim() != dim || surface.sum(&ideal).dim() != dim {
            return Err(Error::SplittingInvariantFailed(format!("M^{i} is not S^{i} ⊕ 𝕴^{i}")));
        }
        for v in surface.vectors() {
            if !model.differential(&Polynomial::from_vector(v, &dw.basis)).is_zero() {
                return Err(Error::SplittingInvariantFailed(format!("dS != 0 in degree {i}")));
            }
        }
        degrees.push(SplitDegree {
            degree: i,
            basis: dw.basis.clone(),
            surface,
            ideal,
        });
    }
    let gens = model.generators();
    for i in 0..n {
        for g in 0..gens.len() {
            let e = gens.degree_of(g);
            if i + e >= n {
                continue;
            }
            let target = &degrees[(i + e) as usize];
            let gp = gens.generator_poly(g);
            for v in degrees[i as usize].ideal.vectors() {
                let prod = model.multiply(&gp, &Polynomial::from_vector(v, &degrees[i as usize].basis));
                if !target.ideal.contains(&prod.to_vector(&target.basis)) {
                    return Err(Error::SplittingInvariantFailed(format!(
                        "𝕴 is not an ideal: {} · 𝕴^{i} leaves 𝕴^{}",
                        gens.generators()[g].name,
                        i + e
                    )));
                }
            }
        }
    }
    Ok(WeightSplitting { degrees })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDegree {
    pub degree: u32,
    pub basis: Vec<Monomial>,
    /// Representatives of a basis of `Q^n`, in monomial coordinates of `M^n`.
    pub reps: Vec<Vector>,
    /// Linear projection `M^n -> Q^n`: onto `S` along `𝕴`, then modulo `d(M^{n-1}_n)`.
    pub projection: Matrix,
}

/// `Q = S/(S ∩ d𝕴)` through degree `N - 1`, a graded commutative algebra with
/// zero differential. Products are computed on representatives and projected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalityQuotient {
    pub model: Arc<Cdga>,
    pub degrees: Vec<QuotientDegree>,
}

impl FormalityQuotient {
    pub fn truncation(&self) -> u32 {
        self.degrees.len() as u32
    }

    pub fn dim(&self, n: u32) -> usize {
        self.degrees.get(n as usize).map_or(0, |d| d.reps.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.reps.len()).collect()
    }

    pub fn rep(&self, n: u32, coords: &[Rational]) -> Polynomial {
        let d = &self.degrees[n as usize];
        let mut v = vec![Rational::zero(); d.basis.len()];
        for (c, r) in coords.iter().zip(&d.reps) {
            for (x, y) in v.iter_mut().zip(r) {
                *x += c * y;
            }
        }
        Polynomial::from_vector(&v, &d.basis)
    }

    /// Linear projection of a homogeneous element of degree `n < N`.
    pub fn project(&self, p: &Polynomial, n: u32) -> Vector {
        let d = &self.degrees[n as usize];
        d.projection.mul_vec(&p.to_vector(&d.basis))
    }

    /// Product in `Q`; `None` outside the window.
    pub fn multiply(&self, n1: u32, a: &[Rational], n2: u32, b: &[Rational]) -> Option<Vector> {
        let n = n1 + n2;
        if n >= self.truncation() {
            return None;
        }
        let prod = self.model.multiply(&self.rep(n1, a), &self.rep(n2, b));
        Some(self.project(&prod, n))
    }

    pub fn unit(&self) -> Vector {
        let d = &self.degrees[0];
        d.projection.mul_vec(&self.model.generators().one().to_vector(&d.basis))
    }
}

/// Builds `Q^n = S^n / d(M^{n-1}_n)` with first-pivot complement bases.
pub fn formality_quotient(model: &Arc<Cdga>, wd: &WeightDecomposition, ws: &WeightSplitting) -> FormalityQuotient {
    let n_max = model.truncation();
    let mut degrees = Vec::new();
    for n in 0..n_max {
        let sd = ws.degree(n);
        let dim = sd.basis.len();
        let relations = if n == 0 {
            SubspaceBasis::empty(dim)
        } else {
            let below = ws.degree(n - 1);
            let source = wd.subspace(n - 1, n).map(|s| s.vectors().to_vec()).unwrap_or_default();
            let images: Vec<Vector> = source
                .iter()
                .map(|v| model.differential(&Polynomial::from_vector(v, &below.basis)).to_vector(&sd.basis))
                .collect();
            independent_subset(dim, &images)
        };
        let reps = complement_in(&relations, &sd.surface).into_vectors();
        // Coordinates in [S | 𝕴], keep the S part, re-expand, then coordinates
        // in [relations | reps] and keep the reps part.
        let mut split_cols = sd.surface.vectors().to_vec();
        split_cols.extend(sd.ideal.vectors().iter().cloned());
        let to_split = Matrix::from_columns(dim, &split_cols).inverse().expect("M = S ⊕ 𝕴");
        let s_dim = sd.surface.dim();
        let mut keep_s = Matrix::zeros(dim, dim);
        for (k, v) in sd.surface.vectors().iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                keep_s.set(r, k, x.clone());
            }
        }
        let onto_s = keep_s.mul(&to_split);
        let mut q_cols = relations.vectors().to_vec();
        q_cols.extend(reps.iter().cloned());
        q_cols.extend(sd.ideal.vectors().iter().cloned());
        let to_q = Matrix::from_columns(dim, &q_cols).inverse().expect("S = R ⊕ Q and M = S ⊕ 𝕴");
        let r_dim = relations.dim();
        debug_assert_eq!(r_dim + reps.len(), s_dim);
        let mut select = Matrix::zeros(reps.len(), dim);
        for k in 0..reps.len() {
            select.set(k, r_dim + k, Rational::one());
        }
        let projection = select.mul(&to_q).mul(&onto_s);
        degrees.push(QuotientDegree {
            degree: n,
            basis: sd.basis.clone(),
            reps,
            projection,
        });
    }
    FormalityQuotient {
        model: model.clone(),
        degrees,
    }
}

/// The algebra map `M -> Q` given by generator images (class coordinates),
/// extended multiplicatively. Generators of degree `>= N` are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientProjection {
    pub generator_images: Vec<Vector>,
}

impl QuotientProjection {
    /// Restriction of the linear projection to generators.
    pub fn from_quotient(q: &FormalityQuotient) -> Self {
        let gens = q.model.generators();
        let generator_images = (0..gens.len())
            .map(|g| {
                let d = gens.degree_of(g);
                if d < q.truncation() {
                    q.project(&gens.generator_poly(g), d)
                } else {
                    Vec::new()
                }
            })
            .collect();
        QuotientProjection { generator_images }
    }

    pub fn apply_monomial(&self, q: &FormalityQuotient, m: &Monomial) -> Option<Vector> {
        let gens = q.model.generators();
        let mut degree = 0;
        let mut acc = q.unit();
        for (g, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                let d = gens.degree_of(g);
                acc = q.multiply(degree, &acc, d, &self.generator_images[g])?;
                degree += d;
            }
        }
        Some(acc)
    }

    /// Image of a homogeneous element of degree `n < N`.
    pub fn apply(&self, q: &FormalityQuotient, p: &Polynomial, n: u32) -> Vector {
        let mut out = vec![Rational::zero(); q.dim(n)];
        for (m, c) in p.terms() {
            let v = self.apply_monomial(q, m).expect("degree inside the window");
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }

    /// Images of generators as polynomials in the model (sums of quotient representatives).
    pub fn formatted_images(&self, q: &FormalityQuotient) -> Vec<(String, String)> {
        let gens = q.model.generators();
        gens.generators()
            .iter()
            .enumerate()
            .filter(|(g, _)| gens.degree_of(*g) < q.truncation())
            .map(|(g, gen)| {
                let p = q.rep(gen.degree, &self.generator_images[g]);
                (gen.name.clone(), q.model.format(&p))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientChecks {
    /// `π ∘ d = 0` on every monomial of degree `<= N - 2`.
    pub kills_differential: bool,
    /// `π` agrees with the linear projection on every monomial of degree `<= N - 1`.
    pub multiplicative: bool,
    /// `H^n(M) -> Q^n` is an isomorphism, per degree.
    pub quasi_iso: Vec<(u32, bool)>,
}

impl QuotientChecks {
    pub fn all_pass(&self) -> bool {
        self.kills_differential && self.multiplicative && self.quasi_iso.iter().all(|(_, ok)| *ok)
    }
}

/// Per-degree check that `π` induces `H^n(M) ≅ Q^n`.
pub fn verify_quasi_iso(q: &FormalityQuotient, pi: &QuotientProjection) -> Vec<(u32, bool)> {
    let m = &q.model;
    (0..q.truncation())
        .map(|n| {
            let h = m.cohomology(n);
            let cols: Vec<Vector> = h.representatives.iter().map(|r| pi.apply(q, r, n)).collect();
            let mat = Matrix::from_columns(q.dim(n), &cols);
            let ok = mat.is_square() && mat.rank() == mat.rows();
            (n, ok)
        })
        .collect()
}

pub fn check_projection(q: &FormalityQuotient, pi: &QuotientProjection) -> QuotientChecks {
    let m = &q.model;
    let n_max = q.truncation();
    let mut kills_differential = true;
    let mut multiplicative = true;
    for n in 0..n_max {
        for mono in m.monomial_basis(n) {
            let p = Polynomial::monomial(mono.clone(), Rational::one());
            if pi.apply_monomial(q, &mono) != Some(q.project(&p, n)) {
                multiplicative = false;
            }
            if n + 1 < n_max && pi.apply(q, &m.differential(&p), n + 1).iter().any(|c| !c.is_zero()) {
                kills_differential = false;
            }
        }
    }
    QuotientChecks {
        kills_differential,
        multiplicative,
        quasi_iso: verify_quasi_iso(q, pi),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    FormalCertified,
    NonformalCertified,
    Inconclusive,
}

impl Verdict {
    pub fn code(self) -> &'static str {
        match self {
            Verdict::FormalCertified => "FORMAL_CERTIFIED",
            Verdict::NonformalCertified => "NONFORMAL_CERTIFIED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageStatus {
    Passed,
    Failed,
    Skipped,
}

impl StageStatus {
    pub fn code(self) -> &'static str {
        match self {
            StageStatus::Passed => "passed",
            StageStatus::Failed => "failed",
            StageStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: &'static str,
    pub status: StageStatus,
    pub detail: String,
    pub error: Option<&'static str>,
}

/// Everything needed to re-check a formal verdict: the model and its map to
/// the input, the lifted automorphism, and the derived weight data.
#[derive(Clone, Debug)]
pub struct FormalWitness {
    pub model: MinimalModel,
    pub sigma: CdgaMorphism,
    pub sigma_tilde: CdgaMorphism,
    pub weights: WeightDecomposition,
    pub splitting: WeightSplitting,
    pub quotient: FormalityQuotient,
    pub projection: QuotientProjection,
    pub checks: QuotientChecks,
    pub model_quasi_iso: Vec<(u32, bool)>,
}

#[derive(Clone, Debug)]
pub struct NonformalWitness {
    /// `(degree, index)` of each class in the cohomology basis of the input.
    pub classes: [(u32, usize); 3],
    pub representatives: [Polynomial; 3],
    pub coset: MasseyCoset,
}

#[derive(Clone, Debug)]
pub struct FormalityCertificate {
    pub verdict: Verdict,
    pub q: Rational,
    pub truncation: u32,
    pub stages: Vec<StageRecord>,
    pub formal: Option<FormalWitness>,
    pub nonformal: Option<NonformalWitness>,
    /// Hypotheses of the criterion that are not verified by the engine.
    pub unchecked_hypotheses: Vec<String>,
}

/// Weights, splitting, quotient and projection checks for a given lift.
/// Deterministic, no search; shared by the pipeline and the re-checker.
pub fn certify_from_lift(
    mm: &MinimalModel,
    sigma: &CdgaMorphism,
    sigma_tilde: &CdgaMorphism,
    q: &Rational,
    max_weight: Option<u32>,
) -> Result<FormalWitness> {
    let model_quasi_iso = mm.quasi_iso_transcript();
    if let Some((n, _)) = model_quasi_iso.iter().find(|(_, ok)| !ok) {
        return Err(Error::NotChainMap(format!("model map is not a quasi-isomorphism in degree {n}")));
    }
    let weights = weight_decompose_model(mm, sigma_tilde, q, max_weight)?;
    let splitting = build_splitting(&mm.model, &weights)?;
    let quotient = formality_quotient(&mm.model, &weights, &splitting);
    let projection = QuotientProjection::from_quotient(&quotient);
    let checks = check_projection(&quotient, &projection);
    if !checks.all_pass() {
        return Err(Error::SplittingInvariantFailed("quotient projection failed its checks".into()));
    }
    Ok(FormalWitness {
        model: mm.clone(),
        sigma: sigma.clone(),
        sigma_tilde: sigma_tilde.clone(),
        weights,
        splitting,
        quotient,
        projection,
        checks,
        model_quasi_iso,
    })
}

/// Scans triples of cohomology basis classes of positive degree in
/// lexicographic order and returns the first Massey coset not containing zero.
pub fn scan_massey(a: &Cdga, truncation: u32) -> Option<NonformalWitness> {
    let mut classes: Vec<(u32, usize, Polynomial)> = Vec::new();
    for n in 1..truncation {
        for (k, r) in a.cohomology(n).representatives.into_iter().enumerate() {
            classes.push((n, k, r));
        }
    }
    for x in &classes {
        for y in &classes {
            for z in &classes {
                if x.0 + y.0 + z.0 > truncation {
                    continue;
                }
                let Ok(coset) = triple_massey(a, &x.2, &y.2, &z.2) else { continue };
                if !coset.contains_zero() {
                    return Some(NonformalWitness {
                        classes: [(x.0, x.1), (y.0, y.1), (z.0, z.1)],
                        representatives: [x.2.clone(), y.2.clone(), z.2.clone()],
                        coset,
                    });
                }
            }
        }
    }
    None
}

pub(crate) struct Transcript(pub(crate) Vec<StageRecord>);

impl Transcript {
    pub(crate) fn pass(&mut self, stage: &'static str, detail: impl Into<String>) {
        self.0.push(StageRecord {
            stage,
            status: StageStatus::Passed,
            detail: detail.into(),
            error: None,
        });
    }

    pub(crate) fn fail(&mut self, stage: &'static str, e: &Error) {
        self.0.push(StageRecord {
            stage,
            status: StageStatus::Failed,
            detail: e.to_string(),
            error: Some(e.code()),
        });
    }

    pub(crate) fn note(&mut self, stage: &'static str, status: StageStatus, detail: impl Into<String>) {
        self.0.push(StageRecord {
            stage,
            status,
            detail: detail.into(),
            error: None,
        });
    }
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Overrides the default weight bound `N · (top cohomology degree)`.
    pub max_weight: Option<u32>,
}

fn formal_branch(
    a: &Arc<Cdga>,
    q: &Rational,
    truncation: u32,
    sigma: Option<&CdgaMorphism>,
    opts: &PipelineOptions,
    t: &mut Transcript,
) -> Option<FormalWitness> {
    let sigma = match sigma {
        Some(s) => match is_grading_lift(a, s, q, truncation) {
            Ok(r) if r.holds() => {
                t.pass("lift", "user-supplied automorphism lifts φ_q");
                s.clone()
            }
            Ok(r) => {
                let e = Error::NotGradingLift(format!(
                    "H^{}(σ) is not q^{} times the identity",
                    r.first_failure().unwrap_or(0),
                    r.first_failure().unwrap_or(0)
                ));
                t.fail("lift", &e);
                return None;
            }
            Err(e) => {
                t.fail("lift", &e);
                return None;
            }
        },
        None => match search_diagonal_lift(a, q, truncation) {
            Some(s) => {
                t.pass("lift", "diagonal lift search found a lift of φ_q");
                s
            }
            None => {
                t.note("lift", StageStatus::Failed, "diagonal lift search exhausted");
                return None;
            }
        },
    };
    let mm = if verify_minimal(a) {
        t.pass("minimal_model", "input is already minimal");
        MinimalModel::identity_of(a.clone())
    } else {
        match minimal_model::construct(a, truncation) {
            Ok(mm) => {
                t.pass(
                    "minimal_model",
                    format!("{} generators constructed", mm.model.generators().len()),
                );
                mm
            }
            Err(e) => {
                t.fail("minimal_model", &e);
                return None;
            }
        }
    };
    let lift = match lift_endomorphism(&mm, &sigma) {
        Ok(l) => {
            t.pass("lift_to_model", "σ̃ constructed with verified homotopy");
            l
        }
        Err(e) => {
            t.fail("lift_to_model", &e);
            return None;
        }
    };
    match certify_from_lift(&mm, &sigma, &lift.sigma_tilde, q, opts.max_weight) {
        Ok(w) => {
            t.pass("weights", "all eigenvalues are q^j with j >= i");
            t.pass("splitting", "M = 𝕴 ⊕ S, dS = 0, 𝕴 is an ideal");
            t.pass("quotient", format!("dims {:?}", w.quotient.dims()));
            t.pass("quasi_iso", "projection is a quasi-isomorphism in every degree below N");
            Some(w)
        }
        Err(e) => {
            let stage = match e {
                Error::WeightBelowDegree(_) | Error::NotWeightDiagonalizable(_) => "weights",
                Error::SplittingInvariantFailed(_) => "splitting",
                _ => "quasi_iso",
            };
            t.fail(stage, &e);
            None
        }
    }
}

/// Runs the formal branch (lift, model, weights, splitting, quotient) and, if
/// it does not certify, scans triple Massey products for a non-formality
/// witness. Component failures are recorded in the transcript.
pub fn run_pipeline(
    a: &Arc<Cdga>,
    q: &Rational,
    truncation: u32,
    sigma: Option<&CdgaMorphism>,
    opts: &PipelineOptions,
) -> Result<FormalityCertificate> {
    check_non_root_of_unity(q)?;
    if truncation < 2 {
        return Err(Error::TruncationTooSmall(format!("N = {truncation}, need N >= 2")));
    }
    let a = if a.truncation() == truncation {
        a.clone()
    } else {
        Arc::new(a.with_truncation(truncation))
    };
    let sigma = match sigma {
        Some(s) => {
            if **s.source() != *a || **s.target() != *a {
                return Err(Error::InvalidInput("sigma must be a self-map of the input".into()));
            }
            Some(CdgaMorphism::new(a.clone(), a.clone(), s.images().to_vec())?)
        }
        None => None,
    };
    let mut t = Transcript(Vec::new());
    let unchecked_hypotheses = if verify_minimal(&a) && a.cohomology(1).dim() > 0 {
        vec!["nilpotency of the minimal input is assumed, not checked".to_string()]
    } else {
        Vec::new()
    };
    if let Some(w) = formal_branch(&a, q, truncation, sigma.as_ref(), opts, &mut t) {
        t.note("massey", StageStatus::Skipped, "formal certificate found");
        return Ok(FormalityCertificate {
            verdict: Verdict::FormalCertified,
            q: q.clone(),
            truncation,
            stages: t.0,
            formal: Some(w),
            nonformal: None,
            unchecked_hypotheses,
        });
    }
    let nonformal = scan_massey(&a, truncation);
    let verdict = match &nonformal {
        Some(w) => {
            t.pass(
                "massey",
                format!("triple {:?} has a coset excluding zero in degree {}", w.classes, w.coset.degree),
            );
            Verdict::NonformalCertified
        }
        None => {
            t.note("massey", StageStatus::Failed, "every defined triple Massey coset contains zero");
            Verdict::Inconclusive
        }
    };
    Ok(FormalityCertificate {
        verdict,
        q: q.clone(),
        truncation,
        stages: t.0,
        formal: None,
        nonformal,
        unchecked_hypotheses,
    })
}

impl FormalityCertificate {
    /// Re-verifies the embedded witness without any search.
    pub fn recheck(&self, a: &Cdga) -> bool {
        match self.verdict {
            Verdict::FormalCertified => self.formal.as_ref().is_some_and(|w| recheck_formal(w, &self.q)),
            Verdict::NonformalCertified => self.nonformal.as_ref().is_some_and(|w| recheck_nonformal(a, w)),
            Verdict::Inconclusive => true,
        }
    }
}

/// Checks the weight data against `σ̃` directly, then rebuilds the quotient
/// from it and compares with the embedded projection.
pub fn recheck_formal(w: &FormalWitness, q: &Rational) -> bool {
    let model = &w.model.model;
    if !verify_minimal(model) || w.model.quasi_iso_transcript().iter().any(|(_, ok)| !ok) {
        return false;
    }
    for d in &w.weights.degrees {
        let m = w.sigma_tilde.matrix_in_degree(d.degree);
        let mut total = 0;
        for (j, s) in &d.parts {
            if *j < d.degree {
                return false;
            }
            let scalar = pow(q, *j as i64);
            if s.vectors().iter().any(|v| m.mul_vec(v) != v.iter().map(|x| x * &scalar).collect::<Vector>()) {
                return false;
            }
            total += s.dim();
        }
        if total != d.basis.len() {
            return false;
        }
    }
    let Ok(splitting) = build_splitting(model, &w.weights) else { return false };
    let quotient = formality_quotient(model, &w.weights, &splitting);
    let checks = check_projection(&quotient, &w.projection);
    checks.all_pass() && quotient == w.quotient
}

pub fn recheck_nonformal(a: &Cdga, w: &NonformalWitness) -> bool {
    let [x, y, z] = &w.representatives;
    match triple_massey(a, x, y, z) {
        Ok(c) => !c.contains_zero() && c == w.coset,
        Err(_) => false,
    }
}

/// Solves for class coordinates of a cocycle of `A` pulled back to the model's
/// quotient: used to compare `Q` with the cup product of `H(A)`.
pub fn quotient_class_in_source(w: &FormalWitness, n: u32, coords: &[Rational]) -> Option<Vector> {
    let rep = w.quotient.rep(n, coords);
    let image = w.model.quasi_iso.apply(&rep);
    w.model.source().cohomology(n).class_of(&image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::GeneratorSet;
    use crate::grading::GradingData;
    use crate::rational::int;

    fn cdga(pairs: &[(&str, u32)], diffs: &[&str], n: u32) -> Arc<Cdga> {
        let gens = GeneratorSet::from_pairs(pairs).unwrap();
        let d = diffs
            .iter()
            .map(|s| crate::gca::parse_polynomial(&gens, s).unwrap())
            .collect();
        Arc::new(Cdga::new(gens, d, n).unwrap())
    }

    fn sphere2() -> Arc<Cdga> {
        cdga(&[("e2", 2), ("e3", 3)], &["0", "e2^2"], 6)
    }

    fn heisenberg() -> Arc<Cdga> {
        cdga(&[("x", 1), ("y", 1), ("z", 1)], &["0", "0", "x*y"], 4)
    }

    fn sphere_witness() -> FormalWitness {
        let c = run_pipeline(&sphere2(), &int(2), 6, None, &PipelineOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::FormalCertified);
        c.formal.unwrap()
    }

    #[test]
    fn sphere_splitting_and_quotient() {
        let w = sphere_witness();
        let s = &w.splitting;
        assert_eq!(s.degree(0).surface.dim(), 1);
        assert_eq!(s.degree(2).surface.dim(), 1);
        assert_eq!(s.degree(3).ideal.dim(), 1);
        assert_eq!(s.degree(4).surface.dim(), 1);
        assert_eq!(s.degree(5).ideal.dim(), 1);
        assert_eq!(w.quotient.dims(), vec![1, 0, 1, 0, 0, 0]);
        assert_eq!(
            w.projection.formatted_images(&w.quotient),
            vec![("e2".to_string(), "e2".to_string()), ("e3".to_string(), "0".to_string())]
        );
        assert!(w.checks.quasi_iso.iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn corrupted_projection_fails_in_degree_two() {
        let w = sphere_witness();
        let mut bad = w.projection.clone();
        bad.generator_images[0] = vec![int(0)];
        let qi = verify_quasi_iso(&w.quotient, &bad);
        assert!(!qi[2].1);
        assert!(qi[0].1 && qi[1].1);
    }

    #[test]
    fn zero_differential_quotient_is_identity() {
        let a = cdga(&[("u", 2), ("w", 1), ("t", 1)], &["0", "0", "0"], 5);
        let c = run_pipeline(&a, &int(3), 5, None, &PipelineOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::FormalCertified);
        let w = c.formal.as_ref().unwrap();
        for n in 0..5 {
            assert_eq!(w.quotient.dim(n), a.monomial_basis(n).len());
            assert_eq!(w.splitting.degree(n).ideal.dim(), 0);
        }
        assert!(c.recheck(&a));
    }

    #[test]
    fn padded_pair_maps_to_zero() {
        let a = cdga(&[("e2", 2), ("e3", 3), ("u", 4), ("v", 3)], &["0", "e2^2", "0", "u"], 6);
        let c = run_pipeline(&a, &int(2), 6, None, &PipelineOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::FormalCertified);
        let w = c.formal.as_ref().unwrap();
        assert_eq!(w.model.model.generators().len(), 2);
        assert_eq!(w.quotient.dims(), vec![1, 0, 1, 0, 0, 0]);
        assert!(c.recheck(&a));
    }

    #[test]
    fn heisenberg_is_nonformal() {
        let h = heisenberg();
        let c = run_pipeline(&h, &int(2), 4, None, &PipelineOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::NonformalCertified);
        let w = c.nonformal.as_ref().unwrap();
        assert_eq!(w.classes, [(1, 0), (1, 0), (1, 1)]);
        assert!(!w.coset.contains_zero());
        assert!(c.recheck(&h));
        assert_eq!(c.unchecked_hypotheses.len(), 1);
    }

    #[test]
    fn failing_user_sigma_is_recorded() {
        let s = sphere2();
        let id = CdgaMorphism::identity(s.clone());
        let c = run_pipeline(&s, &int(2), 6, Some(&id), &PipelineOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.stages[0].error, Some("NOT_GRADING_LIFT"));
    }

    #[test]
    fn user_sigma_accepted() {
        let s = sphere2();
        let sigma = CdgaMorphism::new(s.clone(), s.clone(), vec![s.parse("9 e2").unwrap(), s.parse("81 e3").unwrap()]).unwrap();
        let c = run_pipeline(&s, &int(3), 6, Some(&sigma), &PipelineOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::FormalCertified);
    }

    #[test]
    fn weight_bound_too_small_is_reported() {
        let s = sphere2();
        let opts = PipelineOptions { max_weight: Some(3) };
        let c = run_pipeline(&s, &int(2), 6, None, &opts).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.stages.iter().any(|r| r.error == Some("NOT_WEIGHT_DIAGONALIZABLE")));
    }

    #[test]
    fn quotient_product_matches_cup_product() {
        let a = cdga(&[("a", 2), ("b", 2), ("c", 3), ("u", 4), ("v", 3)], &["0", "0", "a*b", "0", "u"], 7);
        let c = run_pipeline(&a, &int(2), 7, None, &PipelineOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::FormalCertified);
        let w = c.formal.unwrap();
        for n1 in 0..7u32 {
            for n2 in 0..7 - n1 {
                for k1 in 0..w.quotient.dim(n1) {
                    for k2 in 0..w.quotient.dim(n2) {
                        let mut e1 = vec![int(0); w.quotient.dim(n1)];
                        e1[k1] = int(1);
                        let mut e2 = vec![int(0); w.quotient.dim(n2)];
                        e2[k2] = int(1);
                        let prod = w.quotient.multiply(n1, &e1, n2, &e2).unwrap();
                        let lhs = quotient_class_in_source(&w, n1 + n2, &prod).unwrap();
                        let x = w.model.quasi_iso.apply(&w.quotient.rep(n1, &e1));
                        let y = w.model.quasi_iso.apply(&w.quotient.rep(n2, &e2));
                        let rhs = a.cohomology(n1 + n2).class_of(&a.multiply(&x, &y)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn grading_data_matches_pipeline_lift() {
        let a = cdga(&[("u", 2), ("w", 1)], &["0", "0"], 5);
        let phi = GradingData::new(int(-2)).unwrap().automorphism(a.clone()).unwrap();
        let c = run_pipeline(&a, &int(-2), 5, Some(&phi), &PipelineOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::FormalCertified);
    }
}
