//! Sullivan minimal models of simply connected cdgas, built degree by degree,
//! and lifting of endomorphisms along the model map.
//!
//! In degree `n` the construction first adjoins closed generators hitting the
//! cokernel of `H^n(p)`, then adjoins degree `n` generators whose differentials
//! kill the kernel of `H^{n+1}(p)`. With no degree-1 generators neither step
//! changes the model in degree `n + 1`, so one pass per degree suffices.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{self, complement_in, image_basis, kernel_basis, Matrix, SubspaceBasis, Vector};
use crate::gca::{Cdga, CdgaMorphism, Generator, GeneratorSet, Monomial, Polynomial};
use crate::rational::{sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorRole {
    /// Closed generator representing a new cohomology class of the source.
    Cohomology,
    /// Generator whose differential kills a class in the kernel of `H(p)`.
    Obstruction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub degree: u32,
    pub role: GeneratorRole,
    pub generator: String,
    pub differential: String,
    pub image: String,
}

#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub model: Arc<Cdga>,
    pub quasi_iso: CdgaMorphism,
    pub construction_log: Vec<LogEntry>,
}

impl MinimalModel {
    /// For inputs that are already minimal: the model is the input itself.
    pub fn identity_of(a: Arc<Cdga>) -> Self {
        MinimalModel {
            model: a.clone(),
            quasi_iso: CdgaMorphism::identity(a),
            construction_log: Vec::new(),
        }
    }

    pub fn source(&self) -> &Arc<Cdga> {
        self.quasi_iso.target()
    }

    /// Number of model generators per degree `0..=max_degree`.
    pub fn generator_counts(&self, max_degree: u32) -> Vec<usize> {
        let gens = self.model.generators();
        (0..=max_degree)
            .map(|d| gens.generators().iter().filter(|g| g.degree == d).count())
            .collect()
    }

    /// Per-degree flags: `H^n(p)` is an isomorphism for `n <= N - 1`.
    pub fn quasi_iso_transcript(&self) -> Vec<(u32, bool)> {
        quasi_iso_transcript(&self.quasi_iso, self.model.truncation())
    }
}

/// `H^n(f)` is square and invertible, for every `0 <= n <= truncation - 1`.
pub fn quasi_iso_transcript(f: &CdgaMorphism, truncation: u32) -> Vec<(u32, bool)> {
    (0..truncation)
        .map(|n| {
            let m = f.induced_on_cohomology(n);
            (n, m.is_square() && (m.rows() == 0 || !m.determinant().is_zero()))
        })
        .collect()
}

/// True iff every generator's differential lies in the decomposables.
pub fn verify_minimal(m: &Cdga) -> bool {
    m.differentials().iter().all(Polynomial::is_decomposable)
}

fn pad(p: &Polynomial, len: usize) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut e = m.0.clone();
        e.resize(len, 0);
        out.add_term(Monomial(e), c.clone());
    }
    out
}

struct Builder {
    source: Arc<Cdga>,
    truncation: u32,
    gens: Vec<Generator>,
    diffs: Vec<Polynomial>,
    images: Vec<Polynomial>,
    log: Vec<LogEntry>,
}

impl Builder {
    fn current(&self) -> Result<(Arc<Cdga>, CdgaMorphism)> {
        let gens = GeneratorSet::new(self.gens.clone())?;
        let n = gens.len();
        let diffs = self.diffs.iter().map(|d| pad(d, n)).collect();
        let model = Arc::new(Cdga::new(gens, diffs, self.truncation)?);
        let p = CdgaMorphism::new(model.clone(), self.source.clone(), self.images.clone())?;
        Ok((model, p))
    }

    fn add(&mut self, degree: u32, role: GeneratorRole, differential: Polynomial, image: Polynomial, model: &Cdga) {
        let k = self.gens.iter().filter(|g| g.degree == degree).count() + 1;
        let name = format!("m{degree}_{k}");
        self.log.push(LogEntry {
            degree,
            role,
            generator: name.clone(),
            differential: model.format(&differential),
            image: self.source.format(&image),
        });
        self.gens.push(Generator { name, degree });
        self.diffs.push(differential);
        self.images.push(image);
    }
}

/// Matrix of `H^n(p)` in representative bases (columns: source classes).
fn cohomology_matrix(p: &CdgaMorphism, n: u32) -> Matrix {
    p.induced_on_cohomology(n)
}

/// Builds the minimal model of a simply connected cdga through degree `N - 1`.
pub fn construct(a: &Arc<Cdga>, truncation: u32) -> Result<MinimalModel> {
    if truncation < 2 {
        return Err(Error::TruncationTooSmall(format!("N = {truncation}, need N >= 2")));
    }
    let h1 = a.cohomology(1);
    if h1.dim() != 0 {
        return Err(Error::NotSimplyConnected(format!("H^1 has dimension {}", h1.dim())));
    }
    let mut b = Builder {
        source: a.clone(),
        truncation,
        gens: Vec::new(),
        diffs: Vec::new(),
        images: Vec::new(),
        log: Vec::new(),
    };
    for n in 2..truncation {
        // New cohomology.
        let (model, p) = b.current()?;
        let ha = a.cohomology(n);
        let pm = cohomology_matrix(&p, n);
        let im = if pm.cols() == 0 {
            SubspaceBasis::empty(ha.dim())
        } else {
            image_basis(&pm)
        };
        let coker = complement_in(&im, &SubspaceBasis::full(ha.dim()));
        for v in coker.vectors() {
            let image = ha.cocycle_from_class(v);
            b.add(n, GeneratorRole::Cohomology, Polynomial::zero(), image, &model);
        }

        // Kill the kernel one degree up.
        let (model, p) = b.current()?;
        let hm = model.cohomology(n + 1);
        let pm = cohomology_matrix(&p, n + 1);
        let ker = if hm.dim() == 0 {
            SubspaceBasis::empty(0)
        } else {
            kernel_basis(&pm)
        };
        for c in ker.vectors() {
            let z = hm.cocycle_from_class(c);
            let pz = p.apply(&z);
            let preimage = a.preimage(&pz, n + 1).ok_or_else(|| {
                Error::LiftObstructed(format!("class in degree {} is not exact in the source", n + 1))
            })?;
            b.add(n, GeneratorRole::Obstruction, z, preimage, &model);
        }
    }
    let (model, p) = b.current()?;
    let mm = MinimalModel {
        model,
        quasi_iso: p,
        construction_log: b.log,
    };
    debug_assert!(verify_minimal(&mm.model));
    if let Some((n, _)) = mm.quasi_iso_transcript().into_iter().find(|(_, ok)| !ok) {
        return Err(Error::TruncationTooSmall(format!(
            "model map fails to be a quasi-isomorphism in degree {n}"
        )));
    }
    Ok(mm)
}

/// A lift `σ̃` of a source endomorphism with the homotopy `h: M -> A`
/// witnessing `p∘σ̃ ≃ σ∘p`.
///
/// `h` is stored on generators and extended to products as an
/// `(f, g)`-derivation with `f = p∘σ̃`, `g = σ∘p`:
/// `h(ab) = h(a) g(b) + (-1)^{|a|} f(a) h(b)`.
#[derive(Clone, Debug)]
pub struct Lift {
    pub sigma_tilde: CdgaMorphism,
    pub homotopy: Vec<Polynomial>,
}

pub(crate) fn apply_images(target: &Cdga, images: &[Polynomial], p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut term = target.generators().one().scale(c);
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                term = target.multiply(&term, &images[i]);
            }
        }
        out = out.add(&term);
    }
    out
}

/// Extends generator values `h` to `p` as an `(f, g)`-derivation into `target`.
pub fn extend_homotopy(
    model: &Cdga,
    target: &Cdga,
    f: &[Polynomial],
    g: &[Polynomial],
    h: &[Polynomial],
    p: &Polynomial,
) -> Polynomial {
    let gens = model.generators();
    let n = gens.len();
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut prefix = Monomial::unit(n);
        let mut prefix_degree = 0u32;
        for i in 0..n {
            for _ in 0..m.0[i] {
                let mut suffix = m.clone();
                for (j, e) in suffix.0.iter_mut().enumerate() {
                    *e -= prefix.0[j];
                }
                suffix.0[i] -= 1;
                if !h[i].is_zero() {
                    let one = Rational::one();
                    let left = apply_images(target, f, &Polynomial::monomial(prefix.clone(), one.clone()));
                    let right = apply_images(target, g, &Polynomial::monomial(suffix, one));
                    let term = target.multiply(&target.multiply(&left, &h[i]), &right);
                    out = out.add(&term.scale(&(sign(prefix_degree % 2 == 1) * c)));
                }
                prefix.0[i] += 1;
                prefix_degree += gens.degree_of(i);
            }
        }
    }
    out
}

impl Lift {
    /// Checks `p∘σ̃ - σ∘p = d∘h + h∘d` on `p` (a polynomial in the model).
    pub fn homotopy_identity_holds(&self, mm: &MinimalModel, sigma: &CdgaMorphism, p: &Polynomial) -> bool {
        let (f, g) = self.end_maps(mm, sigma);
        let a = mm.source();
        let lhs = apply_images(a, &f, p).sub(&apply_images(a, &g, p));
        let rhs = a
            .differential(&extend_homotopy(&mm.model, a, &f, &g, &self.homotopy, p))
            .add(&extend_homotopy(&mm.model, a, &f, &g, &self.homotopy, &mm.model.differential(p)));
        lhs == rhs
    }

    fn end_maps(&self, mm: &MinimalModel, sigma: &CdgaMorphism) -> (Vec<Polynomial>, Vec<Polynomial>) {
        let f = self
            .sigma_tilde
            .images()
            .iter()
            .map(|x| mm.quasi_iso.apply(x))
            .collect();
        let g = mm.quasi_iso.images().iter().map(|x| sigma.apply(x)).collect();
        (f, g)
    }

    /// The identity checked generator by generator; by the derivation rule this
    /// implies it everywhere.
    pub fn verify(&self, mm: &MinimalModel, sigma: &CdgaMorphism) -> bool {
        (0..mm.model.generators().len())
            .all(|i| self.homotopy_identity_holds(mm, sigma, &mm.model.generators().generator_poly(i)))
    }
}

/// Lifts a chain self-map `σ` of the source to the model, generator by
/// generator in degree order, solving the obstruction equations with the
/// deterministic `solve` convention.
pub fn lift_endomorphism(mm: &MinimalModel, sigma: &CdgaMorphism) -> Result<Lift> {
    let a = mm.source();
    if sigma.source() != a || sigma.target() != a {
        return Err(Error::InvalidInput("sigma must be a self-map of the model's source".into()));
    }
    let m = &mm.model;
    let ngen = m.generators().len();
    if mm.quasi_iso.is_identity() {
        return Ok(Lift {
            sigma_tilde: sigma.clone(),
            homotopy: vec![Polynomial::zero(); ngen],
        });
    }
    let p = &mm.quasi_iso;
    let mut st: Vec<Polynomial> = vec![Polynomial::zero(); ngen];
    let mut h: Vec<Polynomial> = vec![Polynomial::zero(); ngen];
    for w in 0..ngen {
        let n = m.generators().degree_of(w);
        let dw = m.generator_differential(w);
        let x = apply_images(m, &st, dw);
        let m0 = m.preimage(&x, n + 1).ok_or_else(|| {
            Error::LiftObstructed(format!(
                "σ̃(d {}) is not exact in the model; raise the truncation",
                m.generators().generators()[w].name
            ))
        })?;
        let f: Vec<Polynomial> = st.iter().map(|s| p.apply(s)).collect();
        let g: Vec<Polynomial> = p.images().iter().map(|s| sigma.apply(s)).collect();
        let y = sigma
            .apply(&p.images()[w])
            .add(&extend_homotopy(m, a, &f, &g, &h, dw));
        let z = p.apply(&m0).sub(&y);
        let ha = a.cohomology(n);
        let hm = m.cohomology(n);
        let t = ha
            .class_of(&z)
            .ok_or_else(|| Error::LiftObstructed("correction term is not a cocycle".into()))?;
        let neg_t: Vector = t.iter().map(|c| -c.clone()).collect();
        let correction = if hm.dim() == 0 {
            if neg_t.iter().any(|c| !c.is_zero()) {
                return Err(Error::LiftObstructed(format!("H^{n}(p) is not surjective")));
            }
            Polynomial::zero()
        } else {
            let s = exactlin::solve(&cohomology_matrix(p, n), &neg_t)
                .ok_or_else(|| Error::LiftObstructed(format!("H^{n}(p) is not surjective")))?;
            hm.cocycle_from_class(&s)
        };
        let value = m0.add(&correction);
        let residue = p.apply(&value).sub(&y);
        h[w] = a
            .preimage(&residue, n)
            .ok_or_else(|| Error::LiftObstructed(format!("homotopy equation unsolvable in degree {n}")))?;
        st[w] = value;
    }
    let sigma_tilde = CdgaMorphism::new(m.clone(), m.clone(), st)?;
    let lift = Lift {
        sigma_tilde,
        homotopy: h,
    };
    if !lift.verify(mm, sigma) {
        return Err(Error::LiftObstructed("homotopy identity failed on a generator".into()));
    }
    Ok(lift)
}
