use std::sync::Arc;

use super::{Cdga, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Vector};
use crate::rational::Rational;

/// An algebra map between free cdgas given by generator images, verified to
/// commute with the differentials at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaMorphism {
    source: Arc<Cdga>,
    target: Arc<Cdga>,
    images: Vec<Polynomial>,
}

impl CdgaMorphism {
    pub fn new(source: Arc<Cdga>, target: Arc<Cdga>, images: Vec<Polynomial>) -> Result<Self> {
        let gens = source.generators().clone();
        if images.len() != gens.len() {
            return Err(Error::NotChainMap(format!(
                "{} images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if img.terms().any(|(m, _)| m.0.len() != target.generators().len()) {
                return Err(Error::NotChainMap("image over the wrong generator set".into()));
            }
            if !img.is_zero() && target.generators().degree(img) != Some(gens.degree_of(i)) {
                return Err(Error::NotChainMap(format!(
                    "image of {} has the wrong degree",
                    gens.generators()[i].name
                )));
            }
        }
        let f = CdgaMorphism {
            source,
            target,
            images,
        };
        for i in 0..gens.len() {
            let lhs = f.apply(f.source.generator_differential(i));
            let rhs = f.target.differential(&f.images[i]);
            if lhs != rhs {
                return Err(Error::NotChainMap(format!(
                    "f(d {}) = {} but d f({}) = {}",
                    gens.generators()[i].name,
                    f.target.format(&lhs),
                    gens.generators()[i].name,
                    f.target.format(&rhs)
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(a: Arc<Cdga>) -> Self {
        let images = (0..a.generators().len()).map(|i| a.generators().generator_poly(i)).collect();
        CdgaMorphism {
            source: a.clone(),
            target: a,
            images,
        }
    }

    pub fn source(&self) -> &Arc<Cdga> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Cdga> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, p)| *p == self.source.generators().generator_poly(i))
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Polynomial {
        let mut out = self.target.generators().one();
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                out = self.target.multiply(&out, &self.images[i]);
                if out.is_zero() {
                    return out;
                }
            }
        }
        out
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out = out.add(&self.apply_monomial(m).scale(c));
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CdgaMorphism) -> Result<CdgaMorphism> {
        if other.target != self.source {
            return Err(Error::InvalidInput("morphisms are not composable".into()));
        }
        let images = other.images.iter().map(|p| self.apply(p)).collect();
        CdgaMorphism::new(other.source.clone(), self.target.clone(), images)
    }

    /// Matrix of the map `A^n -> B^n` in monomial bases.
    pub fn matrix_in_degree(&self, n: u32) -> Matrix {
        let src = self.source.monomial_basis(n);
        let tgt = self.target.monomial_basis(n);
        let cols: Vec<Vector> = src.iter().map(|m| self.apply_monomial(m).to_vector(&tgt)).collect();
        Matrix::from_columns(tgt.len(), &cols)
    }

    /// Matrix of `H^n(f)` in the representative bases of source and target.
    pub fn induced_on_cohomology(&self, n: u32) -> Matrix {
        let hs = self.source.cohomology(n);
        let ht = self.target.cohomology(n);
        let cols: Vec<Vector> = hs
            .representatives
            .iter()
            .map(|r| {
                ht.class_of(&self.apply(r))
                    .expect("chain maps send cocycles to cocycles")
            })
            .collect();
        Matrix::from_columns(ht.dim(), &cols)
    }

    pub fn format_images(&self) -> Vec<(String, String)> {
        self.source
            .generators()
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, p)| (g.name.clone(), self.target.format(p)))
            .collect()
    }

    /// Scales every image of degree `k` by `q^k`, i.e. precomposes with `φ_q`.
    pub fn grading_automorphism(a: Arc<Cdga>, q: &Rational) -> Result<Self> {
        let images = (0..a.generators().len())
            .map(|i| {
                a.generators()
                    .generator_poly(i)
                    .scale(&crate::rational::pow(q, a.generators().degree_of(i) as i64))
            })
            .collect();
        CdgaMorphism::new(a.clone(), a, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::GeneratorSet;
    use crate::rational::int;

    fn heisenberg() -> Arc<Cdga> {
        let gens = GeneratorSet::from_pairs(&[("x", 1), ("y", 1), ("z", 1)]).unwrap();
        let xy = crate::gca::parse_polynomial(&gens, "x*y").unwrap();
        Arc::new(Cdga::new(gens, vec![Polynomial::zero(), Polynomial::zero(), xy], 4).unwrap())
    }

    fn map(a: &Arc<Cdga>, imgs: &[&str]) -> Result<CdgaMorphism> {
        let images = imgs.iter().map(|s| a.parse(s).unwrap()).collect();
        CdgaMorphism::new(a.clone(), a.clone(), images)
    }

    #[test]
    fn identity_induces_identity() {
        let a = heisenberg();
        let id = CdgaMorphism::identity(a.clone());
        for n in 0..4 {
            let dim = a.cohomology(n).dim();
            assert_eq!(id.induced_on_cohomology(n), Matrix::identity(dim));
        }
    }

    #[test]
    fn heisenberg_scaling() {
        let a = heisenberg();
        let s = map(&a, &["2 x", "2 y", "4 z"]).unwrap();
        assert_eq!(s.induced_on_cohomology(1), Matrix::diagonal(&[int(2), int(2)]));
        assert_eq!(s.induced_on_cohomology(2), Matrix::diagonal(&[int(8), int(8)]));
    }

    #[test]
    fn rejects_non_chain_maps() {
        let a = heisenberg();
        assert!(matches!(map(&a, &["2 x", "2 y", "z"]), Err(Error::NotChainMap(_))));
        assert!(matches!(map(&a, &["x*y", "y", "z"]), Err(Error::NotChainMap(_))));
    }

    #[test]
    fn induced_maps_are_functorial() {
        let a = heisenberg();
        let f = map(&a, &["2 x", "3 y", "6 z"]).unwrap();
        let g = map(&a, &["x + y", "y", "z + 1/2 y"]).unwrap();
        let fg = f.compose(&g).unwrap();
        for n in 1..3 {
            assert_eq!(
                fg.induced_on_cohomology(n),
                f.induced_on_cohomology(n).mul(&g.induced_on_cohomology(n))
            );
        }
    }

    #[test]
    fn homotopic_maps_induce_the_same_map() {
        // Λ(e2, v3, u4) with dv = u.
        let gens = GeneratorSet::from_pairs(&[("e2", 2), ("v", 3), ("u", 4)]).unwrap();
        let p = |s: &str| crate::gca::parse_polynomial(&gens, s).unwrap();
        let a = Arc::new(Cdga::new(gens.clone(), vec![Polynomial::zero(), p("u"), Polynomial::zero()], 8).unwrap());
        // f differs from the identity by d∘h + h∘d with h(u) = v, h = 0 elsewhere
        // on generators: f(u) = u - d(v) = 0, f(v) = v - h(dv) = 0.
        let f = CdgaMorphism::new(a.clone(), a.clone(), vec![p("e2"), Polynomial::zero(), Polynomial::zero()]).unwrap();
        let id = CdgaMorphism::identity(a.clone());
        for n in 1..7 {
            let diff = f.induced_on_cohomology(n).sub(&id.induced_on_cohomology(n));
            assert!(diff.is_zero(), "degree {n}");
        }
    }
}
