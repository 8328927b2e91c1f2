//! Morphisms of presented dg operads, given on generators.

use std::sync::Arc;

use num_traits::One;

use super::{is_zero_vec, DgOperad, OpCohomology, Symmetry, TreePoly};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Vector};
use crate::operad::tree::{act_poly, substitute};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct OperadMorphism {
    source: Arc<DgOperad>,
    target: Arc<DgOperad>,
    images: Vec<TreePoly>,
}

impl OperadMorphism {
    /// Checks degree, arity, symmetry of images, compatibility with the
    /// relations of the source and the chain-map identity on generators.
    pub fn new(source: Arc<DgOperad>, target: Arc<DgOperad>, images: Vec<TreePoly>) -> Result<Self> {
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} generator images, got {}",
                gens.len(),
                images.len()
            )));
        }
        let mut normal = Vec::with_capacity(images.len());
        for (g, img) in gens.iter().zip(&images) {
            if let Some((n, c)) = img.homogeneous(target.generators()) {
                if n != g.arity || c != g.degree {
                    return Err(Error::InvalidInput(format!(
                        "image of {} has arity {n} and degree {}, expected {} and {}",
                        g.name,
                        target.convention().display(c),
                        g.arity,
                        source.convention().display(g.degree)
                    )));
                }
            } else if !img.is_zero() {
                return Err(Error::InvalidInput(format!("image of {} is not homogeneous", g.name)));
            }
            normal.push(if g.arity <= target.max_arity() { target.normal_form(img)? } else { img.clone() });
        }
        let f = OperadMorphism { source, target, images: normal };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        let gens = self.source.generators();
        let tg = self.target.generators();
        for (g, gen) in gens.iter().enumerate() {
            if gen.arity > self.target.max_arity() || gen.symmetry == Symmetry::Regular {
                continue;
            }
            for i in 0..gen.arity - 1 {
                let mut perm: Vec<usize> = (0..gen.arity).collect();
                perm.swap(i, i + 1);
                let moved = act_poly(tg, &self.images[g], &perm);
                let expect = if gen.symmetry == Symmetry::Sign {
                    self.images[g].scale(&-Rational::one())
                } else {
                    self.images[g].clone()
                };
                let diff = moved.add(&expect.scale(&-Rational::one()));
                if !is_zero_vec(&self.target.reduce_poly(&diff)?.1) {
                    return Err(Error::InvalidInput(format!(
                        "image of {} does not have its {} symmetry",
                        gen.name,
                        gen.symmetry.name()
                    )));
                }
            }
        }
        for (k, r) in self.source.relations().iter().enumerate() {
            let fr = self.apply_free(r);
            if !is_zero_vec(&self.target.reduce_poly(&fr)?.1) {
                return Err(Error::InvalidInput(format!(
                    "relation {} ({}) is not sent into the relations of the target",
                    k + 1,
                    self.source.format(r)
                )));
            }
        }
        for (g, gen) in gens.iter().enumerate() {
            if gen.arity > self.target.max_arity() {
                continue;
            }
            let lhs = self.target.diff_poly(&self.images[g]);
            let rhs = self.apply_free(self.source.differential_of(g));
            let diff = lhs.add(&rhs.scale(&-Rational::one()));
            if !is_zero_vec(&self.target.reduce_poly(&diff)?.1) {
                return Err(Error::NotChainMap(format!("d f({0}) != f(d {0})", gen.name)));
            }
        }
        Ok(())
    }

    pub fn identity(p: Arc<DgOperad>) -> Self {
        let images = (0..p.generators().len()).map(|g| p.corolla(g).clone()).collect();
        OperadMorphism { source: p.clone(), target: p, images }
    }

    pub fn source(&self) -> &Arc<DgOperad> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgOperad> {
        &self.target
    }

    pub fn images(&self) -> &[TreePoly] {
        &self.images
    }

    /// Image before reduction modulo the target's relations.
    fn apply_free(&self, p: &TreePoly) -> TreePoly {
        let mut out = TreePoly::zero();
        for (t, c) in p.iter() {
            let imgs: Vec<&TreePoly> = t.vertices().iter().map(|&g| &self.images[g]).collect();
            out = out.add(&substitute(self.target.generators(), t, &imgs).scale(c));
        }
        out
    }

    /// Image in normal form.
    pub fn apply(&self, p: &TreePoly) -> Result<TreePoly> {
        self.target.normal_form(&self.apply_free(p))
    }

    /// Matrix from source component `(n, c)` to target component `(n, c)`.
    pub fn matrix(&self, n: usize, c: i32) -> Matrix {
        let rows = self.target.dim(n, c);
        let cols: Vec<Vector> = match self.source.component(n, c) {
            Some(comp) => comp
                .normal_trees()
                .map(|t| {
                    let img = self.apply_free(&TreePoly::term(t.clone(), Rational::one()));
                    self.target.coords(n, c, &img)
                })
                .map(|v| if rows == 0 { Vec::new() } else { v })
                .collect(),
            None => Vec::new(),
        };
        Matrix::from_columns(rows, &cols)
    }

    /// Induced map on cohomology classes of `(n, c)`.
    pub fn on_cohomology(&self, n: usize, c: i32) -> Matrix {
        let hs = self.source.cohomology(n, c);
        let ht = self.target.cohomology(n, c);
        self.on_classes(&hs, &ht)
    }

    pub(crate) fn on_classes(&self, hs: &OpCohomology, ht: &OpCohomology) -> Matrix {
        let m = self.matrix(hs.arity, hs.degree);
        let cols: Vec<Vector> = hs
            .representatives
            .iter()
            .map(|r| ht.class_of(&m.mul_vec(r)).expect("a chain map sends cocycles to cocycles"))
            .collect();
        Matrix::from_columns(ht.dim(), &cols)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OperadMorphism) -> Result<OperadMorphism> {
        if !Arc::ptr_eq(&other.target, &self.source) && other.target.generators() != self.source.generators() {
            return Err(Error::InvalidInput("morphisms are not composable".into()));
        }
        let images = other.images.iter().map(|p| self.apply(p)).collect::<Result<Vec<_>>>()?;
        OperadMorphism::new(other.source.clone(), self.target.clone(), images)
    }

    /// Whether the map is bijective on every component in the window.
    pub fn is_automorphism(&self) -> bool {
        self.source.components().all(|comp| {
            let m = self.matrix(comp.arity, comp.degree);
            m.is_square() && m.rank() == m.rows()
        })
    }

    /// Checks `f(x·σ) = f(x)·σ` on every basis element of arity `n` and degree `c`.
    pub fn is_equivariant_on(&self, n: usize, c: i32) -> bool {
        let m = self.matrix(n, c);
        (0..n.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            let a = self.source.action_matrix(n, c, &perm);
            let b = self.target.action_matrix(n, c, &perm);
            m.mul(&a) == b.mul(&m)
        })
    }

    pub fn format_images(&self) -> Vec<(String, String)> {
        self.source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, p)| (g.name.clone(), self.target.format(p)))
            .collect()
    }
}
