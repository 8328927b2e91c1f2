//! Operadic minimal models, built arity by arity and, within an arity, degree
//! by degree.
//!
//! Each step adjoins a space of generators that is a module over the symmetric
//! group. Such a module is realized by regular generators (one per cyclic
//! vector) together with linear relations among their corollas; the relations
//! are the kernel of the map onto the module. Complements and sections are made
//! equivariant by averaging over the symmetric group.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::tree::{inverse_permutation, permutations, Tree};
use super::{is_zero_vec, DgOperad, OpGenerator, OperadMorphism, Symmetry, TreePoly};
use crate::error::{Error, Result};
use crate::exactlin::{complement_in, image_basis, independent_subset, kernel_basis, solve, Matrix, SubspaceBasis, Vector};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRole {
    /// Closed generators hitting new cohomology of the target.
    Cohomology,
    /// Generators whose differential kills a class in the kernel.
    Obstruction,
}

impl StepRole {
    pub fn name(self) -> &'static str {
        match self {
            StepRole::Cohomology => "cohomology",
            StepRole::Obstruction => "obstruction",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelStep {
    pub arity: usize,
    /// Internal (cohomological) degree of the new generators.
    pub degree: i32,
    pub role: StepRole,
    /// Indices of the regular generators added in this step.
    pub generators: Vec<usize>,
    /// Linear relations among their corollas.
    pub relations: Vec<TreePoly>,
    /// Dimension of the generator module.
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct OperadicMinimalModel {
    pub model: Arc<DgOperad>,
    pub quasi_iso: OperadMorphism,
    pub steps: Vec<ModelStep>,
}

impl OperadicMinimalModel {
    /// Dimension of the generating module per `(arity, display degree)`.
    pub fn generator_counts(&self) -> BTreeMap<(usize, i32), usize> {
        let conv = self.model.convention();
        let mut out = BTreeMap::new();
        if self.steps.is_empty() {
            for (g, gen) in self.model.generators().iter().enumerate() {
                let orbit = orbit_dim(&self.model, g);
                *out.entry((gen.arity, conv.display(gen.degree))).or_insert(0) += orbit;
            }
            return out;
        }
        for s in &self.steps {
            *out.entry((s.arity, conv.display(s.degree))).or_insert(0) += s.dim;
        }
        out
    }

    /// Whether every generator's differential consists of trees with at least two vertices.
    pub fn is_decomposable(&self) -> bool {
        (0..self.model.generators().len())
            .all(|g| self.model.differential_of(g).iter().all(|(t, _)| t.vertex_count() >= 2))
    }
}

fn orbit_dim(p: &DgOperad, g: usize) -> usize {
    let gen = &p.generators()[g];
    let n = gen.arity;
    let vecs: Vec<Vector> = permutations(n)
        .iter()
        .map(|s| p.coords(n, gen.degree, &super::act_poly(p.generators(), p.corolla(g), s)))
        .collect();
    independent_subset(p.dim(n, gen.degree), &vecs).dim()
}

/// All permutations of `0..n` with their action matrices and inverses.
pub(crate) struct Group {
    pub perms: Vec<Vec<usize>>,
    pub mats: Vec<Matrix>,
    pub inv: Vec<usize>,
}

impl Group {
    pub(crate) fn new(p: &DgOperad, n: usize, c: i32) -> Group {
        let perms = permutations(n);
        let mats = perms.iter().map(|s| p.action_matrix(n, c, s)).collect();
        let inv = perms
            .iter()
            .map(|s| {
                let i = inverse_permutation(s);
                perms.iter().position(|t| *t == i).unwrap()
            })
            .collect();
        Group { perms, mats, inv }
    }

    fn order(&self) -> Rational {
        int(self.perms.len() as i64)
    }
}

/// A complement of `u` inside `v` stable under the group (both assumed stable).
pub(crate) fn equivariant_complement(u: &SubspaceBasis, v: &SubspaceBasis, g: &Group) -> SubspaceBasis {
    let dim = v.ambient_dim();
    let c0 = complement_in(u, v);
    if c0.dim() == 0 {
        return c0;
    }
    let mut all = u.vectors().to_vec();
    all.extend(c0.vectors().iter().cloned());
    let basis = SubspaceBasis::new(dim, all.clone()).expect("u and its complement are independent");
    let k = u.dim();
    let proj = |x: &[Rational]| -> Vector {
        let co = basis.coordinates(x).expect("vector lies in v");
        let mut out = vec![Rational::zero(); dim];
        for (c, b) in co.iter().zip(u.vectors()).take(k) {
            for (o, y) in out.iter_mut().zip(b) {
                *o += c * y;
            }
        }
        out
    };
    let avg = |x: &[Rational]| -> Vector {
        let mut out = vec![Rational::zero(); dim];
        for (i, m) in g.mats.iter().enumerate() {
            let y = m.mul_vec(&proj(&g.mats[g.inv[i]].mul_vec(x)));
            for (o, z) in out.iter_mut().zip(y) {
                *o += z;
            }
        }
        let ord = g.order();
        out.into_iter().map(|z| z / &ord).collect()
    };
    let images: Vec<Vector> = all.iter().map(|b| avg(b)).collect();
    let ker = kernel_basis(&Matrix::from_columns(dim, &images));
    let vecs: Vec<Vector> = ker
        .vectors()
        .iter()
        .map(|a| {
            let mut out = vec![Rational::zero(); dim];
            for (c, b) in a.iter().zip(&all) {
                for (o, y) in out.iter_mut().zip(b) {
                    *o += c * y;
                }
            }
            out
        })
        .collect();
    let c = independent_subset(dim, &vecs);
    debug_assert_eq!(c.dim(), v.dim() - u.dim());
    c
}

/// Basis vectors of `c` that generate it as a module, chosen greedily.
fn cyclic_generators(c: &SubspaceBasis, g: &Group) -> Vec<Vector> {
    let mut chosen: Vec<Vector> = Vec::new();
    let mut span = SubspaceBasis::empty(c.ambient_dim());
    for w in c.vectors() {
        if span.contains(w) {
            continue;
        }
        chosen.push(w.clone());
        let mut orbit = span.vectors().to_vec();
        orbit.extend(g.mats.iter().map(|m| m.mul_vec(w)));
        span = independent_subset(c.ambient_dim(), &orbit);
        if span.dim() == c.dim() {
            break;
        }
    }
    chosen
}

struct Builder {
    source: Arc<DgOperad>,
    gens: Vec<OpGenerator>,
    relations: Vec<TreePoly>,
    differential: Vec<TreePoly>,
    images: Vec<TreePoly>,
    steps: Vec<ModelStep>,
    counters: BTreeMap<(usize, i32), usize>,
}

impl Builder {
    fn build(&self) -> Result<(Arc<DgOperad>, OperadMorphism)> {
        let m = Arc::new(DgOperad::new(
            self.gens.clone(),
            self.relations.clone(),
            self.differential.clone(),
            self.source.max_arity(),
            self.source.truncation(),
            self.source.convention(),
        )?);
        let f = OperadMorphism::new(m.clone(), self.source.clone(), self.images.clone())?;
        Ok((m, f))
    }

    fn name(&mut self, n: usize, c: i32) -> String {
        let d = self.source.convention().display(c);
        let k = self.counters.entry((n, d)).or_insert(0);
        *k += 1;
        let ds = if d < 0 { format!("n{}", -d) } else { d.to_string() };
        format!("g{n}_{ds}_{k}")
    }

    /// Adds one regular generator per cyclic vector, with relations making the
    /// span of their corollas isomorphic to the module spanned by `targets`
    /// under `g` (the action on the ambient space of `targets`).
    #[allow(clippy::too_many_arguments)]
    fn adjoin(
        &mut self,
        n: usize,
        c: i32,
        role: StepRole,
        cyclic: &[Vector],
        g: &Group,
        diffs: Vec<TreePoly>,
        images: Vec<TreePoly>,
        module_dim: usize,
    ) {
        let first = self.gens.len();
        for (dz, img) in diffs.into_iter().zip(images) {
            let name = self.name(n, c);
            self.gens.push(OpGenerator { name, arity: n, degree: c, symmetry: Symmetry::Regular });
            self.differential.push(dz);
            self.images.push(img);
        }
        let ambient = cyclic.first().map_or(0, Vec::len);
        let mut trees = Vec::new();
        let mut cols = Vec::new();
        for (k, w) in cyclic.iter().enumerate() {
            for (s, m) in g.perms.iter().zip(&g.mats) {
                trees.push(Tree::corolla(first + k, n).relabel(s));
                cols.push(m.mul_vec(w));
            }
        }
        let ker = kernel_basis(&Matrix::from_columns(ambient, &cols));
        let mut rels = Vec::new();
        for v in ker.vectors() {
            let mut p = TreePoly::zero();
            for (t, x) in trees.iter().zip(v) {
                p.add_term(t.clone(), x.clone());
            }
            rels.push(p);
        }
        self.relations.extend(rels.iter().cloned());
        self.steps.push(ModelStep {
            arity: n,
            degree: c,
            role,
            generators: (first..self.gens.len()).collect(),
            relations: rels,
            dim: module_dim,
        });
    }
}

/// Minimal model within the window of `p`. A free input whose differential is
/// already decomposable is its own model.
pub fn operadic_minimal_model(p: &Arc<DgOperad>) -> Result<OperadicMinimalModel> {
    if p.generators().iter().any(|g| g.arity < 2) {
        return Err(Error::HypothesisFailed("generators of arity 0 or 1".into()));
    }
    let minimal_already = p.is_free()
        && (0..p.generators().len()).all(|g| p.differential_of(g).iter().all(|(t, _)| t.vertex_count() >= 2));
    if minimal_already {
        return Ok(OperadicMinimalModel {
            model: p.clone(),
            quasi_iso: OperadMorphism::identity(p.clone()),
            steps: Vec::new(),
        });
    }
    let big_n = p.truncation() as i32;
    let mut b = Builder {
        source: p.clone(),
        gens: Vec::new(),
        relations: Vec::new(),
        differential: Vec::new(),
        images: Vec::new(),
        steps: Vec::new(),
        counters: BTreeMap::new(),
    };
    let (mut m, mut f) = b.build()?;
    for n in 2..=p.max_arity() {
        for c in -big_n..big_n {
            if c.abs() < big_n && cohomology_step(&mut b, &m, &f, n, c) {
                (m, f) = b.build()?;
            }
            if (c + 1).abs() < big_n && obstruction_step(&mut b, &m, &f, n, c) {
                (m, f) = b.build()?;
            }
        }
    }
    for n in 1..=p.max_arity() {
        for c in p.certified_degrees() {
            let h = f.on_cohomology(n, c);
            if !(h.is_square() && h.rank() == h.rows()) {
                return Err(Error::HypothesisFailed(format!(
                    "model map is not a quasi-isomorphism in arity {n}, degree {}",
                    p.convention().display(c)
                )));
            }
        }
    }
    let out = OperadicMinimalModel { model: m, quasi_iso: f, steps: b.steps };
    debug_assert!(out.is_decomposable());
    Ok(out)
}

fn cohomology_step(b: &mut Builder, m: &DgOperad, f: &OperadMorphism, n: usize, c: i32) -> bool {
    let p = b.source.clone();
    if p.dim(n, c) == 0 {
        return false;
    }
    let hp = p.cohomology(n, c);
    if hp.dim() == 0 {
        return false;
    }
    let pm = f.matrix(n, c);
    let mut span: Vec<Vector> = kernel_basis(&m.d_matrix(n, c)).vectors().iter().map(|z| pm.mul_vec(z)).collect();
    if m.dim(n, c) == 0 {
        span.clear();
    }
    span.extend(hp.boundaries.vectors().iter().cloned());
    let u = independent_subset(p.dim(n, c), &span);
    let g = Group::new(&p, n, c);
    let comp = equivariant_complement(&u, &hp.cocycles, &g);
    if comp.dim() == 0 {
        return false;
    }
    let cyclic = cyclic_generators(&comp, &g);
    let diffs = vec![TreePoly::zero(); cyclic.len()];
    let images = cyclic.iter().map(|w| p.element(n, c, w)).collect();
    b.adjoin(n, c, StepRole::Cohomology, &cyclic, &g, diffs, images, comp.dim());
    true
}

fn obstruction_step(b: &mut Builder, m: &DgOperad, f: &OperadMorphism, n: usize, c: i32) -> bool {
    let p = b.source.clone();
    let top = c + 1;
    if m.dim(n, top) == 0 {
        return false;
    }
    let hm = m.cohomology(n, top);
    if hm.dim() == 0 {
        return false;
    }
    let pm = f.matrix(n, top);
    let bp = if p.dim(n, c) == 0 || p.dim(n, top) == 0 {
        Vec::new()
    } else {
        image_basis(&p.d_matrix(n, c)).into_vectors()
    };
    let z = hm.cocycles.vectors();
    let rows = p.dim(n, top);
    let mut cols: Vec<Vector> = z.iter().map(|v| if rows == 0 { Vec::new() } else { pm.mul_vec(v) }).collect();
    cols.extend(bp.iter().map(|v| v.iter().map(|x| -x).collect()));
    let ker = kernel_basis(&Matrix::from_columns(rows, &cols));
    let kvecs: Vec<Vector> = ker
        .vectors()
        .iter()
        .map(|a| {
            let mut out = vec![Rational::zero(); m.dim(n, top)];
            for (x, zz) in a.iter().zip(z) {
                for (o, y) in out.iter_mut().zip(zz) {
                    *o += x * y;
                }
            }
            out
        })
        .collect();
    let k = independent_subset(m.dim(n, top), &kvecs);
    let gm = Group::new(m, n, top);
    let comp = equivariant_complement(&hm.boundaries, &k, &gm);
    if comp.dim() == 0 {
        return false;
    }
    // A preimage map on `comp`, then averaged to make it equivariant.
    let dp = p.d_matrix(n, c);
    let pre: Vec<Vector> = comp
        .vectors()
        .iter()
        .map(|v| {
            if p.dim(n, c) == 0 {
                Vec::new()
            } else {
                let t = if rows == 0 { Vec::new() } else { pm.mul_vec(v) };
                if rows == 0 {
                    vec![Rational::zero(); p.dim(n, c)]
                } else {
                    solve(&dp, &t).expect("kernel classes are boundaries in the target")
                }
            }
        })
        .collect();
    let t0 = |x: &[Rational]| -> Vector {
        let co = comp.coordinates(x).expect("vector lies in the complement");
        let mut out = vec![Rational::zero(); p.dim(n, c)];
        for (a, v) in co.iter().zip(&pre) {
            for (o, y) in out.iter_mut().zip(v) {
                *o += a * y;
            }
        }
        out
    };
    let gp = Group::new(&p, n, c);
    let ord = int(gm.perms.len() as i64);
    let tbar = |x: &[Rational]| -> Vector {
        let mut out = vec![Rational::zero(); p.dim(n, c)];
        for i in 0..gm.perms.len() {
            let y = gp.mats[i].mul_vec(&t0(&gm.mats[gm.inv[i]].mul_vec(x)));
            for (o, v) in out.iter_mut().zip(y) {
                *o += v;
            }
        }
        out.into_iter().map(|v| v / &ord).collect()
    };
    let cyclic = cyclic_generators(&comp, &gm);
    let diffs = cyclic.iter().map(|w| m.element(n, top, w)).collect();
    let images = cyclic
        .iter()
        .map(|w| {
            let a = tbar(w);
            if is_zero_vec(&a) {
                TreePoly::zero()
            } else {
                p.element(n, c, &a)
            }
        })
        .collect();
    b.adjoin(n, c, StepRole::Obstruction, &cyclic, &gm, diffs, images, comp.dim());
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{associativity, attach_acyclic_cell, gerstenhaber, Convention};

    #[test]
    fn free_input_is_its_own_model() {
        let p = Arc::new(
            DgOperad::new(
                vec![OpGenerator { name: "m".into(), arity: 2, degree: 0, symmetry: Symmetry::Regular }],
                vec![],
                vec![TreePoly::zero()],
                3,
                3,
                Convention::Homological,
            )
            .unwrap(),
        );
        let mm = operadic_minimal_model(&p).unwrap();
        assert!(Arc::ptr_eq(&mm.model, &p));
        assert_eq!(mm.generator_counts(), BTreeMap::from([((2, 0), 2)]));
    }

    #[test]
    fn associativity_model() {
        let p = Arc::new(associativity(3, 3));
        let mm = operadic_minimal_model(&p).unwrap();
        assert_eq!(mm.generator_counts(), BTreeMap::from([((2, 0), 2), ((3, 1), 6)]));
        assert!(mm.is_decomposable());
    }

    #[test]
    fn gerstenhaber_model_ignores_cells() {
        let g = Arc::new(gerstenhaber(3, 3));
        let plain = operadic_minimal_model(&g).unwrap();
        let padded = Arc::new(attach_acyclic_cell(&g, 2, 1).unwrap());
        let pm = operadic_minimal_model(&padded).unwrap();
        assert_eq!(plain.generator_counts(), pm.generator_counts());
        assert_eq!(
            plain.generator_counts(),
            BTreeMap::from([((2, 0), 1), ((2, 1), 1), ((3, 1), 2), ((3, 2), 3), ((3, 3), 1)])
        );
        assert!(pm.is_decomposable());
    }
}
