//! Arity- and degree-truncated dg operads presented by generators, relations
//! and a differential on generators.
//!
//! Degrees are stored cohomologically (the differential raises degree). A
//! homologically graded presentation is converted on input and output by
//! negating degrees; the grading parameter is inverted accordingly, since
//! `q^h = (1/q)^(-h)`.

mod model;
mod morphism;
mod parse;
mod pipeline;
mod presets;
mod tree;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{complement_in, image_basis, independent_subset, kernel_basis, rref, Matrix, SubspaceBasis, Vector};
use crate::rational::Rational;

pub use model::{operadic_minimal_model, ModelStep, OperadicMinimalModel, StepRole};
pub use pipeline::{
    is_operad_grading_lift, lift_to_operadic_model, operadic_certify_from_lift, operadic_pipeline,
    search_diagonal_operad_lift, OperadCertificate, OperadFormalWitness, OperadQuotientChecks, OperadWeights,
    QuotientComponent,
};
pub use morphism::OperadMorphism;
pub use parse::parse_tree_poly;
pub use presets::{associativity, attach_acyclic_cell, gerstenhaber, grading_action_little_disks};
pub use tree::{
    act, act_poly, canonicalize, compose_polys, compose_trees, inverse_permutation, permutation_is_odd,
    permutations, substitute, OpGenerator, Symmetry, Tree, TreePoly,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Homological,
    Cohomological,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Homological => "homological",
            Convention::Cohomological => "cohomological",
        }
    }

    pub fn parse(s: &str) -> Result<Convention> {
        match s {
            "homological" => Ok(Convention::Homological),
            "cohomological" => Ok(Convention::Cohomological),
            _ => Err(Error::InvalidInput(format!("unknown grading convention {s:?}"))),
        }
    }

    /// Degree as shown to the user from the internal cohomological degree.
    pub fn display(self, c: i32) -> i32 {
        match self {
            Convention::Homological => -c,
            Convention::Cohomological => c,
        }
    }

    /// Internal cohomological degree from a user-facing degree.
    pub fn internal(self, d: i32) -> i32 {
        self.display(d)
    }

    /// Parameter acting on internal degrees: `q` cohomologically, `1/q` homologically.
    pub fn internal_q(self, q: &Rational) -> Rational {
        match self {
            Convention::Homological => q.recip(),
            Convention::Cohomological => q.clone(),
        }
    }
}

/// One `(arity, degree)` piece of a presented operad: the free basis, the
/// ideal in row-reduced form and the surviving normal-form trees.
#[derive(Debug, Clone)]
pub struct Component {
    pub arity: usize,
    pub degree: i32,
    pub free: Vec<Tree>,
    index: HashMap<Tree, usize>,
    ideal_rows: Vec<Vector>,
    ideal_pivots: Vec<usize>,
    normal: Vec<usize>,
    normal_pos: Vec<Option<usize>>,
}

impl Component {
    fn new(arity: usize, degree: i32, free: Vec<Tree>, ideal: &[Vector]) -> Self {
        let index = free.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let (ideal_rows, ideal_pivots) = if ideal.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let (r, piv) = rref(&Matrix::from_rows_with_cols(ideal.to_vec(), free.len()));
            ((0..piv.len()).map(|i| r.row(i).to_vec()).collect(), piv)
        };
        let mut normal_pos = vec![None; free.len()];
        let mut normal = Vec::new();
        for i in 0..free.len() {
            if !ideal_pivots.contains(&i) {
                normal_pos[i] = Some(normal.len());
                normal.push(i);
            }
        }
        Component { arity, degree, free, index, ideal_rows, ideal_pivots, normal, normal_pos }
    }

    /// Dimension of the quotient by the ideal.
    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal_rows.len()
    }

    pub fn normal_trees(&self) -> impl Iterator<Item = &Tree> {
        self.normal.iter().map(|&i| &self.free[i])
    }

    pub fn normal_tree(&self, k: usize) -> &Tree {
        &self.free[self.normal[k]]
    }

    fn free_vector(&self, p: &TreePoly) -> Vector {
        let mut v = vec![Rational::zero(); self.free.len()];
        for (t, c) in p.iter() {
            let i = *self.index.get(t).unwrap_or_else(|| panic!("tree {t} not in component"));
            v[i] += c;
        }
        v
    }

    fn reduce_free(&self, mut v: Vector) -> Vector {
        for (row, &p) in self.ideal_rows.iter().zip(&self.ideal_pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        self.normal.iter().map(|&i| v[i].clone()).collect()
    }

    pub fn reduce(&self, p: &TreePoly) -> Vector {
        self.reduce_free(self.free_vector(p))
    }

    pub fn lift(&self, v: &[Rational]) -> TreePoly {
        let mut out = TreePoly::zero();
        for (k, c) in v.iter().enumerate() {
            out.add_term(self.normal_tree(k).clone(), c.clone());
        }
        out
    }

    pub fn in_ideal(&self, p: &TreePoly) -> bool {
        self.reduce(p).iter().all(Zero::is_zero)
    }

    pub fn position(&self, t: &Tree) -> Option<usize> {
        self.index.get(t).and_then(|&i| self.normal_pos[i])
    }
}

/// Cohomology of one component, with representatives chosen as the first-pivot
/// complement of the boundaries in the cocycles.
#[derive(Debug, Clone)]
pub struct OpCohomology {
    pub arity: usize,
    pub degree: i32,
    pub cocycles: SubspaceBasis,
    pub boundaries: SubspaceBasis,
    pub representatives: Vec<Vector>,
    combined: SubspaceBasis,
}

impl OpCohomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Class coordinates of a cocycle.
    pub fn class_of(&self, z: &[Rational]) -> Option<Vector> {
        let c = self.combined.coordinates(z)?;
        Some(c[self.boundaries.dim()..].to_vec())
    }

    pub fn cocycle_from_class(&self, class: &[Rational]) -> Vector {
        let n = self.cocycles.ambient_dim();
        let mut v = vec![Rational::zero(); n];
        for (r, c) in self.representatives.iter().zip(class) {
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(r) {
                    *x += c * y;
                }
            }
        }
        v
    }
}

/// A dg operad `Free(E)/(R)` truncated to arities `≤ max_arity`.
#[derive(Debug, Clone)]
pub struct DgOperad {
    gens: Vec<OpGenerator>,
    relations: Vec<TreePoly>,
    differential: Vec<TreePoly>,
    max_arity: usize,
    truncation: u32,
    convention: Convention,
    corollas: Vec<TreePoly>,
    components: BTreeMap<(usize, i32), Component>,
}

impl DgOperad {
    /// Builds and validates. `differential[g]` is `d` of the corolla of `g`.
    pub fn new(
        gens: Vec<OpGenerator>,
        relations: Vec<TreePoly>,
        differential: Vec<TreePoly>,
        max_arity: usize,
        truncation: u32,
        convention: Convention,
    ) -> Result<Self> {
        if differential.len() != gens.len() {
            return Err(Error::InvalidInput("one differential entry per generator required".into()));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.arity < 2 {
                return Err(Error::HypothesisFailed(format!(
                    "generator {} has arity {}; only arities >= 2 are allowed so that P(0) is empty and P(1) is the unit",
                    g.name, g.arity
                )));
            }
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidInput(format!("bad generator name {:?}", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidInput(format!("duplicate generator {}", g.name)));
            }
        }
        if max_arity < 2 {
            return Err(Error::TruncationTooSmall("arity window must be at least 2".into()));
        }
        let corollas = gens
            .iter()
            .enumerate()
            .map(|(i, g)| TreePoly::from_signed(canonicalize(&gens, &Tree::corolla(i, g.arity))))
            .collect();
        let mut op = DgOperad {
            gens,
            relations,
            differential,
            max_arity,
            truncation,
            convention,
            corollas,
            components: BTreeMap::new(),
        };
        op.check_shapes()?;
        op.build_components();
        op.validate()?;
        Ok(op)
    }

    fn check_shapes(&self) -> Result<()> {
        for (k, r) in self.relations.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let Some((n, _)) = r.homogeneous(&self.gens) else {
                return Err(Error::InvalidInput(format!("relation {} is not homogeneous", k + 1)));
            };
            if n > self.max_arity {
                return Err(Error::TruncationExceeded(format!(
                    "relation {} has arity {n} above the window {}",
                    k + 1,
                    self.max_arity
                )));
            }
        }
        for (g, dg) in self.gens.iter().zip(&self.differential) {
            for (t, _) in dg.iter() {
                if t.arity() != g.arity || t.degree(&self.gens) != g.degree + 1 {
                    return Err(Error::InvalidInput(format!(
                        "d({}) contains {} of the wrong arity or degree",
                        g.name,
                        t.format(&self.gens)
                    )));
                }
            }
        }
        Ok(())
    }

    fn build_components(&mut self) {
        let mut memo = BTreeMap::new();
        let mut ideal_polys: BTreeMap<(usize, i32), Vec<TreePoly>> = BTreeMap::new();
        for n in 1..=self.max_arity {
            let labels: Vec<usize> = (0..n).collect();
            let trees = tree::trees_on(&self.gens, &labels, &mut memo);
            let mut by_degree: BTreeMap<i32, Vec<Tree>> = BTreeMap::new();
            for t in trees {
                by_degree.entry(t.degree(&self.gens)).or_default().push(t);
            }
            let mut seeds: Vec<TreePoly> =
                self.relations.iter().filter(|r| r.iter().next().is_some_and(|(t, _)| t.arity() == n)).cloned().collect();
            for ((n1, _), polys) in ideal_polys.iter() {
                let n2 = n + 1 - n1;
                if n2 < 2 {
                    continue;
                }
                for (g, gen) in self.gens.iter().enumerate() {
                    if gen.arity != n2 {
                        continue;
                    }
                    for x in polys {
                        for i in 0..*n1 {
                            seeds.push(compose_polys(&self.gens, x, i, &self.corollas[g]));
                        }
                        for i in 0..n2 {
                            seeds.push(compose_polys(&self.gens, &self.corollas[g], i, x));
                        }
                    }
                }
            }
            let perms = permutations(n);
            let mut grouped: BTreeMap<i32, Vec<TreePoly>> = BTreeMap::new();
            for s in &seeds {
                for p in &perms {
                    let a = act_poly(&self.gens, s, p);
                    if let Some((_, c)) = a.homogeneous(&self.gens) {
                        grouped.entry(c).or_default().push(a);
                    }
                }
            }
            for (c, free) in by_degree {
                let scratch = Component::new(n, c, free.clone(), &[]);
                let vecs: Vec<Vector> =
                    grouped.get(&c).map(|v| v.iter().map(|p| scratch.free_vector(p)).collect()).unwrap_or_default();
                let basis = independent_subset(free.len(), &vecs);
                let comp = Component::new(n, c, free, basis.vectors());
                let rows: Vec<TreePoly> = comp
                    .ideal_rows
                    .iter()
                    .map(|row| {
                        let mut p = TreePoly::zero();
                        for (i, x) in row.iter().enumerate() {
                            p.add_term(comp.free[i].clone(), x.clone());
                        }
                        p
                    })
                    .collect();
                if !rows.is_empty() {
                    ideal_polys.insert((n, c), rows);
                }
                self.components.insert((n, c), comp);
            }
        }
    }

    fn validate(&self) -> Result<()> {
        for (g, gen) in self.gens.iter().enumerate() {
            if gen.arity > self.max_arity {
                continue;
            }
            let dd = self.diff_poly(&self.differential[g]);
            if !self.reduce_poly(&dd)?.1.iter().all(Zero::is_zero) {
                return Err(Error::InvalidInput(format!("d^2({}) is not zero", gen.name)));
            }
            if gen.symmetry != Symmetry::Regular && !self.differential[g].is_zero() {
                for i in 0..gen.arity - 1 {
                    let mut perm: Vec<usize> = (0..gen.arity).collect();
                    perm.swap(i, i + 1);
                    let moved = act_poly(&self.gens, &self.differential[g], &perm);
                    let expect = if gen.symmetry == Symmetry::Sign {
                        self.differential[g].scale(&-Rational::one())
                    } else {
                        self.differential[g].clone()
                    };
                    let diff = moved.add(&expect.scale(&-Rational::one()));
                    if !self.reduce_poly(&diff)?.1.iter().all(Zero::is_zero) {
                        return Err(Error::InvalidInput(format!(
                            "d({}) does not have the symmetry of {}",
                            gen.name, gen.name
                        )));
                    }
                }
            }
        }
        for (k, r) in self.relations.iter().enumerate() {
            let dr = self.diff_poly(r);
            if !self.reduce_poly(&dr)?.1.iter().all(Zero::is_zero) {
                return Err(Error::InvalidInput(format!("d does not preserve relation {}", k + 1)));
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[OpGenerator] {
        &self.gens
    }

    pub fn relations(&self) -> &[TreePoly] {
        &self.relations
    }

    pub fn differential_of(&self, g: usize) -> &TreePoly {
        &self.differential[g]
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn corolla(&self, g: usize) -> &TreePoly {
        &self.corollas[g]
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn is_free(&self) -> bool {
        self.components.values().all(|c| c.ideal_dim() == 0)
    }

    pub fn component(&self, arity: usize, degree: i32) -> Option<&Component> {
        self.components.get(&(arity, degree))
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.components.values()
    }

    pub fn dim(&self, arity: usize, degree: i32) -> usize {
        self.component(arity, degree).map_or(0, Component::dim)
    }

    /// Internal degrees occurring in arity `n`.
    pub fn degrees(&self, arity: usize) -> Vec<i32> {
        self.components.keys().filter(|(n, _)| *n == arity).map(|(_, c)| *c).collect()
    }

    /// Certified degree window (internal degrees): `|c| ≤ N - 1`.
    pub fn certified_degrees(&self) -> std::ops::RangeInclusive<i32> {
        let b = self.truncation as i32 - 1;
        -b..=b
    }

    /// `(arity, degree)` and normal-form coordinates of a homogeneous polynomial.
    pub fn reduce_poly(&self, p: &TreePoly) -> Result<((usize, i32), Vector)> {
        let Some((n, c)) = p.homogeneous(&self.gens) else {
            if p.is_zero() {
                return Ok(((0, 0), Vec::new()));
            }
            return Err(Error::InvalidInput("inhomogeneous tree polynomial".into()));
        };
        if n > self.max_arity {
            return Err(Error::TruncationExceeded(format!("arity {n} above the window {}", self.max_arity)));
        }
        let comp = self.component(n, c).expect("component exists for every occurring tree");
        Ok(((n, c), comp.reduce(p)))
    }

    /// Coordinates in component `(n, c)`; the zero polynomial gives the zero vector.
    pub fn coords(&self, n: usize, c: i32, p: &TreePoly) -> Vector {
        match self.component(n, c) {
            Some(comp) => comp.reduce(p),
            None => {
                assert!(p.is_zero(), "nonzero polynomial outside every component");
                Vec::new()
            }
        }
    }

    pub fn element(&self, n: usize, c: i32, v: &[Rational]) -> TreePoly {
        match self.component(n, c) {
            Some(comp) => comp.lift(v),
            None => TreePoly::zero(),
        }
    }

    /// Normal form of a homogeneous polynomial.
    pub fn normal_form(&self, p: &TreePoly) -> Result<TreePoly> {
        let ((n, c), v) = self.reduce_poly(p)?;
        Ok(self.element(n, c, &v))
    }

    /// `d` of a tree, as a derivation: the operator passes vertices that precede
    /// the one it acts on in preorder.
    pub fn diff_tree(&self, t: &Tree) -> TreePoly {
        let verts = t.vertices();
        let mut out = TreePoly::zero();
        let mut passed = 0i32;
        for (k, &g) in verts.iter().enumerate() {
            if !self.differential[g].is_zero() {
                let images: Vec<&TreePoly> = verts
                    .iter()
                    .enumerate()
                    .map(|(j, &h)| if j == k { &self.differential[g] } else { &self.corollas[h] })
                    .collect();
                let s = substitute(&self.gens, t, &images);
                out = out.add(&if passed.rem_euclid(2) == 1 { s.scale(&-Rational::one()) } else { s });
            }
            passed += self.gens[g].degree;
        }
        out
    }

    pub fn diff_poly(&self, p: &TreePoly) -> TreePoly {
        let mut out = TreePoly::zero();
        for (t, c) in p.iter() {
            out = out.add(&self.diff_tree(t).scale(c));
        }
        out
    }

    /// Matrix of `d: P(n)^c → P(n)^{c+1}` on normal-form coordinates.
    pub fn d_matrix(&self, n: usize, c: i32) -> Matrix {
        let rows = self.dim(n, c + 1);
        let columns: Vec<Vector> = match self.component(n, c) {
            Some(comp) => comp
                .normal_trees()
                .map(|t| {
                    let dt = self.diff_tree(t);
                    if rows == 0 {
                        Vec::new()
                    } else {
                        self.coords(n, c + 1, &dt)
                    }
                })
                .collect(),
            None => Vec::new(),
        };
        Matrix::from_columns(rows, &columns)
    }

    /// Matrix of the right action `x ↦ x·perm` (leaf `l` relabeled `perm[l]`).
    pub fn action_matrix(&self, n: usize, c: i32, perm: &[usize]) -> Matrix {
        let d = self.dim(n, c);
        let columns: Vec<Vector> = match self.component(n, c) {
            Some(comp) => comp
                .normal_trees()
                .map(|t| comp.reduce(&TreePoly::from_signed(act(&self.gens, t, perm))))
                .collect(),
            None => Vec::new(),
        };
        Matrix::from_columns(d, &columns)
    }

    pub fn cohomology(&self, n: usize, c: i32) -> OpCohomology {
        let dim = self.dim(n, c);
        let cocycles = kernel_basis(&self.d_matrix(n, c));
        let boundaries = if self.dim(n, c - 1) == 0 {
            SubspaceBasis::empty(dim)
        } else {
            image_basis(&self.d_matrix(n, c - 1))
        };
        let reps = complement_in(&boundaries, &cocycles);
        let mut all = boundaries.vectors().to_vec();
        all.extend(reps.vectors().iter().cloned());
        let combined = SubspaceBasis::new(dim, all).expect("boundaries and representatives are independent");
        OpCohomology {
            arity: n,
            degree: c,
            cocycles,
            boundaries,
            representatives: reps.into_vectors(),
            combined,
        }
    }

    /// Partial composition within the window, in normal form.
    pub fn compose(&self, p: &TreePoly, i: usize, q: &TreePoly) -> Result<TreePoly> {
        let (Some((a, c1)), Some((b, c2))) = (p.homogeneous(&self.gens), q.homogeneous(&self.gens)) else {
            if p.is_zero() || q.is_zero() {
                return Ok(TreePoly::zero());
            }
            return Err(Error::InvalidInput("compose expects homogeneous operands".into()));
        };
        if i >= a {
            return Err(Error::InvalidInput(format!("slot {} out of range for arity {a}", i + 1)));
        }
        let n = a + b - 1;
        let c = c1 + c2;
        if n > self.max_arity || c.unsigned_abs() > self.truncation {
            return Err(Error::TruncationExceeded(format!(
                "composite of arity {n} and degree {} leaves the window (A_max = {}, N = {})",
                self.convention.display(c),
                self.max_arity,
                self.truncation
            )));
        }
        self.normal_form(&compose_polys(&self.gens, p, i, q))
    }

    /// Polynomial from text in this operad's generators.
    pub fn parse(&self, s: &str) -> Result<TreePoly> {
        parse_tree_poly(&self.gens, s)
    }

    pub fn format(&self, p: &TreePoly) -> String {
        p.format(&self.gens)
    }

    /// Display degree of generator `g`.
    pub fn display_degree(&self, g: usize) -> i32 {
        self.convention.display(self.gens[g].degree)
    }

    /// Same presentation with another window.
    pub fn with_window(&self, max_arity: usize, truncation: u32) -> Result<DgOperad> {
        DgOperad::new(
            self.gens.clone(),
            self.relations.clone(),
            self.differential.clone(),
            max_arity,
            truncation,
            self.convention,
        )
    }
}

/// Dimensions and symmetric actions of every component `n ≤ A_max`, `|d| ≤ N`.
#[derive(Debug, Clone)]
pub struct OperadCollection {
    pub convention: Convention,
    pub entries: Vec<CollectionEntry>,
}

#[derive(Debug, Clone)]
pub struct CollectionEntry {
    pub arity: usize,
    /// User-facing degree.
    pub degree: i32,
    pub dim: usize,
    /// Representatives as tree polynomials.
    pub representatives: Vec<TreePoly>,
    /// Action of the adjacent transpositions `(i, i+1)` on the basis.
    pub transpositions: Vec<Matrix>,
}

impl OperadCollection {
    pub fn dim(&self, arity: usize, degree: i32) -> usize {
        self.entries.iter().find(|e| e.arity == arity && e.degree == degree).map_or(0, |e| e.dim)
    }

    /// `(arity, degree, dim)` of the nonzero entries.
    pub fn dims(&self) -> Vec<(usize, i32, usize)> {
        self.entries.iter().filter(|e| e.dim > 0).map(|e| (e.arity, e.degree, e.dim)).collect()
    }
}

/// Action of `perm` on the classes of component `(n, c)`.
pub fn cohomology_action(p: &DgOperad, h: &OpCohomology, perm: &[usize]) -> Matrix {
    let a = p.action_matrix(h.arity, h.degree, perm);
    let cols: Vec<Vector> = h
        .representatives
        .iter()
        .map(|r| h.class_of(&a.mul_vec(r)).expect("the action preserves cocycles"))
        .collect();
    Matrix::from_columns(h.dim(), &cols)
}

pub fn cohomology_collection(p: &DgOperad) -> OperadCollection {
    let mut entries = Vec::new();
    let n_max = p.truncation() as i32;
    for n in 1..=p.max_arity() {
        let mut degrees: Vec<i32> = (-n_max..=n_max).map(|d| p.convention().internal(d)).collect();
        degrees.sort_by_key(|&c| p.convention().display(c));
        for c in degrees {
            if p.dim(n, c) == 0 {
                continue;
            }
            let h = p.cohomology(n, c);
            let transpositions = (0..n.saturating_sub(1))
                .map(|i| {
                    let mut perm: Vec<usize> = (0..n).collect();
                    perm.swap(i, i + 1);
                    cohomology_action(p, &h, &perm)
                })
                .collect();
            entries.push(CollectionEntry {
                arity: n,
                degree: p.convention().display(c),
                dim: h.dim(),
                representatives: h.representatives.iter().map(|r| p.element(n, c, r)).collect(),
                transpositions,
            });
        }
    }
    OperadCollection { convention: p.convention(), entries }
}

/// Whether `v` is the zero vector.
pub(crate) fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn free_m(sym: Symmetry) -> DgOperad {
        DgOperad::new(
            vec![OpGenerator { name: "m".into(), arity: 2, degree: 0, symmetry: sym }],
            vec![],
            vec![TreePoly::zero()],
            3,
            3,
            Convention::Homological,
        )
        .unwrap()
    }

    #[test]
    fn free_dimensions() {
        assert_eq!(free_m(Symmetry::Regular).dim(3, 0), 12);
        assert_eq!(free_m(Symmetry::Trivial).dim(3, 0), 3);
        assert_eq!(free_m(Symmetry::Trivial).dim(1, 0), 1);
        assert_eq!(free_m(Symmetry::Regular).dim(2, 0), 2);
        assert!(free_m(Symmetry::Regular).is_free());
    }

    #[test]
    fn rejects_unary_generators() {
        let e = DgOperad::new(
            vec![OpGenerator { name: "u".into(), arity: 1, degree: 0, symmetry: Symmetry::Trivial }],
            vec![],
            vec![TreePoly::zero()],
            3,
            3,
            Convention::Homological,
        )
        .unwrap_err();
        assert_eq!(e.code(), "HYPOTHESIS_FAILED");
    }

    #[test]
    fn compose_window() {
        let p = free_m(Symmetry::Regular);
        let m = p.corolla(0).clone();
        let mm = p.compose(&m, 0, &m).unwrap();
        assert_eq!(p.format(&mm), "m(m(1,2),3)");
        assert_eq!(p.compose(&mm, 0, &m).unwrap_err().code(), "TRUNCATION_EXCEEDED");
        let two = m.scale(&int(2));
        assert_eq!(p.format(&p.compose(&two, 1, &m).unwrap()), "2 m(1,m(2,3))");
    }

    #[test]
    fn free_zero_differential_cohomology_is_itself() {
        let p = free_m(Symmetry::Regular);
        let h = cohomology_collection(&p);
        assert_eq!(h.dim(3, 0), 12);
        assert_eq!(h.dim(2, 0), 2);
        assert_eq!(h.dim(1, 0), 1);
    }
}
