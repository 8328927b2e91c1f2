//! Contractions onto cohomology, triple Massey products, and the transferred
//! operations `μ_n` for `n <= 4`.
//!
//! Sign convention for `μ_n`: the tree sum is formed in the bar picture,
//! `B_1(a) = i(a)` and
//! `B_k(a_1..a_k) = Σ_j (-1)^{|L|} L·R` with `L = H(B_j(a_1..a_j))`,
//! `R = H(B_{k-j}(a_{j+1}..a_k))`, where `H` is the identity on a leaf and `h`
//! otherwise, and `|L|` is the ordinary degree of `L`. Then
//! `μ_k(a) = (-1)^{Σ_i (k-i)|a_i|} p(B_k(a))`. With this choice `μ_2` is the cup
//! product, `μ_3(x,y,z) = -p(h(xy)z - (-1)^{|x|} x h(yz))`, and the operations
//! satisfy the A∞ relations
//! `Σ (-1)^{r+st} μ_{r+1+t}(1^r ⊗ μ_s ⊗ 1^t) = 0` with Koszul signs.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{complement_in, independent_subset, Matrix, SubspaceBasis, Vector};
use crate::gca::{Cdga, Cohomology, Monomial, Polynomial};
use crate::rational::{sign, Rational};

#[derive(Clone, Debug)]
struct DegreeData {
    basis: Vec<Monomial>,
    cohomology: Cohomology,
    /// Basis `c_k` of a complement of the cocycles.
    complement: Vec<Vector>,
    /// Inverse of the change of basis to `[d c'_k | reps | c_k]`, with `c'`
    /// the complement one degree down.
    to_split: Matrix,
    boundary_count: usize,
}

/// A deterministic contraction of `A` onto `H(A)` in degrees `0..=top`.
///
/// Per degree `A^n = d(C^{n-1}) ⊕ R^n ⊕ C^n` where `R^n` spans the cohomology
/// representatives and `C^n` is the first-pivot complement of the cocycles.
/// `h` sends `d c` to `c` for `c ∈ C^{n-1}` and vanishes on `R^n ⊕ C^n`.
#[derive(Clone, Debug)]
pub struct Contraction {
    algebra: Arc<Cdga>,
    degrees: Vec<DegreeData>,
}

impl Contraction {
    pub fn build(a: Arc<Cdga>, top: u32) -> Contraction {
        let mut degrees: Vec<DegreeData> = Vec::new();
        for n in 0..=top {
            let basis = a.monomial_basis(n);
            let dim = basis.len();
            let cohomology = a.cohomology(n);
            let complement = complement_in(cohomology.cocycles(), &SubspaceBasis::full(dim)).into_vectors();
            let mut cols: Vec<Vector> = Vec::new();
            if n > 0 {
                let below = &degrees[n as usize - 1];
                for c in &below.complement {
                    let dc = a.differential(&Polynomial::from_vector(c, &below.basis));
                    cols.push(dc.to_vector(&basis));
                }
            }
            let boundary_count = cols.len();
            cols.extend(cohomology.representative_vectors().iter().cloned());
            cols.extend(complement.iter().cloned());
            let to_split = Matrix::from_columns(dim, &cols)
                .inverse()
                .expect("boundaries, representatives and complement span each degree");
            degrees.push(DegreeData {
                basis,
                cohomology,
                complement,
                to_split,
                boundary_count,
            });
        }
        Contraction { algebra: a, degrees }
    }

    pub fn algebra(&self) -> &Arc<Cdga> {
        &self.algebra
    }

    pub fn top_degree(&self) -> u32 {
        self.degrees.len() as u32 - 1
    }

    fn data(&self, n: u32) -> Result<&DegreeData> {
        self.degrees.get(n as usize).ok_or_else(|| {
            Error::TruncationExceeded(format!("contraction built up to degree {}, asked for {n}", self.top_degree()))
        })
    }

    pub fn cohomology(&self, n: u32) -> Result<&Cohomology> {
        Ok(&self.data(n)?.cohomology)
    }

    fn split(&self, p: &Polynomial, n: u32) -> Result<Vector> {
        let d = self.data(n)?;
        Ok(d.to_split.mul_vec(&p.to_vector(&d.basis)))
    }

    /// `h: A^n -> A^{n-1}`.
    pub fn h(&self, p: &Polynomial, n: u32) -> Result<Polynomial> {
        if n == 0 || p.is_zero() {
            return Ok(Polynomial::zero());
        }
        let coords = self.split(p, n)?;
        let d = self.data(n)?;
        let below = self.data(n - 1)?;
        let mut out = vec![Rational::zero(); below.basis.len()];
        for (k, c) in below.complement.iter().enumerate().take(d.boundary_count) {
            for (o, x) in out.iter_mut().zip(c) {
                *o += &coords[k] * x;
            }
        }
        Ok(Polynomial::from_vector(&out, &below.basis))
    }

    /// `p: A^n -> H^n`, as class coordinates.
    pub fn p(&self, x: &Polynomial, n: u32) -> Result<Vector> {
        let coords = self.split(x, n)?;
        let d = self.data(n)?;
        Ok(coords[d.boundary_count..d.boundary_count + d.cohomology.dim()].to_vec())
    }

    /// `i: H^n -> A^n`.
    pub fn i(&self, class: &[Rational], n: u32) -> Result<Polynomial> {
        Ok(self.data(n)?.cohomology.cocycle_from_class(class))
    }

    /// Checks `p i = 1`, `dh + hd = 1 - ip`, `hh = 0`, `hi = 0`, `ph = 0` on
    /// basis elements of every degree below the top one.
    pub fn verify(&self) -> bool {
        let a = &self.algebra;
        let top = self.top_degree();
        for n in 0..top {
            let d = &self.degrees[n as usize];
            let dim_h = d.cohomology.dim();
            for k in 0..dim_h {
                let mut e = vec![Rational::zero(); dim_h];
                e[k] = Rational::one();
                let x = d.cohomology.cocycle_from_class(&e);
                if self.p(&x, n).ok() != Some(e) || !self.h(&x, n).map(|y| y.is_zero()).unwrap_or(false) {
                    return false;
                }
            }
            for m in &d.basis {
                let x = Polynomial::monomial(m.clone(), Rational::one());
                let Ok(hx) = self.h(&x, n) else { return false };
                let dhx = a.differential(&hx);
                let Ok(hdx) = self.h(&a.differential(&x), n + 1) else { return false };
                let Ok(px) = self.p(&x, n) else { return false };
                let ipx = d.cohomology.cocycle_from_class(&px);
                if dhx.add(&hdx) != x.sub(&ipx) {
                    return false;
                }
                if n > 0 {
                    let (Ok(hhx), Ok(phx)) = (self.h(&hx, n - 1), self.p(&hx, n - 1)) else { return false };
                    if !hhx.is_zero() || phx.iter().any(|c| !c.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The coset `⟨x, y, z⟩ ⊂ H^{|x|+|y|+|z|-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyCoset {
    pub degree: u32,
    pub representative: Polynomial,
    /// Class of the representative in the cohomology basis of `degree`.
    pub value: Vector,
    /// `[x]·H^{|y|+|z|-1} + H^{|x|+|y|-1}·[z]`, in class coordinates.
    pub indeterminacy: SubspaceBasis,
}

impl MasseyCoset {
    pub fn contains_zero(&self) -> bool {
        self.indeterminacy.contains(&self.value)
    }
}

fn degree_of(a: &Cdga, p: &Polynomial, what: &str) -> Result<u32> {
    a.generators()
        .degree(p)
        .ok_or_else(|| Error::InvalidInput(format!("{what} must be nonzero and homogeneous")))
}

/// Triple Massey product of cocycles, with `u`, `v` chosen by the
/// deterministic solve: `du = xy`, `dv = yz`, value `[uz - (-1)^{|x|} xv]`.
pub fn triple_massey(a: &Cdga, x: &Polynomial, y: &Polynomial, z: &Polynomial) -> Result<MasseyCoset> {
    let (dx, dy, dz) = (degree_of(a, x, "x")?, degree_of(a, y, "y")?, degree_of(a, z, "z")?);
    for (name, p) in [("x", x), ("y", y), ("z", z)] {
        if !a.differential(p).is_zero() {
            return Err(Error::InvalidInput(format!("{name} is not a cocycle")));
        }
    }
    let u = a
        .preimage(&a.multiply(x, y), dx + dy)
        .ok_or_else(|| Error::PreconditionNotExact("[x][y] != 0".into()))?;
    let v = a
        .preimage(&a.multiply(y, z), dy + dz)
        .ok_or_else(|| Error::PreconditionNotExact("[y][z] != 0".into()))?;
    let degree = dx + dy + dz - 1;
    let representative = a
        .multiply(&u, z)
        .sub(&a.multiply(x, &v).scale(&sign(dx % 2 == 1)));
    let h = a.cohomology(degree);
    let value = h.class_of(&representative).expect("Massey representative is a cocycle");
    let mut spans: Vec<Vector> = Vec::new();
    for r in &a.cohomology(dy + dz - 1).representatives {
        spans.push(h.class_of(&a.multiply(x, r)).expect("product of cocycles"));
    }
    for r in &a.cohomology(dx + dy - 1).representatives {
        spans.push(h.class_of(&a.multiply(r, z)).expect("product of cocycles"));
    }
    Ok(MasseyCoset {
        degree,
        representative,
        value,
        indeterminacy: independent_subset(h.dim(), &spans),
    })
}

/// A cohomology class given by its degree and coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub degree: u32,
    pub coords: Vector,
}

impl Class {
    pub fn basis(c: &Contraction, degree: u32, k: usize) -> Result<Class> {
        let dim = c.cohomology(degree)?.dim();
        if k >= dim {
            return Err(Error::InvalidInput(format!("H^{degree} has dimension {dim}")));
        }
        let mut coords = vec![Rational::zero(); dim];
        coords[k] = Rational::one();
        Ok(Class { degree, coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

fn bar(c: &Contraction, inputs: &[Class]) -> Result<(u32, Polynomial)> {
    if inputs.len() == 1 {
        return Ok((inputs[0].degree, c.i(&inputs[0].coords, inputs[0].degree)?));
    }
    let a = c.algebra();
    let mut total_degree = None;
    let mut out = Polynomial::zero();
    for j in 1..inputs.len() {
        let (dl, l) = edge(c, &inputs[..j])?;
        let (dr, r) = edge(c, &inputs[j..])?;
        total_degree = Some(dl + dr);
        out = out.add(&a.multiply(&l, &r).scale(&sign(dl % 2 == 1)));
    }
    Ok((total_degree.expect("at least two inputs"), out))
}

fn edge(c: &Contraction, inputs: &[Class]) -> Result<(u32, Polynomial)> {
    let (d, b) = bar(c, inputs)?;
    if inputs.len() == 1 {
        return Ok((d, b));
    }
    if d == 0 {
        return Ok((0, Polynomial::zero()));
    }
    Ok((d - 1, c.h(&b, d)?))
}

/// The transferred operation `μ_n` on `H(A)`, `2 <= n <= 4`.
pub fn transferred_mu(c: &Contraction, inputs: &[Class]) -> Result<Class> {
    let n = inputs.len();
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidInput(format!("μ_n is implemented for 2 <= n <= 4, got {n}")));
    }
    let total: u32 = inputs.iter().map(|x| x.degree).sum();
    if total + 2 < n as u32 {
        return Err(Error::InvalidInput("output degree would be negative".into()));
    }
    let degree = total + 2 - n as u32;
    let (_, b) = bar(c, inputs)?;
    let exponent: u32 = inputs.iter().enumerate().map(|(i, x)| (n - 1 - i) as u32 * x.degree).sum();
    let coords = c.p(&b, degree)?;
    let s = sign(exponent % 2 == 1);
    Ok(Class {
        degree,
        coords: coords.into_iter().map(|x| x * &s).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::GeneratorSet;
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

    #[test]
    fn contraction_examples() {
        let a = cdga(&[("u", 2), ("w", 1)], &["0", "0"], 6);
        let c = Contraction::build(a.clone(), 6);
        assert!(c.verify());
        for n in 0..6 {
            for m in a.monomial_basis(n) {
                assert!(c.h(&Polynomial::monomial(m, int(1)), n).unwrap().is_zero());
            }
        }

        let s = sphere2();
        let c = Contraction::build(s.clone(), 6);
        assert!(c.verify());
        assert_eq!(c.h(&s.parse("e2^2").unwrap(), 4).unwrap(), s.parse("e3").unwrap());
        assert!(c.h(&s.parse("e2").unwrap(), 2).unwrap().is_zero());

        let h = heisenberg();
        let c = Contraction::build(h.clone(), 4);
        assert!(c.verify());
        assert_eq!(c.h(&h.parse("x*y").unwrap(), 2).unwrap(), h.parse("z").unwrap());
        assert!(c.h(&h.parse("x*z").unwrap(), 2).unwrap().is_zero());
    }

    #[test]
    fn contraction_on_padded_input() {
        let a = cdga(&[("e2", 2), ("e3", 3), ("u", 4), ("v", 3)], &["0", "e2^2", "0", "u"], 8);
        assert!(Contraction::build(a, 8).verify());
    }

    #[test]
    fn heisenberg_massey() {
        let h = heisenberg();
        let p = |s: &str| h.parse(s).unwrap();
        let m = triple_massey(&h, &p("x"), &p("y"), &p("y")).unwrap();
        assert_eq!(m.degree, 2);
        assert_eq!(m.representative, p("z*y"));
        assert_eq!(m.indeterminacy.dim(), 0);
        assert!(!m.contains_zero());
        // H^2 representatives are [xz, yz]; zy = -yz.
        assert_eq!(m.value, vec![int(0), int(-1)]);

        let m = triple_massey(&h, &p("x"), &p("x"), &p("y")).unwrap();
        assert_eq!(m.value, vec![int(1), int(0)]);
    }

    #[test]
    fn massey_in_formal_algebras() {
        let s = sphere2();
        let e2 = s.parse("e2").unwrap();
        let m = triple_massey(&s, &e2, &e2, &e2).unwrap();
        assert_eq!(m.degree, 5);
        assert!(m.contains_zero());

        let a = cdga(&[("u", 2), ("w", 1), ("t", 1)], &["0", "0", "0"], 6);
        let (w, t) = (a.parse("w").unwrap(), a.parse("t").unwrap());
        let m = triple_massey(&a, &w, &w, &w).unwrap();
        assert!(m.representative.is_zero());
        assert!(m.contains_zero());
        assert!(matches!(triple_massey(&a, &w, &t, &t), Err(Error::PreconditionNotExact(_))));
    }

    #[test]
    fn mu2_is_cup_product() {
        for a in [sphere2(), heisenberg(), cdga(&[("u", 2), ("w", 1), ("t", 1)], &["0", "0", "0"], 5)] {
            let top = a.truncation();
            let c = Contraction::build(a.clone(), top);
            for d1 in 0..top {
                for d2 in 0..top - d1 {
                    for k1 in 0..c.cohomology(d1).unwrap().dim() {
                        for k2 in 0..c.cohomology(d2).unwrap().dim() {
                            let x = Class::basis(&c, d1, k1).unwrap();
                            let y = Class::basis(&c, d2, k2).unwrap();
                            let mu = transferred_mu(&c, &[x.clone(), y.clone()]).unwrap();
                            let prod = a.multiply(&c.i(&x.coords, d1).unwrap(), &c.i(&y.coords, d2).unwrap());
                            assert_eq!(Some(mu.coords), a.cohomology(d1 + d2).class_of(&prod));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn higher_mu_vanish_with_zero_differential() {
        let a = cdga(&[("u", 2), ("w", 1), ("t", 1)], &["0", "0", "0"], 6);
        let c = Contraction::build(a, 6);
        let w = Class::basis(&c, 1, 0).unwrap();
        let t = Class::basis(&c, 1, 1).unwrap();
        assert!(transferred_mu(&c, &[w.clone(), t.clone(), w.clone()]).unwrap().is_zero());
        assert!(transferred_mu(&c, &[w.clone(), t.clone(), w, t]).unwrap().is_zero());
    }

    #[test]
    fn mu3_is_minus_massey_on_heisenberg() {
        let h = heisenberg();
        let c = Contraction::build(h.clone(), 4);
        let x = Class::basis(&c, 1, 0).unwrap();
        let y = Class::basis(&c, 1, 1).unwrap();
        for (a, b, d) in [(&x, &y, &y), (&x, &x, &y)] {
            let mu = transferred_mu(&c, &[a.clone(), b.clone(), d.clone()]).unwrap();
            let rep = |k: &Class| c.i(&k.coords, 1).unwrap();
            let m = triple_massey(&h, &rep(a), &rep(b), &rep(d)).unwrap();
            let neg: Vector = m.value.iter().map(|v| -v.clone()).collect();
            assert_eq!(mu.coords, neg);
        }
    }

    fn add_into(acc: &mut Class, x: &Class, s: &Rational) {
        for (a, b) in acc.coords.iter_mut().zip(&x.coords) {
            *a += b * s;
        }
    }

    /// `Σ (-1)^{r+st} μ_{r+1+t}(1^r ⊗ μ_s ⊗ 1^t)` applied to `xs`, with Koszul
    /// sign `(-1)^{s (|x_1|+...+|x_r|)}` from moving `μ_s` past the first `r`.
    fn a_infinity_defect(c: &Contraction, xs: &[Class]) -> Class {
        let n = xs.len();
        let total: u32 = xs.iter().map(|x| x.degree).sum();
        let degree = total + 3 - n as u32;
        let mut acc = Class {
            degree,
            coords: vec![Rational::zero(); c.cohomology(degree).unwrap().dim()],
        };
        for s in 2..n {
            for r in 0..=n - s {
                let t = n - s - r;
                let inner = transferred_mu(c, &xs[r..r + s]).unwrap();
                let mut args: Vec<Class> = xs[..r].to_vec();
                args.push(inner);
                args.extend_from_slice(&xs[r + s..]);
                let outer = transferred_mu(c, &args).unwrap();
                let before: u32 = xs[..r].iter().map(|x| x.degree).sum();
                let exp = r + s * t + s * before as usize;
                add_into(&mut acc, &outer, &sign(exp % 2 == 1));
            }
        }
        acc
    }

    #[test]
    fn a_infinity_relations_on_heisenberg() {
        let h = heisenberg();
        let c = Contraction::build(h, 5);
        let mut classes = Vec::new();
        for d in 1..3 {
            for k in 0..c.cohomology(d).unwrap().dim() {
                classes.push(Class::basis(&c, d, k).unwrap());
            }
        }
        let mut nontrivial = 0;
        for n in [3usize, 4] {
            let mut idx = vec![0usize; n];
            loop {
                let xs: Vec<Class> = idx.iter().map(|&i| classes[i].clone()).collect();
                let total: u32 = xs.iter().map(|x| x.degree).sum();
                if total + 3 - n as u32 <= 3 {
                    assert!(a_infinity_defect(&c, &xs).is_zero(), "{idx:?}");
                    if n == 4 && xs.iter().all(|x| x.degree == 1) {
                        let m2 = transferred_mu(&c, &[transferred_mu(&c, &xs[..3]).unwrap(), xs[3].clone()]).unwrap();
                        nontrivial += usize::from(!m2.is_zero());
                    }
                }
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < classes.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
        assert!(nontrivial > 0);
    }
}
