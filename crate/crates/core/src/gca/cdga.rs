use num_traits::Zero;

use super::{GeneratorSet, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::exactlin::{self, complement_in, image_basis, kernel_basis, Matrix, SubspaceBasis, Vector};
use crate::rational::{sign, Rational};

/// A free graded-commutative algebra with a differential given on generators.
///
/// `truncation` is the degree bound `N`: results are certified in degrees
/// `<= N - 1`. Computations in higher degrees are still exact (the algebra is
/// degreewise finite), they are just not part of any claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdga {
    gens: GeneratorSet,
    differential: Vec<Polynomial>,
    truncation: u32,
}

/// Cohomology in one degree with deterministic cocycle representatives.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: u32,
    pub basis: Vec<Monomial>,
    pub representatives: Vec<Polynomial>,
    rep_vectors: Vec<Vector>,
    boundaries: SubspaceBasis,
    cocycles: SubspaceBasis,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative_vectors(&self) -> &[Vector] {
        &self.rep_vectors
    }

    pub fn boundaries(&self) -> &SubspaceBasis {
        &self.boundaries
    }

    pub fn cocycles(&self) -> &SubspaceBasis {
        &self.cocycles
    }

    /// Class coordinates of a cocycle in the representative basis, or `None`
    /// if the input is not a cocycle.
    pub fn class_of_vector(&self, v: &[Rational]) -> Option<Vector> {
        if v.iter().all(Zero::is_zero) {
            return Some(vec![Rational::zero(); self.dim()]);
        }
        let mut cols = self.rep_vectors.clone();
        cols.extend(self.boundaries.vectors().iter().cloned());
        let x = exactlin::solve(&Matrix::from_columns(self.basis.len(), &cols), v)?;
        Some(x[..self.dim()].to_vec())
    }

    pub fn class_of(&self, p: &Polynomial) -> Option<Vector> {
        self.class_of_vector(&p.to_vector(&self.basis))
    }

    /// The cocycle `sum_k c_k rep_k`.
    pub fn cocycle_from_class(&self, class: &[Rational]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (c, r) in class.iter().zip(&self.representatives) {
            p = p.add(&r.scale(c));
        }
        p
    }
}

impl Cdga {
    /// Validates degrees of the differential and `d^2 = 0` on generators.
    pub fn new(gens: GeneratorSet, differential: Vec<Polynomial>, truncation: u32) -> Result<Self> {
        if differential.len() != gens.len() {
            return Err(Error::InvalidInput(format!(
                "{} differential values for {} generators",
                differential.len(),
                gens.len()
            )));
        }
        for (i, dg) in differential.iter().enumerate() {
            if dg.terms().any(|(m, _)| m.0.len() != gens.len()) {
                return Err(Error::InvalidInput("monomial over the wrong generator set".into()));
            }
            if dg.is_zero() {
                continue;
            }
            let want = gens.degree_of(i) + 1;
            if gens.degree(dg) != Some(want) {
                return Err(Error::InvalidInput(format!(
                    "d({}) = {} is not homogeneous of degree {want}",
                    gens.generators()[i].name,
                    gens.format(dg)
                )));
            }
        }
        let a = Cdga {
            gens,
            differential,
            truncation,
        };
        for i in 0..a.gens.len() {
            let dd = a.differential(&a.differential[i]);
            if !dd.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "d^2({}) = {} is not zero",
                    a.gens.generators()[i].name,
                    a.gens.format(&dd)
                )));
            }
        }
        Ok(a)
    }

    pub fn with_truncation(&self, truncation: u32) -> Cdga {
        Cdga {
            truncation,
            ..self.clone()
        }
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn generator_differential(&self, i: usize) -> &Polynomial {
        &self.differential[i]
    }

    pub fn differentials(&self) -> &[Polynomial] {
        &self.differential
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.iter().all(Polynomial::is_zero)
    }

    pub fn multiply(&self, p: &Polynomial, r: &Polynomial) -> Polynomial {
        self.gens.multiply(p, r)
    }

    pub fn monomial_basis(&self, n: u32) -> Vec<Monomial> {
        self.gens.monomial_basis(n)
    }

    /// Extends the generator values to a degree +1 derivation:
    /// `d(ab) = (da)b + (-1)^{|a|} a(db)`.
    pub fn differential(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let dm = self.differential_of_monomial(m);
            out = out.add(&dm.scale(c));
        }
        out
    }

    fn differential_of_monomial(&self, m: &Monomial) -> Polynomial {
        let n = self.gens.len();
        let mut out = Polynomial::zero();
        let mut prefix = Monomial::unit(n);
        let mut prefix_degree = 0u32;
        for i in 0..n {
            for _ in 0..m.0[i] {
                let mut suffix = m.clone();
                for (j, e) in suffix.0.iter_mut().enumerate() {
                    *e -= prefix.0[j];
                }
                suffix.0[i] -= 1;
                let dg = &self.differential[i];
                if !dg.is_zero() {
                    let left = Polynomial::monomial(prefix.clone(), sign(prefix_degree % 2 == 1));
                    let term = self.multiply(
                        &self.multiply(&left, dg),
                        &Polynomial::monomial(suffix, Rational::from_integer(1.into())),
                    );
                    out = out.add(&term);
                }
                prefix.0[i] += 1;
                prefix_degree += self.gens.degree_of(i);
            }
        }
        out
    }

    /// Matrix of `d: A^n -> A^{n+1}` in the monomial bases.
    pub fn d_matrix(&self, n: u32) -> Matrix {
        let src = self.monomial_basis(n);
        let tgt = self.monomial_basis(n + 1);
        let cols: Vec<Vector> = src
            .iter()
            .map(|m| {
                self.differential(&Polynomial::monomial(m.clone(), Rational::from_integer(1.into())))
                    .to_vector(&tgt)
            })
            .collect();
        Matrix::from_columns(tgt.len(), &cols)
    }

    pub fn cocycles(&self, n: u32) -> SubspaceBasis {
        kernel_basis(&self.d_matrix(n))
    }

    pub fn boundaries(&self, n: u32) -> SubspaceBasis {
        if n == 0 {
            return SubspaceBasis::empty(self.monomial_basis(0).len());
        }
        image_basis(&self.d_matrix(n - 1))
    }

    /// `H^n`; representatives are the first-pivot complement of the
    /// boundaries inside the cocycles.
    pub fn cohomology(&self, n: u32) -> Cohomology {
        let basis = self.monomial_basis(n);
        let cocycles = self.cocycles(n);
        let boundaries = self.boundaries(n);
        let reps = complement_in(&boundaries, &cocycles);
        let rep_vectors = reps.into_vectors();
        Cohomology {
            degree: n,
            representatives: rep_vectors.iter().map(|v| Polynomial::from_vector(v, &basis)).collect(),
            basis,
            rep_vectors,
            boundaries,
            cocycles,
        }
    }

    /// Some `a` with `da = p` (zero free coordinates), if `p` is exact.
    pub fn preimage(&self, p: &Polynomial, degree: u32) -> Option<Polynomial> {
        if p.is_zero() {
            return Some(Polynomial::zero());
        }
        if degree == 0 {
            return None;
        }
        let target = p.to_vector(&self.monomial_basis(degree));
        let x = exactlin::solve(&self.d_matrix(degree - 1), &target)?;
        Some(Polynomial::from_vector(&x, &self.monomial_basis(degree - 1)))
    }

    pub fn format(&self, p: &Polynomial) -> String {
        self.gens.format(p)
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial> {
        super::parse_polynomial(&self.gens, s)
    }

    /// The largest degree of a generator.
    pub fn max_generator_degree(&self) -> u32 {
        self.gens.generators().iter().map(|g| g.degree).max().unwrap_or(0)
    }
}
