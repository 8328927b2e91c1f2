//! Free graded-commutative algebras and finitely presented cdgas.
//!
//! Sign convention: a monomial is stored as its exponent vector over the
//! generators, read as the ordered product `g_0^{e_0} g_1^{e_1} ...`. Products
//! are brought back into that order; each transposition of two odd factors
//! contributes a sign. Odd generators square to zero.

mod cdga;
mod morphism;
mod parse;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

pub use cdga::{Cdga, Cohomology};
pub use morphism::CdgaMorphism;
pub use parse::parse_polynomial;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// Ordered list of named generators; the order fixes monomial bases and signs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
}

/// Exponent vector over a [`GeneratorSet`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Number of generator factors, counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Homogeneous or not; homogeneity is checked where it matters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        let mut names = std::collections::BTreeSet::new();
        for g in &gens {
            if g.degree == 0 {
                return Err(Error::InvalidInput(format!("generator {} has degree 0", g.name)));
            }
            if !is_identifier(&g.name) {
                return Err(Error::InvalidInput(format!("bad generator name {:?}", g.name)));
            }
            if !names.insert(g.name.clone()) {
                return Err(Error::InvalidInput(format!("duplicate generator {}", g.name)));
            }
        }
        Ok(GeneratorSet { gens })
    }

    pub fn from_pairs(pairs: &[(&str, u32)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(n, d)| Generator {
                    name: (*n).to_string(),
                    degree: *d,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.gens[i].degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].degree % 2 == 1
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.gens).map(|(e, g)| e * g.degree).sum()
    }

    /// Degree of a nonzero polynomial, or `None` for zero / inhomogeneous input.
    pub fn degree(&self, p: &Polynomial) -> Option<u32> {
        let mut degs = p.terms.keys().map(|m| self.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn generator_poly(&self, i: usize) -> Polynomial {
        Polynomial::monomial(Monomial::generator(self.len(), i), Rational::one())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::monomial(Monomial::unit(self.len()), Rational::one())
    }

    /// Product of two monomials: `None` when an odd generator would square,
    /// otherwise the sorted monomial and its Koszul sign.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let n = self.len();
        let mut exps = Vec::with_capacity(n);
        for i in 0..n {
            let e = a.0[i] + b.0[i];
            if e > 1 && self.is_odd(i) {
                return None;
            }
            exps.push(e);
        }
        // Each odd factor of b moves left past the odd factors of a with larger index.
        let mut odd_after = 0u32;
        let mut swaps = 0u32;
        for i in (0..n).rev() {
            if self.is_odd(i) {
                swaps += b.0[i] * odd_after;
                odd_after += a.0[i];
            }
        }
        Some((Monomial(exps), swaps % 2 == 1))
    }

    pub fn multiply(&self, p: &Polynomial, r: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &p.terms {
            for (mb, cb) in &r.terms {
                if let Some((m, neg)) = self.multiply_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// All monomials of total degree `n`, ordered by descending exponent
    /// vector (so `[xy, xz, yz]` for three degree-1 generators).
    pub fn monomial_basis(&self, n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0; self.len()];
        self.enumerate(0, n, &mut current, &mut out);
        out
    }

    fn enumerate(&self, i: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.len() {
            if remaining == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let d = self.gens[i].degree;
        let mut max = remaining / d;
        if self.is_odd(i) {
            max = max.min(1);
        }
        for e in (0..=max).rev() {
            current[i] = e;
            self.enumerate(i + 1, remaining - e * d, current, out);
        }
        current[i] = 0;
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.gens[i].name.clone()),
                _ => parts.push(format!("{}^{}", self.gens[i].name, e)),
            }
        }
        parts.join("*")
    }

    /// Renders a polynomial in the syntax accepted by [`parse_polynomial`].
    pub fn format(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = p.terms.iter().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if m.is_unit() {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{} {}", format_rational(&abs), mono));
            }
        }
        out
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Decomposable means every monomial has at least two generator factors.
    pub fn is_decomposable(&self) -> bool {
        self.terms.keys().all(|m| m.length() >= 2)
    }

    /// Coordinates in a monomial basis. Monomials outside the basis are an error.
    pub fn to_vector(&self, basis: &[Monomial]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = basis
                .binary_search_by(|b| m.cmp(b))
                .unwrap_or_else(|_| panic!("monomial {m:?} not in basis"));
            v[i] = c.clone();
        }
        v
    }

    pub fn from_vector(v: &[Rational], basis: &[Monomial]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (c, m) in v.iter().zip(basis) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn set(pairs: &[(&str, u32)]) -> GeneratorSet {
        GeneratorSet::from_pairs(pairs).unwrap()
    }

    #[test]
    fn koszul_signs() {
        let g = set(&[("x", 1), ("y", 1)]);
        let x = g.generator_poly(0);
        let y = g.generator_poly(1);
        let xy = g.multiply(&x, &y);
        assert_eq!(g.format(&xy), "x*y");
        assert_eq!(g.multiply(&y, &x), xy.scale(&int(-1)));
        assert!(g.multiply(&x, &x).is_zero());
        let e = set(&[("e2", 2)]);
        let e2 = e.generator_poly(0);
        assert_eq!(e.format(&e.multiply(&e2, &e2)), "e2^2");
    }

    #[test]
    fn monomial_bases() {
        let g = set(&[("x", 1), ("y", 1), ("z", 1)]);
        let b: Vec<String> = g.monomial_basis(2).iter().map(|m| g.format_monomial(m)).collect();
        assert_eq!(b, ["x*y", "x*z", "y*z"]);
        let s = set(&[("e2", 2), ("e3", 3)]);
        let b: Vec<String> = s.monomial_basis(4).iter().map(|m| s.format_monomial(m)).collect();
        assert_eq!(b, ["e2^2"]);
        assert_eq!(s.monomial_basis(0), vec![Monomial::unit(2)]);
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(GeneratorSet::from_pairs(&[("x", 0)]).is_err());
        assert!(GeneratorSet::from_pairs(&[("x", 1), ("x", 2)]).is_err());
        assert!(GeneratorSet::from_pairs(&[("1x", 1)]).is_err());
    }

    fn mixed() -> GeneratorSet {
        set(&[("a", 1), ("b", 2), ("c", 3), ("e", 1), ("f", 2)])
    }

    fn homogeneous(deg: u32) -> impl Strategy<Value = Polynomial> {
        let basis = mixed().monomial_basis(deg);
        proptest::collection::vec(-3i64..=3, basis.len())
            .prop_map(move |cs| Polynomial::from_vector(&cs.iter().map(|&c| int(c)).collect::<Vec<_>>(), &basis))
    }

    proptest! {
        #[test]
        fn graded_commutativity((da, db, p, r) in (1u32..4, 1u32..4).prop_flat_map(|(a, b)| (Just(a), Just(b), homogeneous(a), homogeneous(b)))) {
            let g = mixed();
            let sign = if (da * db) % 2 == 1 { int(-1) } else { int(1) };
            prop_assert_eq!(g.multiply(&p, &r), g.multiply(&r, &p).scale(&sign));
        }

        #[test]
        fn associativity(p in homogeneous(2), r in homogeneous(3), s in homogeneous(1)) {
            let g = mixed();
            prop_assert_eq!(
                g.multiply(&g.multiply(&p, &r), &s),
                g.multiply(&p, &g.multiply(&r, &s))
            );
        }
    }
}
