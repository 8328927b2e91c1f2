//! Depth-truncated free nilpotent Lie algebras and the pro-unipotent groups
//! they exponentiate to, in logarithmic coordinates.
//!
//! The basis is the Lyndon (Hall) basis with standard bracketing. Lie elements
//! are compared and bracketed through their images in the truncated free
//! associative algebra; the Lyndon expansion of a Lie polynomial is read off by
//! triangularity (the standard bracketing of `w` is `w` plus lexicographically
//! larger words). The group law is Dynkin's form of the Baker–Campbell–Hausdorff
//! series.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

/// Element of the truncated free associative algebra: words over generator
/// indices with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assoc {
    pub terms: BTreeMap<Vec<usize>, Rational>,
}

impl Assoc {
    pub fn zero() -> Self {
        Assoc::default()
    }

    pub fn word(w: Vec<usize>, c: Rational) -> Self {
        let mut a = Assoc::zero();
        a.add_term(w, c);
        a
    }

    pub fn add_term(&mut self, w: Vec<usize>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, o: &Assoc) -> Assoc {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Assoc {
        let mut out = Assoc::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    /// Product, dropping words longer than `depth`.
    pub fn mul(&self, o: &Assoc, depth: usize) -> Assoc {
        let mut out = Assoc::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a.len() + b.len() <= depth {
                    let mut w = a.clone();
                    w.extend_from_slice(b);
                    out.add_term(w, x * y);
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Assoc, depth: usize) -> Assoc {
        self.mul(o, depth).add(&o.mul(self, depth).scale(&-Rational::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Lyndon words over `k` letters of length `≤ n`, ordered by length then lexicographically.
pub fn lyndon_words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || n == 0 {
        return out;
    }
    // Duval's generation in lexicographic order
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => break,
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Number of Lyndon words of length `n` on `k` letters: `(1/n) Σ_{d|n} μ(d) k^{n/d}`.
pub fn witt_dimension(k: usize, n: usize) -> usize {
    fn mobius(mut d: usize) -> i64 {
        let mut r = 1;
        let mut p = 2;
        while p * p <= d {
            if d % p == 0 {
                d /= p;
                if d % p == 0 {
                    return 0;
                }
                r = -r;
            }
            p += 1;
        }
        if d > 1 {
            r = -r;
        }
        r
    }
    let mut s: i64 = 0;
    for d in 1..=n {
        if n % d == 0 {
            s += mobius(d) * (k as i64).pow((n / d) as u32);
        }
    }
    (s / n as i64) as usize
}

/// Free Lie algebra on named generators, truncated at bracket length `depth`.
#[derive(Debug, PartialEq, Eq)]
pub struct FreeLie {
    names: Vec<String>,
    depth: usize,
    basis: Vec<Vec<usize>>,
    bracketings: Vec<Assoc>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl FreeLie {
    /// Builds the Lyndon basis and checks its size against the Witt formula.
    pub fn new(names: &[&str], depth: usize) -> Result<Arc<FreeLie>> {
        if names.is_empty() || depth == 0 {
            return Err(Error::InvalidInput("need at least one generator and depth >= 1".into()));
        }
        let k = names.len();
        let basis = lyndon_words(k, depth);
        for n in 1..=depth {
            let count = basis.iter().filter(|w| w.len() == n).count();
            if count != witt_dimension(k, n) {
                return Err(Error::InvalidInput(format!(
                    "Lyndon basis has {count} words of length {n}, expected {}",
                    witt_dimension(k, n)
                )));
            }
        }
        let index: BTreeMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut bracketings: Vec<Assoc> = Vec::with_capacity(basis.len());
        for w in &basis {
            let b = if w.len() == 1 {
                Assoc::word(w.clone(), Rational::one())
            } else {
                let split = (1..w.len()).find(|&i| index.contains_key(&w[i..])).expect("Lyndon words factor");
                let (u, v) = (&bracketings[index[&w[..split]]], &bracketings[index[&w[split..]]]);
                u.commutator(v, depth)
            };
            bracketings.push(b);
        }
        Ok(Arc::new(FreeLie {
            names: names.iter().map(|s| s.to_string()).collect(),
            depth,
            basis,
            bracketings,
            index,
        }))
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis size per bracket length `1..=depth`.
    pub fn dims_by_length(&self) -> Vec<usize> {
        (1..=self.depth).map(|n| self.basis.iter().filter(|w| w.len() == n).count()).collect()
    }

    pub fn basis_words(&self) -> &[Vec<usize>] {
        &self.basis
    }

    /// Standard bracketing of basis element `i`, e.g. `[x,[x,y]]`.
    pub fn basis_label(&self, i: usize) -> String {
        fn label(l: &FreeLie, w: &[usize]) -> String {
            if w.len() == 1 {
                return l.names[w[0]].clone();
            }
            let split = (1..w.len()).find(|&i| l.index.contains_key(&w[i..])).unwrap();
            format!("[{},{}]", label(l, &w[..split]), label(l, &w[split..]))
        }
        label(self, &self.basis[i])
    }
}

/// Lie element in Lyndon coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSeries {
    algebra: Arc<FreeLie>,
    coeffs: Vec<Rational>,
}

impl LieSeries {
    pub fn zero(algebra: &Arc<FreeLie>) -> Self {
        LieSeries { algebra: algebra.clone(), coeffs: vec![Rational::zero(); algebra.dim()] }
    }

    pub fn generator(algebra: &Arc<FreeLie>, i: usize) -> Self {
        let mut s = LieSeries::zero(algebra);
        s.coeffs[algebra.index[&vec![i]]] = Rational::one();
        s
    }

    pub fn from_coeffs(algebra: &Arc<FreeLie>, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                algebra.dim(),
                coeffs.len()
            )));
        }
        Ok(LieSeries { algebra: algebra.clone(), coeffs })
    }

    pub fn algebra(&self) -> &Arc<FreeLie> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &LieSeries) -> LieSeries {
        LieSeries {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> LieSeries {
        LieSeries { algebra: self.algebra.clone(), coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn to_assoc(&self) -> Assoc {
        let mut out = Assoc::zero();
        for (c, b) in self.coeffs.iter().zip(&self.algebra.bracketings) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        out
    }

    /// Lyndon coordinates of a Lie polynomial given associatively; fails if it
    /// is not a Lie polynomial.
    pub fn from_assoc(algebra: &Arc<FreeLie>, a: &Assoc) -> Result<LieSeries> {
        let mut rest = a.clone();
        let mut coeffs = vec![Rational::zero(); algebra.dim()];
        while let Some((w, c)) = rest.terms.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            let Some(&i) = algebra.index.get(&w) else {
                return Err(Error::InvalidInput("element is not a Lie polynomial".into()));
            };
            coeffs[i] += &c;
            rest = rest.add(&algebra.bracketings[i].scale(&-c));
        }
        Ok(LieSeries { algebra: algebra.clone(), coeffs })
    }

    pub fn bracket(&self, o: &LieSeries) -> LieSeries {
        let a = self.to_assoc().commutator(&o.to_assoc(), self.algebra.depth);
        LieSeries::from_assoc(&self.algebra, &a).expect("brackets of Lie elements are Lie")
    }

    pub fn format(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let label = self.algebra.basis_label(i);
            parts.push(if c.is_one() { label } else { format!("{} {label}", format_rational(c)) });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// Coefficient of each right-nested bracket `[a₁,[a₂,…,a_m]]` (letters 0 = u,
/// 1 = v) in Dynkin's form of the BCH series, up to length `depth`.
pub fn dynkin_coefficients(depth: usize) -> BTreeMap<Vec<u8>, Rational> {
    fn rec(pairs: &mut Vec<(usize, usize)>, budget: usize, out: &mut BTreeMap<Vec<u8>, Rational>) {
        if !pairs.is_empty() {
            let n = pairs.len();
            let mut letters = Vec::new();
            let mut denom = Rational::one();
            for &(r, s) in pairs.iter() {
                letters.extend(std::iter::repeat(0u8).take(r));
                letters.extend(std::iter::repeat(1u8).take(s));
                denom *= factorial(r) * factorial(s);
            }
            let m = letters.len();
            // the nested bracket vanishes when the innermost two letters agree
            if m == 1 || letters[m - 1] != letters[m - 2] {
                let sign = if n % 2 == 1 { int(1) } else { int(-1) };
                let c = sign / (int(n as i64) * denom * int(m as i64));
                *out.entry(letters).or_insert_with(Rational::zero) += c;
            }
        }
        for r in 0..=budget {
            for s in 0..=budget - r {
                if r + s > 0 {
                    pairs.push((r, s));
                    rec(pairs, budget - r - s, out);
                    pairs.pop();
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    rec(&mut Vec::new(), depth, &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

/// `log(exp u · exp v)` truncated at the algebra's depth.
pub fn bch(u: &LieSeries, v: &LieSeries) -> LieSeries {
    assert!(Arc::ptr_eq(&u.algebra, &v.algebra) || u.algebra == v.algebra, "bch needs a shared algebra");
    let depth = u.algebra.depth;
    let ends = [u.to_assoc(), v.to_assoc()];
    let mut nested: BTreeMap<Vec<u8>, Assoc> = BTreeMap::new();
    let mut total = Assoc::zero();
    for (word, c) in dynkin_coefficients(depth) {
        // innermost bracket first; suffixes are shared between words
        let mut acc = ends[word[word.len() - 1] as usize].clone();
        for k in (0..word.len() - 1).rev() {
            let suffix = &word[k..];
            acc = match nested.get(suffix) {
                Some(a) => a.clone(),
                None => {
                    let a = ends[word[k] as usize].commutator(&acc, depth);
                    nested.insert(suffix.to_vec(), a.clone());
                    a
                }
            };
        }
        total = total.add(&acc.scale(&c));
    }
    LieSeries::from_assoc(&u.algebra, &total).expect("the BCH series is a Lie element")
}

/// Element of the truncated pro-unipotent group, stored as its logarithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLike {
    pub log: LieSeries,
}

impl GroupLike {
    pub fn exp(log: LieSeries) -> Self {
        GroupLike { log }
    }

    pub fn identity(algebra: &Arc<FreeLie>) -> Self {
        GroupLike { log: LieSeries::zero(algebra) }
    }

    pub fn mul(&self, o: &GroupLike) -> GroupLike {
        GroupLike { log: bch(&self.log, &o.log) }
    }

    pub fn inverse(&self) -> GroupLike {
        GroupLike { log: self.log.scale(&-Rational::one()) }
    }

    /// `g^λ`, defined through `log(g^λ) = λ log g`.
    pub fn power(&self, lambda: &Rational) -> GroupLike {
        GroupLike { log: self.log.scale(lambda) }
    }
}

pub fn power(g: &GroupLike, lambda: &Rational) -> GroupLike {
    g.power(lambda)
}

/// The completion of the group generated by `τ²` is `exp` of the free Lie
/// algebra on one generator `t`, i.e. `(ℚ, +)`. The endomorphism
/// `τ² ↦ (τ²)^λ` is `t ↦ λt`. Returns its action on `H₀` (one component) and on
/// `H₁` (the abelianization tensored with ℚ).
pub fn twist_action(lambda: &Rational) -> (Rational, Rational) {
    let lie = FreeLie::new(&["t"], 1).expect("one generator, depth one");
    let g = GroupLike::exp(LieSeries::generator(&lie, 0));
    let image = g.power(lambda);
    let h1 = image.log.coeffs()[0].clone() / g.log.coeffs()[0].clone();
    (Rational::one(), h1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn witt_counts() {
        let l = FreeLie::new(&["x", "y"], 4).unwrap();
        assert_eq!(l.dims_by_length(), vec![2, 1, 2, 3]);
        assert_eq!(witt_dimension(3, 4), 18);
        assert_eq!(lyndon_words(3, 4).iter().filter(|w| w.len() == 4).count(), 18);
        assert_eq!(l.basis_label(2), "[x,y]");
    }

    #[test]
    fn bch_low_depth() {
        let l = FreeLie::new(&["x", "y"], 2).unwrap();
        let x = LieSeries::generator(&l, 0);
        let y = LieSeries::generator(&l, 1);
        let z = bch(&x, &y);
        let expect = x.add(&y).add(&x.bracket(&y).scale(&frac(1, 2)));
        assert_eq!(z, expect);
        assert!(bch(&x, &x.scale(&int(-1))).is_zero());
    }

    #[test]
    fn abelian_case() {
        let l = FreeLie::new(&["x"], 4).unwrap();
        let x = LieSeries::generator(&l, 0);
        assert_eq!(bch(&x.scale(&int(2)), &x.scale(&frac(1, 3))), x.scale(&frac(7, 3)));
    }

    #[test]
    fn twist() {
        assert_eq!(twist_action(&int(2)), (int(1), int(2)));
        assert_eq!(twist_action(&int(1)), (int(1), int(1)));
    }

    #[test]
    fn non_lie_rejected() {
        let l = FreeLie::new(&["x", "y"], 2).unwrap();
        assert!(LieSeries::from_assoc(&l, &Assoc::word(vec![0, 1], int(1))).is_err());
    }
}
