//! Grading automorphisms `φ_q`, grading-lift checks and search, and weight
//! decompositions of lifted automorphisms on minimal models.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{self, Matrix, SubspaceBasis, Vector};
use crate::gca::{Cdga, CdgaMorphism, Monomial, Polynomial};
use crate::minimal_model::MinimalModel;
use crate::rational::{check_non_root_of_unity, format_rational, pow, Rational};

/// The scalar `q` of `φ_q`, which multiplies degree `i` by `q^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingData {
    q: Rational,
}

impl GradingData {
    pub fn new(q: Rational) -> Result<Self> {
        check_non_root_of_unity(&q)?;
        Ok(GradingData { q })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn scalar(&self, degree: u32) -> Rational {
        pow(&self.q, degree as i64)
    }

    pub fn automorphism(&self, a: Arc<Cdga>) -> Result<CdgaMorphism> {
        CdgaMorphism::grading_automorphism(a, &self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: u32,
    pub dim: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingLiftReport {
    pub per_degree: Vec<DegreeCheck>,
}

impl GradingLiftReport {
    pub fn holds(&self) -> bool {
        self.per_degree.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<u32> {
        self.per_degree.iter().find(|c| !c.holds).map(|c| c.degree)
    }
}

/// Does `H^n(σ) = q^n` hold for every `1 <= n <= N - 1`?
pub fn is_grading_lift(a: &Cdga, sigma: &CdgaMorphism, q: &Rational, truncation: u32) -> Result<GradingLiftReport> {
    if **sigma.source() != *a || **sigma.target() != *a {
        return Err(Error::InvalidInput("sigma must be a self-map of the algebra".into()));
    }
    let per_degree = (1..truncation)
        .map(|n| {
            let m = sigma.induced_on_cohomology(n);
            let dim = m.rows();
            let expected = Matrix::identity(dim).scale(&pow(q, n as i64));
            DegreeCheck {
                degree: n,
                dim,
                holds: m == expected,
            }
        })
        .collect();
    Ok(GradingLiftReport { per_degree })
}

/// Generators ordered so that every generator comes after those appearing in
/// its differential; ties broken by index.
fn dependency_order(a: &Cdga) -> Vec<usize> {
    let n = a.generators().len();
    let deps: Vec<BTreeSet<usize>> = (0..n)
        .map(|i| {
            let mut s = BTreeSet::new();
            for (m, _) in a.generator_differential(i).terms() {
                for (j, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        s.insert(j);
                    }
                }
            }
            s
        })
        .collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&i| !done[i] && deps[i].iter().all(|&j| done[j]));
        // d^2 = 0 and degree bounds make cycles impossible for valid input;
        // fall back to index order if one shows up anyway.
        let i = next.unwrap_or_else(|| (0..n).find(|&i| !done[i]).expect("pending generator"));
        done[i] = true;
        order.push(i);
    }
    order
}

/// Searches for a lift of `φ_q` of the form `g ↦ Σ c_k g_k` over the
/// generators of the same degree, one generator at a time.
///
/// A closed generator must satisfy `σ(g) = q^{|g|} g + d(a)` for some `a`; any
/// other generator only has to satisfy the chain-map equation. The linear
/// systems are solved with free coordinates set to zero and the result is
/// checked with [`is_grading_lift`]; `None` means the ansatz failed.
pub fn search_diagonal_lift(a: &Arc<Cdga>, q: &Rational, truncation: u32) -> Option<CdgaMorphism> {
    check_non_root_of_unity(q).ok()?;
    let gens = a.generators();
    let n = gens.len();
    let mut images: Vec<Polynomial> = vec![Polynomial::zero(); n];
    for g in dependency_order(a) {
        let deg = gens.degree_of(g);
        let same: Vec<usize> = (0..n).filter(|&k| gens.degree_of(k) == deg).collect();
        let target_basis = a.monomial_basis(deg + 1);
        let own_basis = a.monomial_basis(deg);
        let rhs_chain = crate::minimal_model::apply_images(a, &images, a.generator_differential(g)).to_vector(&target_basis);

        let closed = a.generator_differential(g).is_zero();
        let aux_basis = if closed { a.monomial_basis(deg - 1) } else { Vec::new() };
        let unknowns = same.len() + aux_basis.len();

        // Rows: chain map (target_basis), then for closed generators the
        // grading equation (own_basis).
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut rhs: Vector = Vec::new();
        let d_same: Vec<Vector> = same
            .iter()
            .map(|&k| a.differential(&gens.generator_poly(k)).to_vector(&target_basis))
            .collect();
        for r in 0..target_basis.len() {
            let mut row = vec![Rational::zero(); unknowns];
            for (c, col) in d_same.iter().enumerate() {
                row[c] = col[r].clone();
            }
            rows.push(row);
            rhs.push(rhs_chain[r].clone());
        }
        if closed {
            let own: Vec<Vector> = same.iter().map(|&k| gens.generator_poly(k).to_vector(&own_basis)).collect();
            let d_aux: Vec<Vector> = aux_basis
                .iter()
                .map(|m| a.differential(&Polynomial::monomial(m.clone(), Rational::one())).to_vector(&own_basis))
                .collect();
            let target = gens.generator_poly(g).scale(&pow(q, deg as i64)).to_vector(&own_basis);
            for r in 0..own_basis.len() {
                let mut row = vec![Rational::zero(); unknowns];
                for (c, col) in own.iter().enumerate() {
                    row[c] = col[r].clone();
                }
                for (c, col) in d_aux.iter().enumerate() {
                    row[same.len() + c] = -col[r].clone();
                }
                rows.push(row);
                rhs.push(target[r].clone());
            }
        }
        let m = Matrix::from_rows_with_cols(rows, unknowns);
        let x = exactlin::solve(&m, &rhs)?;
        let mut img = Polynomial::zero();
        for (c, &k) in same.iter().enumerate() {
            img = img.add(&gens.generator_poly(k).scale(&x[c]));
        }
        images[g] = img;
    }
    let sigma = CdgaMorphism::new(a.clone(), a.clone(), images).ok()?;
    let report = is_grading_lift(a, &sigma, q, truncation).ok()?;
    report.holds().then_some(sigma)
}

/// The weight spaces `M^i_j` of one degree, nonempty ones only, by increasing `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeWeights {
    pub degree: u32,
    pub basis: Vec<Monomial>,
    pub parts: Vec<(u32, SubspaceBasis)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub q: Rational,
    pub degrees: Vec<DegreeWeights>,
}

impl WeightDecomposition {
    pub fn degree(&self, i: u32) -> Option<&DegreeWeights> {
        self.degrees.iter().find(|d| d.degree == i)
    }

    pub fn weights_in(&self, i: u32) -> Vec<u32> {
        self.degree(i).map(|d| d.parts.iter().map(|(j, _)| *j).collect()).unwrap_or_default()
    }

    pub fn subspace(&self, i: u32, j: u32) -> Option<&SubspaceBasis> {
        self.degree(i)?.parts.iter().find(|(w, _)| *w == j).map(|(_, s)| s)
    }

    /// The weight of a polynomial lying in a single weight space.
    pub fn weight_of(&self, i: u32, p: &Polynomial) -> Option<u32> {
        let d = self.degree(i)?;
        let v = p.to_vector(&d.basis);
        if v.iter().all(Zero::is_zero) {
            return None;
        }
        d.parts.iter().find(|(_, s)| s.contains(&v)).map(|(j, _)| *j)
    }
}

/// Default weight bound: `N` times the top degree of nonzero cohomology below `N`.
pub fn default_max_weight(mm: &MinimalModel) -> u32 {
    let n = mm.model.truncation();
    let top = (1..n).rev().find(|&d| mm.model.cohomology(d).dim() > 0).unwrap_or(1);
    n * top
}

/// Decomposes each `M^i`, `i <= N - 1`, into eigenspaces of `σ̃` with
/// eigenvalues `q^j`, `0 <= j <= max_weight`, and checks `j >= i`.
pub fn weight_decompose_model(
    mm: &MinimalModel,
    sigma_tilde: &CdgaMorphism,
    q: &Rational,
    max_weight: Option<u32>,
) -> Result<WeightDecomposition> {
    if sigma_tilde.source() != &mm.model || sigma_tilde.target() != &mm.model {
        return Err(Error::InvalidInput("sigma_tilde must be a self-map of the model".into()));
    }
    let j_max = max_weight.unwrap_or_else(|| default_max_weight(mm));
    let candidates: Vec<i64> = (0..=j_max as i64).collect();
    let mut degrees = Vec::new();
    for i in 0..mm.model.truncation() {
        let basis = mm.model.monomial_basis(i);
        let m = sigma_tilde.matrix_in_degree(i);
        let spaces = exactlin::weight_decompose(&m, q, &candidates).map_err(|e| match e {
            Error::NotWeightDiagonalizable(msg) => {
                Error::NotWeightDiagonalizable(format!(" in degree {i}{msg}"))
            }
            other => other,
        })?;
        let parts: Vec<(u32, SubspaceBasis)> = spaces
            .into_iter()
            .enumerate()
            .filter(|(_, s)| s.dim() > 0)
            .map(|(j, s)| (j as u32, s))
            .collect();
        if let Some((j, _)) = parts.iter().find(|(j, _)| *j < i) {
            return Err(Error::WeightBelowDegree(format!(
                "eigenvalue {} = q^{j} on degree {i}",
                format_rational(&pow(q, *j as i64))
            )));
        }
        degrees.push(DegreeWeights {
            degree: i,
            basis,
            parts,
        });
    }
    Ok(WeightDecomposition { q: q.clone(), degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::GeneratorSet;
    use crate::minimal_model::construct;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

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

    fn map(a: &Arc<Cdga>, imgs: &[&str]) -> CdgaMorphism {
        CdgaMorphism::new(a.clone(), a.clone(), imgs.iter().map(|s| a.parse(s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn grading_data_rejects_roots_of_unity() {
        assert!(GradingData::new(int(1)).is_err());
        assert!(GradingData::new(int(-1)).is_err());
        assert!(GradingData::new(int(0)).is_err());
        assert_eq!(GradingData::new(int(-2)).unwrap().scalar(3), int(-8));
    }

    #[test]
    fn lift_checks() {
        let a = cdga(&[("u", 2), ("v", 3)], &["0", "0"], 7);
        let phi = GradingData::new(int(3)).unwrap().automorphism(a.clone()).unwrap();
        assert!(is_grading_lift(&a, &phi, &int(3), 7).unwrap().holds());

        let s = sphere2();
        let sigma = map(&s, &["4 e2", "16 e3"]);
        assert!(is_grading_lift(&s, &sigma, &int(2), 6).unwrap().holds());

        let h = heisenberg();
        let sigma = map(&h, &["2 x", "2 y", "4 z"]);
        let report = is_grading_lift(&h, &sigma, &int(2), 4).unwrap();
        assert!(!report.holds());
        assert_eq!(report.first_failure(), Some(2));
    }

    #[test]
    fn search_examples() {
        let a = cdga(&[("u", 2), ("v", 3), ("w", 1)], &["0", "0", "0"], 6);
        let found = search_diagonal_lift(&a, &frac(1, 2), 6).unwrap();
        assert_eq!(found, GradingData::new(frac(1, 2)).unwrap().automorphism(a.clone()).unwrap());

        let s = sphere2();
        let found = search_diagonal_lift(&s, &int(2), 6).unwrap();
        assert_eq!(found, map(&s, &["4 e2", "16 e3"]));

        assert!(search_diagonal_lift(&heisenberg(), &int(2), 4).is_none());
    }

    #[test]
    fn search_on_padded_input() {
        let a = cdga(&[("e2", 2), ("e3", 3), ("u", 4), ("v", 3)], &["0", "e2^2", "0", "u"], 6);
        let found = search_diagonal_lift(&a, &int(-2), 6).unwrap();
        assert!(is_grading_lift(&a, &found, &int(-2), 6).unwrap().holds());
    }

    #[test]
    fn sphere_weights() {
        let s = sphere2();
        let mm = MinimalModel::identity_of(s.clone());
        let sigma = map(&s, &["4 e2", "16 e3"]);
        let wd = weight_decompose_model(&mm, &sigma, &int(2), None).unwrap();
        assert_eq!(wd.weights_in(2), vec![2]);
        assert_eq!(wd.weights_in(3), vec![4]);
        assert_eq!(wd.weights_in(4), vec![4]);
        assert_eq!(wd.weights_in(5), vec![6]);
    }

    #[test]
    fn zero_differential_weights_are_pure() {
        let a = cdga(&[("u", 2), ("v", 3), ("w", 1)], &["0", "0", "0"], 6);
        let mm = MinimalModel::identity_of(a.clone());
        let phi = GradingData::new(int(3)).unwrap().automorphism(a).unwrap();
        let wd = weight_decompose_model(&mm, &phi, &int(3), None).unwrap();
        for i in 0..6 {
            let w = wd.weights_in(i);
            assert!(w.is_empty() || w == vec![i], "degree {i}: {w:?}");
        }
    }

    #[test]
    fn identity_is_below_degree() {
        let s = sphere2();
        let mm = MinimalModel::identity_of(s.clone());
        let id = CdgaMorphism::identity(s);
        assert!(matches!(weight_decompose_model(&mm, &id, &int(2), None), Err(Error::WeightBelowDegree(_))));
    }

    #[test]
    fn not_diagonalizable() {
        let a = cdga(&[("u", 2), ("v", 2)], &["0", "0"], 5);
        let mm = MinimalModel::identity_of(a.clone());
        let jordan = map(&a, &["4 u + v", "4 v"]);
        assert!(matches!(
            weight_decompose_model(&mm, &jordan, &int(2), None),
            Err(Error::NotWeightDiagonalizable(_))
        ));
    }

    #[test]
    fn lifted_weights_on_constructed_model() {
        let a = cdga(&[("e2", 2), ("e3", 3), ("u", 4), ("v", 3)], &["0", "e2^2", "0", "u"], 7);
        let mm = construct(&a, 7).unwrap();
        let sigma = search_diagonal_lift(&a, &int(3), 7).unwrap();
        let lift = crate::minimal_model::lift_endomorphism(&mm, &sigma).unwrap();
        let wd = weight_decompose_model(&mm, &lift.sigma_tilde, &int(3), None).unwrap();
        for d in &wd.degrees {
            assert!(d.parts.iter().all(|(j, _)| *j >= d.degree));
            let total: usize = d.parts.iter().map(|(_, s)| s.dim()).sum();
            assert_eq!(total, d.basis.len());
        }
    }

    /// A model with mixed weights: Λ(a2, b2, c3), dc = a*b, σ = φ_q-lift.
    fn mixed() -> &'static (MinimalModel, WeightDecomposition) {
        static CELL: std::sync::OnceLock<(MinimalModel, WeightDecomposition)> = std::sync::OnceLock::new();
        CELL.get_or_init(|| {
        let a = cdga(&[("a", 2), ("b", 2), ("c", 3)], &["0", "0", "a*b"], 9);
        let sigma = search_diagonal_lift(&a, &int(2), 9).unwrap();
        let mm = MinimalModel::identity_of(a);
        let wd = weight_decompose_model(&mm, &sigma, &int(2), None).unwrap();
        (mm, wd)
        })
    }

    #[test]
    fn differential_preserves_weight() {
        let (mm, wd) = mixed();
        for d in &wd.degrees {
            if d.degree + 1 >= mm.model.truncation() {
                continue;
            }
            for (j, s) in &d.parts {
                for v in s.vectors() {
                    let dv = mm.model.differential(&Polynomial::from_vector(v, &d.basis));
                    if !dv.is_zero() {
                        assert_eq!(wd.weight_of(d.degree + 1, &dv), Some(*j));
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn weights_add_under_products(i1 in 0u32..5, i2 in 0u32..5, k1 in 0usize..8, k2 in 0usize..8) {
            let (mm, wd) = mixed();
            prop_assume!(i1 + i2 < mm.model.truncation());
            let d1 = wd.degree(i1).unwrap();
            let d2 = wd.degree(i2).unwrap();
            let v1: Vec<(u32, &Vector)> = d1.parts.iter().flat_map(|(j, s)| s.vectors().iter().map(move |v| (*j, v))).collect();
            let v2: Vec<(u32, &Vector)> = d2.parts.iter().flat_map(|(j, s)| s.vectors().iter().map(move |v| (*j, v))).collect();
            prop_assume!(!v1.is_empty() && !v2.is_empty());
            let (j1, x) = v1[k1 % v1.len()];
            let (j2, y) = v2[k2 % v2.len()];
            let prod = mm.model.multiply(&Polynomial::from_vector(x, &d1.basis), &Polynomial::from_vector(y, &d2.basis));
            if !prod.is_zero() {
                prop_assert_eq!(wd.weight_of(i1 + i2, &prod), Some(j1 + j2));
            }
        }

        #[test]
        fn search_is_sound(q in prop_oneof![Just(2i64), Just(3), Just(-2), Just(5)], which in 0usize..4) {
            let a = match which {
                0 => sphere2(),
                1 => heisenberg(),
                2 => cdga(&[("a", 2), ("b", 2), ("c", 3)], &["0", "0", "a*b"], 7),
                _ => cdga(&[("e2", 2), ("e3", 3), ("u", 4), ("v", 3)], &["0", "e2^2", "0", "u"], 6),
            };
            let n = a.truncation();
            if let Some(s) = search_diagonal_lift(&a, &int(q), n) {
                prop_assert!(is_grading_lift(&a, &s, &int(q), n).unwrap().holds());
            }
        }
    }
}
