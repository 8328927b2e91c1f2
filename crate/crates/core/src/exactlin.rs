//! Dense exact linear algebra over the rationals.
//!
//! Every homology, lifting and eigenspace computation in the crate reduces to
//! the primitives here. Representatives are chosen deterministically: free
//! coordinates of a solution are zero and complements are built from the first
//! pivots, so repeated runs produce identical output.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, pow, Rational};

pub type Vector = Vec<Rational>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, c, x.clone());
                }
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Concatenates columns: `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        Matrix::from_columns(self.rows, &cols)
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for r in c + 1..n {
                let f = m.get(r, c) / &pivot;
                if !f.is_zero() {
                    m.add_row_multiple(r, c, &-f);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    // row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Rational) {
        for c in 0..self.cols {
            let s = &self.data[source * self.cols + c];
            if !s.is_zero() {
                let v = s * factor;
                self.data[target * self.cols + c] += v;
            }
        }
    }

    fn scale_row(&mut self, r: usize, factor: &Rational) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            if !self.data[idx].is_zero() {
                self.data[idx] *= factor;
            }
        }
    }
}

/// Reduced row echelon form together with the (strictly increasing) pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(p, row);
        let inv = a.get(row, col).recip();
        a.scale_row(row, &inv);
        for r in 0..a.rows {
            if r != row {
                let f = a.get(r, col).clone();
                if !f.is_zero() {
                    a.add_row_multiple(r, row, &-f);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// A list of linearly independent vectors in a space of fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vector>,
}

impl SubspaceBasis {
    pub fn new(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::InvalidInput(format!(
                "vector of length {} in ambient dimension {ambient_dim}",
                v.len()
            )));
        }
        let b = SubspaceBasis {
            ambient_dim,
            vectors,
        };
        if b.as_matrix().rank() != b.vectors.len() {
            return Err(Error::InvalidInput("basis vectors are dependent".into()));
        }
        Ok(b)
    }

    pub(crate) fn new_unchecked(ambient_dim: usize, vectors: Vec<Vector>) -> Self {
        SubspaceBasis {
            ambient_dim,
            vectors,
        }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self::new_unchecked(ambient_dim, Vec::new())
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::new_unchecked(ambient_dim, standard_basis(ambient_dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vector> {
        self.vectors
    }

    /// Columns are the basis vectors.
    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.vectors)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        if v.iter().all(Zero::is_zero) {
            return Some(vec![Rational::zero(); self.dim()]);
        }
        if self.dim() == 0 {
            return None;
        }
        solve(&self.as_matrix(), v)
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }

    /// Basis of the sum of two subspaces: `self`'s vectors followed by those of
    /// `other` that are new (first-pivot order).
    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let mut all = self.vectors.clone();
        all.extend(other.vectors.iter().cloned());
        independent_subset(self.ambient_dim, &all)
    }
}

pub fn standard_basis(n: usize) -> Vec<Vector> {
    (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        })
        .collect()
}

/// The vectors at the pivot positions of `[v_0 | v_1 | ...]`: the first
/// maximal independent subfamily.
pub fn independent_subset(ambient_dim: usize, vectors: &[Vector]) -> SubspaceBasis {
    if vectors.is_empty() {
        return SubspaceBasis::empty(ambient_dim);
    }
    let (_, pivots) = rref(&Matrix::from_columns(ambient_dim, vectors));
    SubspaceBasis::new_unchecked(ambient_dim, pivots.into_iter().map(|p| vectors[p].clone()).collect())
}

/// Null space basis; one vector per free column, with a 1 in that column and
/// zeros in the other free columns.
pub fn kernel_basis(m: &Matrix) -> SubspaceBasis {
    let (r, pivots) = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            let x = r.get(row, free);
            if !x.is_zero() {
                v[p] = -x.clone();
            }
        }
        vectors.push(v);
    }
    SubspaceBasis::new_unchecked(n, vectors)
}

/// Column space basis made of the pivot columns of `m` itself.
pub fn image_basis(m: &Matrix) -> SubspaceBasis {
    let (_, pivots) = rref(m);
    SubspaceBasis::new_unchecked(m.rows(), pivots.into_iter().map(|p| m.column(p)).collect())
}

/// Solves `m x = target`. Returns the solution whose free coordinates are zero,
/// or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, target: &[Rational]) -> Option<Vector> {
    assert_eq!(target.len(), m.rows(), "target length must equal row count");
    let n = m.cols();
    let aug = m.hstack(&Matrix::from_columns(m.rows(), &[target.to_vec()]));
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, n).clone();
    }
    Some(x)
}

/// First-pivot complement of `sub` inside `sup`: the vectors of `sup` that
/// extend a basis of `sub` to a basis of `sup`, scanned in order.
pub fn complement_in(sub: &SubspaceBasis, sup: &SubspaceBasis) -> SubspaceBasis {
    let mut all = sub.vectors().to_vec();
    all.extend(sup.vectors().iter().cloned());
    if all.is_empty() {
        return SubspaceBasis::empty(sup.ambient_dim());
    }
    let (_, pivots) = rref(&Matrix::from_columns(sup.ambient_dim(), &all));
    let k = sub.dim();
    SubspaceBasis::new_unchecked(
        sup.ambient_dim(),
        pivots
            .into_iter()
            .filter(|&p| p >= k)
            .map(|p| all[p].clone())
            .collect(),
    )
}

/// Eigenspaces of `m` for the eigenvalues `q^j`, `j` in `weights`, in the given
/// order. Fails unless these eigenspaces fill the whole space.
pub fn weight_decompose(m: &Matrix, q: &Rational, weights: &[i64]) -> Result<Vec<SubspaceBasis>> {
    if !m.is_square() {
        return Err(Error::InvalidInput("weight decomposition needs a square matrix".into()));
    }
    crate::rational::check_non_root_of_unity(q)?;
    let mut seen = std::collections::BTreeSet::new();
    if !weights.iter().all(|w| seen.insert(*w)) {
        return Err(Error::InvalidInput("weights must be distinct".into()));
    }
    let n = m.rows();
    let mut spaces = Vec::with_capacity(weights.len());
    let mut total = 0;
    for &j in weights {
        let shifted = m.sub(&Matrix::identity(n).scale(&pow(q, j)));
        let k = kernel_basis(&shifted);
        total += k.dim();
        spaces.push(k);
    }
    if total != n {
        return Err(Error::NotWeightDiagonalizable(format!(
            ": eigenspaces for weights {weights:?} span {total} of {n} dimensions"
        )));
    }
    Ok(spaces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&Matrix::identity(3));
        assert_eq!(r, Matrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
        let (r, p) = rref(&Matrix::from_i64(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, Matrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.vectors(), &[v(&[-1, 1])]);
        assert_eq!(kernel_basis(&Matrix::identity(4)).dim(), 0);
        assert_eq!(kernel_basis(&Matrix::zeros(2, 3)).dim(), 3);
    }

    #[test]
    fn image_examples() {
        assert_eq!(image_basis(&Matrix::identity(2)).dim(), 2);
        assert_eq!(image_basis(&Matrix::zeros(3, 2)).dim(), 0);
        let im = image_basis(&Matrix::from_i64(&[&[1], &[2]]));
        assert_eq!(im.vectors(), &[v(&[1, 2])]);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve(&Matrix::identity(2), &v(&[3, 5])), Some(v(&[3, 5])));
        assert_eq!(solve(&Matrix::from_i64(&[&[1, 1]]), &v(&[7])), Some(v(&[7, 0])));
        assert_eq!(solve(&Matrix::from_i64(&[&[0, 0]]), &v(&[1])), None);
    }

    #[test]
    fn weight_decompose_examples() {
        let two = int(2);
        let spaces = weight_decompose(&Matrix::diagonal(&[int(2), int(4)]), &two, &[1, 2]).unwrap();
        assert_eq!(spaces[0].vectors(), &[v(&[1, 0])]);
        assert_eq!(spaces[1].vectors(), &[v(&[0, 1])]);
        let spaces = weight_decompose(&Matrix::identity(2), &two, &[0]).unwrap();
        assert_eq!(spaces[0].dim(), 2);
        let jordan = Matrix::from_i64(&[&[2, 1], &[0, 2]]);
        assert!(matches!(
            weight_decompose(&jordan, &two, &[1]),
            Err(Error::NotWeightDiagonalizable(_))
        ));
        assert!(weight_decompose(&Matrix::identity(2), &int(1), &[0]).is_err());
        assert!(weight_decompose(&Matrix::identity(2), &two, &[0, 0]).is_err());
    }

    #[test]
    fn complement_uses_first_pivots() {
        let sub = SubspaceBasis::new(3, vec![v(&[1, 1, 0])]).unwrap();
        let sup = SubspaceBasis::full(3);
        let c = complement_in(&sub, &sup);
        assert_eq!(c.vectors(), &[v(&[1, 0, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), int(1));
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |xs| {
                Matrix::from_rows(xs.chunks(c).map(|row| row.iter().map(|&x| int(x)).collect()).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix(5)) {
            prop_assert_eq!(m.rank() + kernel_basis(&m).dim(), m.cols());
            for k in kernel_basis(&m).vectors() {
                prop_assert!(m.mul_vec(k).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn rref_is_idempotent(m in small_matrix(5)) {
            let (r, p) = rref(&m);
            let (rr, pp) = rref(&r);
            prop_assert_eq!(r, rr);
            prop_assert!(p.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(p, pp);
        }

        #[test]
        fn solve_recovers_consistent_targets(m in small_matrix(5), seed in proptest::collection::vec(-4i64..=4, 5)) {
            let x: Vector = seed.iter().take(m.cols()).map(|&s| int(s)).chain(std::iter::repeat(int(0))).take(m.cols()).collect();
            let b = m.mul_vec(&x);
            let y = solve(&m, &b).expect("consistent system");
            prop_assert_eq!(m.mul_vec(&y), b);
        }

        #[test]
        fn image_dimension_is_rank(m in small_matrix(5)) {
            prop_assert_eq!(image_basis(&m).dim(), m.rank());
        }
    }

    #[test]
    fn random_invertible_matrices_reduce_to_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut seen = 0;
        while seen < 20 {
            let m = Matrix::from_rows(
                (0..5).map(|_| (0..5).map(|_| int(rng.gen_range(-5..=5))).collect()).collect(),
            );
            // Determinant oracle decides invertibility independently of rref.
            if m.determinant().is_zero() {
                continue;
            }
            seen += 1;
            let (r, p) = rref(&m);
            assert_eq!(r, Matrix::identity(5));
            assert_eq!(p, vec![0, 1, 2, 3, 4]);
        }
    }
}
