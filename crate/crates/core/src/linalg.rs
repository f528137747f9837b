//! Exact linear algebra on [`Scalar`] matrices: fraction-free elimination,
//! reduced row echelon forms (the canonical representative every subspace
//! comparison relies on), solution spaces and projective canonicalization.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// A rectangular matrix of exact scalars, row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(rows * cols, data.len(), "matrix shape mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    pub fn push_row(&mut self, row: Vec<Scalar>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    /// Exact rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        self.clone().bareiss().0
    }

    /// Exact determinant of a square matrix (Bareiss elimination).
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "det of a non-square matrix");
        let (rank, det) = self.clone().bareiss();
        if rank < self.rows {
            Scalar::zero()
        } else {
            det
        }
    }

    /// One-pass Bareiss elimination with column pivoting.
    ///
    /// Returns the rank and, for square full-rank input, the determinant
    /// (the last pivot of the fraction-free schema, adjusted for swaps).
    fn bareiss(mut self) -> (usize, Scalar) {
        let mut prev = Scalar::one();
        let mut sign = 1i32;
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                sign = -sign;
            }
            let pivot = self[(r, c)].clone();
            for i in r + 1..self.rows {
                let head = self[(i, c)].clone();
                for j in 0..self.cols {
                    let num = &(&self[(i, j)] * &pivot) - &(&head * &self[(r, j)]);
                    let v = &num / &prev;
                    self.set(i, j, v);
                }
            }
            prev = pivot;
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let det = if sign < 0 { -&prev } else { prev };
        (r, det)
    }

    /// Reduced row echelon form; the row set is the canonical basis of the
    /// row space, so two matrices span the same space iff their `rref`
    /// non-zero rows are equal.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    /// Canonical basis of the row space: the non-zero rows of the RREF.
    pub fn row_space_canonical(&self) -> Matrix {
        let rref = self.rref();
        let rows = (0..rref.rank)
            .map(|i| rref.matrix.row(i).to_vec())
            .collect();
        Matrix::from_rows_with_cols(rows, self.cols)
    }

    fn from_rows_with_cols(rows: Vec<Vec<Scalar>>, cols: usize) -> Matrix {
        if rows.is_empty() {
            Matrix::zero(0, cols)
        } else {
            Matrix::from_rows(rows)
        }
    }

    /// Does `v` lie in the row space? `self` must already be in RREF.
    pub fn rref_contains(&self, v: &[Scalar], pivots: &[usize]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut w = v.to_vec();
        for (i, &c) in pivots.iter().enumerate() {
            if w[c].is_zero() {
                continue;
            }
            let f = w[c].clone();
            for j in c..self.cols {
                w[j] = &w[j] - &(&f * &self[(i, j)]);
            }
        }
        w.iter().all(Scalar::is_zero)
    }

    /// Exact solution set of `self * x = rhs`.
    ///
    /// `None` is the "inconsistent" value, not a failure. Otherwise the
    /// affine subspace is returned as a basepoint plus a kernel basis of
    /// dimension `cols - rank`.
    pub fn solution_space(&self, rhs: &[Scalar]) -> Option<AffineSubspace> {
        assert_eq!(rhs.len(), self.rows, "rhs length must equal row count");
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self[(i, j)].clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let rref = aug.rref();
        if rref.pivots.contains(&self.cols) {
            return None;
        }
        let pivot_cols = &rref.pivots;
        let mut basepoint = vec![Scalar::zero(); self.cols];
        for (i, &c) in pivot_cols.iter().enumerate() {
            basepoint[c] = rref.matrix[(i, self.cols)].clone();
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut dir = vec![Scalar::zero(); self.cols];
            dir[free] = Scalar::one();
            for (i, &c) in pivot_cols.iter().enumerate() {
                dir[c] = -&rref.matrix[(i, free)];
            }
            basis.push(dir);
        }
        Some(AffineSubspace { basepoint, basis })
    }

    /// Basis of the kernel `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let rhs = vec![Scalar::zero(); self.rows];
        self.solution_space(&rhs).expect("homogeneous system").basis
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Result of [`Matrix::rref`].
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// An affine solution set: `basepoint + span(basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub basepoint: Vec<Scalar>,
    pub basis: Vec<Vec<Scalar>>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    debug_assert_eq!(u.len(), v.len());
    let mut acc = Scalar::zero();
    for (a, b) in u.iter().zip(v) {
        acc = &acc + &(a * b);
    }
    acc
}

/// Canonicalize a nonzero vector as a projective representative: first
/// nonzero coordinate positive, entries integral over the base ring with
/// content 1. The result is the unique such representative of the class
/// under scaling by the full scalar field.
pub fn canonicalize_projective(v: &[Scalar]) -> Vec<Scalar> {
    let lead = v
        .iter()
        .find(|s| !s.is_zero())
        .expect("projective representative of the zero vector");
    let inv = lead.inv();
    let mut w: Vec<Scalar> = v.iter().map(|s| s * &inv).collect();
    // Clear denominators and divide by the numerator gcd so every component
    // (both rational and sqrt parts) is an integer and the content is 1.
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for s in &w {
        let (a, b) = s.components();
        for r in [&a, &b] {
            if !r.is_zero() {
                denom_lcm = denom_lcm.lcm(r.denom());
            }
        }
    }
    let scale = BigRational::from_integer(denom_lcm);
    for s in &w {
        let (a, b) = s.components();
        for r in [&a, &b] {
            if !r.is_zero() {
                numer_gcd = numer_gcd.gcd(&(r * &scale).to_integer());
            }
        }
    }
    debug_assert!(numer_gcd.is_positive());
    let factor = Scalar::Rational(scale / BigRational::from_integer(numer_gcd));
    for s in w.iter_mut() {
        *s = &*s * &factor;
    }
    w
}

#[cfg(test)]
pub mod oracle {
    //! Brute-force oracles, independent of the elimination code paths:
    //! determinants by cofactor expansion and rank by minor enumeration.

    use super::*;
    use crate::subset::combinations;

    pub fn det_cofactor(m: &Matrix) -> Scalar {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        if n == 0 {
            return Scalar::one();
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = Scalar::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let mut rows = Vec::new();
            for i in 1..n {
                let mut row = Vec::new();
                for c in 0..n {
                    if c != j {
                        row.push(m[(i, c)].clone());
                    }
                }
                rows.push(row);
            }
            let minor = det_cofactor(&Matrix::from_rows(rows));
            let term = &m[(0, j)] * &minor;
            acc = if j % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        acc
    }

    pub fn rank_by_minors(m: &Matrix) -> usize {
        let max = m.rows().min(m.cols());
        for r in (1..=max).rev() {
            for rs in combinations(m.rows(), r) {
                for cs in combinations(m.cols(), r) {
                    let rows: Vec<Vec<Scalar>> = rs
                        .elements()
                        .map(|i| cs.elements().map(|j| m[(i, j)].clone()).collect())
                        .collect();
                    if !det_cofactor(&Matrix::from_rows(rows)).is_zero() {
                        return r;
                    }
                }
            }
        }
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: Vec<Vec<i64>>) -> Matrix {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Scalar::from_int).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(Matrix::identity(4).rank(), 4);
        assert_eq!(Matrix::zero(3, 5).rank(), 0);
    }

    #[test]
    fn det_examples() {
        assert_eq!(Matrix::identity(2).det(), Scalar::one());
        assert_eq!(m(vec![vec![1, 2], vec![1, 2]]).det(), Scalar::zero());
        // rows are the first two normals of the six-line fixture
        assert_eq!(
            m(vec![vec![-2, 2], vec![-3, 4]]).det(),
            Scalar::from_int(-2)
        );
        assert_eq!(
            m(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).det(),
            Scalar::from_int(-3)
        );
    }

    #[test]
    fn solution_space_identity() {
        let rhs: Vec<Scalar> = vec![Scalar::from_int(3), Scalar::from_int(-1)];
        let sol = Matrix::identity(2).solution_space(&rhs).unwrap();
        assert_eq!(sol.basepoint, rhs);
        assert!(sol.basis.is_empty());
    }

    #[test]
    fn solution_space_inconsistent() {
        let zero_row = Matrix::zero(1, 3);
        assert!(zero_row.solution_space(&[Scalar::one()]).is_none());
        assert_eq!(zero_row.solution_space(&[Scalar::zero()]).unwrap().dim(), 3);
    }

    #[test]
    fn solution_space_dimension_is_cols_minus_rank() {
        let mat = m(vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 0, 1]]);
        let sol = mat.solution_space(&vec![Scalar::zero(); 3]).unwrap();
        assert_eq!(sol.dim(), 4 - mat.rank());
        for dir in &sol.basis {
            for i in 0..mat.rows() {
                assert!(dot(mat.row(i), dir).is_zero());
            }
        }
    }

    #[test]
    fn row_space_canonical_is_invariant_under_row_ops() {
        let a = m(vec![vec![1, 2, 3], vec![0, 1, 1]]);
        let b = m(vec![vec![2, 5, 7], vec![1, 3, 4], vec![3, 8, 11]]);
        assert_eq!(a.row_space_canonical(), b.row_space_canonical());
    }

    #[test]
    fn projective_canonicalization() {
        let v = vec![
            Scalar::zero(),
            Scalar::from_ratio(-2, 3),
            Scalar::from_int(4),
        ];
        assert_eq!(
            canonicalize_projective(&v),
            vec![Scalar::zero(), Scalar::from_int(1), Scalar::from_int(-6)]
        );
        // scaling by a quadratic unit lands in the same class
        let w = vec![Scalar::one(), Scalar::sqrt_term(1, 3)];
        let scaled: Vec<Scalar> = w.iter().map(|s| s * &Scalar::sqrt_term(2, 3)).collect();
        assert_eq!(
            canonicalize_projective(&w),
            canonicalize_projective(&scaled)
        );
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = Matrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c).prop_map(move |vals| {
                Matrix::new(r, c, vals.into_iter().map(Scalar::from_int).collect())
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_matches_minor_oracle(mat in arb_matrix(4)) {
            prop_assert_eq!(mat.rank(), oracle::rank_by_minors(&mat));
        }

        #[test]
        fn det_matches_cofactor_oracle(mat in arb_matrix(4)) {
            if mat.rows() == mat.cols() {
                prop_assert_eq!(mat.det(), oracle::det_cofactor(&mat));
            }
        }

        #[test]
        fn det_is_alternating(mat in arb_matrix(4)) {
            if mat.rows() == mat.cols() && mat.rows() >= 2 {
                let mut swapped = mat.row_vecs();
                swapped.swap(0, 1);
                prop_assert_eq!(Matrix::from_rows(swapped).det(), -&mat.det());
            }
        }

        #[test]
        fn det_is_linear_in_first_row(mat in arb_matrix(3), k in -4i64..=4) {
            if mat.rows() == mat.cols() {
                let mut scaled = mat.row_vecs();
                for v in scaled[0].iter_mut() {
                    *v = &*v * &Scalar::from_int(k);
                }
                prop_assert_eq!(
                    Matrix::from_rows(scaled).det(),
                    &mat.det() * &Scalar::from_int(k)
                );
            }
        }
    }
}
