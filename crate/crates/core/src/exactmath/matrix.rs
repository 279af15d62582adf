use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{MathError, Rational};

/// A dense vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rational::zero(); dim])
    }

    pub fn filled(dim: usize, v: Rational) -> Self {
        RatVector(vec![v; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVector(v.iter().map(|&x| Rational::integer(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn dot(&self, other: &RatVector) -> Result<Rational, MathError> {
        if self.dim() != other.dim() {
            return Err(MathError::ShapeMismatch {
                op: "dot",
                left: (1, self.dim()),
                right: (other.dim(), 1),
            });
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn scale(&self, s: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|v| v * s).collect())
    }

    pub fn add(&self, other: &RatVector) -> Result<RatVector, MathError> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &RatVector) -> Result<RatVector, MathError> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &RatVector,
        op: &'static str,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RatVector, MathError> {
        if self.dim() != other.dim() {
            return Err(MathError::ShapeMismatch {
                op,
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ok(RatVector(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect()))
    }

    /// Largest absolute entry (zero for the empty vector).
    pub fn inf_norm(&self) -> Rational {
        self.0
            .iter()
            .map(Rational::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    /// Indices of strictly positive entries.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.0[i].is_positive()).collect()
    }

    /// Concatenate with a trailing entry.
    pub fn with_last(&self, last: Rational) -> RatVector {
        let mut v = self.0.clone();
        v.push(last);
        RatVector(v)
    }
}

impl Deref for RatVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for RatVector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

impl FromIterator<Rational> for RatVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RatVector(iter.into_iter().collect())
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, MathError> {
        if data.len() != rows * cols {
            return Err(MathError::BadEntryCount {
                rows,
                cols,
                got: data.len(),
            });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MathError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MathError::Ragged);
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from integer rows; panics on ragged input (fixtures and tests).
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::integer(v)).collect())
                .collect(),
        )
        .expect("ragged integer rows")
    }

    /// Build from rational literal rows like `&[&["1/2", "0"], ...]`; panics on bad input.
    pub fn from_str_rows(rows: &[&[&str]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| super::q(s)).collect())
                .collect(),
        )
        .expect("ragged rational rows")
    }

    /// `u * v^T`.
    pub fn outer(u: &RatVector, v: &RatVector) -> Self {
        let mut m = Self::zeros(u.dim(), v.dim());
        for i in 0..u.dim() {
            for j in 0..v.dim() {
                m[(i, j)] = &u[i] * &v[j];
            }
        }
        m
    }

    /// Assemble a matrix from a grid of blocks. Blocks in a block-row must
    /// share a row count and blocks in a block-column a column count.
    pub fn from_blocks(blocks: &[Vec<&RatMatrix>]) -> Result<Self, MathError> {
        let block_rows: Vec<usize> = blocks
            .iter()
            .map(|br| br.first().map_or(0, |b| b.rows))
            .collect();
        let block_cols: Vec<usize> = blocks
            .first()
            .map(|br| br.iter().map(|b| b.cols).collect())
            .unwrap_or_default();
        for br in blocks {
            if br.len() != block_cols.len() {
                return Err(MathError::Ragged);
            }
        }
        for (bi, br) in blocks.iter().enumerate() {
            for (bj, b) in br.iter().enumerate() {
                if b.rows != block_rows[bi] || b.cols != block_cols[bj] {
                    return Err(MathError::ShapeMismatch {
                        op: "from_blocks",
                        left: (block_rows[bi], block_cols[bj]),
                        right: (b.rows, b.cols),
                    });
                }
            }
        }
        let rows: usize = block_rows.iter().sum();
        let cols: usize = block_cols.iter().sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for (bi, br) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in br.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                    }
                }
                c0 += block_cols[bj];
            }
            r0 += block_rows[bi];
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &RatVector) -> Result<RatVector, MathError> {
        if x.dim() != self.cols {
            return Err(MathError::ShapeMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (x.dim(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.iter())
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `x^T M`, returned as a column vector.
    pub fn vec_mul(&self, x: &RatVector) -> Result<RatVector, MathError> {
        if x.dim() != self.rows {
            return Err(MathError::ShapeMismatch {
                op: "vec_mul",
                left: (1, x.dim()),
                right: self.shape(),
            });
        }
        let mut out = RatVector::zeros(self.cols);
        for i in 0..self.rows {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() {
                    out[j] += &x[i] * &self[(i, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &RatMatrix) -> Result<RatMatrix, MathError> {
        if self.cols != other.rows {
            return Err(MathError::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(l, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix, MathError> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix, MathError> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &RatMatrix,
        op: &'static str,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RatMatrix, MathError> {
        if self.shape() != other.shape() {
            return Err(MathError::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Total bit size of all entries.
    pub fn bit_size(&self) -> u64 {
        self.data.iter().map(Rational::bit_size).sum()
    }

    /// Exact rank over the rationals.
    ///
    /// Rows are first cleared of denominators, then reduced with
    /// fraction-free (Bareiss) elimination; the pivot in each column is the
    /// first nonzero entry at or below the current row.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m: Vec<Vec<BigInt>> = (0..self.rows).map(|i| integer_row(self.row(i))).collect();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(p, r);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                    let (quot, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    m[i][j] = quot;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            r += 1;
        }
        r
    }

    pub fn is_upper_triangular(&self) -> Result<bool, MathError> {
        if !self.is_square() {
            return Err(MathError::NotSquare(self.shape()));
        }
        Ok((0..self.rows).all(|i| (0..i).all(|j| self[(i, j)].is_zero())))
    }

    pub fn is_lower_triangular(&self) -> Result<bool, MathError> {
        Ok(self.transpose().is_upper_triangular()?)
    }

    pub fn is_unit_lower_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_one() && (i + 1..self.cols).all(|j| self[(i, j)].is_zero())
            })
    }

    /// Forward substitution for a unit lower-triangular system `A x = rhs`.
    pub fn solve_unit_lower_triangular(&self, rhs: &RatVector) -> Result<RatVector, MathError> {
        if !self.is_square() || rhs.dim() != self.rows {
            return Err(MathError::ShapeMismatch {
                op: "solve_unit_lower_triangular",
                left: self.shape(),
                right: (rhs.dim(), 1),
            });
        }
        if !self.is_unit_lower_triangular() {
            return Err(MathError::NotUnitLowerTriangular);
        }
        let mut x = RatVector::zeros(self.rows);
        for i in 0..self.rows {
            let mut v = rhs[i].clone();
            for j in 0..i {
                if !self[(i, j)].is_zero() {
                    v -= &self[(i, j)] * &x[j];
                }
            }
            x[i] = v;
        }
        Ok(x)
    }

    /// Solve a square system by Gauss-Jordan elimination. Returns `None` when
    /// the matrix is singular.
    pub fn solve_square(&self, rhs: &RatVector) -> Result<Option<RatVector>, MathError> {
        if !self.is_square() || rhs.dim() != self.rows {
            return Err(MathError::ShapeMismatch {
                op: "solve_square",
                left: self.shape(),
                right: (rhs.dim(), 1),
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = self.to_rows();
        let mut b: Vec<Rational> = rhs.to_vec();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Ok(None);
            };
            a.swap(p, c);
            b.swap(p, c);
            let inv = a[c][c].recip()?;
            for j in c..n {
                a[c][j] *= &inv;
            }
            b[c] *= &inv;
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in c..n {
                    if !a[c][j].is_zero() {
                        let d = &f * &a[c][j];
                        a[i][j] -= d;
                    }
                }
                let d = &f * &b[c];
                b[i] -= d;
            }
        }
        Ok(Some(RatVector::new(b)))
    }
}

/// Scale a rational row by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        RatMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use proptest::prelude::*;

    /// Rank by plain rational Gaussian elimination; independent of the
    /// Bareiss path.
    fn rank_oracle(m: &RatMatrix) -> usize {
        let mut a = m.to_rows();
        let (rows, cols) = m.shape();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            for i in r + 1..rows {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        let u = RatVector::new(vec![rat(1, 2), rat(-3, 1), rat(2, 7)]);
        let v = RatVector::new(vec![rat(5, 1), rat(1, 3), rat(0, 1), rat(-1, 1)]);
        assert_eq!(RatMatrix::outer(&u, &v).rank(), 1);
        let m = RatMatrix::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[1, 2, 2]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(RatMatrix::zeros(2, 3).rank(), 0);
    }

    #[test]
    fn unit_lower_triangular_solves() {
        let id = RatMatrix::identity(2);
        let x = id.solve_unit_lower_triangular(&RatVector::from_ints(&[3, 7])).unwrap();
        assert_eq!(x, RatVector::from_ints(&[3, 7]));

        let a = RatMatrix::from_int_rows(&[&[1, 0], &[1, 1]]);
        let x = a.solve_unit_lower_triangular(&RatVector::from_ints(&[0, 1])).unwrap();
        assert_eq!(x, RatVector::from_ints(&[0, 1]));

        let a = RatMatrix::from_int_rows(&[&[1, 0], &[-2, 1]]);
        let rhs = RatVector::from_ints(&[1, 0]);
        let x = a.solve_unit_lower_triangular(&rhs).unwrap();
        assert_eq!(x, RatVector::from_ints(&[1, 2]));
        assert_eq!(a.mul_vec(&x).unwrap(), rhs);
    }

    #[test]
    fn unit_lower_triangular_rejects_bad_input() {
        let a = RatMatrix::from_int_rows(&[&[2, 0], &[1, 1]]);
        assert!(matches!(
            a.solve_unit_lower_triangular(&RatVector::from_ints(&[1, 1])),
            Err(MathError::NotUnitLowerTriangular)
        ));
        let a = RatMatrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        assert!(a.solve_unit_lower_triangular(&RatVector::from_ints(&[1, 1])).is_err());
        let a = RatMatrix::identity(2);
        assert!(matches!(
            a.solve_unit_lower_triangular(&RatVector::from_ints(&[1, 1, 1])),
            Err(MathError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn upper_triangular_checks() {
        assert!(RatMatrix::identity(3).is_upper_triangular().unwrap());
        assert!(!RatMatrix::from_int_rows(&[&[1, 2], &[3, 4]])
            .is_upper_triangular()
            .unwrap());
        let worked = RatMatrix::from_str_rows(&[
            &["1/2", "1/2", "0"],
            &["0", "1", "0"],
            &["0", "0", "1"],
        ]);
        assert!(worked.is_upper_triangular().unwrap());
        assert!(matches!(
            RatMatrix::zeros(2, 3).is_upper_triangular(),
            Err(MathError::NotSquare(_))
        ));
    }

    #[test]
    fn blocks_assemble() {
        let a = RatMatrix::identity(2);
        let z = RatMatrix::zeros(2, 1);
        let r = RatMatrix::from_int_rows(&[&[4, 5]]);
        let c = RatMatrix::from_int_rows(&[&[6]]);
        let m = RatMatrix::from_blocks(&[vec![&a, &z], vec![&r, &c]]).unwrap();
        assert_eq!(m, RatMatrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[4, 5, 6]]));
        assert!(RatMatrix::from_blocks(&[vec![&a, &r]]).is_err());
    }

    #[test]
    fn square_solve() {
        let a = RatMatrix::from_int_rows(&[&[2, 1], &[1, 3]]);
        let x = a.solve_square(&RatVector::from_ints(&[3, 5])).unwrap().unwrap();
        assert_eq!(x, RatVector::new(vec![rat(4, 5), rat(7, 5)]));
        let s = RatMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(s.solve_square(&RatVector::from_ints(&[1, 2])).unwrap().is_none());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                prop_oneof![3 => small_rational(), 2 => Just(Rational::zero())],
                r * c,
            )
            .prop_map(move |d| RatMatrix::new(r, c, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn exact_field_identities(a in small_rational(), b in small_rational()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b) / &b, a);
            }
        }

        #[test]
        fn rank_is_transpose_invariant(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert_eq!(m.rank(), rank_oracle(&m));
        }

        #[test]
        fn forward_substitution_is_exact(
            lower in proptest::collection::vec(small_rational(), 10),
            rhs in proptest::collection::vec(small_rational(), 4),
        ) {
            let mut a = RatMatrix::identity(4);
            let mut it = lower.into_iter();
            for i in 0..4 {
                for j in 0..i {
                    a[(i, j)] = it.next().unwrap();
                }
            }
            let rhs = RatVector::new(rhs);
            let x = a.solve_unit_lower_triangular(&rhs).unwrap();
            prop_assert_eq!(a.mul_vec(&x).unwrap(), rhs);
        }
    }
}
