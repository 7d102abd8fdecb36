//! Exact rational linear algebra: rank and nullspace.
//!
//! Rows are cleared to integers and reduced with fraction-free (Bareiss)
//! elimination. Every intermediate entry stays an integer minor of the input,
//! so there is no fraction growth until the final rational back-substitution.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: rows * cols,
            });
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    /// Builds a matrix from integer rows; each row must have `cols` entries.
    pub fn from_integer_rows<R, T>(cols: usize, rows: R) -> Result<Self>
    where
        R: IntoIterator<Item = Vec<T>>,
        T: Into<BigInt>,
    {
        let mut entries = Vec::new();
        let mut n = 0;
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: cols,
                });
            }
            entries.extend(row.into_iter().map(|x| BigRational::from_integer(x.into())));
            n += 1;
        }
        RationalMatrix::new(n, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// `self * x` for an integer vector `x`.
    pub fn mul_integer_vector(&self, x: &[BigInt]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(_, b)| !b.is_zero())
                    .map(|(a, b)| a * BigRational::from_integer(b.clone()))
                    .sum()
            })
            .collect()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Linearly independent integer vectors, each with content 1 and a positive
/// leading entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    len: usize,
    vectors: Vec<Vec<BigInt>>,
}

impl Basis {
    /// Length of each vector (the ambient dimension).
    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    /// Number of basis vectors.
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<BigInt>> {
        self.vectors
    }
}

/// Clears denominators, divides out the content and makes the first nonzero
/// entry positive. The zero vector maps to itself.
pub fn canonical_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    normalize_integer_vector(ints)
}

/// Divides out the content and fixes the sign so the first nonzero entry is positive.
pub fn normalize_integer_vector(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let negate = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in &mut v {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
    v
}

/// Integer row-echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn echelon(m: &RationalMatrix) -> Echelon {
    let cols = m.cols;
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| canonical_integer_vector(m.row(r)))
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    let n = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let num = pivot * &row[j] - &lead * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

/// Row rank of `m`.
pub fn rank(m: &RationalMatrix) -> usize {
    echelon(m).pivots.len()
}

/// Basis of `{x : m x = 0}` in canonical integer form, one vector per free
/// column in ascending column order.
pub fn nullspace(m: &RationalMatrix) -> Basis {
    let cols = m.cols;
    let Echelon { rows, pivots } = echelon(m);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::with_capacity(cols - pivots.len());
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![BigRational::zero(); cols];
        x[free] = BigRational::one();
        for (row, &pc) in rows.iter().zip(&pivots).rev() {
            let s: BigRational = (pc + 1..cols)
                .filter(|&j| !x[j].is_zero() && !row[j].is_zero())
                .map(|j| &x[j] * BigRational::from_integer(row[j].clone()))
                .sum();
            x[pc] = -s / BigRational::from_integer(row[pc].clone());
        }
        vectors.push(canonical_integer_vector(&x));
    }
    for v in &vectors {
        assert!(
            m.mul_integer_vector(v).iter().all(Zero::is_zero),
            "nullspace vector failed re-verification"
        );
    }
    Basis { len: cols, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn single_equation() {
        let m = RationalMatrix::from_integer_rows(2, [vec![1, -1]]).unwrap();
        assert_eq!(nullspace(&m).vectors(), &[ints(&[1, 1])]);
    }

    #[test]
    fn no_constraints_gives_full_space() {
        let m = RationalMatrix::zeros(0, 3);
        let b = nullspace(&m);
        assert_eq!(
            b.vectors(),
            &[ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])]
        );
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn two_by_three() {
        // x0 + x1 = 0, x1 + x2 = 0  =>  x = t(1, -1, 1)
        let m = RationalMatrix::from_integer_rows(3, [vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(nullspace(&m).vectors(), &[ints(&[1, -1, 1])]);
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&RationalMatrix::identity(3)), 3);
        assert_eq!(rank(&RationalMatrix::zeros(2, 2)), 0);
        let m = RationalMatrix::from_integer_rows(2, [vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(rank(&m), 1);
        assert!(nullspace(&RationalMatrix::identity(4)).is_empty());
    }

    #[test]
    fn rational_entries_and_canonical_sign() {
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new((-1).into(), 3.into());
        // x0/2 - x1/3 = 0  =>  (2, 3)
        let m = RationalMatrix::new(1, 2, vec![half, third]).unwrap();
        assert_eq!(nullspace(&m).vectors(), &[ints(&[2, 3])]);
    }

    #[test]
    fn skipped_columns_are_exact() {
        // Column 1 has no pivot; Bareiss must still divide exactly afterwards.
        let m = RationalMatrix::from_integer_rows(
            4,
            [
                vec![2, 4, 1, 3],
                vec![4, 8, 5, 1],
                vec![6, 12, 3, 7],
                vec![2, 4, 7, -1],
            ],
        )
        .unwrap();
        let b = nullspace(&m);
        assert_eq!(rank(&m) + b.dim(), 4);
        assert_eq!(b.dim(), 1);
        assert_eq!(b.vectors()[0], ints(&[2, -1, 0, 0]));
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_integer_vector(ints(&[0, -4, 6])), ints(&[0, 2, -3]));
        assert_eq!(normalize_integer_vector(ints(&[0, 0])), ints(&[0, 0]));
    }

    #[test]
    fn shape_errors() {
        assert!(RationalMatrix::new(2, 2, vec![BigRational::zero(); 3]).is_err());
        assert!(RationalMatrix::from_integer_rows(2, [vec![1, 2, 3]]).is_err());
    }
}
