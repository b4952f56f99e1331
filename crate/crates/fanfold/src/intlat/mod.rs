//! Exact integer and rational linear algebra.
//!
//! Everything downstream (saturation tests, quotient lattices, Gorenstein
//! certificates, terminal-singularity enumeration) reduces to the primitives
//! in this module. All arithmetic is arbitrary precision.

mod facets;
mod lp;
mod smith;

pub use facets::dual_facets;
pub use lp::{hull_contains, rational_feasible, AffineConstraint, ConstraintKind, RationalPoint};
pub use smith::{
    integer_section, is_saturated, quotient_map, smith_normal_form, solve_integer, solve_status,
    SmithForm,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Rational scalar used throughout the exact LP layer.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is rank deficient: rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("matrix does not define an injective lattice map")]
    NotInjective,
    #[error("image is not a saturated sublattice (invariant factors {factors:?})")]
    NotSaturated { factors: Vec<BigInt> },
    #[error("matrix is not surjective onto the target lattice")]
    NotSurjective,
    #[error("generators do not span a strictly convex cone")]
    NotStrictlyConvex,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("arithmetic capacity exceeded: {0}")]
    Capacity(String),
}

/// Element of a free abelian group of finite rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn zeros(rank: usize) -> Self {
        IntVector(vec![BigInt::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        assert_eq!(self.rank(), other.rank(), "dot of mismatched ranks");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |acc, e| acc.gcd(&e.abs()))
    }

    /// Divides out the content. Returns the primitive vector and the content.
    /// The zero vector is returned unchanged with content zero.
    pub fn primitive_part(&self) -> (IntVector, BigInt) {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return (self.clone(), c);
        }
        (IntVector(self.0.iter().map(|e| e / &c).collect()), c)
    }

    pub fn to_i64(&self) -> Result<Vec<i64>, LatticeError> {
        self.0
            .iter()
            .map(|e| {
                i64::try_from(e).map_err(|_| LatticeError::Capacity(format!("entry {e} exceeds i64")))
            })
            .collect()
    }
}

impl std::ops::Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.rank(), rhs.rank());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.rank(), rhs.rank());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Row-major integer matrix, a map between free abelian groups
/// (columns = source rank, rows = target rank).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows_i64(rows: &[Vec<i64>], cols: usize) -> Self {
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        IntMatrix::from_fn(rows.len(), cols, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &rhs[(k, j)]).sum()
        })
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.rank(), "matrix-vector shape mismatch");
        IntVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|k| &self[(i, k)] * &v.0[k]).sum())
                .collect(),
        )
    }

    /// Determinant by fraction-free Bareiss elimination. Square matrices only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let tmp = m[(k, j)].clone();
                            m[(k, j)] = m[(i, j)].clone();
                            m[(i, j)] = tmp;
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Adjugate by cofactor expansion; adj(M)·M = det(M)·I. Desk-scale sizes
    /// only.
    pub fn adjugate(&self) -> IntMatrix {
        assert_eq!(self.rows, self.cols, "adjugate of non-square matrix");
        let n = self.rows;
        IntMatrix::from_fn(n, n, |i, j| {
            // Cofactor C_ji: delete row j, column i.
            let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                let rr = if r < j { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                self[(rr, cc)].clone()
            });
            let sign = if (i + j) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            sign * minor.det()
        })
    }

    /// Exact inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> IntMatrix {
        let d = self.det();
        assert!(d.abs().is_one(), "inverse of non-unimodular matrix");
        let adj = self.adjugate();
        if d.is_one() {
            adj
        } else {
            IntMatrix::from_fn(self.rows, self.cols, |i, j| -adj[(i, j)].clone())
        }
    }

    /// Rank over the rationals (count of nonzero Smith invariant factors).
    pub fn rank_int(&self) -> usize {
        smith::smith_normal_form(self)
            .invariant_factors()
            .iter()
            .filter(|f| !f.is_zero())
            .count()
    }

    pub fn to_rows_i64(&self) -> Result<Vec<Vec<i64>>, LatticeError> {
        (0..self.rows).map(|i| self.row(i).to_i64()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
