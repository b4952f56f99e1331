//! Smith normal form and the lattice-theoretic operations built on it:
//! saturation tests, quotient maps, integer sections and integer solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, IntVector, LatticeError};

/// Factorization U·M·V = S with U, V unimodular and S diagonal with a
/// nonnegative divisibility chain s₁ | s₂ | …
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal of S, length min(rows, cols).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Count of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .filter(|f| !f.is_zero())
            .count()
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
}

/// row a += q * row b
fn add_row(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    for j in 0..m.cols() {
        let delta = q * &m[(b, j)];
        m[(a, j)] += delta;
    }
}

/// col a += q * col b
fn add_col(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let delta = q * &m[(i, b)];
        m[(i, a)] += delta;
    }
}

fn negate_row(m: &mut IntMatrix, a: usize) {
    for j in 0..m.cols() {
        let v = -m[(a, j)].clone();
        m[(a, j)] = v;
    }
}

/// Deterministic Smith normal form. Pivot choice: smallest absolute value,
/// then lowest (row, column) index; quotients by floor division. Output has
/// a nonnegative, divisibility-sorted diagonal.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut k = 0;

    'step: while k < rows.min(cols) {
        // Pivot: minimal |entry| over the trailing submatrix, ties by index.
        let mut pivot: Option<(BigInt, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                let a = s[(i, j)].abs();
                let better = match &pivot {
                    None => true,
                    Some((best, _, _)) => a < *best,
                };
                if better {
                    pivot = Some((a, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = pivot else {
            break; // trailing submatrix is zero
        };
        swap_rows(&mut s, k, pi);
        swap_rows(&mut u, k, pi);
        swap_cols(&mut s, k, pj);
        swap_cols(&mut v, k, pj);

        // Clear column k below the pivot.
        for i in k + 1..rows {
            if !s[(i, k)].is_zero() {
                let q = -s[(i, k)].div_floor(&s[(k, k)]);
                add_row(&mut s, i, k, &q);
                add_row(&mut u, i, k, &q);
                if !s[(i, k)].is_zero() {
                    continue 'step; // remainder became the smaller pivot
                }
            }
        }
        // Clear row k right of the pivot.
        for j in k + 1..cols {
            if !s[(k, j)].is_zero() {
                let q = -s[(k, j)].div_floor(&s[(k, k)]);
                add_col(&mut s, j, k, &q);
                add_col(&mut v, j, k, &q);
                if !s[(k, j)].is_zero() {
                    continue 'step;
                }
            }
        }
        // Enforce divisibility of the trailing block by the pivot.
        for i in k + 1..rows {
            for j in k + 1..cols {
                if !(&s[(i, j)] % &s[(k, k)]).is_zero() {
                    let one = BigInt::one();
                    add_row(&mut s, k, i, &one);
                    add_row(&mut u, k, i, &one);
                    continue 'step;
                }
            }
        }
        if s[(k, k)].is_negative() {
            negate_row(&mut s, k);
            negate_row(&mut u, k);
        }
        k += 1;
    }
    // Pivoting can leave a trailing negative entry when the loop breaks early;
    // the loop above always normalizes processed pivots, so only debug-check.
    debug_assert!(u.is_unimodular() && v.is_unimodular());
    debug_assert_eq!(u.mul(m).mul(&v), s);
    SmithForm { u, s, v }
}

/// Whether the image of `b` is a saturated (torsion-free quotient) sublattice.
/// Requires full column rank; rank-deficient input is a distinct error.
pub fn is_saturated(b: &IntMatrix) -> Result<bool, LatticeError> {
    let snf = smith_normal_form(b);
    let rank = snf.rank();
    if rank < b.cols() {
        return Err(LatticeError::RankDeficient {
            rank,
            cols: b.cols(),
        });
    }
    Ok(snf
        .invariant_factors()
        .iter()
        .take(rank)
        .all(|f| f.is_one()))
}

/// Quotient map A : Ñ → N′ ≅ ℤ^(d−n) for an injective, saturated `b : N → Ñ`
/// (d = rows, n = cols). Satisfies A·b = 0 with A surjective; the basis of N′
/// is fixed deterministically by the Smith form of `b`.
pub fn quotient_map(b: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let snf = smith_normal_form(b);
    let rank = snf.rank();
    if rank < b.cols() {
        return Err(LatticeError::NotInjective);
    }
    let factors: Vec<BigInt> = snf.invariant_factors().into_iter().take(rank).collect();
    if !factors.iter().all(|f| f.is_one()) {
        return Err(LatticeError::NotSaturated { factors });
    }
    // b = U⁻¹·S·V⁻¹ with S = [I_n; 0], so Im(b) = U⁻¹(ℤⁿ ⊕ 0) and the
    // bottom rows of U project onto the quotient.
    let d = b.rows();
    let n = b.cols();
    let a = IntMatrix::from_fn(d - n, d, |i, j| snf.u[(n + i, j)].clone());
    debug_assert!(a.mul(b).is_zero());
    Ok(a)
}

/// Integer right inverse of a surjective `a`: a·s = identity.
pub fn integer_section(a: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let (n, d) = (a.rows(), a.cols());
    let snf = smith_normal_form(a);
    if snf.rank() < n || !snf.invariant_factors().iter().take(n).all(|f| f.is_one()) {
        return Err(LatticeError::NotSurjective);
    }
    // a = U⁻¹·[I 0]·V⁻¹  ⟹  s = V·[I; 0]·U.
    let embed = IntMatrix::from_fn(d, n, |i, j| {
        if i == j {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let s = snf.v.mul(&embed).mul(&snf.u);
    debug_assert_eq!(a.mul(&s), IntMatrix::identity(n));
    Ok(s)
}

/// Solvability of a·x = rhs: over the rationals, and over the integers with
/// a witness. One Smith form answers both.
pub fn solve_status(a: &IntMatrix, rhs: &IntVector) -> (bool, Option<IntVector>) {
    assert_eq!(a.rows(), rhs.rank(), "solve_status shape mismatch");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(rhs);
    let diag = snf.invariant_factors();
    let mut rational = true;
    let mut divisible = true;
    let mut y = IntVector::zeros(a.cols());
    for i in 0..a.rows() {
        let si = if i < diag.len() {
            diag[i].clone()
        } else {
            BigInt::zero()
        };
        if si.is_zero() {
            if !c.0[i].is_zero() {
                rational = false;
            }
        } else {
            let (q, r) = c.0[i].div_rem(&si);
            if r.is_zero() {
                y.0[i] = q;
            } else {
                divisible = false;
            }
        }
    }
    let integral = if rational && divisible {
        Some(snf.v.mul_vec(&y))
    } else {
        None
    };
    (rational, integral)
}

/// Solves a·x = rhs over the integers. Returns None when no integral
/// solution exists.
pub fn solve_integer(a: &IntMatrix, rhs: &IntVector) -> Option<IntVector> {
    assert_eq!(a.rows(), rhs.rank(), "solve_integer shape mismatch");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(rhs);
    let mut y = IntVector::zeros(a.cols());
    let diag = snf.invariant_factors();
    for i in 0..a.rows() {
        let si = if i < diag.len() {
            diag[i].clone()
        } else {
            BigInt::zero()
        };
        if si.is_zero() {
            if !c.0[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.0[i].div_rem(&si);
            if !r.is_zero() {
                return None;
            }
            y.0[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let snf = smith_normal_form(m);
        assert!(snf.u.is_unimodular(), "U not unimodular");
        assert!(snf.v.is_unimodular(), "V not unimodular");
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.s, "U·M·V ≠ S");
        let f = snf.invariant_factors();
        for w in f.windows(2) {
            assert!(!w[0].is_negative() && !w[1].is_negative());
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            } else {
                assert!(w[1].is_zero());
            }
        }
        // Off-diagonal entries vanish.
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s[(i, j)].is_zero());
                }
            }
        }
        snf
    }

    #[test]
    fn snf_identity_2x2() {
        let m = IntMatrix::identity(2);
        let snf = check_snf(&m);
        assert_eq!(snf.u, IntMatrix::identity(2));
        assert_eq!(snf.v, IntMatrix::identity(2));
        assert_eq!(snf.s, IntMatrix::identity(2));
    }

    #[test]
    fn snf_diag_2_3_gives_1_6() {
        // Oracle: direct multiplication U·m·V = S plus the divisibility chain.
        let m = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]], 2);
        let snf = check_snf(&m);
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
    }

    #[test]
    fn snf_deterministic() {
        let m = IntMatrix::from_rows_i64(&[vec![4, 6, 2], vec![6, 4, 8]], 3);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
        assert_eq!(a.s, b.s);
        check_snf(&m);
    }

    /// The 6×2 weight matrix of the nine-ray D3-symmetric surface: saturation
    /// forces unit invariant factors.
    #[test]
    fn snf_b3_unit_factors() {
        let b3 = IntMatrix::from_rows_i64(
            &[
                vec![0, -1],
                vec![0, -1],
                vec![1, 0],
                vec![1, 0],
                vec![-1, 1],
                vec![-1, 1],
            ],
            2,
        );
        let snf = check_snf(&b3);
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::one(), BigInt::one()]
        );
    }

    #[test]
    fn saturation_cases() {
        let b2 = IntMatrix::from_rows_i64(
            &[vec![0, 1], vec![0, -1], vec![-1, 1], vec![1, -1]],
            2,
        );
        assert_eq!(is_saturated(&b2), Ok(true));

        let col = IntMatrix::from_rows_i64(&[vec![2], vec![0]], 1);
        assert_eq!(is_saturated(&col), Ok(false));

        let b4 = IntMatrix::from_rows_i64(
            &[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            2,
        );
        assert_eq!(is_saturated(&b4), Ok(true));

        let deficient = IntMatrix::from_rows_i64(&[vec![1, 2], vec![2, 4]], 2);
        assert_eq!(
            is_saturated(&deficient),
            Err(LatticeError::RankDeficient { rank: 1, cols: 2 })
        );
    }

    #[test]
    fn quotient_of_identity_is_trivial() {
        let a = quotient_map(&IntMatrix::identity(2)).unwrap();
        assert_eq!(a.rows(), 0);
        assert_eq!(a.cols(), 2);
    }

    /// Quotient of the four-axis weight lattice: A·B = 0 and the cokernel is
    /// trivial, checked by brute force on a box of lattice points.
    #[test]
    fn quotient_map_b4_surjective() {
        let b4 = IntMatrix::from_rows_i64(
            &[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            2,
        );
        let a = quotient_map(&b4).unwrap();
        assert_eq!((a.rows(), a.cols()), (2, 4));
        assert!(a.mul(&b4).is_zero());
        // Surjectivity, brute force: every point of a box is hit.
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                let target = IntVector::from_i64(&[x, y]);
                assert!(
                    solve_integer(&a, &target).is_some(),
                    "({x},{y}) not in the image"
                );
            }
        }
        // Kernel is exactly the image of b4: any integer kernel element of A
        // must be an integer combination of b4's columns.
        let section_b = |v: &IntVector| -> bool { solve_integer(&b4, v).is_some() };
        for e in -2i64..=2 {
            for f in -2i64..=2 {
                for g in -2i64..=2 {
                    for h in -2i64..=2 {
                        let v = IntVector::from_i64(&[e, f, g, h]);
                        if a.mul_vec(&v).is_zero() {
                            assert!(section_b(&v), "kernel element outside Im(B)");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_map_rejects_bad_inputs() {
        let wide = IntMatrix::from_rows_i64(&[vec![1, 2], vec![2, 4], vec![0, 0]], 2);
        assert!(matches!(quotient_map(&wide), Err(LatticeError::NotInjective)));
        let unsat = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 1], vec![0, 0]], 2);
        assert!(matches!(
            quotient_map(&unsat),
            Err(LatticeError::NotSaturated { .. })
        ));
    }

    #[test]
    fn integer_section_inverts() {
        let a = IntMatrix::from_rows_i64(&[vec![1, 0, 0, 2], vec![0, 1, 1, 0]], 4);
        let s = integer_section(&a).unwrap();
        assert_eq!(a.mul(&s), IntMatrix::identity(2));
        let not_surjective = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 2]], 2);
        assert!(integer_section(&not_surjective).is_err());
    }

    #[test]
    fn solve_integer_cases() {
        let a = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]], 2);
        let sol = solve_integer(&a, &IntVector::from_i64(&[4, 9])).unwrap();
        assert_eq!(a.mul_vec(&sol), IntVector::from_i64(&[4, 9]));
        assert!(solve_integer(&a, &IntVector::from_i64(&[1, 0])).is_none());
    }
}
