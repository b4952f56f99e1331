//! Exact rational feasibility for affine systems. A phase-one simplex with
//! Bland's rule over arbitrary-precision rationals: exact decisions, and
//! feasible systems come with a rational witness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntVector, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// coeffs·x + constant ≥ 0
    Ge,
    /// coeffs·x + constant = 0
    Eq,
}

/// One affine condition on a rational point.
#[derive(Debug, Clone)]
pub struct AffineConstraint {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub kind: ConstraintKind,
}

impl AffineConstraint {
    pub fn ge_i64(coeffs: &[i64], constant: i64) -> Self {
        AffineConstraint {
            coeffs: coeffs.iter().map(|&c| Rat::from(BigInt::from(c))).collect(),
            constant: Rat::from(BigInt::from(constant)),
            kind: ConstraintKind::Ge,
        }
    }

    pub fn eq_i64(coeffs: &[i64], constant: i64) -> Self {
        AffineConstraint {
            kind: ConstraintKind::Eq,
            ..AffineConstraint::ge_i64(coeffs, constant)
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(point) {
            acc += c * x;
        }
        acc
    }

    pub fn holds_at(&self, point: &[Rat]) -> bool {
        let v = self.eval(point);
        match self.kind {
            ConstraintKind::Ge => !v.is_negative(),
            ConstraintKind::Eq => v.is_zero(),
        }
    }
}

/// Exact rational point: numerators over one positive denominator, in lowest
/// terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    pub numerators: IntVector,
    pub denominator: BigInt,
}

impl RationalPoint {
    pub fn from_rats(coords: &[Rat]) -> Self {
        let mut denom = BigInt::one();
        for c in coords {
            denom = denom.lcm(c.denom());
        }
        let numerators: Vec<BigInt> = coords
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        let mut g = numerators
            .iter()
            .fold(denom.clone(), |acc, n| acc.gcd(&n.abs()));
        if g.is_zero() {
            g = BigInt::one();
        }
        RationalPoint {
            numerators: IntVector(numerators.iter().map(|n| n / &g).collect()),
            denominator: &denom / &g,
        }
    }

    pub fn to_rats(&self) -> Vec<Rat> {
        self.numerators
            .0
            .iter()
            .map(|n| Rat::new(n.clone(), self.denominator.clone()))
            .collect()
    }
}

/// Phase-one simplex tableau over the rationals. Free variables are split
/// into differences of nonnegatives, inequalities get surplus variables, and
/// every row receives an artificial variable that the objective drives to
/// zero. Bland's rule guarantees termination.
struct Tableau {
    /// rows × (cols + 1); last column is the right-hand side.
    rows: Vec<Vec<Rat>>,
    /// Reduced-cost row for the phase-one objective, length cols + 1.
    cost: Vec<Rat>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = {
            let p = &self.rows[row][col];
            assert!(!p.is_zero());
            Rat::one() / p
        };
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..=self.cols {
                let delta = &factor * &self.rows[row][c];
                self.rows[r][c] -= delta;
            }
        }
        let factor = self.cost[col].clone();
        if !factor.is_zero() {
            for c in 0..=self.cols {
                let delta = &factor * &self.rows[row][c];
                self.cost[c] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering column = lowest index with negative reduced
    /// cost; leaving row = tightest ratio, ties by lowest basis index.
    fn solve(&mut self) {
        loop {
            let Some(col) = (0..self.cols).find(|&c| self.cost[c].is_negative()) else {
                return;
            };
            let mut leave: Option<usize> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][col].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(best) => {
                        let lhs = &self.rows[r][self.cols] * &self.rows[best][col];
                        let rhs = &self.rows[best][self.cols] * &self.rows[r][col];
                        match lhs.cmp(&rhs) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Equal => self.basis[r] < self.basis[best],
                            std::cmp::Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
            let row = leave.expect("phase-one objective is bounded below by zero");
            self.pivot(row, col);
        }
    }
}

/// Exact feasibility of finitely many affine equalities and inequalities in
/// `dim` variables. Returns a witness point when feasible, None otherwise.
pub fn rational_feasible(dim: usize, constraints: &[AffineConstraint]) -> Option<RationalPoint> {
    for c in constraints {
        assert_eq!(c.coeffs.len(), dim, "constraint arity mismatch");
    }
    let m = constraints.len();
    if m == 0 {
        return Some(RationalPoint::from_rats(&vec![Rat::zero(); dim]));
    }
    let surplus: Vec<Option<usize>> = {
        let mut next = 2 * dim;
        constraints
            .iter()
            .map(|c| match c.kind {
                ConstraintKind::Ge => {
                    let idx = next;
                    next += 1;
                    Some(idx)
                }
                ConstraintKind::Eq => None,
            })
            .collect()
    };
    let n_surplus = surplus.iter().flatten().count();
    let structural = 2 * dim + n_surplus;
    let cols = structural + m; // artificials at the end
    let mut rows = Vec::with_capacity(m);
    for (i, c) in constraints.iter().enumerate() {
        // coeffs·(x⁺ − x⁻) [− s] = −constant, then sign-normalized.
        let mut row = vec![Rat::zero(); cols + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[dim + j] = -a.clone();
        }
        if let Some(s) = surplus[i] {
            row[s] = -Rat::one();
        }
        row[cols] = -c.constant.clone();
        if row[cols].is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[structural + i] = Rat::one();
        rows.push(row);
    }
    // Phase-one reduced costs: objective Σ artificials, basis = artificials.
    let mut cost = vec![Rat::zero(); cols + 1];
    for r in &rows {
        for c in 0..=cols {
            if c < structural || c == cols {
                cost[c] -= &r[c];
            }
        }
    }
    let basis: Vec<usize> = (0..m).map(|i| structural + i).collect();
    let mut tableau = Tableau {
        rows,
        cost,
        basis,
        cols,
    };
    tableau.solve();
    // Optimal objective is −cost[rhs]; feasible iff it is zero.
    if !tableau.cost[cols].is_zero() {
        return None;
    }
    let mut values = vec![Rat::zero(); cols];
    for (r, &b) in tableau.basis.iter().enumerate() {
        values[b] = tableau.rows[r][cols].clone();
    }
    let point: Vec<Rat> = (0..dim).map(|j| &values[j] - &values[dim + j]).collect();
    debug_assert!(constraints.iter().all(|c| c.holds_at(&point)));
    Some(RationalPoint::from_rats(&point))
}

/// Barycentric coordinates of `target` inside conv(points), if any.
pub fn hull_contains(points: &[IntVector], target: &IntVector) -> Option<RationalPoint> {
    let k = points.len();
    if k == 0 {
        return None;
    }
    let dim = target.rank();
    let mut cs = Vec::with_capacity(k + dim + 1);
    for i in 0..k {
        let mut unit = vec![0i64; k];
        unit[i] = 1;
        cs.push(AffineConstraint::ge_i64(&unit, 0));
    }
    // Σλ = 1
    cs.push(AffineConstraint {
        coeffs: vec![Rat::one(); k],
        constant: -Rat::one(),
        kind: ConstraintKind::Eq,
    });
    for d in 0..dim {
        cs.push(AffineConstraint {
            coeffs: points.iter().map(|p| Rat::from(p.0[d].clone())).collect(),
            constant: -Rat::from(target.0[d].clone()),
            kind: ConstraintKind::Eq,
        });
    }
    rational_feasible(k, &cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infeasible_interval() {
        // x ≥ 1 and x ≤ 0
        let cs = vec![
            AffineConstraint::ge_i64(&[1], -1),
            AffineConstraint::ge_i64(&[-1], 0),
        ];
        assert!(rational_feasible(1, &cs).is_none());
    }

    #[test]
    fn vertex_membership_witness() {
        // λ ≥ 0, Σλ ≤ 1, Σ λ_i u_i = p with p = u_2: λ = e_2 works.
        let us = [[2i64, 0], [0, 2], [1, 1]];
        let p = [0i64, 2];
        let mut cs = vec![AffineConstraint::ge_i64(&[-1, -1, -1], 1)];
        for i in 0..3 {
            let mut unit = [0i64; 3];
            unit[i] = 1;
            cs.push(AffineConstraint::ge_i64(&unit, 0));
        }
        for d in 0..2 {
            let coeffs: Vec<i64> = us.iter().map(|u| u[d]).collect();
            cs.push(AffineConstraint::eq_i64(&coeffs, -p[d]));
        }
        let w = rational_feasible(3, &cs).expect("vertex is in the hull");
        let pt = w.to_rats();
        assert!(cs.iter().all(|c| c.holds_at(&pt)));
    }

    /// Membership of (1,0,1) in conv{0,(2,0,1),(0,2,1),(0,0,1)}, frozen from
    /// a brute-force search over convex combinations with small denominators:
    /// (1,0,1) = ½·(2,0,1) + ½·(0,0,1).
    #[test]
    fn hull_membership_example() {
        let vs = [
            IntVector::from_i64(&[0, 0, 0]),
            IntVector::from_i64(&[2, 0, 1]),
            IntVector::from_i64(&[0, 2, 1]),
            IntVector::from_i64(&[0, 0, 1]),
        ];
        let p = IntVector::from_i64(&[1, 0, 1]);
        let w = hull_contains(&vs, &p).expect("point lies in the simplex");
        // Witness is a genuine convex combination hitting p.
        let lam = w.to_rats();
        assert!(lam.iter().all(|l| !l.is_negative()));
        assert!(lam.iter().sum::<Rat>() == Rat::one());
        for d in 0..3 {
            let got: Rat = (0..4)
                .map(|i| &lam[i] * Rat::from(vs[i].0[d].clone()))
                .sum();
            assert_eq!(got, Rat::from(p.0[d].clone()));
        }
        assert!(hull_contains(&vs, &IntVector::from_i64(&[2, 2, 1])).is_none());
    }

    /// Feasibility agrees with a brute-force denominator-bounded grid search
    /// on seeded random small systems.
    #[test]
    fn agrees_with_bounded_grid_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240);
        fn grid_feasible(dim: usize, cs: &[AffineConstraint]) -> bool {
            let denom = 4i64;
            let span = 3 * denom;
            let mut idx = vec![-span; dim];
            loop {
                let pt: Vec<Rat> = idx
                    .iter()
                    .map(|&n| Rat::new(BigInt::from(n), BigInt::from(denom)))
                    .collect();
                if cs.iter().all(|c| c.holds_at(&pt)) {
                    return true;
                }
                let mut k = 0;
                loop {
                    if k == dim {
                        return false;
                    }
                    idx[k] += 1;
                    if idx[k] <= span {
                        break;
                    }
                    idx[k] = -span;
                    k += 1;
                }
            }
        }
        for _ in 0..60 {
            let dim = rng.gen_range(1..=2);
            let n = rng.gen_range(1..=4);
            let cs: Vec<AffineConstraint> = (0..n)
                .map(|_| {
                    let coeffs: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
                    let constant = rng.gen_range(-2..=2);
                    if rng.gen_bool(0.2) {
                        AffineConstraint::eq_i64(&coeffs, constant)
                    } else {
                        AffineConstraint::ge_i64(&coeffs, constant)
                    }
                })
                .collect();
            let fm = rational_feasible(dim, &cs);
            if let Some(w) = &fm {
                assert!(cs.iter().all(|c| c.holds_at(&w.to_rats())));
            }
            if grid_feasible(dim, &cs) {
                assert!(fm.is_some(), "grid found a point but simplex says infeasible");
            }
        }
    }

    #[test]
    fn higher_dimensional_feasibility_is_fast() {
        // A 20-dimensional box with one diagonal cut; far beyond what naive
        // elimination handles.
        let dim = 20;
        let mut cs = Vec::new();
        for i in 0..dim {
            let mut unit = vec![0i64; dim];
            unit[i] = 1;
            cs.push(AffineConstraint::ge_i64(&unit, 0));
            unit[i] = -1;
            cs.push(AffineConstraint::ge_i64(&unit, 5));
        }
        cs.push(AffineConstraint::ge_i64(&vec![-1i64; dim], 60));
        assert!(rational_feasible(dim, &cs).is_some());
        cs.push(AffineConstraint::ge_i64(&vec![1i64; dim], -90));
        assert!(rational_feasible(dim, &cs).is_none());
    }
}
