//! Facet descriptions of finitely generated strictly convex cones, by
//! Fourier–Motzkin projection of the generator representation. Redundant
//! inequalities are removed with exact LP.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lp::{hull_contains, rational_feasible, AffineConstraint, ConstraintKind};
use super::{IntVector, LatticeError, Rat};

/// Projects the constraint system onto the variables not listed in
/// `eliminate`: equalities are substituted away (preferring eliminated
/// variables), the rest go through Fourier–Motzkin. Output constraints have
/// zero coefficients on every eliminated variable.
fn project(
    dim: usize,
    constraints: &[AffineConstraint],
    eliminate: &[usize],
) -> Vec<AffineConstraint> {
    let mut drop = vec![false; dim];
    for &v in eliminate {
        drop[v] = true;
    }
    let mut eqs: Vec<AffineConstraint> = Vec::new();
    let mut ineqs: Vec<AffineConstraint> = Vec::new();
    for c in constraints {
        match c.kind {
            ConstraintKind::Eq => eqs.push(c.clone()),
            ConstraintKind::Ge => ineqs.push(c.clone()),
        }
    }

    // Equality substitution, one eliminated variable at a time.
    loop {
        let Some(pos) = eqs
            .iter()
            .position(|e| (0..dim).any(|v| drop[v] && !e.coeffs[v].is_zero()))
        else {
            break;
        };
        let eq = eqs.remove(pos);
        let var = (0..dim)
            .find(|&v| drop[v] && !eq.coeffs[v].is_zero())
            .unwrap();
        let pivot = eq.coeffs[var].clone();
        let expr: Vec<Rat> = (0..dim)
            .map(|j| {
                if j == var {
                    Rat::zero()
                } else {
                    -&eq.coeffs[j] / &pivot
                }
            })
            .collect();
        let expr_const = -&eq.constant / &pivot;
        let substitute = |c: &mut AffineConstraint| {
            let k = c.coeffs[var].clone();
            if k.is_zero() {
                return;
            }
            for j in 0..dim {
                let delta = &k * &expr[j];
                c.coeffs[j] += delta;
            }
            c.coeffs[var] = Rat::zero();
            c.constant += &k * &expr_const;
        };
        eqs.iter_mut().for_each(substitute);
        ineqs.iter_mut().for_each(substitute);
        drop[var] = false; // handled
    }

    // Fourier–Motzkin for remaining eliminated variables.
    for var in (0..dim).filter(|&v| drop[v]) {
        let (touching, rest): (Vec<_>, Vec<_>) =
            ineqs.into_iter().partition(|c| !c.coeffs[var].is_zero());
        ineqs = rest;
        let (lowers, uppers): (Vec<_>, Vec<_>) = touching
            .into_iter()
            .partition(|c| c.coeffs[var].is_positive());
        for lo in &lowers {
            for hi in &uppers {
                let a = lo.coeffs[var].clone();
                let b = hi.coeffs[var].clone();
                let coeffs: Vec<Rat> = (0..dim)
                    .map(|j| &a * &hi.coeffs[j] - &b * &lo.coeffs[j])
                    .collect();
                let constant = &a * &hi.constant - &b * &lo.constant;
                ineqs.push(AffineConstraint {
                    coeffs,
                    constant,
                    kind: ConstraintKind::Ge,
                });
            }
        }
    }

    eqs.into_iter().chain(ineqs).collect()
}

fn primitive_normal(coeffs: &[Rat]) -> Option<IntVector> {
    let mut denom = BigInt::one();
    for c in coeffs {
        denom = denom.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&denom / c.denom())).collect();
    let v = IntVector(ints);
    if v.is_zero() {
        return None;
    }
    Some(v.primitive_part().0)
}

/// Primitive facet normals F of the strictly convex cone spanned by
/// `generators`, so that cone = { x : ⟨f, x⟩ ≥ 0 for all f ∈ F }, minimal
/// and deduplicated, sorted lexicographically.
pub fn dual_facets(generators: &[IntVector]) -> Result<Vec<IntVector>, LatticeError> {
    let nonzero: Vec<&IntVector> = generators.iter().filter(|g| !g.is_zero()).collect();
    let dim = match nonzero.first() {
        Some(g) => g.rank(),
        None => match generators.first() {
            Some(g) => g.rank(),
            None => return Ok(Vec::new()),
        },
    };
    if nonzero.iter().any(|g| g.rank() != dim) {
        return Err(LatticeError::DimensionMismatch(
            "generators of mixed rank".into(),
        ));
    }
    // Strict convexity: 0 must not be a convex combination of the generators.
    if !nonzero.is_empty() {
        let pts: Vec<IntVector> = nonzero.iter().map(|g| (*g).clone()).collect();
        if hull_contains(&pts, &IntVector::zeros(dim)).is_some() {
            return Err(LatticeError::NotStrictlyConvex);
        }
    }

    // Variables: λ_1..λ_k then x_1..x_dim; project out the λ block.
    let k = nonzero.len();
    let total = k + dim;
    let mut cs: Vec<AffineConstraint> = Vec::new();
    for i in 0..k {
        let mut coeffs = vec![Rat::zero(); total];
        coeffs[i] = Rat::one();
        cs.push(AffineConstraint {
            coeffs,
            constant: Rat::zero(),
            kind: ConstraintKind::Ge,
        });
    }
    for j in 0..dim {
        let mut coeffs = vec![Rat::zero(); total];
        for (i, g) in nonzero.iter().enumerate() {
            coeffs[i] = -Rat::from(g.0[j].clone());
        }
        coeffs[k + j] = Rat::one();
        cs.push(AffineConstraint {
            coeffs,
            constant: Rat::zero(),
            kind: ConstraintKind::Eq,
        });
    }
    let eliminate: Vec<usize> = (0..k).collect();
    let projected = project(total, &cs, &eliminate);

    let mut normals: BTreeSet<IntVector> = BTreeSet::new();
    for c in &projected {
        debug_assert!(c.constant.is_zero(), "cone projection must be homogeneous");
        let xs = &c.coeffs[k..];
        match c.kind {
            ConstraintKind::Ge => {
                if let Some(n) = primitive_normal(xs) {
                    normals.insert(n);
                }
            }
            ConstraintKind::Eq => {
                if let Some(n) = primitive_normal(xs) {
                    normals.insert(IntVector(n.0.iter().map(|e| -e).collect()));
                    normals.insert(n);
                }
            }
        }
    }

    let candidates: Vec<IntVector> = normals.into_iter().collect();
    let gen_matrix = super::IntMatrix::from_fn(nonzero.len(), dim, |i, j| nonzero[i].0[j].clone());
    let span_rank = gen_matrix.rank_int();

    if span_rank == dim {
        // Full-dimensional cone: a valid inequality is a facet exactly when
        // its tight generators span a hyperplane. Rank tests beat LP here.
        let kept: Vec<IntVector> = candidates
            .into_iter()
            .filter(|f| {
                let tight: Vec<&IntVector> = nonzero
                    .iter()
                    .copied()
                    .filter(|g| f.dot(g).is_zero())
                    .collect();
                if tight.len() + 1 < dim {
                    return false;
                }
                let m =
                    super::IntMatrix::from_fn(tight.len(), dim, |i, j| tight[i].0[j].clone());
                m.rank_int() + 1 == dim
            })
            .collect();
        return Ok(kept);
    }

    // Lower-dimensional cone: redundancy elimination by exact LP. f is
    // redundant when the remaining inequalities force ⟨f, x⟩ ≥ 0 (scaled:
    // ⟨f, x⟩ ≤ -1 infeasible).
    let mut kept = candidates;
    let mut i = 0;
    while i < kept.len() {
        let mut cs: Vec<AffineConstraint> = Vec::new();
        for (j, f) in kept.iter().enumerate() {
            if j == i {
                continue;
            }
            cs.push(AffineConstraint {
                coeffs: f.0.iter().map(|e| Rat::from(e.clone())).collect(),
                constant: Rat::zero(),
                kind: ConstraintKind::Ge,
            });
        }
        cs.push(AffineConstraint {
            coeffs: kept[i].0.iter().map(|e| -Rat::from(e.clone())).collect(),
            constant: -Rat::one(),
            kind: ConstraintKind::Ge,
        });
        if rational_feasible(dim, &cs).is_none() {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlat::lp::hull_contains;

    fn facet_holds(facets: &[IntVector], p: &IntVector) -> bool {
        facets.iter().all(|f| !f.dot(p).is_negative())
    }

    /// Membership agreement on an integer box around the generators: the
    /// facet description and a convex-combination LP must decide identically.
    fn check_box_agreement(gens: &[IntVector], facets: &[IntVector]) {
        let dim = gens[0].rank();
        let mut lo = vec![0i64; dim];
        let mut hi = vec![0i64; dim];
        for g in gens {
            let gi = g.to_i64().unwrap();
            for d in 0..dim {
                lo[d] = lo[d].min(gi[d]);
                hi[d] = hi[d].max(gi[d]);
            }
        }
        for d in 0..dim {
            lo[d] -= 1;
            hi[d] += 1;
        }
        // In-cone test by LP: p = Σ λ_i g_i with λ ≥ 0. Scale-free because a
        // box point in the cone at scale 1 is enough for these small boxes:
        // cone membership is equivalent to hull membership of p/s for large s;
        // we instead test Σλ g = p, λ ≥ 0 directly.
        let in_cone = |p: &IntVector| -> bool {
            let k = gens.len();
            let mut cs = Vec::new();
            for i in 0..k {
                let mut unit = vec![0i64; k];
                unit[i] = 1;
                cs.push(AffineConstraint::ge_i64(&unit, 0));
            }
            for d in 0..dim {
                cs.push(AffineConstraint {
                    coeffs: gens.iter().map(|g| Rat::from(g.0[d].clone())).collect(),
                    constant: -Rat::from(p.0[d].clone()),
                    kind: ConstraintKind::Eq,
                });
            }
            rational_feasible(k, &cs).is_some()
        };
        let mut idx = lo.clone();
        loop {
            let p = IntVector::from_i64(&idx);
            assert_eq!(
                facet_holds(facets, &p),
                in_cone(&p),
                "membership mismatch at {idx:?}"
            );
            let mut d = 0;
            loop {
                if d == dim {
                    return;
                }
                idx[d] += 1;
                if idx[d] <= hi[d] {
                    break;
                }
                idx[d] = lo[d];
                d += 1;
            }
        }
    }

    #[test]
    fn orthant_facets() {
        let gens = vec![IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[0, 1])];
        let f = dual_facets(&gens).unwrap();
        assert_eq!(
            f,
            vec![IntVector::from_i64(&[0, 1]), IntVector::from_i64(&[1, 0])]
        );
    }

    #[test]
    fn slanted_cone_facets() {
        let gens = vec![IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[1, 2])];
        let f = dual_facets(&gens).unwrap();
        assert_eq!(
            f,
            vec![IntVector::from_i64(&[0, 1]), IntVector::from_i64(&[2, -1])]
        );
        check_box_agreement(&gens, &f);
    }

    #[test]
    fn rejects_non_strictly_convex() {
        let gens = vec![IntVector::from_i64(&[1, 0]), IntVector::from_i64(&[-1, 0])];
        assert!(matches!(
            dual_facets(&gens),
            Err(LatticeError::NotStrictlyConvex)
        ));
        let halfplane = vec![
            IntVector::from_i64(&[1, 0]),
            IntVector::from_i64(&[0, 1]),
            IntVector::from_i64(&[-1, -1]),
        ];
        assert!(dual_facets(&halfplane).is_err());
    }

    #[test]
    fn zero_cone_facets_pin_origin() {
        let f = dual_facets(&[IntVector::zeros(2)]).unwrap();
        // Exactly the origin satisfies all normals.
        assert!(facet_holds(&f, &IntVector::from_i64(&[0, 0])));
        for p in [[1, 0], [-1, 0], [0, 1], [0, -1], [2, 3]] {
            assert!(!facet_holds(&f, &IntVector::from_i64(&p)));
        }
    }

    #[test]
    fn lower_dimensional_cone() {
        // A single ray in the plane: one line equality pair plus one halfline cut.
        let gens = vec![IntVector::from_i64(&[1, 1])];
        let f = dual_facets(&gens).unwrap();
        check_box_agreement(&gens, &f);
    }

    #[test]
    fn three_dim_cone_box_agreement() {
        let gens = vec![
            IntVector::from_i64(&[0, 0, 1]),
            IntVector::from_i64(&[2, 0, 1]),
            IntVector::from_i64(&[0, 2, 1]),
        ];
        let f = dual_facets(&gens).unwrap();
        check_box_agreement(&gens, &f);
        // Hull membership cross-check for an interior lattice point.
        let inside = IntVector::from_i64(&[1, 1, 1]);
        assert!(facet_holds(&f, &inside));
        let all = vec![
            IntVector::zeros(3),
            gens[0].clone(),
            gens[1].clone(),
            gens[2].clone(),
        ];
        assert!(hull_contains(&all, &inside).is_some());
    }
}
