//! The deformation-space torus quotient: from a weight decomposition, the
//! exact sequence 0 → N → Ñ → N′ → 0, the quotient cone σ = A(σ̃) in N′,
//! its singularity certificates, the descended finite symmetry, and the
//! fibration induced by a blow-down.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::deform::{weight_decomposition, WeightDecomposition};
use crate::fan::{Fan2D, Mat2};
use crate::intlat::{
    dual_facets, hull_contains, integer_section, quotient_map, smith_normal_form, solve_status,
    IntMatrix, IntVector, LatticeError, Rat,
};

/// Facet descriptions are precomputed up to this quotient rank; beyond it
/// they stay on demand (the certification pipeline never needs them).
pub const FACET_RANK_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("the torus acts through a quotient: the weight matrix is not injective")]
    NotInjective,
    #[error("the weight lattice image is not saturated; invariant factors {0:?}")]
    NotSaturated(Vec<BigInt>),
    #[error("quotient cone is not strictly convex: the line through {0:?} lies in it")]
    NotStrictlyConvex(IntVector),
    #[error(
        "weight {weight:?} has multiplicity {have} but the blow-down target needs {need}"
    )]
    WeightEmbedding {
        weight: (i64, i64),
        need: usize,
        have: usize,
    },
    #[error("group action integrity violation: {0}")]
    ActionIntegrity(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Which basis vector of Ñ a coordinate is, and where it lands in N′.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageLabel {
    pub weight: (i64, i64),
    pub copy: usize,
    /// Index into `ray_generators`, or None when the image is zero.
    pub ray: Option<usize>,
}

/// The quotient lattice N′ with the cone σ spanned by the images of the
/// coordinate rays of the deformation space.
#[derive(Debug, Clone)]
pub struct QuotientCone {
    pub nprime_rank: usize,
    /// Deduplicated primitive ray generators, in first-occurrence order of
    /// the Ñ basis.
    pub ray_generators: Vec<IntVector>,
    /// Number of Ñ basis vectors mapping onto each ray.
    pub ray_preimage_counts: Vec<usize>,
    /// Primitive facet normals; None when skipped for rank reasons (see
    /// [`FACET_RANK_LIMIT`] and [`QuotientCone::compute_facets`]).
    pub facets: Option<Vec<IntVector>>,
    /// B : N → Ñ, rows are the weights in lexicographic order with copies
    /// consecutive.
    pub b: IntMatrix,
    /// A : Ñ → N′ with A·B = 0, basis fixed by the Smith form of B.
    pub a: IntMatrix,
    /// Integer section of A (A·section = identity).
    pub section: IntMatrix,
    pub preimage_labels: Vec<PreimageLabel>,
    /// True when every A(ẽᵢ) was already primitive.
    pub primitive_images: bool,
}

impl QuotientCone {
    pub fn dim(&self) -> usize {
        self.b.rows()
    }

    /// Facet normals of σ, computing them now if construction skipped them.
    pub fn compute_facets(&self) -> Result<Vec<IntVector>, QuotientError> {
        match &self.facets {
            Some(f) => Ok(f.clone()),
            None => Ok(dual_facets(&self.ray_generators)?),
        }
    }

    fn trivial(b: IntMatrix) -> QuotientCone {
        let d = b.rows();
        let labels = labels_for(&b);
        QuotientCone {
            nprime_rank: 0,
            ray_generators: Vec::new(),
            ray_preimage_counts: Vec::new(),
            facets: Some(Vec::new()),
            b,
            a: IntMatrix::zeros(0, d),
            section: IntMatrix::zeros(d, 0),
            preimage_labels: labels,
            primitive_images: true,
        }
    }
}

fn weight_matrix(w: &WeightDecomposition) -> IntMatrix {
    let rows: Vec<Vec<i64>> = w
        .entries()
        .iter()
        .flat_map(|&((x, y), mult)| std::iter::repeat(vec![x, y]).take(mult))
        .collect();
    IntMatrix::from_rows_i64(&rows, 2)
}

fn labels_for(b: &IntMatrix) -> Vec<PreimageLabel> {
    let mut labels = Vec::with_capacity(b.rows());
    let mut prev: Option<(i64, i64)> = None;
    let mut copy = 0usize;
    for i in 0..b.rows() {
        let row = b.row(i).to_i64().expect("weights fit i64");
        let m = (row[0], row[1]);
        copy = if prev == Some(m) { copy + 1 } else { 0 };
        prev = Some(m);
        labels.push(PreimageLabel {
            weight: m,
            copy,
            ray: None,
        });
    }
    labels
}

/// Builds the short exact sequence and the quotient cone from a weight
/// decomposition. The Ñ basis is ordered by (weight lexicographic, copy
/// index); d = 0 yields the trivial rank-0 quotient of a rigid surface.
pub fn build_quotient(w: &WeightDecomposition) -> Result<QuotientCone, QuotientError> {
    let b = weight_matrix(w);
    let d = b.rows();
    if d == 0 {
        return Ok(QuotientCone::trivial(b));
    }
    let snf = smith_normal_form(&b);
    if snf.rank() < 2 {
        return Err(QuotientError::NotInjective);
    }
    let factors: Vec<BigInt> = snf.invariant_factors().into_iter().take(2).collect();
    if !factors.iter().all(|f| f.is_one()) {
        return Err(QuotientError::NotSaturated(factors));
    }
    if d == 2 {
        return Ok(QuotientCone::trivial(b));
    }

    let a = quotient_map(&b)?;
    let section = integer_section(&a)?;
    debug_assert!(a.mul(&b).is_zero());

    let mut labels = labels_for(&b);
    let mut ray_generators: Vec<IntVector> = Vec::new();
    let mut ray_preimage_counts: Vec<usize> = Vec::new();
    let mut primitive_images = true;
    for (i, label) in labels.iter_mut().enumerate() {
        let image = a.col(i);
        if image.is_zero() {
            continue;
        }
        let (prim, content) = image.primitive_part();
        if content > BigInt::one() {
            primitive_images = false;
        }
        match ray_generators.iter().position(|r| *r == prim) {
            Some(j) => {
                ray_preimage_counts[j] += 1;
                label.ray = Some(j);
            }
            None => {
                ray_generators.push(prim);
                ray_preimage_counts.push(1);
                label.ray = Some(ray_generators.len() - 1);
            }
        }
    }

    // Strict convexity, pulled back to the plane: 0 is a convex combination
    // of the nonzero images iff some x has B(x) in the standard simplex's
    // top face with zero entries on the zero-image coordinates.
    let windows: Vec<(Rat, Rat)> = labels
        .iter()
        .map(|l| match l.ray {
            Some(_) => (Rat::zero(), Rat::one()),
            None => (Rat::zero(), Rat::zero()),
        })
        .collect();
    let sum_m = (b.col(0), b.col(1));
    let sum_row: Vec<Rat> = vec![
        Rat::from(sum_m.0 .0.iter().sum::<BigInt>()),
        Rat::from(sum_m.1 .0.iter().sum::<BigInt>()),
    ];
    let extras = vec![
        // ⟨Σm, x⟩ = 1, as two clips.
        (sum_row[0].clone(), sum_row[1].clone(), -Rat::one()),
        (-sum_row[0].clone(), -sum_row[1].clone(), Rat::one()),
    ];
    if let Some((x1, x2)) = window_region(&b, &windows, &extras) {
        let j = (0..d)
            .find(|&i| {
                let y = Rat::from(b[(i, 0)].clone()) * &x1 + Rat::from(b[(i, 1)].clone()) * &x2;
                y.is_positive()
            })
            .expect("a convex combination has a positive coefficient");
        let ray = labels[j].ray.expect("positive weight sits on a nonzero image");
        return Err(QuotientError::NotStrictlyConvex(ray_generators[ray].clone()));
    }

    let facets = if d - 2 <= FACET_RANK_LIMIT {
        Some(dual_facets(&ray_generators)?)
    } else {
        None
    };
    Ok(QuotientCone {
        nprime_rank: d - 2,
        ray_generators,
        ray_preimage_counts,
        facets,
        b,
        a,
        section,
        preimage_labels: labels,
        primitive_images,
    })
}

/// Feasibility of { x ∈ ℝ² : lo_i ≤ ⟨m_i, x⟩ ≤ hi_i for every row m_i of b }
/// intersected with extra half-planes (a, c, k) meaning a·x₁ + c·x₂ + k ≥ 0.
/// Requires finite windows and rank-2 b. Returns a witness point.
fn window_region(
    b: &IntMatrix,
    windows: &[(Rat, Rat)],
    extras: &[(Rat, Rat, Rat)],
) -> Option<(Rat, Rat)> {
    let d = b.rows();
    debug_assert_eq!(windows.len(), d);
    // Two independent rows bound a starting parallelogram.
    let i1 = (0..d).find(|&i| !b[(i, 0)].is_zero() || !b[(i, 1)].is_zero())?;
    let i2 = (0..d).find(|&i| {
        (&b[(i1, 0)] * &b[(i, 1)] - &b[(i1, 1)] * &b[(i, 0)]) != BigInt::zero()
    })?;
    let det = &b[(i1, 0)] * &b[(i2, 1)] - &b[(i1, 1)] * &b[(i2, 0)];
    let det = Rat::from(det);
    let mut lo1: Option<Rat> = None;
    let mut hi1: Option<Rat> = None;
    let mut lo2: Option<Rat> = None;
    let mut hi2: Option<Rat> = None;
    for y1 in [&windows[i1].0, &windows[i1].1] {
        for y2 in [&windows[i2].0, &windows[i2].1] {
            // Cramer: x = M⁻¹ (y1, y2) for M = rows (m_i1, m_i2).
            let x1 = (Rat::from(b[(i2, 1)].clone()) * y1 - Rat::from(b[(i1, 1)].clone()) * y2)
                / &det;
            let x2 = (Rat::from(b[(i1, 0)].clone()) * y2 - Rat::from(b[(i2, 0)].clone()) * y1)
                / &det;
            lo1 = Some(lo1.map_or(x1.clone(), |v| v.min(x1.clone())));
            hi1 = Some(hi1.map_or(x1.clone(), |v| v.max(x1)));
            lo2 = Some(lo2.map_or(x2.clone(), |v| v.min(x2.clone())));
            hi2 = Some(hi2.map_or(x2.clone(), |v| v.max(x2)));
        }
    }
    let (lo1, hi1, lo2, hi2) = (lo1?, hi1?, lo2?, hi2?);
    let mut poly = Poly {
        pts: vec![
            (lo1.clone(), lo2.clone()),
            (hi1.clone(), lo2),
            (hi1, hi2.clone()),
            (lo1, hi2),
        ],
    };
    for i in 0..d {
        let mx = Rat::from(b[(i, 0)].clone());
        let my = Rat::from(b[(i, 1)].clone());
        // ⟨m, x⟩ ≥ lo and ≤ hi.
        poly = poly.clip(&mx, &my, &-windows[i].0.clone());
        poly = poly.clip(&-mx, &-my, &windows[i].1);
        if poly.is_empty() {
            return None;
        }
    }
    for (a, c, k) in extras {
        poly = poly.clip(a, c, k);
        if poly.is_empty() {
            return None;
        }
    }
    poly.pts.first().cloned()
}

/// True when no A(ẽᵢ) needed division by its content. Foldable fans always
/// audit true; synthetic decompositions may not, and are kept usable.
pub fn primitivity_audit(q: &QuotientCone) -> bool {
    q.primitive_images
}

/// Singularity certificates for a strictly convex full cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityFlags {
    pub q_gorenstein: bool,
    pub gorenstein: bool,
    /// Integral functional evaluating to 1 on every ray generator.
    pub gorenstein_certificate: Option<IntVector>,
    pub simplicial: bool,
    pub smooth: bool,
    pub terminal: bool,
    /// Lattice points of conv({0} ∪ rays) that are not vertices; empty
    /// exactly when terminal.
    pub offending_points: Vec<IntVector>,
}

/// Singularity flags plus the weight bookkeeping of the quotient cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    pub q_gorenstein: bool,
    pub gorenstein: bool,
    pub gorenstein_certificate: Option<IntVector>,
    pub simplicial: bool,
    pub smooth: bool,
    pub terminal: bool,
    pub offending_points: Vec<IntVector>,
    pub weight_sum: (i64, i64),
}

/// Certificates shared by both terminality paths: Gorenstein functional by
/// one Smith solve (rational and integral solvability together), simplicial
/// and smooth from the generator matrix.
fn base_flags(
    rank: usize,
    rays: &[IntVector],
) -> (bool, Option<IntVector>, bool, bool) {
    if rays.is_empty() {
        return (true, Some(IntVector::zeros(rank)), true, true);
    }
    let ray_rows = IntMatrix::from_fn(rays.len(), rank, |i, j| rays[i].0[j].clone());
    let ones = IntVector(vec![BigInt::one(); rays.len()]);
    let (q_gorenstein, certificate) = solve_status(&ray_rows, &ones);
    let snf = smith_normal_form(&ray_rows);
    let simplicial = snf.rank() == rays.len();
    let smooth = simplicial
        && snf
            .invariant_factors()
            .iter()
            .take(snf.rank())
            .all(|f| f.is_one());
    (q_gorenstein, certificate, simplicial, smooth)
}

/// Convex polygon (possibly degenerate) with exact rational vertices.
#[derive(Debug, Clone)]
struct Poly {
    pts: Vec<(Rat, Rat)>,
}

impl Poly {
    fn unit_square() -> Poly {
        let z = Rat::zero();
        let o = Rat::one();
        Poly {
            pts: vec![
                (z.clone(), z.clone()),
                (o.clone(), z.clone()),
                (o.clone(), o.clone()),
                (z, o),
            ],
        }
    }

    fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Clips to the half-plane a·x + b·y + c ≥ 0 (Sutherland–Hodgman).
    fn clip(&self, a: &Rat, b: &Rat, c: &Rat) -> Poly {
        let val = |p: &(Rat, Rat)| a * &p.0 + b * &p.1 + c;
        let n = self.pts.len();
        match n {
            0 => Poly { pts: Vec::new() },
            1 => {
                if !val(&self.pts[0]).is_negative() {
                    self.clone()
                } else {
                    Poly { pts: Vec::new() }
                }
            }
            _ => {
                let cross = |p: &(Rat, Rat), q: &(Rat, Rat), vp: &Rat, vq: &Rat| {
                    // vp ≥ 0 > vq or vp < 0 ≤ vq; intersection at t = vp/(vp−vq)
                    let t = vp / (vp - vq);
                    (
                        &p.0 + &t * (&q.0 - &p.0),
                        &p.1 + &t * (&q.1 - &p.1),
                    )
                };
                let mut out: Vec<(Rat, Rat)> = Vec::new();
                let edges: Vec<(usize, usize)> = if n == 2 {
                    vec![(0, 1)]
                } else {
                    (0..n).map(|i| (i, (i + 1) % n)).collect()
                };
                // Keep every nonnegative vertex and every boundary crossing.
                for (i, j) in edges {
                    let (p, q) = (&self.pts[i], &self.pts[j]);
                    let (vp, vq) = (val(p), val(q));
                    if !vp.is_negative() {
                        out.push(p.clone());
                        if vq.is_negative() {
                            out.push(cross(p, q, &vp, &vq));
                        }
                    } else if !vq.is_negative() {
                        out.push(cross(p, q, &vp, &vq));
                    }
                }
                if n == 2 {
                    if !val(&self.pts[1]).is_negative() {
                        out.push(self.pts[1].clone());
                    }
                }
                out.dedup();
                if out.len() > 1 && out.first() == out.last() {
                    out.pop();
                }
                Poly { pts: out }
            }
        }
    }

    /// Range of a·x + b·y over the region (attained at vertices).
    fn range(&self, a: &Rat, b: &Rat) -> Option<(Rat, Rat)> {
        let mut vals = self.pts.iter().map(|p| a * &p.0 + b * &p.1);
        let first = vals.next()?;
        let mut lo = first.clone();
        let mut hi = first;
        for v in vals {
            if v < lo {
                lo = v.clone();
            }
            if v > hi {
                hi = v;
            }
        }
        Some((lo, hi))
    }
}

/// Lattice points of Π = conv({0} ∪ {A(ẽᵢ)}) computed upstairs: a point of
/// Π ∩ N′ is A(ũ) for an integer ũ with ũ + B(x) in the standard simplex for
/// some real x, and every class of such lifts has a representative whose
/// witness x lies in the unit square.
fn pi_points_via_lift(b: &IntMatrix, a: &IntMatrix) -> Vec<IntVector> {
    let d = b.rows();
    let weights: Vec<(BigInt, BigInt)> = (0..d)
        .map(|i| (b[(i, 0)].clone(), b[(i, 1)].clone()))
        .collect();
    // Largest weights first: their λ-windows cut the square fastest.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&i| {
        let norm = weights[i].0.abs() + weights[i].1.abs();
        (std::cmp::Reverse(norm), i)
    });

    struct State<'s> {
        weights: &'s [(BigInt, BigInt)],
        order: &'s [usize],
        a: &'s IntMatrix,
        assignment: Vec<BigInt>,
        found: BTreeSet<IntVector>,
    }

    fn recurse(st: &mut State, depth: usize, poly: Poly, sum_u: BigInt, sum_m: (BigInt, BigInt)) {
        if depth == st.order.len() {
            let u = IntVector(st.assignment.clone());
            st.found.insert(st.a.mul_vec(&u));
            return;
        }
        let i = st.order[depth];
        let (mx, my) = (
            Rat::from(st.weights[i].0.clone()),
            Rat::from(st.weights[i].1.clone()),
        );
        let (ymin, ymax) = poly.range(&mx, &my).expect("nonempty polygon");
        let lo = (-ymax).ceil().to_integer();
        let hi = (Rat::one() - ymin).floor().to_integer();
        let mut u = lo;
        while u <= hi {
            let ur = Rat::from(u.clone());
            // 0 ≤ ũᵢ + ⟨mᵢ, x⟩ ≤ 1
            let clipped = poly
                .clip(&mx, &my, &ur)
                .clip(&(-&mx), &(-&my), &(Rat::one() - &ur));
            if !clipped.is_empty() {
                let nsu = &sum_u + &u;
                let nsm = (&sum_m.0 + &st.weights[i].0, &sum_m.1 + &st.weights[i].1);
                // Partial sums only grow; prune when Σλ already exceeds 1.
                let (pmin, _) = clipped
                    .range(&Rat::from(nsm.0.clone()), &Rat::from(nsm.1.clone()))
                    .unwrap();
                if pmin + Rat::from(nsu.clone()) <= Rat::one() {
                    st.assignment[i] = u.clone();
                    recurse(st, depth + 1, clipped, nsu, nsm);
                }
            }
            u += 1;
        }
    }

    let mut st = State {
        weights: &weights,
        order: &order,
        a,
        assignment: vec![BigInt::zero(); d],
        found: BTreeSet::new(),
    };
    recurse(
        &mut st,
        0,
        Poly::unit_square(),
        BigInt::zero(),
        (BigInt::zero(), BigInt::zero()),
    );
    st.found.into_iter().collect()
}

/// Bounding-box enumeration with exact convex-hull membership.
fn pi_points_via_box(rank: usize, rays: &[IntVector]) -> Result<Vec<IntVector>, QuotientError> {
    let mut hull_points: Vec<IntVector> = vec![IntVector::zeros(rank)];
    hull_points.extend_from_slice(rays);
    let mut lo = vec![BigInt::zero(); rank];
    let mut hi = vec![BigInt::zero(); rank];
    for p in &hull_points {
        for k in 0..rank {
            if p.0[k] < lo[k] {
                lo[k] = p.0[k].clone();
            }
            if p.0[k] > hi[k] {
                hi[k] = p.0[k].clone();
            }
        }
    }
    let mut volume = BigInt::one();
    for k in 0..rank {
        volume *= &hi[k] - &lo[k] + 1;
    }
    if volume > BigInt::from(2_000_000u64) {
        return Err(QuotientError::Lattice(LatticeError::Capacity(format!(
            "terminality box scan over {volume} points; cone too large for the generator-only path"
        ))));
    }
    let mut out = Vec::new();
    let mut idx = lo.clone();
    'scan: loop {
        let p = IntVector(idx.clone());
        if hull_contains(&hull_points, &p).is_some() {
            out.push(p);
        }
        let mut k = 0;
        loop {
            if k == rank {
                break 'scan;
            }
            idx[k] += 1;
            if idx[k] <= hi[k] {
                break;
            }
            idx[k] = lo[k].clone();
            k += 1;
        }
    }
    if rank == 0 {
        out.push(IntVector::zeros(0));
        out.dedup();
    }
    Ok(out)
}

fn assemble_flags(
    rank: usize,
    rays: &[IntVector],
    points: Vec<IntVector>,
    vertices: BTreeSet<IntVector>,
) -> SingularityFlags {
    let (q_gorenstein, gorenstein_certificate, simplicial, smooth) = base_flags(rank, rays);
    let gorenstein = gorenstein_certificate.is_some();
    debug_assert!(!gorenstein || q_gorenstein);
    let mut offending_points: Vec<IntVector> = points
        .iter()
        .filter(|p| !vertices.contains(*p))
        .cloned()
        .collect();
    offending_points.sort();
    let terminal = offending_points.is_empty();
    debug_assert!(!smooth || (simplicial && terminal));
    SingularityFlags {
        q_gorenstein,
        gorenstein,
        gorenstein_certificate,
        simplicial,
        smooth,
        terminal,
        offending_points,
    }
}

/// Whether the generator `ray_index` lies in conv({0} ∪ other rays), decided
/// in the plane: a witness is x with s(r) + B(x) in the simplex, vanishing
/// on r's own preimage coordinates.
fn lift_in_hull_of_others(q: &QuotientCone, ray_index: usize) -> bool {
    let d = q.dim();
    let r = &q.ray_generators[ray_index];
    let sr = q.section.mul_vec(r);
    debug_assert_eq!(q.a.mul_vec(&sr), *r);
    let windows: Vec<(Rat, Rat)> = (0..d)
        .map(|i| {
            let base = -Rat::from(sr.0[i].clone());
            if q.preimage_labels[i].ray == Some(ray_index) {
                (base.clone(), base)
            } else {
                (base.clone(), base + Rat::one())
            }
        })
        .collect();
    // Σλ ≤ 1: ⟨Σm, x⟩ ≤ 1 − Σ s(r).
    let sum1: BigInt = (0..d).map(|i| q.b[(i, 0)].clone()).sum();
    let sum2: BigInt = (0..d).map(|i| q.b[(i, 1)].clone()).sum();
    let ssum: BigInt = sr.0.iter().sum();
    let extras = vec![(
        -Rat::from(sum1),
        -Rat::from(sum2),
        Rat::one() - Rat::from(ssum),
    )];
    window_region(&q.b, &windows, &extras).is_some()
}

/// Terminality data for a built quotient with primitive images: lattice
/// points through the integer lift, vertices through the plane pullback.
fn flags_via_lift(q: &QuotientCone) -> SingularityFlags {
    let points = pi_points_via_lift(&q.b, &q.a);
    let mut vertices: BTreeSet<IntVector> = BTreeSet::new();
    vertices.insert(IntVector::zeros(q.nprime_rank));
    for i in 0..q.ray_generators.len() {
        if !lift_in_hull_of_others(q, i) {
            vertices.insert(q.ray_generators[i].clone());
        }
    }
    assemble_flags(q.nprime_rank, &q.ray_generators, points, vertices)
}

/// Terminality data from generators only: bounding-box scan and hull LPs.
fn flags_via_box(rank: usize, rays: &[IntVector]) -> Result<SingularityFlags, QuotientError> {
    let points = pi_points_via_box(rank, rays)?;
    let mut hull_points: Vec<IntVector> = vec![IntVector::zeros(rank)];
    hull_points.extend_from_slice(rays);
    let mut vertices: BTreeSet<IntVector> = BTreeSet::new();
    for (i, p) in hull_points.iter().enumerate() {
        let others: Vec<IntVector> = hull_points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        if hull_contains(&others, p).is_none() {
            vertices.insert(p.clone());
        }
    }
    Ok(assemble_flags(rank, rays, points, vertices))
}

/// Singularity analysis of a cone given only by generators (deduplicated and
/// normalized to primitive). Strict convexity is checked; the terminality
/// scan is the generator-only bounding-box method, so this entry point is
/// meant for low-rank cones.
pub fn cone_singularities(
    rank: usize,
    generators: &[IntVector],
) -> Result<SingularityFlags, QuotientError> {
    let mut rays: Vec<IntVector> = Vec::new();
    for g in generators {
        assert_eq!(g.rank(), rank, "generator rank mismatch");
        if g.is_zero() {
            continue;
        }
        let (prim, _) = g.primitive_part();
        if !rays.contains(&prim) {
            rays.push(prim);
        }
    }
    if let Some(witness) = hull_contains(&rays, &IntVector::zeros(rank)) {
        let j = witness
            .numerators
            .0
            .iter()
            .position(|n| n.is_positive())
            .expect("positive coefficient exists");
        return Err(QuotientError::NotStrictlyConvex(rays[j].clone()));
    }
    flags_via_box(rank, &rays)
}

/// Full singularity report of a built quotient cone. Terminality is
/// enumerated through the integer lift of the defining sequence whenever the
/// ray images are primitive, which keeps the scan two-dimensional regardless
/// of the rank of N′.
pub fn singularity_report(
    q: &QuotientCone,
    w: &WeightDecomposition,
) -> Result<SingularityReport, QuotientError> {
    let flags = if q.primitive_images && q.dim() > 2 {
        flags_via_lift(q)
    } else {
        flags_via_box(q.nprime_rank, &q.ray_generators)?
    };
    let weight_sum = w.weight_sum();
    // With B injective and saturated and all images primitive and nonzero,
    // a vanishing weight sum is exactly the Gorenstein functional.
    let images_clean =
        q.primitive_images && q.preimage_labels.iter().all(|l| l.ray.is_some());
    if images_clean {
        assert_eq!(
            weight_sum == (0, 0),
            flags.gorenstein,
            "weight-sum criterion disagrees with the certificate search"
        );
    }
    Ok(SingularityReport {
        q_gorenstein: flags.q_gorenstein,
        gorenstein: flags.gorenstein,
        gorenstein_certificate: flags.gorenstein_certificate,
        simplicial: flags.simplicial,
        smooth: flags.smooth,
        terminal: flags.terminal,
        offending_points: flags.offending_points,
        weight_sum,
    })
}

fn mat2_to_int(h: Mat2) -> IntMatrix {
    IntMatrix::from_rows_i64(
        &[
            vec![h.0[0][0], h.0[0][1]],
            vec![h.0[1][0], h.0[1][1]],
        ],
        2,
    )
}

/// Pushes each lattice automorphism through the quotient: the dual weight
/// action permutes the Ñ basis (copies within one weight space are matched
/// by copy index), and the permutation descends along A to a unimodular
/// matrix on N′ preserving σ.
pub fn descend_group_action(
    fan: &Fan2D,
    group: &crate::symmetry::LatticeAutGroup,
    q: &QuotientCone,
) -> Result<Vec<IntMatrix>, QuotientError> {
    let w = weight_decomposition(fan);
    if weight_matrix(&w) != q.b {
        return Err(QuotientError::ActionIntegrity(
            "quotient was not built from this fan's weights".into(),
        ));
    }
    let d = q.dim();
    let n = q.nprime_rank;
    let mut out = Vec::with_capacity(group.elements.len());
    for &h in &group.elements {
        // π(i) = index of (h·mᵢ, copy of i).
        let mut perm = vec![usize::MAX; d];
        for (i, label) in q.preimage_labels.iter().enumerate() {
            let target = h.dual_apply(label.weight);
            let j = q
                .preimage_labels
                .iter()
                .position(|l| l.weight == target && l.copy == label.copy)
                .ok_or_else(|| {
                    QuotientError::ActionIntegrity(format!(
                        "dual action does not preserve the weight multiset at {:?}",
                        label.weight
                    ))
                })?;
            perm[i] = j;
        }
        let mut p = IntMatrix::zeros(d, d);
        for i in 0..d {
            p[(perm[i], i)] = BigInt::one();
        }
        // The permutation must normalize the kernel: P·B = B·h.
        if p.mul(&q.b) != q.b.mul(&mat2_to_int(h)) {
            return Err(QuotientError::ActionIntegrity(
                "induced permutation does not normalize the kernel of A".into(),
            ));
        }
        let descended = q.a.mul(&p).mul(&q.section);
        debug_assert_eq!(descended.mul(&q.a), q.a.mul(&p));
        if n > 0 {
            if !descended.is_unimodular() {
                return Err(QuotientError::ActionIntegrity(
                    "descended matrix is not unimodular".into(),
                ));
            }
            for r in &q.ray_generators {
                let image = descended.mul_vec(r);
                if !q.ray_generators.contains(&image) {
                    return Err(QuotientError::ActionIntegrity(
                        "descended matrix does not permute the cone's rays".into(),
                    ));
                }
            }
        }
        out.push(descended);
    }
    Ok(out)
}

/// Searches for a unimodular matrix carrying one ray set bijectively onto
/// another: brute force over assignments of a spanning subset, each solved
/// exactly and verified on the full set. Desk scale (≤ 8 rays).
pub fn cones_isomorphic(rays_a: &[IntVector], rays_b: &[IntVector]) -> Option<IntMatrix> {
    if rays_a.len() != rays_b.len() || rays_a.is_empty() {
        return if rays_a.len() == rays_b.len() {
            Some(IntMatrix::identity(rays_a.first().map_or(0, |r| r.rank())))
        } else {
            None
        };
    }
    let n = rays_a[0].rank();
    if rays_b[0].rank() != n {
        return None;
    }
    // Greedy spanning subset of rays_a.
    let mut span: Vec<usize> = Vec::new();
    for i in 0..rays_a.len() {
        let mut trial = span.clone();
        trial.push(i);
        let m = IntMatrix::from_fn(trial.len(), n, |r, c| rays_a[trial[r]].0[c].clone());
        if m.rank_int() == trial.len() {
            span = trial;
        }
    }
    if span.len() != n {
        return None; // non-spanning cones are outside this helper's scope
    }
    let a_sub = IntMatrix::from_fn(n, n, |r, c| rays_a[span[c]].0[r].clone());
    let det = a_sub.det();
    let adj = a_sub.adjugate();

    let k = rays_b.len();
    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; k];
    fn recurse(
        depth: usize,
        n: usize,
        k: usize,
        span: &[usize],
        rays_a: &[IntVector],
        rays_b: &[IntVector],
        adj: &IntMatrix,
        det: &BigInt,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> Option<IntMatrix> {
        if depth == n {
            // U·a_sub = b_sub  ⟹  U = b_sub·adj(a_sub)/det.
            let b_sub =
                IntMatrix::from_fn(n, n, |r, c| rays_b[assignment[c]].0[r].clone());
            let num = b_sub.mul(adj);
            let mut u = IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let (q, r) = num_integer::Integer::div_rem(&num[(i, j)], det);
                    if !r.is_zero() {
                        return None;
                    }
                    u[(i, j)] = q;
                }
            }
            if !u.is_unimodular() {
                return None;
            }
            let mut image: Vec<IntVector> = rays_a.iter().map(|v| u.mul_vec(v)).collect();
            image.sort();
            let mut target: Vec<IntVector> = rays_b.to_vec();
            target.sort();
            if image == target {
                return Some(u);
            }
            return None;
        }
        for cand in 0..k {
            if used[cand] {
                continue;
            }
            used[cand] = true;
            assignment[depth] = cand;
            if let Some(u) = recurse(
                depth + 1,
                n,
                k,
                span,
                rays_a,
                rays_b,
                adj,
                det,
                assignment,
                used,
            ) {
                return Some(u);
            }
            used[cand] = false;
        }
        None
    }
    recurse(
        0,
        n,
        k,
        &span,
        rays_a,
        rays_b,
        &adj,
        &det,
        &mut assignment,
        &mut used,
    )
}

/// The surjection N′ → N′₀ induced by a blow-down f → f0: the weights of f0
/// embed into those of f (copy-index order), the coordinate projection
/// Ñ → Ñ₀ covers the identity on N, and the quotient map commutes. The
/// result carries σ onto σ₀.
pub fn blowdown_fibration(fan: &Fan2D, base: &Fan2D) -> Result<IntMatrix, QuotientError> {
    let w = weight_decomposition(fan);
    let w0 = weight_decomposition(base);
    for &(m, need) in w0.entries() {
        let have = w.multiplicity(m);
        if have < need {
            return Err(QuotientError::WeightEmbedding {
                weight: m,
                need,
                have,
            });
        }
    }
    let q = build_quotient(&w)?;
    let q0 = build_quotient(&w0)?;
    let (d, d0) = (q.dim(), q0.dim());

    // Coordinate projection Ñ → Ñ₀ matching (weight, copy) labels.
    let mut pr = IntMatrix::zeros(d0, d);
    for (j, label) in q0.preimage_labels.iter().enumerate() {
        let i = q
            .preimage_labels
            .iter()
            .position(|l| l.weight == label.weight && l.copy == label.copy)
            .expect("embedding checked above");
        pr[(j, i)] = BigInt::one();
    }
    debug_assert_eq!(pr.mul(&q.b), q0.b);

    let phi = q0.a.mul(&pr).mul(&q.section);
    // The two exact sequences commute over the identity on N.
    if phi.mul(&q.a) != q0.a.mul(&pr) {
        return Err(QuotientError::ActionIntegrity(
            "fibration square does not commute".into(),
        ));
    }
    if q0.nprime_rank > 0 {
        integer_section(&phi).map_err(|_| {
            QuotientError::ActionIntegrity("fibration is not surjective".into())
        })?;
        // σ maps onto σ₀: generator images are cone members, every base ray
        // is covered up to a positive multiple.
        let mut covered = vec![false; q0.ray_generators.len()];
        for r in &q.ray_generators {
            let image = phi.mul_vec(r);
            if image.is_zero() {
                continue;
            }
            let (prim, _) = image.primitive_part();
            match q0.ray_generators.iter().position(|s| *s == prim) {
                Some(j) => covered[j] = true,
                None => {
                    return Err(QuotientError::ActionIntegrity(
                        "a generator image leaves the base cone's ray set".into(),
                    ))
                }
            }
        }
        if !covered.iter().all(|&c| c) {
            return Err(QuotientError::ActionIntegrity(
                "fibration does not carry the cone onto the base cone".into(),
            ));
        }
    }
    Ok(phi)
}
