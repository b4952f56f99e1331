//! Smooth complete two-dimensional fans: validation, blow-ups and
//! blow-downs, self-intersection numbers, the catalog of named fans, and
//! fan isomorphism testing.
//!
//! Ray coordinates are checked 64-bit integers; any overflow is reported as
//! an arithmetic-capacity error instead of wrapping.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray ({0}, {1}) is not primitive")]
    NonPrimitiveRay(i64, i64),
    #[error("duplicate ray ({0}, {1})")]
    DuplicateRay(i64, i64),
    #[error("a fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("adjacent rays ({0}, {1}) and ({2}, {3}) have determinant {4}, expected +1 (fan is not smooth and complete)")]
    BadAdjacentPair(i64, i64, i64, i64, i64),
    #[error("index {index} out of range for a fan with {rays} rays")]
    IndexOutOfRange { index: usize, rays: usize },
    #[error("ray ({0}, {1}) is not contractible: it is not the sum of its neighbors")]
    NotContractible(i64, i64),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("unknown catalog fan {0:?}")]
    UnknownCatalogName(String),
    #[error("arithmetic capacity exceeded in ray arithmetic")]
    Overflow,
}

/// Primitive integer generator of a ray of the fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ray {
    pub x: i64,
    pub y: i64,
}

impl Ray {
    pub const fn new(x: i64, y: i64) -> Self {
        Ray { x, y }
    }

    pub fn is_primitive(self) -> bool {
        (self.x != 0 || self.y != 0) && self.x.abs().gcd(&self.y.abs()) == 1
    }

    pub fn checked_add(self, other: Ray) -> Result<Ray, FanError> {
        Ok(Ray {
            x: self.x.checked_add(other.x).ok_or(FanError::Overflow)?,
            y: self.y.checked_add(other.y).ok_or(FanError::Overflow)?,
        })
    }

    /// det(u, v) = u.x v.y − u.y v.x, exact with overflow reporting.
    pub fn det(self, other: Ray) -> Result<i64, FanError> {
        let a = self.x.checked_mul(other.y).ok_or(FanError::Overflow)?;
        let b = self.y.checked_mul(other.x).ok_or(FanError::Overflow)?;
        a.checked_sub(b).ok_or(FanError::Overflow)
    }

    /// Octant index for the exact angular order, counterclockwise from the
    /// positive x-axis.
    fn octant(self) -> u8 {
        match (self.x.signum(), self.y.signum()) {
            (1, 0) => 0,
            (1, 1) => 1,
            (0, 1) => 2,
            (-1, 1) => 3,
            (-1, 0) => 4,
            (-1, -1) => 5,
            (0, -1) => 6,
            (1, -1) => 7,
            _ => unreachable!("zero ray rejected before ordering"),
        }
    }

    /// Exact angular comparator: octant index first, cross-product sign
    /// within an octant. Distinct primitive rays never compare equal.
    pub fn cmp_angle(self, other: Ray) -> std::cmp::Ordering {
        self.octant().cmp(&other.octant()).then_with(|| {
            // Same octant: self before other iff other is strictly
            // counterclockwise of self, i.e. det(self, other) > 0.
            let d = self
                .det(other)
                .expect("catalog-scale rays fit the comparator");
            0i64.cmp(&d)
        })
    }
}

/// Unimodular-checked 2×2 integer matrix acting on the ray lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn det(self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn is_unimodular(self) -> bool {
        self.det().abs() == 1
    }

    pub fn mul(self, rhs: Mat2) -> Mat2 {
        let a = self.0;
        let b = rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Inverse of a unimodular matrix (adjugate divided by ±1).
    pub fn inverse(self) -> Mat2 {
        let d = self.det();
        assert!(d.abs() == 1, "inverse of non-unimodular matrix");
        let a = self.0;
        Mat2([
            [a[1][1] * d, -a[0][1] * d],
            [-a[1][0] * d, a[0][0] * d],
        ])
    }

    pub fn apply(self, r: Ray) -> Result<Ray, FanError> {
        let a = self.0;
        let x = a[0][0]
            .checked_mul(r.x)
            .and_then(|t| t.checked_add(a[0][1].checked_mul(r.y)?))
            .ok_or(FanError::Overflow)?;
        let y = a[1][0]
            .checked_mul(r.x)
            .and_then(|t| t.checked_add(a[1][1].checked_mul(r.y)?))
            .ok_or(FanError::Overflow)?;
        Ok(Ray { x, y })
    }

    /// Action on the dual lattice M: m ↦ m ∘ self⁻¹, rows on the right.
    pub fn dual_apply(self, m: (i64, i64)) -> (i64, i64) {
        let inv = self.inverse().0;
        (
            m.0 * inv[0][0] + m.1 * inv[1][0],
            m.0 * inv[0][1] + m.1 * inv[1][1],
        )
    }

    /// Multiplicative order; lattice automorphisms of complete fans always
    /// have order in {1, 2, 3, 4, 6}, so anything past 12 is a bug upstream.
    pub fn order(self) -> usize {
        let mut p = self;
        for k in 1..=12 {
            if p == Mat2::IDENTITY {
                return k;
            }
            p = p.mul(self);
        }
        panic!("element order exceeds 12; not a finite-order lattice map")
    }
}

/// A smooth complete fan in the plane, stored as its cyclically ordered
/// primitive ray generators (counterclockwise, starting from the
/// lexicographically least ray).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan2D {
    rays: Vec<Ray>,
    name: Option<String>,
}

impl Fan2D {
    /// Validates raw ray data and returns the canonical fan: rays must be
    /// primitive, pairwise distinct, at least three, and consecutive pairs in
    /// counterclockwise order must have determinant +1 (smoothness; together
    /// with the single full angular turn of the sorted cycle, completeness).
    pub fn validate(raw: &[(i64, i64)], name: Option<&str>) -> Result<Fan2D, FanError> {
        let mut rays = Vec::with_capacity(raw.len());
        for &(x, y) in raw {
            let r = Ray::new(x, y);
            if !r.is_primitive() {
                return Err(FanError::NonPrimitiveRay(x, y));
            }
            rays.push(r);
        }
        let mut sorted = rays.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(FanError::DuplicateRay(w[0].x, w[0].y));
            }
        }
        if rays.len() < 3 {
            return Err(FanError::TooFewRays(rays.len()));
        }
        rays.sort_by(|a, b| a.cmp_angle(*b));
        // Start the cycle at the lexicographically least ray.
        let start = rays
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| **r)
            .map(|(i, _)| i)
            .unwrap();
        rays.rotate_left(start);
        for i in 0..rays.len() {
            let u = rays[i];
            let v = rays[(i + 1) % rays.len()];
            let d = u.det(v)?;
            if d != 1 {
                return Err(FanError::BadAdjacentPair(u.x, u.y, v.x, v.y, d));
            }
        }
        Ok(Fan2D {
            rays,
            name: name.map(str::to_owned),
        })
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: &str) -> Fan2D {
        self.name = Some(name.to_owned());
        self
    }

    pub fn ray(&self, i: usize) -> Ray {
        self.rays[i % self.rays.len()]
    }

    fn prev_index(&self, i: usize) -> usize {
        (i + self.rays.len() - 1) % self.rays.len()
    }

    pub fn ray_index(&self, r: Ray) -> Option<usize> {
        self.rays.iter().position(|&s| s == r)
    }

    /// Star subdivision at the two-dimensional cone spanned by rays i, i+1:
    /// inserts the ray uᵢ + uᵢ₊₁.
    pub fn blow_up(&self, i: usize) -> Result<Fan2D, FanError> {
        if i >= self.rays.len() {
            return Err(FanError::IndexOutOfRange {
                index: i,
                rays: self.rays.len(),
            });
        }
        let new = self.ray(i).checked_add(self.ray(i + 1))?;
        let mut raw: Vec<(i64, i64)> = self.rays.iter().map(|r| (r.x, r.y)).collect();
        raw.push((new.x, new.y));
        Fan2D::validate(&raw, None)
    }

    /// Contracts ray i. Requires uᵢ = uᵢ₋₁ + uᵢ₊₁ (a (−1)-curve of the
    /// surface), the exact inverse of blow_up.
    pub fn blow_down(&self, i: usize) -> Result<Fan2D, FanError> {
        if i >= self.rays.len() {
            return Err(FanError::IndexOutOfRange {
                index: i,
                rays: self.rays.len(),
            });
        }
        let u = self.ray(i);
        let sum = self.ray(self.prev_index(i)).checked_add(self.ray(i + 1))?;
        if sum != u {
            return Err(FanError::NotContractible(u.x, u.y));
        }
        let raw: Vec<(i64, i64)> = self
            .rays
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, r)| (r.x, r.y))
            .collect();
        Fan2D::validate(&raw, None)
    }

    /// Self-intersection numbers aᵢ of the invariant divisors, defined by
    /// uᵢ₋₁ + uᵢ₊₁ = −aᵢ·uᵢ. Always integral for a smooth complete fan.
    pub fn self_intersections(&self) -> Vec<i64> {
        (0..self.rays.len())
            .map(|i| {
                let u = self.ray(i);
                let s = self
                    .ray(self.prev_index(i))
                    .checked_add(self.ray(i + 1))
                    .expect("neighbor sum fits i64");
                let a = if u.x != 0 { -s.x / u.x } else { -s.y / u.y };
                debug_assert!(s.x == -a * u.x && s.y == -a * u.y, "neighbor sum not parallel");
                a
            })
            .collect()
    }

    /// Applies a unimodular change of basis to every ray and recanonicalizes
    /// (orientation-reversing maps re-sort back to counterclockwise order).
    pub fn change_basis(&self, g: Mat2) -> Result<Fan2D, FanError> {
        if !g.is_unimodular() {
            return Err(FanError::NotUnimodular(g.det()));
        }
        let raw: Vec<(i64, i64)> = self
            .rays
            .iter()
            .map(|&r| g.apply(r).map(|s| (s.x, s.y)))
            .collect::<Result<_, _>>()?;
        Fan2D::validate(&raw, None)
    }

    /// Serializable canonical ray list.
    pub fn rays_i64(&self) -> Vec<[i64; 2]> {
        self.rays.iter().map(|r| [r.x, r.y]).collect()
    }
}

/// Searches for g ∈ GL₂(ℤ) with g·f1 = f2 as ray sets: one fixed adjacent
/// pair of f1 is mapped to every adjacent pair of f2 in both orientations,
/// the 2×2 system is solved and the candidate verified on the full ray set.
pub fn fans_isomorphic(f1: &Fan2D, f2: &Fan2D) -> Option<Mat2> {
    if f1.ray_count() != f2.ray_count() {
        return None;
    }
    let u0 = f1.ray(0);
    let u1 = f1.ray(1);
    // [u0 u1] has determinant 1, so its inverse is integral.
    let m1_inv = Mat2([[u1.y, -u1.x], [-u0.y, u0.x]]);
    let mut set1: Vec<Ray> = f1.rays.clone();
    set1.sort();
    for j in 0..f2.ray_count() {
        let v = f2.ray(j);
        let w = f2.ray(j + 1);
        for (p, q) in [(v, w), (w, v)] {
            let cand = Mat2([[p.x, q.x], [p.y, q.y]]).mul(m1_inv);
            if !cand.is_unimodular() {
                continue;
            }
            let mut image: Vec<Ray> = match f1
                .rays
                .iter()
                .map(|&r| cand.apply(r))
                .collect::<Result<Vec<_>, _>>()
            {
                Ok(v) => v,
                Err(_) => continue,
            };
            image.sort();
            let mut set2: Vec<Ray> = f2.rays.clone();
            set2.sort();
            if image == set2 {
                return Some(cand);
            }
        }
    }
    None
}

/// Named fans used throughout: the projective plane, products, Hirzebruch
/// surfaces, and the symmetric blow-up families realizing each cyclic and
/// dihedral lattice symmetry type.
pub fn catalog(name: &str) -> Result<Fan2D, FanError> {
    let rays: Vec<(i64, i64)> = match name {
        // Projective plane.
        "P2" | "Sigma3'" => vec![(1, 0), (0, 1), (-1, -1)],
        // Product of two projective lines.
        "P1xP1" | "Sigma4'" => vec![(1, 0), (0, 1), (-1, 0), (0, -1)],
        // Blow-up of P2 at its three fixed points.
        "Bl3P2" | "Sigma6'" => vec![(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)],
        // Iterated centrally symmetric blow-up of P1xP1; deformation base Y2.
        // As a lattice fan it is isomorphic to Y4 (via [[1,1],[0,1]]), so its
        // symmetry type is D4.
        "Y2" => vec![
            (1, 0),
            (0, 1),
            (-1, 0),
            (0, -1),
            (1, 1),
            (-1, -1),
            (2, 1),
            (-2, -1),
        ],
        // Y2 with the centrally symmetric pair ±(3,2) blown up: the smallest
        // fan here with symmetry type exactly D2 (the reflection is
        // [[2,-3],[1,-2]], an involution hidden from the Euclidean picture).
        "Sigma2'" => vec![
            (1, 0),
            (0, 1),
            (-1, 0),
            (0, -1),
            (1, 1),
            (-1, -1),
            (2, 1),
            (-2, -1),
            (3, 2),
            (-3, -2),
        ],
        // Nine-ray surface with order-3 symmetry; deformation base Y3.
        "Y3" => vec![
            (0, 1),
            (1, 0),
            (1, 1),
            (2, 1),
            (-1, 0),
            (-1, 1),
            (-1, -1),
            (-1, -2),
            (0, -1),
        ],
        // Eight-ray surface with order-4 symmetry; deformation base Y4.
        "Y4" => vec![
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (-1, -1),
            (-1, 1),
            (1, -1),
        ],
        // One-point blow-up of Y4; its deformation quotient is not Q-Gorenstein.
        "NonGorensteinX" => vec![
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (-1, -1),
            (-1, 1),
            (1, -1),
            (1, 2),
        ],
        // One-point blow-up of the second Hirzebruch surface: trivial symmetry.
        "Sigma1" => vec![(0, 1), (1, 0), (0, -1), (-1, -2), (-1, -3)],
        // Second Hirzebruch surface.
        "Sigma1'" => vec![(0, -1), (1, 0), (0, 1), (-1, -2)],
        // Three rounds of centrally symmetric blow-ups of Y2: pure C2
        // symmetry. Shorter chains always retain a hidden reflection (e.g.
        // Y2 plus the pair ±(3,2) is preserved by [[2,-3],[1,-2]]), checked
        // exhaustively over all 1- and 2-round chains from Y2 and P1xP1.
        "Sigma2" => vec![
            (1, 0),
            (0, 1),
            (-1, 0),
            (0, -1),
            (1, 1),
            (-1, -1),
            (2, 1),
            (-2, -1),
            (3, 2),
            (-3, -2),
            (4, 3),
            (-4, -3),
            (5, 3),
            (-5, -3),
        ],
        // Three asymmetric blow-ups of P2 arranged with order-3 symmetry.
        "Sigma3" => vec![
            (0, 1),
            (1, 0),
            (1, 1),
            (2, 1),
            (3, 1),
            (-1, 0),
            (-1, 1),
            (-1, 2),
            (-2, -3),
            (-1, -2),
            (-1, -1),
            (0, -1),
        ],
        // Two rounds of symmetric blow-ups of P1xP1: pure C4 symmetry.
        "Sigma4" => vec![
            (0, 1),
            (1, 0),
            (1, 1),
            (2, 1),
            (-1, 0),
            (-1, 1),
            (-1, 2),
            (-2, -1),
            (-1, -1),
            (0, -1),
            (1, -1),
            (1, -2),
        ],
        // Two rounds of symmetric blow-ups of Bl3P2: pure C6 symmetry.
        "Sigma6" => vec![
            (0, 1),
            (1, 0),
            (-1, 0),
            (0, -1),
            (1, 1),
            (-1, -1),
            (2, 1),
            (3, 1),
            (1, 2),
            (2, 3),
            (-1, 2),
            (-1, 1),
            (-2, -1),
            (-3, -1),
            (-1, -2),
            (-2, -3),
            (1, -1),
            (1, -2),
        ],
        other => {
            if let Some(n) = other
                .strip_prefix("Hirzebruch(")
                .and_then(|rest| rest.strip_suffix(')'))
                .and_then(|digits| digits.parse::<i64>().ok())
            {
                if n < 0 {
                    return Err(FanError::UnknownCatalogName(name.to_owned()));
                }
                return Fan2D::validate(&[(0, -1), (1, 0), (0, 1), (-1, -n)], Some(name));
            }
            return Err(FanError::UnknownCatalogName(other.to_owned()));
        }
    };
    Fan2D::validate(&rays, Some(name))
}

/// All non-parametric catalog names, for tests and batch sweeps.
pub const CATALOG_NAMES: &[&str] = &[
    "P2",
    "P1xP1",
    "Bl3P2",
    "Y2",
    "Y3",
    "Y4",
    "NonGorensteinX",
    "Sigma1",
    "Sigma2",
    "Sigma3",
    "Sigma4",
    "Sigma6",
    "Sigma1'",
    "Sigma2'",
    "Sigma3'",
    "Sigma4'",
    "Sigma6'",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_projective_plane() {
        let f = Fan2D::validate(&[(1, 0), (0, 1), (-1, -1)], Some("P2")).unwrap();
        assert_eq!(f.ray_count(), 3);
        assert_eq!(f.ray(0), Ray::new(-1, -1)); // lex-least starts the cycle
    }

    #[test]
    fn rejects_non_primitive_and_duplicates() {
        assert_eq!(
            Fan2D::validate(&[(1, 0), (2, 0), (0, 1)], None),
            Err(FanError::NonPrimitiveRay(2, 0))
        );
        assert_eq!(
            Fan2D::validate(&[(1, 0), (1, 0), (0, 1)], None),
            Err(FanError::DuplicateRay(1, 0))
        );
        assert_eq!(
            Fan2D::validate(&[(1, 0), (0, 1)], None),
            Err(FanError::TooFewRays(2))
        );
        assert!(matches!(
            Fan2D::validate(&[(1, 0), (0, 1), (-1, -2)], None),
            Err(FanError::BadAdjacentPair(..))
        ));
    }

    #[test]
    fn accepts_blown_up_hirzebruch_in_any_order() {
        let f = Fan2D::validate(&[(0, 1), (1, 0), (0, -1), (-1, -2), (-1, -3)], None).unwrap();
        assert_eq!(f.ray_count(), 5);
        assert_eq!(f, catalog("Sigma1").unwrap().change_basis(Mat2::IDENTITY).unwrap());
    }

    #[test]
    fn validate_is_idempotent() {
        for name in CATALOG_NAMES {
            let f = catalog(name).unwrap();
            let raw: Vec<(i64, i64)> = f.rays().iter().map(|r| (r.x, r.y)).collect();
            let again = Fan2D::validate(&raw, None).unwrap();
            assert_eq!(f.rays(), again.rays(), "{name} not canonical");
        }
    }

    #[test]
    fn blow_up_p2_three_corners_gives_bl3p2() {
        let p2 = catalog("P2").unwrap();
        // Blow up every corner of the original triangle.
        let mut f = p2.clone();
        for corner in [(Ray::new(1, 0), Ray::new(0, 1)),
                       (Ray::new(0, 1), Ray::new(-1, -1)),
                       (Ray::new(-1, -1), Ray::new(1, 0))] {
            let i = (0..f.ray_count())
                .find(|&i| f.ray(i) == corner.0 && f.ray(i + 1) == corner.1)
                .expect("corner present");
            f = f.blow_up(i).unwrap();
        }
        assert_eq!(f.rays(), catalog("Bl3P2").unwrap().rays());
    }

    #[test]
    fn blow_up_p1xp1_corner_contains_diagonal() {
        let f = catalog("P1xP1").unwrap();
        let i = (0..4)
            .find(|&i| f.ray(i) == Ray::new(1, 0) && f.ray(i + 1) == Ray::new(0, 1))
            .unwrap();
        let g = f.blow_up(i).unwrap();
        assert!(g.ray_index(Ray::new(1, 1)).is_some());
    }

    #[test]
    fn blow_up_y4_gives_non_gorenstein_example() {
        let y4 = catalog("Y4").unwrap();
        let i = (0..y4.ray_count())
            .find(|&i| y4.ray(i) == Ray::new(1, 1) && y4.ray(i + 1) == Ray::new(0, 1))
            .expect("corner ((1,1),(0,1)) exists");
        let x = y4.blow_up(i).unwrap();
        assert_eq!(x.rays(), catalog("NonGorensteinX").unwrap().rays());
    }

    #[test]
    fn blow_down_inverts_blow_up() {
        for name in CATALOG_NAMES {
            let f = catalog(name).unwrap();
            for i in 0..f.ray_count() {
                let up = f.blow_up(i).unwrap();
                let new = f.ray(i).checked_add(f.ray(i + 1)).unwrap();
                let j = up.ray_index(new).unwrap();
                assert_eq!(up.blow_down(j).unwrap().rays(), f.rays());
            }
        }
    }

    #[test]
    fn blow_down_requires_contractible_ray() {
        let p2 = catalog("P2").unwrap();
        let i = p2.ray_index(Ray::new(1, 0)).unwrap();
        assert_eq!(
            p2.blow_down(i),
            Err(FanError::NotContractible(1, 0))
        );
    }

    #[test]
    fn sigma2_contracts_to_y2() {
        // Contracting the centrally symmetric orbits {±(4,3)}, {±(5,3)} and
        // then {±(3,2)} lands on Y2 (= Sigma2').
        let mut fan = catalog("Sigma2").unwrap();
        for v in [
            Ray::new(4, 3),
            Ray::new(-4, -3),
            Ray::new(5, 3),
            Ray::new(-5, -3),
            Ray::new(3, 2),
            Ray::new(-3, -2),
        ] {
            let i = fan.ray_index(v).unwrap();
            fan = fan.blow_down(i).unwrap();
        }
        assert_eq!(fan.rays(), catalog("Y2").unwrap().rays());
        // (2,1) is not contractible while (3,2) is still present.
        let s2 = catalog("Sigma2").unwrap();
        let k = s2.ray_index(Ray::new(2, 1)).unwrap();
        assert!(s2.blow_down(k).is_err());
    }

    #[test]
    fn self_intersection_examples() {
        assert_eq!(catalog("P2").unwrap().self_intersections(), vec![1, 1, 1]);

        // Second Hirzebruch surface: {0, 2, 0, -2} in cyclic order.
        let f2 = catalog("Hirzebruch(2)").unwrap();
        let a = f2.self_intersections();
        let mut doubled = a.clone();
        doubled.extend_from_slice(&a);
        assert!(
            (0..4).any(|s| doubled[s..s + 4] == [0, 2, 0, -2]),
            "cyclic a-values {a:?}"
        );

        // Y4: four axis rays with a = -2, four diagonals with a = -1.
        let y4 = catalog("Y4").unwrap();
        let a = y4.self_intersections();
        for (i, r) in y4.rays().iter().enumerate() {
            let expected = if r.x == 0 || r.y == 0 { -2 } else { -1 };
            assert_eq!(a[i], expected, "ray {r:?}");
        }
    }

    #[test]
    fn noether_relation_on_catalog() {
        for name in CATALOG_NAMES {
            let f = catalog(name).unwrap();
            let sum: i64 = f.self_intersections().iter().map(|a| 3 + a).sum();
            assert_eq!(sum, 12, "{name}");
        }
    }

    #[test]
    fn catalog_ray_sets() {
        let y3 = catalog("Y3").unwrap();
        let mut expected = vec![
            (0, 1),
            (1, 0),
            (1, 1),
            (2, 1),
            (-1, 0),
            (-1, 1),
            (-1, -1),
            (-1, -2),
            (0, -1),
        ];
        expected.sort_unstable();
        let mut got: Vec<(i64, i64)> = y3.rays().iter().map(|r| (r.x, r.y)).collect();
        got.sort_unstable();
        assert_eq!(got, expected);

        assert_eq!(catalog("Y4").unwrap().ray_count(), 8);
        let x = catalog("NonGorensteinX").unwrap();
        assert_eq!(x.ray_count(), 9);
        assert!(x.ray_index(Ray::new(1, 2)).is_some());
        assert!(catalog("Sigma5").is_err());
        assert!(catalog("Hirzebruch(-1)").is_err());
        assert_eq!(catalog("Hirzebruch(0)").unwrap().rays(), catalog("P1xP1").unwrap().rays());
    }

    #[test]
    fn change_basis_cases() {
        let p1p1 = catalog("P1xP1").unwrap();
        assert_eq!(
            p1p1.change_basis(Mat2::IDENTITY).unwrap().rays(),
            p1p1.rays()
        );
        let minus = Mat2([[-1, 0], [0, -1]]);
        assert_eq!(p1p1.change_basis(minus).unwrap().rays(), p1p1.rays());

        let shear = Mat2([[1, 1], [0, 1]]);
        let sheared = catalog("P2").unwrap().change_basis(shear).unwrap();
        let mut got: Vec<(i64, i64)> = sheared.rays().iter().map(|r| (r.x, r.y)).collect();
        got.sort_unstable();
        assert_eq!(got, vec![(-2, -1), (1, 0), (1, 1)]);

        assert_eq!(
            catalog("P2").unwrap().change_basis(Mat2([[2, 0], [0, 1]])),
            Err(FanError::NotUnimodular(2))
        );
    }

    #[test]
    fn isomorphism_witnesses() {
        let f2 = catalog("Hirzebruch(2)").unwrap();
        let g = Mat2([[1, 1], [0, 1]]);
        let moved = f2.change_basis(g).unwrap();
        let w = fans_isomorphic(&f2, &moved).expect("change of basis is an isomorphism");
        assert_eq!(f2.change_basis(w).unwrap().rays(), moved.rays());

        assert!(fans_isomorphic(&catalog("P2").unwrap(), &catalog("P1xP1").unwrap()).is_none());

        let alt = Fan2D::validate(&[(0, -1), (1, 0), (0, 1), (-1, -2)], None).unwrap();
        assert!(fans_isomorphic(&alt, &f2).is_some());
    }

    #[test]
    fn self_intersections_equivariant_under_orientation_preserving_maps() {
        let g = Mat2([[2, 1], [1, 1]]);
        assert_eq!(g.det(), 1);
        for name in ["P2", "Y3", "Sigma4"] {
            let f = catalog(name).unwrap();
            let moved = f.change_basis(g).unwrap();
            let mut a = f.self_intersections();
            let mut b = moved.self_intersections();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "{name}");
        }
    }
}
