//! Shared helpers for the integration suites: independent brute-force
//! oracles (kept separate from the library's own enumeration paths) and
//! seeded fan generators.

use fanfold::fan::{catalog, Fan2D, Mat2};
use fanfold::intlat::{hull_contains, IntVector};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force lattice points of Π = conv({0} ∪ rays): a bounding-box scan
/// deciding membership by rational convex-combination search. Independent of
/// the library's terminality enumerators.
pub fn brute_pi_lattice_points(rank: usize, rays: &[IntVector]) -> Vec<IntVector> {
    let mut hull: Vec<IntVector> = vec![IntVector::zeros(rank)];
    hull.extend_from_slice(rays);
    let mut lo = vec![0i64; rank];
    let mut hi = vec![0i64; rank];
    for p in &hull {
        let p = p.to_i64().unwrap();
        for k in 0..rank {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let mut out = Vec::new();
    let mut idx = lo.clone();
    'scan: loop {
        let p = IntVector::from_i64(&idx);
        if hull_contains(&hull, &p).is_some() {
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
            idx[k] = lo[k];
            k += 1;
        }
    }
    out.sort();
    out
}

/// Brute-force offender list: lattice points of Π that are not vertices.
pub fn brute_offenders(rank: usize, rays: &[IntVector]) -> Vec<IntVector> {
    let mut hull: Vec<IntVector> = vec![IntVector::zeros(rank)];
    hull.extend_from_slice(rays);
    let vertices: Vec<IntVector> = hull
        .iter()
        .enumerate()
        .filter(|&(i, p)| {
            let others: Vec<IntVector> = hull
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            hull_contains(&others, p).is_none()
        })
        .map(|(_, p)| p.clone())
        .collect();
    brute_pi_lattice_points(rank, rays)
        .into_iter()
        .filter(|p| !vertices.contains(p))
        .collect()
}

/// Seeded random fan without symmetry constraints: a blow-up chain over a
/// rotating set of catalog bases.
pub fn random_plain_fan(seed: u64, rounds: usize) -> Fan2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let bases = ["P2", "P1xP1", "Hirzebruch(1)", "Hirzebruch(2)", "Hirzebruch(3)", "Bl3P2"];
    let mut fan = catalog(bases[(seed as usize) % bases.len()]).unwrap();
    for _ in 0..rounds {
        let i = rng.gen_range(0..fan.ray_count());
        fan = fan.blow_up(i).unwrap();
    }
    fan
}

/// Seeded random unimodular matrix: a short word in a shear, the quarter
/// rotation, and a reflection.
pub fn random_unimodular(seed: u64) -> Mat2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5bf0_3635);
    let gens = [
        Mat2([[1, 1], [0, 1]]),
        Mat2([[1, 0], [1, 1]]),
        Mat2([[0, -1], [1, 0]]),
        Mat2([[1, 0], [0, -1]]),
    ];
    let mut g = Mat2::IDENTITY;
    for _ in 0..rng.gen_range(1..=6) {
        g = g.mul(gens[rng.gen_range(0..gens.len())]);
    }
    g
}

/// The weight multiset transported by the dual action of g.
pub fn dual_weight_multiset(weights: &[((i64, i64), usize)], g: Mat2) -> Vec<((i64, i64), usize)> {
    let mut moved: Vec<((i64, i64), usize)> = weights
        .iter()
        .map(|&(m, k)| (g.dual_apply(m), k))
        .collect();
    moved.sort();
    moved
}

/// True when every entry of the vector list is nonnegative against f.
pub fn all_nonnegative(facets: &[IntVector], point: &IntVector) -> bool {
    facets.iter().all(|f| !f.dot(point).is_negative())
}
