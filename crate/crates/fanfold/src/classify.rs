//! Minimal-model reduction by equivariant blow-downs, the cscK existence
//! flag, and seeded random generation of foldable fans.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fan::{catalog, fans_isomorphic, Fan2D, FanError, Mat2, Ray};
use crate::symmetry::{foldability_of, lattice_automorphisms};

/// Existence status of a constant-scalar-curvature Kähler metric on the
/// surface, at the level this toolkit can certify combinatorially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CscKStatus {
    /// Foldability implies existence by the equivariant blow-up theorem.
    YesByFoldability,
    /// One of the three rigid surfaces with a classical metric.
    RigidClassical,
    /// Outside the certified classes; existence is open here.
    Unknown,
}

impl CscKStatus {
    pub fn label(self) -> &'static str {
        match self {
            CscKStatus::YesByFoldability => "yes-by-foldability",
            CscKStatus::RigidClassical => "rigid-classical",
            CscKStatus::Unknown => "unknown",
        }
    }
}

/// Result of the reduction: the terminal fan of the blow-down chain, the
/// contracted ray orbits in order, and the certified flags.
#[derive(Debug, Clone)]
pub struct ClassificationResult {
    pub foldable: bool,
    /// Order of the rotation witness used for the reduction (1 when not
    /// foldable).
    pub p: usize,
    /// Name of the recognized terminal fan, or "other".
    pub minimal_model: String,
    /// The terminal fan itself, in the input's coordinates.
    pub minimal_fan: Fan2D,
    /// Ray orbits contracted, in contraction order.
    pub blowdown_sequence: Vec<Vec<Ray>>,
    pub rigid: bool,
    pub csck: CscKStatus,
}

const RECOGNIZED_MODELS: &[&str] = &["P2", "P1xP1", "Bl3P2", "Y2", "Y3", "Y4"];

/// Rotation to reduce with this round: an element of order `p` when one
/// exists (the original symmetry survives equivariant contractions), else
/// the maximal available order; lexicographically least matrix on ties.
fn round_witness(fan: &Fan2D, p: usize) -> Mat2 {
    let group = lattice_automorphisms(fan);
    let mut rotations = group.rotations();
    rotations.sort_by_key(|g| g.0);
    rotations
        .iter()
        .copied()
        .find(|g| g.order() == p)
        .or_else(|| {
            rotations
                .iter()
                .copied()
                .max_by_key(|g| (g.order(), std::cmp::Reverse(g.0)))
        })
        .unwrap_or(Mat2::IDENTITY)
}

/// Orbit of a ray under the cyclic group generated by g, in hit order.
fn ray_orbit(g: Mat2, start: Ray) -> Result<Vec<Ray>, FanError> {
    let mut orbit = vec![start];
    let mut current = start;
    loop {
        current = g.apply(current)?;
        if current == start {
            return Ok(orbit);
        }
        orbit.push(current);
        assert!(orbit.len() <= 6, "rotation orbit exceeds the maximal order");
    }
}

/// Simultaneously valid contraction: every orbit member satisfies
/// uᵢ = uᵢ₋₁ + uᵢ₊₁ and no two members are cyclically adjacent.
fn orbit_contractible(fan: &Fan2D, orbit: &[Ray]) -> bool {
    let r = fan.ray_count();
    let idx: Option<Vec<usize>> = orbit.iter().map(|&v| fan.ray_index(v)).collect();
    let Some(idx) = idx else { return false };
    for &i in &idx {
        let sum = fan
            .ray((i + r - 1) % r)
            .checked_add(fan.ray(i + 1))
            .ok();
        if sum != Some(fan.ray(i)) {
            return false;
        }
    }
    for &i in &idx {
        for &j in &idx {
            if i != j && ((i + 1) % r == j || (j + 1) % r == i) {
                return false;
            }
        }
    }
    true
}

fn contract_orbit(fan: &Fan2D, orbit: &[Ray]) -> Result<Fan2D, FanError> {
    let raw: Vec<(i64, i64)> = fan
        .rays()
        .iter()
        .filter(|r| !orbit.contains(r))
        .map(|r| (r.x, r.y))
        .collect();
    Fan2D::validate(&raw, None)
}

/// Reduces the fan by repeatedly contracting whole rotation orbits of
/// contractible rays (plain single-ray contractions when not foldable),
/// then identifies the terminal fan against the recognized models.
pub fn minimal_model(fan: &Fan2D) -> ClassificationResult {
    let group = lattice_automorphisms(fan);
    let fold = foldability_of(&group);
    let p = fold.p;

    let mut current = fan.clone();
    let mut sequence: Vec<Vec<Ray>> = Vec::new();
    loop {
        let g = round_witness(&current, p);
        // Contractible rays in lexicographic order.
        let r = current.ray_count();
        let mut candidates: Vec<Ray> = (0..r)
            .filter(|&i| {
                current
                    .ray((i + r - 1) % r)
                    .checked_add(current.ray(i + 1))
                    .ok()
                    == Some(current.ray(i))
            })
            .map(|i| current.ray(i))
            .collect();
        candidates.sort();
        let mut contracted = false;
        for base in candidates {
            let Ok(orbit) = ray_orbit(g, base) else { continue };
            if orbit_contractible(&current, &orbit) {
                let next = contract_orbit(&current, &orbit)
                    .expect("valid orbit contraction yields a valid fan");
                sequence.push(orbit);
                current = next;
                contracted = true;
                break;
            }
        }
        if !contracted {
            break;
        }
    }

    let minimal_model = RECOGNIZED_MODELS
        .iter()
        .find(|name| fans_isomorphic(&current, &catalog(name).unwrap()).is_some())
        .map(|s| s.to_string())
        .unwrap_or_else(|| "other".to_string());
    let rigid = crate::deform::weight_decomposition(fan).is_empty();

    let mut result = ClassificationResult {
        foldable: fold.foldable,
        p,
        minimal_model,
        minimal_fan: current,
        blowdown_sequence: sequence,
        rigid,
        csck: CscKStatus::Unknown,
    };
    result.csck = csck_flag(&result);
    result
}

/// Existence flag: the three rigid classical surfaces take priority (they
/// are their own minimal models with an empty contraction sequence),
/// foldability certifies existence by the blow-up theorem, and everything
/// else is honestly unknown.
pub fn csck_flag(c: &ClassificationResult) -> CscKStatus {
    let classical = ["P2", "P1xP1", "Bl3P2"];
    if c.blowdown_sequence.is_empty() && classical.contains(&c.minimal_model.as_str()) {
        CscKStatus::RigidClassical
    } else if c.foldable {
        CscKStatus::YesByFoldability
    } else {
        CscKStatus::Unknown
    }
}

/// Replays the blow-down sequence in reverse as blow-ups starting from the
/// terminal fan. Returns None when some recorded ray cannot be inserted,
/// which would indicate a corrupted sequence.
pub fn replay_blowdowns(minimal: &Fan2D, sequence: &[Vec<Ray>]) -> Option<Fan2D> {
    let mut fan = minimal.clone();
    for orbit in sequence.iter().rev() {
        for &v in orbit {
            let i = (0..fan.ray_count()).find(|&i| {
                fan.ray(i).checked_add(fan.ray(i + 1)).ok() == Some(v)
            })?;
            fan = fan.blow_up(i).ok()?;
        }
    }
    Some(fan)
}

/// Bases accepted by the random generator.
pub const RANDOM_BASES: &[&str] = &["Y2", "Y3", "Y4", "P1xP1", "P2", "Bl3P2"];

/// Seeded random foldable fan: `rounds` rounds of blowing up the full
/// rotation orbit of a uniformly chosen corner of the current fan. The
/// witness rotation of the base stays an automorphism throughout, so the
/// output is foldable with at least the base's rotation order.
pub fn random_foldable_fan(seed: u64, base: &str, rounds: usize) -> Result<Fan2D, FanError> {
    if !RANDOM_BASES.contains(&base) {
        return Err(FanError::UnknownCatalogName(base.to_owned()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base_fan = catalog(base)?;
    let g = foldability_of(&lattice_automorphisms(&base_fan))
        .rotation
        .expect("every random base is foldable");
    let mut fan = base_fan;
    for _ in 0..rounds {
        let i = rng.gen_range(0..fan.ray_count());
        let corner_sum = fan.ray(i).checked_add(fan.ray(i + 1))?;
        let orbit = ray_orbit(g, corner_sum)?;
        let mut raw: Vec<(i64, i64)> = fan.rays().iter().map(|r| (r.x, r.y)).collect();
        raw.extend(orbit.iter().map(|r| (r.x, r.y)));
        fan = Fan2D::validate(&raw, None).expect("equivariant star subdivision stays valid");
    }
    Ok(fan.with_name(&format!("random({base},seed={seed},rounds={rounds})")))
}
