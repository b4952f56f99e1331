//! Lattice automorphism groups of fans, their crystallographic type, and
//! foldability (existence of a nontrivial rotation symmetry).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deform::WeightDecomposition;
use crate::fan::{Fan2D, Mat2, Ray};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("group structure is inconsistent: {0}")]
    Integrity(String),
    #[error("group action does not preserve weight multiplicities at {0:?}")]
    MultiplicityNotPreserved((i64, i64)),
}

/// The ten finite subgroups of GL₂(ℤ) that occur as lattice automorphism
/// groups of complete smooth fans: cyclic C_p and dihedral D_p for
/// p ∈ {1, 2, 3, 4, 6}. C₂ acts through −Id, D₁ through a single reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupType {
    C1,
    C2,
    C3,
    C4,
    C6,
    D1,
    D2,
    D3,
    D4,
    D6,
}

impl GroupType {
    pub fn label(self) -> &'static str {
        match self {
            GroupType::C1 => "C1",
            GroupType::C2 => "C2",
            GroupType::C3 => "C3",
            GroupType::C4 => "C4",
            GroupType::C6 => "C6",
            GroupType::D1 => "D1",
            GroupType::D2 => "D2",
            GroupType::D3 => "D3",
            GroupType::D4 => "D4",
            GroupType::D6 => "D6",
        }
    }
}

impl std::fmt::Display for GroupType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The full lattice automorphism group of a fan, with the induced ray
/// permutations. Elements are stored in lexicographic matrix order.
#[derive(Debug, Clone)]
pub struct LatticeAutGroup {
    pub elements: Vec<Mat2>,
    pub type_label: GroupType,
    /// ray_permutations[e][i] = index of g_e · u_i in the fan's ray list.
    pub ray_permutations: Vec<Vec<usize>>,
}

impl LatticeAutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements of determinant +1.
    pub fn rotations(&self) -> Vec<Mat2> {
        self.elements.iter().copied().filter(|g| g.det() == 1).collect()
    }
}

/// Computes Aut(N, Σ): the fixed adjacent pair (u₀, u₁) is mapped to every
/// adjacent pair of the fan in both orientations, each candidate solved for
/// and kept iff it is unimodular and permutes the ray set.
pub fn lattice_automorphisms(fan: &Fan2D) -> LatticeAutGroup {
    let u0 = fan.ray(0);
    let u1 = fan.ray(1);
    let m1_inv = Mat2([[u1.y, -u1.x], [-u0.y, u0.x]]);
    let mut sorted: Vec<Ray> = fan.rays().to_vec();
    sorted.sort();

    let mut elements: Vec<Mat2> = Vec::new();
    for j in 0..fan.ray_count() {
        let v = fan.ray(j);
        let w = fan.ray(j + 1);
        for (p, q) in [(v, w), (w, v)] {
            let cand = Mat2([[p.x, q.x], [p.y, q.y]]).mul(m1_inv);
            if !cand.is_unimodular() {
                continue;
            }
            let image: Option<Vec<Ray>> = fan
                .rays()
                .iter()
                .map(|&r| cand.apply(r).ok())
                .collect();
            let Some(mut image) = image else { continue };
            image.sort();
            if image == sorted && !elements.contains(&cand) {
                elements.push(cand);
            }
        }
    }
    elements.sort_by_key(|g| g.0);

    // Group axioms are structural here; violations mean a bug upstream.
    assert!(elements.contains(&Mat2::IDENTITY));
    for a in &elements {
        assert!(
            elements.contains(&a.inverse()),
            "automorphism set not closed under inverse"
        );
        for b in &elements {
            assert!(
                elements.contains(&a.mul(*b)),
                "automorphism set not closed under product"
            );
        }
    }

    let ray_permutations = elements
        .iter()
        .map(|g| {
            fan.rays()
                .iter()
                .map(|&r| {
                    let img = g.apply(r).expect("automorphism image fits i64");
                    fan.ray_index(img).expect("automorphism permutes rays")
                })
                .collect()
        })
        .collect();

    let type_label = classify_group(&elements).expect("valid fan yields a crystallographic group");
    LatticeAutGroup {
        elements,
        type_label,
        ray_permutations,
    }
}

/// Determines the crystallographic label from the element list. Fails with
/// an integrity error when the structure is not one of the ten allowed
/// groups, which indicates a bug in the caller.
pub fn classify_group(elements: &[Mat2]) -> Result<GroupType, SymmetryError> {
    let n = elements.len();
    if !elements.contains(&Mat2::IDENTITY) {
        return Err(SymmetryError::Integrity("identity missing".into()));
    }
    for g in elements {
        let ord = g.order();
        if ![1, 2, 3, 4, 6].contains(&ord) {
            return Err(SymmetryError::Integrity(format!(
                "element order {ord} outside {{1,2,3,4,6}}"
            )));
        }
    }
    let rotations: Vec<&Mat2> = elements.iter().filter(|g| g.det() == 1).collect();
    let reflections = n - rotations.len();
    let max_rot = rotations.iter().map(|g| g.order()).max().unwrap_or(1);

    if reflections == 0 {
        // Cyclic: generated by a maximal rotation.
        if max_rot != n {
            return Err(SymmetryError::Integrity(format!(
                "rotation group of order {n} without an order-{n} element"
            )));
        }
        let label = match n {
            1 => GroupType::C1,
            2 => {
                if !elements.contains(&Mat2([[-1, 0], [0, -1]])) {
                    return Err(SymmetryError::Integrity(
                        "order-2 rotation group without -Id".into(),
                    ));
                }
                GroupType::C2
            }
            3 => GroupType::C3,
            4 => GroupType::C4,
            6 => GroupType::C6,
            _ => {
                return Err(SymmetryError::Integrity(format!(
                    "cyclic group order {n} not in {{1,2,3,4,6}}"
                )))
            }
        };
        Ok(label)
    } else {
        if reflections != rotations.len() {
            return Err(SymmetryError::Integrity(
                "reflections do not form a coset of the rotations".into(),
            ));
        }
        let p = rotations.len();
        if max_rot != p {
            return Err(SymmetryError::Integrity(format!(
                "dihedral rotation subgroup of order {p} without an order-{p} element"
            )));
        }
        if elements.iter().any(|g| g.det() == -1 && g.order() != 2) {
            return Err(SymmetryError::Integrity(
                "orientation-reversing element is not an involution".into(),
            ));
        }
        let label = match p {
            1 => GroupType::D1,
            2 => GroupType::D2,
            3 => GroupType::D3,
            4 => GroupType::D4,
            6 => GroupType::D6,
            _ => {
                return Err(SymmetryError::Integrity(format!(
                    "dihedral half-order {p} not in {{1,2,3,4,6}}"
                )))
            }
        };
        Ok(label)
    }
}

/// A fan is foldable when its automorphism group contains a nontrivial
/// rotation. The witness is a generator of a maximal cyclic rotation
/// subgroup: maximal order first, then lexicographically least matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldabilityWitness {
    pub foldable: bool,
    pub rotation: Option<Mat2>,
    pub p: usize,
}

pub fn foldability(fan: &Fan2D) -> FoldabilityWitness {
    foldability_of(&lattice_automorphisms(fan))
}

/// Same as [`foldability`] over an already computed group.
pub fn foldability_of(group: &LatticeAutGroup) -> FoldabilityWitness {
    let mut best: Option<Mat2> = None;
    for g in group.rotations() {
        if g == Mat2::IDENTITY {
            continue;
        }
        best = Some(match best {
            None => g,
            Some(b) => {
                // Maximal order, then lexicographically least matrix.
                use std::cmp::Ordering;
                match g.order().cmp(&b.order()) {
                    Ordering::Greater => g,
                    Ordering::Equal if g.0 < b.0 => g,
                    _ => b,
                }
            }
        });
    }
    match best {
        None => FoldabilityWitness {
            foldable: false,
            rotation: None,
            p: 1,
        },
        Some(g) => {
            let p = g.order();
            // A nontrivial finite-order rotation fixes only the origin.
            let g_minus_id = Mat2([
                [g.0[0][0] - 1, g.0[0][1]],
                [g.0[1][0], g.0[1][1] - 1],
            ]);
            assert!(g_minus_id.det() != 0, "rotation witness has a fixed vector");
            FoldabilityWitness {
                foldable: true,
                rotation: Some(g),
                p,
            }
        }
    }
}

/// The dual action of each group element on the weight multiset, as a
/// permutation of the decomposition's entry indices. Errors when an element
/// fails to preserve a multiplicity, which would mean the weights were not
/// computed for this fan.
pub fn weight_action(
    group: &LatticeAutGroup,
    weights: &WeightDecomposition,
) -> Result<Vec<Vec<usize>>, SymmetryError> {
    group
        .elements
        .iter()
        .map(|g| {
            weights
                .entries()
                .iter()
                .map(|&(m, mult)| {
                    let image = g.dual_apply(m);
                    match weights.entry_index(image) {
                        Some(j) if weights.entries()[j].1 == mult => Ok(j),
                        _ => Err(SymmetryError::MultiplicityNotPreserved(m)),
                    }
                })
                .collect()
        })
        .collect()
}
