//! The structured analysis report: every section the toolkit can compute
//! about one fan, in a serialization-stable, integer-only document.

use serde::{Deserialize, Serialize};

use crate::classify::{minimal_model, ClassificationResult};
use crate::deform::{demazure_roots, weight_decomposition};
use crate::fan::Fan2D;
use crate::intlat::{IntMatrix, IntVector};
use crate::quotient::{
    build_quotient, descend_group_action, singularity_report, QuotientCone,
};
use crate::symmetry::{foldability_of, lattice_automorphisms};

pub const SCHEMA_VERSION: u32 = 1;

/// Where the analyzed fan came from. Carried separately from the data block
/// so the analysis bytes stay deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub input: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ray_count: usize,
    pub rays: Vec<[i64; 2]>,
    pub self_intersections: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetrySection {
    pub group_type: String,
    pub order: usize,
    pub elements: Vec<[[i64; 2]; 2]>,
    pub element_orders: Vec<usize>,
    pub ray_permutations: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldabilitySection {
    pub foldable: bool,
    pub p: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<[[i64; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemazureSection {
    pub root_count: usize,
    pub roots: Vec<[i64; 2]>,
    pub aut0_dim: usize,
    pub aut0_is_torus: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub m: [i64; 2],
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationSection {
    pub rigid: bool,
    pub total_dim: usize,
    pub weights: Vec<WeightEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSection {
    pub available: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray_preimage_counts: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive_images: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_gorenstein: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gorenstein: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gorenstein_certificate: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplicial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terminal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_lattice_points: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_sum: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descended_group: Option<Vec<Vec<Vec<i64>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSection {
    pub foldable: bool,
    pub p: usize,
    pub minimal_model: String,
    pub minimal_rays: Vec<[i64; 2]>,
    pub blowdown_orbits: Vec<Vec<[i64; 2]>>,
    pub rigid: bool,
    pub csck: String,
}

/// Everything the toolkit certifies about one fan. Sub-analyses that fail
/// carry their structured error without aborting the other sections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub fan: FanSection,
    pub symmetry: SymmetrySection,
    pub foldability: FoldabilitySection,
    pub demazure: DemazureSection,
    pub deformation: DeformationSection,
    pub quotient: QuotientSection,
    pub classification: ClassificationSection,
}

fn vectors_to_i64(vs: &[IntVector]) -> Vec<Vec<i64>> {
    vs.iter()
        .map(|v| v.to_i64().expect("report values fit i64"))
        .collect()
}

fn matrix_to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_rows_i64().expect("report values fit i64")
}

fn quotient_section(fan: &Fan2D) -> QuotientSection {
    let w = weight_decomposition(fan);
    let empty = QuotientSection {
        available: false,
        error: None,
        rank: None,
        ray_count: None,
        rays: None,
        ray_preimage_counts: None,
        facets: None,
        primitive_images: None,
        q_gorenstein: None,
        gorenstein: None,
        gorenstein_certificate: None,
        simplicial: None,
        smooth: None,
        terminal: None,
        offending_lattice_points: None,
        weight_sum: None,
        descended_group: None,
    };
    let q: QuotientCone = match build_quotient(&w) {
        Ok(q) => q,
        Err(e) => {
            return QuotientSection {
                error: Some(e.to_string()),
                ..empty
            }
        }
    };
    let report = match singularity_report(&q, &w) {
        Ok(r) => r,
        Err(e) => {
            return QuotientSection {
                error: Some(e.to_string()),
                ..empty
            }
        }
    };
    let group = lattice_automorphisms(fan);
    let descended = descend_group_action(fan, &group, &q)
        .ok()
        .map(|ms| ms.iter().map(matrix_to_i64).collect());
    QuotientSection {
        available: true,
        error: None,
        rank: Some(q.nprime_rank),
        ray_count: Some(q.ray_generators.len()),
        rays: Some(vectors_to_i64(&q.ray_generators)),
        ray_preimage_counts: Some(q.ray_preimage_counts.clone()),
        facets: q.facets.as_ref().map(|f| vectors_to_i64(f)),
        primitive_images: Some(q.primitive_images),
        q_gorenstein: Some(report.q_gorenstein),
        gorenstein: Some(report.gorenstein),
        gorenstein_certificate: report
            .gorenstein_certificate
            .as_ref()
            .map(|c| c.to_i64().expect("certificate fits i64")),
        simplicial: Some(report.simplicial),
        smooth: Some(report.smooth),
        terminal: Some(report.terminal),
        offending_lattice_points: Some(vectors_to_i64(&report.offending_points)),
        weight_sum: Some([report.weight_sum.0, report.weight_sum.1]),
        descended_group: descended,
    }
}

/// Runs the full pipeline on a validated fan.
pub fn full_report(fan: &Fan2D, provenance: Provenance) -> Report {
    let group = lattice_automorphisms(fan);
    let fold = foldability_of(&group);
    let roots = demazure_roots(fan);
    let w = weight_decomposition(fan);
    let class: ClassificationResult = minimal_model(fan);

    Report {
        schema_version: SCHEMA_VERSION,
        provenance,
        fan: FanSection {
            name: fan.name().map(str::to_owned),
            ray_count: fan.ray_count(),
            rays: fan.rays_i64(),
            self_intersections: fan.self_intersections(),
        },
        symmetry: SymmetrySection {
            group_type: group.type_label.label().to_owned(),
            order: group.order(),
            elements: group.elements.iter().map(|g| g.0).collect(),
            element_orders: group.elements.iter().map(|g| g.order()).collect(),
            ray_permutations: group.ray_permutations.clone(),
        },
        foldability: FoldabilitySection {
            foldable: fold.foldable,
            p: fold.p,
            rotation: fold.rotation.map(|g| g.0),
        },
        demazure: DemazureSection {
            root_count: roots.roots.len(),
            roots: roots.roots.iter().map(|&(a, b)| [a, b]).collect(),
            aut0_dim: roots.aut0_dim,
            aut0_is_torus: roots.roots.is_empty(),
        },
        deformation: DeformationSection {
            rigid: w.is_empty(),
            total_dim: w.total_dim(),
            weights: w
                .entries()
                .iter()
                .map(|&((a, b), k)| WeightEntry {
                    m: [a, b],
                    multiplicity: k,
                })
                .collect(),
        },
        quotient: quotient_section(fan),
        classification: ClassificationSection {
            foldable: class.foldable,
            p: class.p,
            minimal_model: class.minimal_model.clone(),
            minimal_rays: class.minimal_fan.rays_i64(),
            blowdown_orbits: class
                .blowdown_sequence
                .iter()
                .map(|orbit| orbit.iter().map(|r| [r.x, r.y]).collect())
                .collect(),
            rigid: class.rigid,
            csck: class.csck.label().to_owned(),
        },
    }
}
