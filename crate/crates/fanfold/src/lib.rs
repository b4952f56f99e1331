//! Exact-arithmetic toolkit for smooth complete two-dimensional fans.
//!
//! Given a fan, the crate computes its lattice automorphism group and
//! crystallographic type, decides foldability (existence of a nontrivial
//! rotation symmetry), enumerates Demazure roots, computes the torus weight
//! decomposition of the deformation space of the associated toric surface,
//! builds the toric GIT-quotient cone that models the local moduli chart,
//! and certifies the cone's singularity type (Q-Gorenstein / Gorenstein /
//! simplicial / smooth / terminal) — all over exact integers and rationals,
//! with no floating point anywhere.
//!
//! Module map:
//! - [`intlat`] — integer/rational linear algebra: Smith normal form,
//!   saturation, quotient lattices, exact LP feasibility, cone facets.
//! - [`fan`] — the fan data model, validation, blow-ups, the catalog of
//!   named fans, and fan isomorphism testing.
//! - [`symmetry`] — lattice automorphism groups and foldability.
//! - [`deform`] — Demazure roots and deformation weight decompositions.
//! - [`quotient`] — the exact sequence 0 → N → Ñ → N′ → 0, the quotient
//!   cone, and its singularity report.
//! - [`classify`] — minimal-model reduction, cscK existence flags, random
//!   fan generation, and full report assembly.

pub mod classify;
pub mod deform;
pub mod fan;
pub mod intlat;
pub mod quotient;
pub mod report;
pub mod symmetry;

pub use fan::{Fan2D, Mat2, Ray};
