//! Machine-readable verification reports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The verified statements. The serialized identifiers are the stable
/// machine contract used on the command line and in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    /// Smooth 2-cubes have a parallel pair of sides.
    #[serde(rename = "T3.5")]
    PlanarParallelSides,
    /// Smooth d-cubes have a parallel pair of facets.
    #[serde(rename = "T3.8")]
    ParallelFacets,
    /// Parallel ridge pairs in two facets force a parallel facet pair.
    #[serde(rename = "C3.2")]
    ParallelRidgesForceFacets,
    /// Three mutually parallel codimension-2 faces force the fourth.
    #[serde(rename = "C3.4")]
    ThreeParallelForceFourth,
    /// Top and bottom of a prismatoid share a normal fan.
    #[serde(rename = "L4.2")]
    TopBottomEquivalent,
    /// Slices of smooth prismatoids are integral and equivalent to the bottom.
    #[serde(rename = "L4.3")]
    IntegralSlices,
    /// Minkowski-equivalent lattice polygons form IDP pairs.
    #[serde(rename = "T4.4")]
    EquivalentPolygonsIdp,
    /// IDP of all slice pairs lifts to the prismatoid pair.
    #[serde(rename = "L4.5")]
    SlicePairsLift,
    /// Minkowski-equivalent smooth 3-prismatoids form IDP pairs.
    #[serde(rename = "T4.6")]
    EquivalentPrismatoidsIdp,
    /// Minkowski-equivalent smooth cubes form IDP pairs.
    #[serde(rename = "T4.7")]
    EquivalentCubesIdp,
    /// Smooth cubes are IDP.
    #[serde(rename = "C4.8")]
    SmoothCubesIdp,
    /// The region criterion and the definitional check agree.
    #[serde(rename = "P2.2-equiv")]
    RegionCriterionAgrees,
    /// Disjoint fan-equivalent pairs are separated parallel to a facet.
    #[serde(rename = "L2.4")]
    FacetSeparation,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::PlanarParallelSides,
        TheoremId::ParallelFacets,
        TheoremId::ParallelRidgesForceFacets,
        TheoremId::ThreeParallelForceFourth,
        TheoremId::TopBottomEquivalent,
        TheoremId::IntegralSlices,
        TheoremId::EquivalentPolygonsIdp,
        TheoremId::SlicePairsLift,
        TheoremId::EquivalentPrismatoidsIdp,
        TheoremId::EquivalentCubesIdp,
        TheoremId::SmoothCubesIdp,
        TheoremId::RegionCriterionAgrees,
        TheoremId::FacetSeparation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::PlanarParallelSides => "T3.5",
            TheoremId::ParallelFacets => "T3.8",
            TheoremId::ParallelRidgesForceFacets => "C3.2",
            TheoremId::ThreeParallelForceFourth => "C3.4",
            TheoremId::TopBottomEquivalent => "L4.2",
            TheoremId::IntegralSlices => "L4.3",
            TheoremId::EquivalentPolygonsIdp => "T4.4",
            TheoremId::SlicePairsLift => "L4.5",
            TheoremId::EquivalentPrismatoidsIdp => "T4.6",
            TheoremId::EquivalentCubesIdp => "T4.7",
            TheoremId::SmoothCubesIdp => "C4.8",
            TheoremId::RegionCriterionAgrees => "P2.2-equiv",
            TheoremId::FacetSeparation => "L2.4",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: String,
    pub witness: String,
}

/// Outcome of checking one statement over a set of instances.
/// `passes + failures.len() == instances` always holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub instances: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl TheoremReport {
    pub fn new(theorem_id: TheoremId) -> Self {
        TheoremReport {
            theorem_id,
            instances: 0,
            passes: 0,
            failures: Vec::new(),
            skipped: Vec::new(),
        }
    }

    pub fn pass(&mut self) {
        self.instances += 1;
        self.passes += 1;
    }

    pub fn fail(&mut self, instance: impl Into<String>, witness: impl Into<String>) {
        self.instances += 1;
        self.failures.push(Failure {
            instance: instance.into(),
            witness: witness.into(),
        });
    }

    pub fn record(&mut self, instance: impl Into<String>, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => self.pass(),
            Err(w) => self.fail(instance, w),
        }
    }

    pub fn skip(&mut self, note: impl Into<String>) {
        self.skipped.push(note.into());
    }

    /// Folds another report for the same statement into this one.
    pub fn absorb(&mut self, other: TheoremReport) {
        debug_assert_eq!(self.theorem_id, other.theorem_id);
        self.instances += other.instances;
        self.passes += other.passes;
        self.failures.extend(other.failures);
        self.skipped.extend(other.skipped);
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn is_consistent(&self) -> bool {
        self.passes + self.failures.len() == self.instances
    }
}
