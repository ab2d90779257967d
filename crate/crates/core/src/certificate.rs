//! Packing/transversal certificates and their independent verification.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ids::{EdgeId, FaceId, VertexId};
use crate::map::{FaceSet, PlanarMap, VertexSet};
use crate::parity::{is_bipartite_without, is_oct, CycleWalk};

/// Where a packing element came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Odd cycle of the base case avoiding every deadly face.
    BaseCycle,
    /// One face per cloud added in the base case.
    CloudFace,
    /// One of the two disjoint faces replacing a merged face in the packing.
    WitnessPair,
    /// The central face added when the merged face was not packed.
    CentralFace,
    /// A special face added after overlapping elements were dropped.
    Refill,
}

/// Recursion depth (0 = input map) and the step that produced an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub level: usize,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackingElement {
    /// A special face of the map the certificate refers to.
    Face(FaceId),
    /// An odd cycle. `source_face` is set when the cycle was extracted from
    /// the boundary of that special face.
    Cycle {
        cycle: CycleWalk,
        source_face: Option<FaceId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedItem {
    pub element: PackingElement,
    pub provenance: Provenance,
}

/// One recursion step of the solver, for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub level: usize,
    pub kind: String,
    pub faces_before: usize,
    pub faces_after: usize,
    pub merged: usize,
    pub transversal_added: usize,
    pub packing_added: usize,
}

/// A special packing `P*` with an odd cycle transversal `T*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub packing: Vec<PackedItem>,
    pub transversal: VertexSet,
    /// The special faces `F*` the packing refers to.
    pub special: FaceSet,
    pub trace: Vec<TraceStep>,
}

impl Certificate {
    pub fn ratio_bound_ok(&self) -> bool {
        self.transversal.len() <= 4 * self.packing.len()
    }

    pub fn vertex_sets(&self, map: &PlanarMap) -> Vec<BTreeSet<VertexId>> {
        self.packing
            .iter()
            .map(|item| element_vertices(map, &item.element))
            .collect()
    }
}

pub fn element_vertices(map: &PlanarMap, element: &PackingElement) -> BTreeSet<VertexId> {
    match element {
        PackingElement::Face(f) => map.face(*f).vertices.iter().copied().collect(),
        PackingElement::Cycle { cycle, .. } => cycle.vertices().iter().copied().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

/// Checks a certificate against the map without trusting the solver.
pub fn verify_certificate(map: &PlanarMap, cert: &Certificate) -> VerificationReport {
    let mut report = VerificationReport { checks: Vec::new() };

    let mut well_formed = Vec::new();
    for (i, item) in cert.packing.iter().enumerate() {
        match &item.element {
            PackingElement::Face(f) => {
                if f.index() >= map.face_count() {
                    well_formed.push(format!("element {i}: face {f} does not exist"));
                }
            }
            PackingElement::Cycle { cycle, source_face } => {
                if let Err(e) = CycleWalk::new(map, cycle.vertices().to_vec(), cycle.edges().to_vec()) {
                    well_formed.push(format!("element {i}: {e}"));
                }
                if source_face.is_some_and(|f| f.index() >= map.face_count()) {
                    well_formed.push(format!("element {i}: source face does not exist"));
                }
            }
        }
    }
    if cert.transversal.iter().any(|v| v.index() >= map.vertex_count())
        || cert.special.iter().any(|f| f.index() >= map.face_count())
    {
        well_formed.push("transversal or special set out of range".into());
    }
    let ok = well_formed.is_empty();
    report.push("well_formed", ok, well_formed.join("; "));
    if !ok {
        return report;
    }

    let sets = cert.vertex_sets(map);
    let mut overlaps = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if let Some(v) = sets[i].intersection(&sets[j]).next() {
                overlaps.push(format!("elements {i} and {j} share vertex {v}"));
            }
        }
    }
    report.push("disjointness", overlaps.is_empty(), overlaps.join("; "));

    let mut odd = Vec::new();
    for (i, item) in cert.packing.iter().enumerate() {
        match &item.element {
            PackingElement::Face(f) => {
                if !map.face(*f).is_odd() && !cert.special.contains(f) {
                    odd.push(format!("element {i}: face {f} is neither odd nor special"));
                }
            }
            PackingElement::Cycle { cycle, .. } => {
                if !cycle.is_odd() {
                    odd.push(format!("element {i}: cycle of even length {}", cycle.len()));
                }
            }
        }
    }
    report.push("cycle_oddness", odd.is_empty(), odd.join("; "));

    let special_vertices: BTreeSet<VertexId> = cert
        .special
        .iter()
        .flat_map(|f| map.face(*f).vertices.iter().copied())
        .collect();
    let mut avoid = Vec::new();
    for (i, item) in cert.packing.iter().enumerate() {
        match &item.element {
            PackingElement::Face(f) => {
                if !cert.special.contains(f) {
                    avoid.push(format!("element {i}: face {f} is not special"));
                }
            }
            PackingElement::Cycle {
                cycle,
                source_face: Some(f),
            } => {
                let boundary: BTreeSet<EdgeId> = map.face(*f).edges.iter().copied().collect();
                if !cert.special.contains(f) {
                    avoid.push(format!("element {i}: source face {f} is not special"));
                }
                if cycle.edges().iter().any(|e| !boundary.contains(e)) {
                    avoid.push(format!("element {i}: cycle leaves E(F) of face {f}"));
                }
            }
            PackingElement::Cycle {
                cycle,
                source_face: None,
            } => {
                if let Some(v) = cycle.vertices().iter().find(|v| special_vertices.contains(v)) {
                    avoid.push(format!("element {i}: cycle touches special face vertex {v}"));
                }
            }
        }
    }
    report.push("special_face_avoidance", avoid.is_empty(), avoid.join("; "));

    let vf_ok = is_oct(map, &cert.transversal);
    let direct_ok = is_bipartite_without(map, &cert.transversal);
    report.push(
        "transversal",
        vf_ok && direct_ok,
        if vf_ok == direct_ok {
            String::new()
        } else {
            format!("odd-face criterion {vf_ok}, bipartiteness {direct_ok}")
        },
    );

    report.push(
        "ratio_bound",
        cert.ratio_bound_ok(),
        format!("|T| = {}, |P| = {}", cert.transversal.len(), cert.packing.len()),
    );
    report
}
