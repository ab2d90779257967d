use std::collections::BTreeMap;

use crate::certificate::{Certificate, PackedItem, PackingElement};
use crate::ids::{EdgeId, FaceId, VertexId};
use crate::map::PlanarMap;
use crate::parity::CycleWalk;

use super::SolveError;

/// An odd cycle inside `E(F)` of an odd face.
pub fn odd_cycle_in_face(map: &PlanarMap, face: FaceId) -> Result<CycleWalk, SolveError> {
    let mut remaining: Vec<EdgeId> = map.face(face).edges.clone();
    // E(F) has even degree everywhere, so it splits into cycles; one of
    // them is odd when |E(F)| is odd.
    while !remaining.is_empty() {
        let cycle = peel_cycle(map, &remaining);
        if cycle.len() % 2 == 1 {
            return CycleWalk::from_edges(map, &cycle).map_err(SolveError::from);
        }
        remaining.retain(|e| !cycle.contains(e));
    }
    Err(SolveError::NoOddCycleInFace(face))
}

/// A simple cycle of an even-degree edge set.
fn peel_cycle(map: &PlanarMap, edges: &[EdgeId]) -> Vec<EdgeId> {
    let mut incident: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for &e in edges {
        for v in map.endpoints(e) {
            incident.entry(v).or_default().push(e);
        }
    }
    let start = map.endpoints(edges[0])[0];
    let mut path_vertices = vec![start];
    let mut path_edges: Vec<EdgeId> = Vec::new();
    let mut current = start;
    loop {
        let e = *incident[&current]
            .iter()
            .find(|e| path_edges.last() != Some(e) && !path_edges.contains(e))
            .expect("even degree leaves an unused edge");
        let [a, b] = map.endpoints(e);
        let next = if a == current { b } else { a };
        path_edges.push(e);
        if let Some(pos) = path_vertices.iter().position(|&v| v == next) {
            return path_edges[pos..].to_vec();
        }
        path_vertices.push(next);
        current = next;
    }
}

/// Replaces every face of the packing by an odd cycle of its boundary.
pub fn finalize_packing(map: &PlanarMap, cert: &Certificate) -> Result<Certificate, SolveError> {
    let mut out = cert.clone();
    out.packing = cert
        .packing
        .iter()
        .map(|item| {
            Ok(match &item.element {
                PackingElement::Face(f) => PackedItem {
                    element: PackingElement::Cycle {
                        cycle: odd_cycle_in_face(map, *f)?,
                        source_face: Some(*f),
                    },
                    provenance: item.provenance,
                },
                PackingElement::Cycle { .. } => item.clone(),
            })
        })
        .collect::<Result<_, SolveError>>()?;
    Ok(out)
}
