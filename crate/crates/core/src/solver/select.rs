//! Choosing the face subset of a cloud to merge, and its small
//! transversals.

use std::collections::BTreeMap;

use crate::clouds::{is_good, nu1_transversal, nu_exceeds_one};
use crate::conflict::{
    low_degree_face, neighbor_hitting_set, reduced_conflict_graph, ConflictGraph, HittingSet,
    LowDegreeKind,
};
use crate::ids::{FaceId, VertexId};
use crate::map::{FaceSet, PlanarMap, VertexSet};
use crate::parity::is_f_transversal;

use super::{SolveError, SolveObserver};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoiceCase {
    /// The neighbourhood has two disjoint faces and the central face has
    /// conflict degree at most four: one hitting set serves every subset.
    NeighborhoodHit { hitting: HittingSet },
    /// The neighbourhood has packing number one; `attached` lies outside it
    /// and meets `contact_face` of the neighbourhood in `contact`.
    Attached {
        attached: FaceId,
        contact_face: FaceId,
        contact: VertexId,
    },
    /// Degree-5 central face with faces not adjacent to it in `R`: every
    /// face meets `cover = {hub} ∪ extra`.
    HubCover {
        hub: VertexId,
        extra: Vec<VertexId>,
        cover: VertexSet,
    },
    /// Degree-5 central face adjacent in `R` to all of its neighbourhood.
    /// `picks` holds one vertex of the central face per face; `matching`
    /// pairs the whole set along edges of `R` when it has six faces.
    Matching {
        picks: BTreeMap<FaceId, VertexId>,
        matching: Option<Vec<(FaceId, FaceId, VertexId)>>,
    },
}

impl ChoiceCase {
    pub fn tag(&self) -> &'static str {
        match self {
            ChoiceCase::NeighborhoodHit { .. } => "neighborhood_hit",
            ChoiceCase::Attached { .. } => "attached",
            ChoiceCase::HubCover { .. } => "hub_cover",
            ChoiceCase::Matching { .. } => "matching",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloudSubsetChoice {
    pub faces: FaceSet,
    /// Every face of the cloud meeting `central` is in `faces`.
    pub central: FaceId,
    pub kind: LowDegreeKind,
    /// Faces of the central face's neighbourhood in the cloud.
    pub neighborhood: FaceSet,
    pub case: ChoiceCase,
    /// Two vertex-disjoint faces of `faces`.
    pub witness: (FaceId, FaceId),
}

/// Faces of `cloud` meeting `face`, including `face`.
fn neighborhood(map: &PlanarMap, cloud: &FaceSet, face: FaceId) -> FaceSet {
    cloud
        .iter()
        .copied()
        .filter(|&g| map.face(g).shares_vertex(map.face(face)))
        .collect()
}

pub fn select_cloud_subset(
    map: &PlanarMap,
    cloud: &FaceSet,
    observer: &mut dyn SolveObserver,
) -> Result<CloudSubsetChoice, SolveError> {
    if nu_exceeds_one(map, cloud).is_none() {
        return Err(SolveError::CaseExhaustion("cloud has packing number one".into()));
    }
    let r = reduced_conflict_graph(map, cloud)?;
    let (central, kind) = low_degree_face(&r)?;
    observer.conflict_graph(map, cloud, &r, central, kind);
    let near = neighborhood(map, cloud, central);

    let Some(witness) = nu_exceeds_one(map, &near) else {
        observer.nu1_family(map, &near);
        return attach(map, cloud, central, kind, near);
    };

    let case = match kind {
        LowDegreeKind::DegLE4 => {
            let hitting = neighbor_hitting_set(&r, map, central)?;
            observer.hitting_set(map, cloud, &r, &hitting);
            ChoiceCase::NeighborhoodHit { hitting }
        }
        LowDegreeKind::Deg5FourTriangles => degree_five(map, cloud, &r, central, &near)?,
    };
    Ok(CloudSubsetChoice {
        faces: near.clone(),
        central,
        kind,
        neighborhood: near,
        case,
        witness,
    })
}

fn attach(
    map: &PlanarMap,
    cloud: &FaceSet,
    central: FaceId,
    kind: LowDegreeKind,
    near: FaceSet,
) -> Result<CloudSubsetChoice, SolveError> {
    for &attached in cloud.difference(&near) {
        for &contact_face in &near {
            if let Some(contact) = map.face(attached).shared_vertices(map.face(contact_face)).next() {
                let mut faces = near.clone();
                faces.insert(attached);
                return Ok(CloudSubsetChoice {
                    faces,
                    central,
                    kind,
                    neighborhood: near,
                    case: ChoiceCase::Attached {
                        attached,
                        contact_face,
                        contact,
                    },
                    witness: (central.min(attached), central.max(attached)),
                });
            }
        }
    }
    Err(SolveError::CaseExhaustion(
        "no cloud face outside the neighbourhood touches it".into(),
    ))
}

fn degree_five(
    map: &PlanarMap,
    cloud: &FaceSet,
    r: &ConflictGraph,
    central: FaceId,
    near: &FaceSet,
) -> Result<ChoiceCase, SolveError> {
    let node = r.node_of(central).expect("central face is a node");
    let adjacent: FaceSet = r
        .map()
        .neighbors(node)
        .map(|(w, _)| r.face_of_node(w))
        .collect();
    let blocked: FaceSet = near
        .iter()
        .copied()
        .filter(|g| *g != central && !adjacent.contains(g))
        .collect();
    let face = map.face(central);

    if !blocked.is_empty() {
        let hubs: Vec<VertexId> = face
            .vertices
            .iter()
            .copied()
            .filter(|&v| map.faces_at(v).iter().filter(|g| cloud.contains(g)).count() >= 4)
            .collect();
        let [hub] = hubs[..] else {
            return Err(SolveError::CaseExhaustion(format!(
                "{} vertices of the central face lie on four cloud faces",
                hubs.len()
            )));
        };
        if blocked.iter().any(|&g| !map.face(g).contains_vertex(hub)) {
            return Err(SolveError::CaseExhaustion("a blocked face avoids the hub".into()));
        }
        let unblocked_at_hub = near
            .difference(&blocked)
            .filter(|&&g| map.face(g).contains_vertex(hub))
            .count();
        if unblocked_at_hub < 3 {
            return Err(SolveError::CaseExhaustion(
                "fewer than three unblocked faces contain the hub".into(),
            ));
        }
        let mut extra = Vec::new();
        let mut cover = VertexSet::from([hub]);
        for &g in near {
            if !map.face(g).contains_vertex(hub) {
                let w = face.shared_vertices(map.face(g)).next().expect("neighbour");
                if cover.insert(w) {
                    extra.push(w);
                }
            }
        }
        if cover.len() > 4 || !is_good(map, near, &cover) {
            return Err(SolveError::CaseExhaustion("hub cover is not good".into()));
        }
        return Ok(ChoiceCase::HubCover { hub, extra, cover });
    }

    if near.len() > 6 {
        return Err(SolveError::CaseExhaustion(format!(
            "neighbourhood of {} faces without blocked faces",
            near.len()
        )));
    }
    let picks: BTreeMap<FaceId, VertexId> = near
        .iter()
        .map(|&g| (g, face.shared_vertices(map.face(g)).next().expect("neighbour")))
        .collect();
    let matching = if near.len() == 6 {
        Some(perfect_matching(r, near).ok_or_else(|| {
            SolveError::CaseExhaustion("no perfect matching in the conflict graph".into())
        })?)
    } else {
        None
    };
    Ok(ChoiceCase::Matching { picks, matching })
}

/// A perfect matching of `faces` along edges of `R`, each pair with a
/// vertex where its faces meet.
fn perfect_matching(r: &ConflictGraph, faces: &FaceSet) -> Option<Vec<(FaceId, FaceId, VertexId)>> {
    let mut edges: Vec<(FaceId, FaceId, VertexId)> = Vec::new();
    for e in r.map().edge_ids() {
        let (a, b) = r.edge_faces(e);
        if faces.contains(&a) && faces.contains(&b) {
            let v = r.sources(e)[0].vertex;
            edges.push((a.min(b), a.max(b), v));
        }
    }
    fn search(
        left: &mut Vec<FaceId>,
        edges: &[(FaceId, FaceId, VertexId)],
        out: &mut Vec<(FaceId, FaceId, VertexId)>,
    ) -> bool {
        let Some(&a) = left.first() else {
            return true;
        };
        for &(x, y, v) in edges {
            let b = if x == a { y } else if y == a { x } else { continue };
            let Some(pos) = left.iter().position(|&f| f == b) else {
                continue;
            };
            let saved = left.clone();
            left.remove(pos);
            left.remove(0);
            out.push((a, b, v));
            if search(left, edges, out) {
                return true;
            }
            out.pop();
            *left = saved;
        }
        false
    }
    let mut left: Vec<FaceId> = faces.iter().copied().collect();
    let mut out = Vec::new();
    search(&mut left, &edges, &mut out).then_some(out)
}

/// An `F'`-transversal with at most four vertices for an even subset `F'`
/// of the chosen faces.
pub fn even_subset_transversal_leq4(
    map: &PlanarMap,
    choice: &CloudSubsetChoice,
    sub: &FaceSet,
    observer: &mut dyn SolveObserver,
) -> Result<VertexSet, SolveError> {
    if sub.len() % 2 == 1 {
        return Err(SolveError::OddSubset(sub.len()));
    }
    if !sub.is_subset(&choice.faces) {
        return Err(SolveError::SubsetNotInChoice);
    }
    let t = match &choice.case {
        ChoiceCase::NeighborhoodHit { hitting } => hitting.transversal.clone(),
        ChoiceCase::HubCover { cover, .. } => cover.clone(),
        ChoiceCase::Attached {
            attached,
            contact_face,
            contact,
        } => {
            let near = &choice.neighborhood;
            observer.nu1_family(map, near);
            if sub.contains(attached) {
                let mut rest = sub.clone();
                rest.remove(attached);
                if !rest.remove(contact_face) {
                    rest.insert(*contact_face);
                }
                let mut t = nu1_transversal(map, near, &rest)?;
                t.insert(*contact);
                t
            } else {
                nu1_transversal(map, near, sub)?
            }
        }
        ChoiceCase::Matching { picks, matching } => {
            if sub.len() == 6 {
                matching
                    .as_ref()
                    .ok_or_else(|| SolveError::CaseExhaustion("missing matching".into()))?
                    .iter()
                    .map(|m| m.2)
                    .collect()
            } else {
                sub.iter().map(|g| picks[g]).collect()
            }
        }
    };
    if t.len() > 4 || !is_f_transversal(map, sub, &t)? {
        return Err(SolveError::CaseExhaustion(format!(
            "{} case produced an invalid transversal of size {}",
            choice.case.tag(),
            t.len()
        )));
    }
    Ok(t)
}
