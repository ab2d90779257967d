//! The reduced conflict graph of a face set and the lemmas built on it.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ids::{DartId, EdgeId, FaceId, VertexId};
use crate::map::{FaceSet, MapError, PlanarMap, VertexSet};
use crate::vf::VfGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConflictError {
    #[error("conflict graph is not a plane map: {0}")]
    Embedding(#[from] MapError),
    #[error("no node of degree at most four and no degree-5 node with four triangles")]
    Unsatisfiable,
    #[error("face {0} is not a node of the conflict graph")]
    UnknownFace(FaceId),
    #[error("charge accounting failed: {0}")]
    Charge(String),
}

/// The `G`-vertex and consecutive face pair that produced an edge of `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeSource {
    pub vertex: VertexId,
    pub pair: (FaceId, FaceId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    /// Dart of an edge of the unreduced graph.
    Dart(DartId),
    /// The incidence edge from this node to a vertex of `G` on at least
    /// two faces of the set.
    Corner(VertexId),
}

/// Plane multigraph on a face set, with homotopic parallel edges identified.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    nodes: Vec<FaceId>,
    index: BTreeMap<FaceId, usize>,
    map: PlanarMap,
    sources: Vec<Vec<EdgeSource>>,
    /// Per node, cyclic order of unreduced darts and corners.
    slots: Vec<Vec<Slot>>,
    /// Unreduced edge -> surviving edge of `map`, or `None` if identified
    /// with another edge.
    survivor: Vec<Option<EdgeId>>,
    /// Faces of `G` incident to each corner vertex, within the set.
    vertex_faces: BTreeMap<VertexId, Vec<FaceId>>,
    identified: usize,
}

impl ConflictGraph {
    pub fn nodes(&self) -> &[FaceId] {
        &self.nodes
    }

    pub fn node_of(&self, f: FaceId) -> Option<VertexId> {
        self.index.get(&f).map(|&i| VertexId::new(i))
    }

    pub fn face_of_node(&self, n: VertexId) -> FaceId {
        self.nodes[n.index()]
    }

    /// `R` as a plane map whose vertex `i` is `nodes()[i]`.
    pub fn map(&self) -> &PlanarMap {
        &self.map
    }

    pub fn sources(&self, e: EdgeId) -> &[EdgeSource] {
        &self.sources[e.index()]
    }

    pub fn edge_faces(&self, e: EdgeId) -> (FaceId, FaceId) {
        let [a, b] = self.map.endpoints(e);
        (self.face_of_node(a), self.face_of_node(b))
    }

    pub fn degree(&self, f: FaceId) -> usize {
        self.node_of(f).map_or(0, |n| self.map.degree(n))
    }

    /// Number of parallel edges removed by homotopy identification.
    pub fn identified_count(&self) -> usize {
        self.identified
    }

    /// Faces of the set through `v`, in the cyclic order around `v`.
    pub fn faces_around(&self, v: VertexId) -> &[FaceId] {
        self.vertex_faces.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Faces of `R` of degree 2 bounded by two distinct parallel edges.
    pub fn homotopic_faces(&self) -> usize {
        homotopic_faces(&self.map).len()
    }

    /// Number of angles at node `n` lying in a triangular face of `R`.
    pub fn triangle_angles(&self, n: VertexId) -> usize {
        self.map
            .rotation(n)
            .iter()
            .filter(|&&d| self.map.face(self.map.face_of(d)).degree() == 3)
            .count()
    }

    /// The surviving edges bounding the angle of node `f` that contains the
    /// incidence edge to `v`, clockwise side first.
    fn corner_edges(&self, f: FaceId, v: VertexId) -> Option<(EdgeId, EdgeId)> {
        let node = self.index[&f];
        let slots = &self.slots[node];
        let pos = slots.iter().position(|s| *s == Slot::Corner(v))?;
        let k = slots.len();
        let alive = |i: usize| match slots[i % k] {
            Slot::Dart(d) => self.survivor[d.edge().index()],
            Slot::Corner(_) => None,
        };
        let after = (1..k).find_map(|i| alive(pos + i))?;
        let before = (1..k).find_map(|i| alive(pos + k - i))?;
        Some((before, after))
    }
}

fn homotopic_faces(map: &PlanarMap) -> Vec<(EdgeId, EdgeId)> {
    map.faces()
        .iter()
        .filter(|f| f.darts.len() == 2 && f.darts[0].edge() != f.darts[1].edge())
        .map(|f| {
            let (a, b) = (f.darts[0].edge(), f.darts[1].edge());
            (a.min(b), a.max(b))
        })
        .collect()
}

/// Builds `R` for `faces`: for every vertex on `k >= 2` faces of the set,
/// an edge between cyclically consecutive faces.
pub fn reduced_conflict_graph(
    map: &PlanarMap,
    faces: &FaceSet,
) -> Result<ConflictGraph, ConflictError> {
    let nodes: Vec<FaceId> = faces.iter().copied().collect();
    let index: BTreeMap<FaceId, usize> = nodes.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let vf = VfGraph::new(map, Some(faces));

    let mut edges: Vec<[VertexId; 2]> = Vec::new();
    let mut sources: Vec<EdgeSource> = Vec::new();
    // For (vertex, position in its cyclic order): outgoing and incoming edge.
    let mut at_corner: BTreeMap<(VertexId, FaceId), (EdgeId, EdgeId)> = BTreeMap::new();
    let mut vertex_faces = BTreeMap::new();
    for v in map.vertices() {
        let around: Vec<FaceId> = vf.at_vertex(v).iter().map(|e| e.face).collect();
        let k = around.len();
        if k < 2 {
            continue;
        }
        let first = edges.len();
        for i in 0..k {
            let (a, b) = (around[i], around[(i + 1) % k]);
            edges.push([VertexId::new(index[&a]), VertexId::new(index[&b])]);
            sources.push(EdgeSource {
                vertex: v,
                pair: (a, b),
            });
        }
        for i in 0..k {
            let out = EdgeId::new(first + i);
            let inc = EdgeId::new(first + (i + k - 1) % k);
            at_corner.insert((v, around[i]), (out, inc));
        }
        vertex_faces.insert(v, around);
    }

    let mut slots: Vec<Vec<Slot>> = vec![Vec::new(); nodes.len()];
    for (i, &f) in nodes.iter().enumerate() {
        for e in vf.at_face(f) {
            if let Some(&(out, inc)) = at_corner.get(&(e.vertex, f)) {
                slots[i].push(Slot::Dart(out.dart(0)));
                slots[i].push(Slot::Corner(e.vertex));
                slots[i].push(Slot::Dart(inc.dart(1)));
            }
        }
    }

    let mut survivor: Vec<Option<EdgeId>> = (0..edges.len()).map(|i| Some(EdgeId::new(i))).collect();
    let mut merged_sources: Vec<Vec<EdgeSource>> = sources.iter().map(|s| vec![*s]).collect();
    let mut identified = 0;
    // Current edge -> unreduced edge holding it.
    let mut current: Vec<usize> = (0..edges.len()).collect();
    loop {
        let rotation: Vec<Vec<DartId>> = slots
            .iter()
            .map(|s| {
                s.iter()
                    .filter_map(|slot| match slot {
                        Slot::Dart(d) => survivor[d.edge().index()].map(|e| e.dart(d.side())),
                        Slot::Corner(_) => None,
                    })
                    .collect()
            })
            .collect();
        let live: Vec<[VertexId; 2]> = current.iter().map(|&u| edges[u]).collect();
        let r = PlanarMap::from_darts(nodes.len(), live, rotation)?;
        let pairs = homotopic_faces(&r);
        if pairs.is_empty() {
            let sources = current.iter().map(|&u| merged_sources[u].clone()).collect();
            return Ok(ConflictGraph {
                nodes,
                index,
                map: r,
                sources,
                slots,
                survivor,
                vertex_faces,
                identified,
            });
        }
        // Digons sharing no edge can be collapsed in the same round.
        let mut touched = BTreeSet::new();
        let mut dropped = vec![false; current.len()];
        for (keep, drop) in pairs {
            if touched.contains(&keep) || touched.contains(&drop) {
                continue;
            }
            touched.extend([keep, drop]);
            let (keep_u, drop_u) = (current[keep.index()], current[drop.index()]);
            let moved = std::mem::take(&mut merged_sources[drop_u]);
            merged_sources[keep_u].extend(moved);
            merged_sources[keep_u].sort();
            dropped[drop.index()] = true;
            identified += 1;
        }
        let mut renumber = Vec::with_capacity(current.len());
        let mut next = 0;
        for &gone in &dropped {
            renumber.push((!gone).then_some(EdgeId::new(next)));
            next += usize::from(!gone);
        }
        for s in survivor.iter_mut() {
            *s = s.and_then(|e| renumber[e.index()]);
        }
        let mut i = 0;
        current.retain(|_| {
            i += 1;
            !dropped[i - 1]
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowDegreeKind {
    DegLE4,
    Deg5FourTriangles,
}

/// The lowest node of degree at most four, else the lowest degree-5 node
/// with four angles in triangular faces.
pub fn low_degree_face(r: &ConflictGraph) -> Result<(FaceId, LowDegreeKind), ConflictError> {
    let m = r.map();
    if let Some(n) = m.vertices().find(|&n| m.degree(n) <= 4) {
        return Ok((r.face_of_node(n), LowDegreeKind::DegLE4));
    }
    m.vertices()
        .find(|&n| m.degree(n) == 5 && r.triangle_angles(n) >= 4)
        .map(|n| (r.face_of_node(n), LowDegreeKind::Deg5FourTriangles))
        .ok_or(ConflictError::Unsatisfiable)
}

/// Output of [`neighbor_hitting_set`] with its charge ledger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSet {
    pub face: FaceId,
    /// Vertices of the face on at least three faces of the set.
    pub multi: VertexSet,
    /// One vertex per remaining neighbouring face.
    pub single: VertexSet,
    pub transversal: VertexSet,
    /// Charge per edge of `δ_R(F)` in half units.
    pub charges: BTreeMap<EdgeId, u32>,
}

/// `T ⊆ V(F)` meeting every face of the set that meets `F`, with
/// `|T| <= deg_R(F)`.
pub fn neighbor_hitting_set(
    r: &ConflictGraph,
    map: &PlanarMap,
    face: FaceId,
) -> Result<HittingSet, ConflictError> {
    let node = r.node_of(face).ok_or(ConflictError::UnknownFace(face))?;
    let fset: &[VertexId] = &map.face(face).vertices;
    let multi: VertexSet = fset
        .iter()
        .copied()
        .filter(|&v| r.faces_around(v).len() >= 3)
        .collect();
    let mut charges: BTreeMap<EdgeId, u32> = r
        .map()
        .rotation(node)
        .iter()
        .map(|d| (d.edge(), 0))
        .collect();
    for &v in &multi {
        let (a, b) = r
            .corner_edges(face, v)
            .ok_or_else(|| ConflictError::Charge(format!("no corner for {v} at {face}")))?;
        if a == b {
            return Err(ConflictError::Charge(format!("{v} bounds a single edge")));
        }
        *charges.get_mut(&a).unwrap() += 1;
        *charges.get_mut(&b).unwrap() += 1;
    }

    let covered = |g: FaceId| multi.iter().any(|&v| map.face(g).contains_vertex(v));
    let mut single = VertexSet::new();
    for &g in r.nodes() {
        if g == face || covered(g) {
            continue;
        }
        let Some(w) = map.face(face).shared_vertices(map.face(g)).next() else {
            continue;
        };
        single.insert(w);
        let edge = r
            .map()
            .rotation(node)
            .iter()
            .map(|d| d.edge())
            .find(|&e| r.sources(e).iter().any(|s| s.vertex == w))
            .ok_or_else(|| ConflictError::Charge(format!("no edge created by {w}")))?;
        *charges.get_mut(&edge).unwrap() += 2;
    }
    if let Some((e, c)) = charges.iter().find(|(_, &c)| c > 2) {
        return Err(ConflictError::Charge(format!("edge {e} carries {c} half units")));
    }
    let total: u32 = charges.values().sum();
    if total as usize != 2 * (multi.len() + single.len()) {
        return Err(ConflictError::Charge("total charge differs from |T|".into()));
    }
    let transversal = multi.union(&single).copied().collect();
    Ok(HittingSet {
        face,
        multi,
        single,
        transversal,
        charges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::map_from_lists;

    fn k4() -> PlanarMap {
        map_from_lists(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
            &[&[0, 1, 2], &[3, 0, 5], &[4, 1, 3], &[5, 2, 4]],
        )
        .unwrap()
    }

    #[test]
    fn k4_conflict_graph() {
        let m = k4();
        let all: FaceSet = m.face_ids().collect();
        let r = reduced_conflict_graph(&m, &all).unwrap();
        // Each vertex lies on three faces and contributes a triangle; the
        // four triangles pairwise share edges, giving a multigraph.
        assert_eq!(r.map().vertex_count(), 4);
        assert_eq!(r.homotopic_faces(), 0);
        for e in r.map().edge_ids() {
            let (a, b) = r.edge_faces(e);
            assert!(m.face(a).shares_vertex(m.face(b)));
        }
        let (f, kind) = low_degree_face(&r).unwrap();
        assert_eq!(kind, LowDegreeKind::DegLE4);
        let hs = neighbor_hitting_set(&r, &m, f).unwrap();
        assert!(hs.transversal.len() <= r.degree(f));
    }

    #[test]
    fn two_faces_one_vertex() {
        // Two triangles sharing vertex 0.
        let m = map_from_lists(
            5,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)],
            &[&[0, 2, 3, 5], &[1, 0], &[2, 1], &[4, 3], &[5, 4]],
        )
        .unwrap();
        let tri: FaceSet = m.faces().iter().filter(|f| f.degree() == 3).map(|f| f.id).collect();
        assert_eq!(tri.len(), 2);
        let r = reduced_conflict_graph(&m, &tri).unwrap();
        assert_eq!(r.map().edge_count(), 1);
        assert_eq!(r.identified_count(), 1);
        let f = *tri.iter().next().unwrap();
        let hs = neighbor_hitting_set(&r, &m, f).unwrap();
        assert_eq!(hs.transversal, [VertexId(0)].into());
    }
}
