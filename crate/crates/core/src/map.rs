//! Combinatorial maps of plane graphs.
//!
//! A [`PlanarMap`] is stored as darts and a rotation system. Edge `e` with
//! endpoints `[u, v]` owns dart `2e` (leaving `u`) and dart `2e + 1`
//! (leaving `v`). The rotation lists the darts leaving each vertex in
//! counterclockwise order.
//!
//! The angle at `tail(d)` between `d` and its counterclockwise successor
//! belongs to the face of `d`; faces are traced with the face on the left,
//! so the successor of `d` on its face is the clockwise predecessor of
//! `twin(d)` at the head of `d`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ids::{DartId, EdgeId, FaceId, VertexId};
use crate::util::DisjointSets;

pub type FaceSet = BTreeSet<FaceId>;
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} references vertex {vertex}, but the map has {vertex_count} vertices")]
    UnknownVertex {
        edge: EdgeId,
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("rotation mismatch at vertex {vertex}: {reason}")]
    RotationMismatch { vertex: VertexId, reason: String },
    #[error(
        "rotation system has positive genus on component {component}: V - E + F = {euler}, expected 2"
    )]
    NonPlanarEmbedding { component: usize, euler: i64 },
    #[error("input graph is not planar")]
    NonPlanarInput,
}

/// A face of a [`PlanarMap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    /// Boundary walk, starting at the lowest dart of the face. Empty for the
    /// face around an isolated vertex.
    pub darts: Vec<DartId>,
    /// `V(F)`, sorted.
    pub vertices: Vec<VertexId>,
    /// `E⁺(F)` in walk order; bridges appear twice.
    pub edges_plus: Vec<EdgeId>,
    /// `E(F)`: the edges of `E⁺(F)` with multiplicity one, sorted.
    pub edges: Vec<EdgeId>,
    pub component: usize,
}

impl Face {
    /// `deg(F) = |E⁺(F)|`.
    pub fn degree(&self) -> usize {
        self.edges_plus.len()
    }

    pub fn is_odd(&self) -> bool {
        self.edges.len() % 2 == 1
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn shares_vertex(&self, other: &Face) -> bool {
        sorted_intersect(&self.vertices, &other.vertices).next().is_some()
    }

    pub fn shared_vertices<'a>(&'a self, other: &'a Face) -> impl Iterator<Item = VertexId> + 'a {
        sorted_intersect(&self.vertices, &other.vertices)
    }
}

fn sorted_intersect<'a, T: Ord + Copy>(a: &'a [T], b: &'a [T]) -> impl Iterator<Item = T> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let x = a[i];
                    i += 1;
                    j += 1;
                    return Some(x);
                }
            }
        }
        None
    })
}

/// An embedded plane multigraph without self-loops. Immutable once built.
#[derive(Debug, Clone)]
pub struct PlanarMap {
    vertex_count: usize,
    edges: Vec<[VertexId; 2]>,
    rotation: Vec<Vec<DartId>>,
    position: Vec<u32>,
    dart_face: Vec<FaceId>,
    faces: Vec<Face>,
    vertex_faces: Vec<Vec<FaceId>>,
    vertex_component: Vec<usize>,
    component_count: usize,
    outer_faces: Vec<FaceId>,
    bridge: Vec<bool>,
}

impl PlanarMap {
    /// Builds a map from an edge list and a per-vertex counterclockwise
    /// order of incident edge indices.
    pub fn new(
        vertex_count: usize,
        edges: Vec<[VertexId; 2]>,
        rotation: &[Vec<EdgeId>],
    ) -> Result<Self, MapError> {
        check_edges(vertex_count, &edges)?;
        if rotation.len() != vertex_count {
            return Err(MapError::RotationMismatch {
                vertex: VertexId::new(rotation.len().min(vertex_count)),
                reason: format!(
                    "rotation covers {} vertices, map has {}",
                    rotation.len(),
                    vertex_count
                ),
            });
        }
        let mut darts = Vec::with_capacity(vertex_count);
        for (v, order) in rotation.iter().enumerate() {
            let vertex = VertexId::new(v);
            let mut list = Vec::with_capacity(order.len());
            for &e in order {
                let Some(ends) = edges.get(e.index()) else {
                    return Err(MapError::RotationMismatch {
                        vertex,
                        reason: format!("edge {e} does not exist"),
                    });
                };
                let side = if ends[0] == vertex {
                    0
                } else if ends[1] == vertex {
                    1
                } else {
                    return Err(MapError::RotationMismatch {
                        vertex,
                        reason: format!("edge {e} is not incident to this vertex"),
                    });
                };
                list.push(e.dart(side));
            }
            darts.push(list);
        }
        Self::from_darts(vertex_count, edges, darts)
    }

    /// Builds a map from explicit dart rotations.
    pub fn from_darts(
        vertex_count: usize,
        edges: Vec<[VertexId; 2]>,
        rotation: Vec<Vec<DartId>>,
    ) -> Result<Self, MapError> {
        check_edges(vertex_count, &edges)?;
        let dart_count = edges.len() * 2;
        let unset = u32::MAX;
        let mut position = vec![unset; dart_count];
        if rotation.len() != vertex_count {
            return Err(MapError::RotationMismatch {
                vertex: VertexId::new(rotation.len().min(vertex_count)),
                reason: "rotation length differs from vertex count".into(),
            });
        }
        for (v, order) in rotation.iter().enumerate() {
            let vertex = VertexId::new(v);
            for (i, &d) in order.iter().enumerate() {
                if d.index() >= dart_count {
                    return Err(MapError::RotationMismatch {
                        vertex,
                        reason: format!("dart {d} does not exist"),
                    });
                }
                if edges[d.edge().index()][d.side()] != vertex {
                    return Err(MapError::RotationMismatch {
                        vertex,
                        reason: format!("dart {d} of edge {} listed at wrong vertex", d.edge()),
                    });
                }
                if position[d.index()] != unset {
                    return Err(MapError::RotationMismatch {
                        vertex,
                        reason: format!("edge {} listed twice", d.edge()),
                    });
                }
                position[d.index()] = i as u32;
            }
        }
        if let Some(d) = position.iter().position(|&p| p == unset) {
            let d = DartId::new(d);
            return Err(MapError::RotationMismatch {
                vertex: edges[d.edge().index()][d.side()],
                reason: format!("edge {} missing from rotation", d.edge()),
            });
        }

        let mut dsu = DisjointSets::new(vertex_count);
        for e in &edges {
            dsu.union(e[0].index(), e[1].index());
        }
        let mut root_component = vec![usize::MAX; vertex_count];
        let mut vertex_component = vec![0; vertex_count];
        let mut component_count = 0;
        for v in 0..vertex_count {
            let r = dsu.find(v);
            if root_component[r] == usize::MAX {
                root_component[r] = component_count;
                component_count += 1;
            }
            vertex_component[v] = root_component[r];
        }

        let mut map = PlanarMap {
            vertex_count,
            edges,
            rotation,
            position,
            dart_face: Vec::new(),
            faces: Vec::new(),
            vertex_faces: Vec::new(),
            vertex_component,
            component_count,
            outer_faces: Vec::new(),
            bridge: Vec::new(),
        };
        map.trace_faces();
        map.check_euler()?;
        map.finish_faces();
        Ok(map)
    }

    fn trace_faces(&mut self) {
        let dart_count = self.dart_count();
        let mut dart_face = vec![FaceId(u32::MAX); dart_count];
        let mut faces = Vec::new();
        for start in 0..dart_count {
            if dart_face[start].0 != u32::MAX {
                continue;
            }
            let id = FaceId::new(faces.len());
            let mut darts = Vec::new();
            let mut d = DartId::new(start);
            loop {
                dart_face[d.index()] = id;
                darts.push(d);
                d = self.face_next(d);
                if d.index() == start {
                    break;
                }
            }
            let component = self.vertex_component[self.tail(darts[0]).index()];
            faces.push(Face {
                id,
                darts,
                vertices: Vec::new(),
                edges_plus: Vec::new(),
                edges: Vec::new(),
                component,
            });
        }
        for v in 0..self.vertex_count {
            if self.rotation[v].is_empty() {
                let id = FaceId::new(faces.len());
                faces.push(Face {
                    id,
                    darts: Vec::new(),
                    vertices: vec![VertexId::new(v)],
                    edges_plus: Vec::new(),
                    edges: Vec::new(),
                    component: self.vertex_component[v],
                });
            }
        }
        self.dart_face = dart_face;
        self.faces = faces;
    }

    fn check_euler(&self) -> Result<(), MapError> {
        let mut euler = vec![0i64; self.component_count];
        for v in 0..self.vertex_count {
            euler[self.vertex_component[v]] += 1;
        }
        for e in &self.edges {
            euler[self.vertex_component[e[0].index()]] -= 1;
        }
        for f in &self.faces {
            euler[f.component] += 1;
        }
        match euler.iter().position(|&x| x != 2) {
            Some(component) => Err(MapError::NonPlanarEmbedding {
                component,
                euler: euler[component],
            }),
            None => Ok(()),
        }
    }

    fn finish_faces(&mut self) {
        let edge_count = self.edges.len();
        let mut bridge = vec![false; edge_count];
        for (e, b) in bridge.iter_mut().enumerate() {
            let e = EdgeId::new(e);
            *b = self.dart_face[e.dart(0).index()] == self.dart_face[e.dart(1).index()];
        }
        let mut vertex_faces = vec![Vec::new(); self.vertex_count];
        for face in &mut self.faces {
            if !face.darts.is_empty() {
                face.edges_plus = face.darts.iter().map(|d| d.edge()).collect();
                let mut vertices: Vec<VertexId> = face
                    .darts
                    .iter()
                    .map(|d| self.edges[d.edge().index()][d.side()])
                    .collect();
                vertices.sort_unstable();
                vertices.dedup();
                face.vertices = vertices;
                let mut edges: Vec<EdgeId> = face
                    .edges_plus
                    .iter()
                    .copied()
                    .filter(|e| !bridge[e.index()])
                    .collect();
                edges.sort_unstable();
                face.edges = edges;
            }
            for &v in &face.vertices {
                vertex_faces[v.index()].push(face.id);
            }
        }
        let mut outer_faces = vec![FaceId(u32::MAX); self.component_count];
        for face in &self.faces {
            if outer_faces[face.component].0 == u32::MAX {
                outer_faces[face.component] = face.id;
            }
        }
        self.bridge = bridge;
        self.vertex_faces = vertex_faces;
        self.outer_faces = outer_faces;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        self.edges.len() * 2
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count).map(VertexId::new)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId::new)
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e.index()]
    }

    pub fn tail(&self, d: DartId) -> VertexId {
        self.edges[d.edge().index()][d.side()]
    }

    pub fn head(&self, d: DartId) -> VertexId {
        self.edges[d.edge().index()][1 - d.side()]
    }

    /// Darts leaving `v` in counterclockwise order, as given at construction.
    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.rotation[v.index()]
    }

    /// Rotation of every vertex as edge indices, the form used in graph files.
    pub fn rotation_edges(&self) -> Vec<Vec<EdgeId>> {
        self.rotation
            .iter()
            .map(|r| r.iter().map(|d| d.edge()).collect())
            .collect()
    }

    /// Darts leaving `v` counterclockwise, starting at the lowest dart id.
    pub fn canonical_rotation(&self, v: VertexId) -> impl Iterator<Item = DartId> + '_ {
        let rot = &self.rotation[v.index()];
        let start = rot
            .iter()
            .enumerate()
            .min_by_key(|(_, d)| **d)
            .map_or(0, |(i, _)| i);
        (0..rot.len()).map(move |i| rot[(start + i) % rot.len()])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v.index()].len()
    }

    /// Counterclockwise successor of `d` around its tail.
    pub fn next_ccw(&self, d: DartId) -> DartId {
        let rot = &self.rotation[self.tail(d).index()];
        rot[(self.position[d.index()] as usize + 1) % rot.len()]
    }

    /// Clockwise successor of `d` around its tail.
    pub fn next_cw(&self, d: DartId) -> DartId {
        let rot = &self.rotation[self.tail(d).index()];
        let p = self.position[d.index()] as usize;
        rot[(p + rot.len() - 1) % rot.len()]
    }

    /// Position of `d` within the rotation of its tail.
    pub fn rotation_position(&self, d: DartId) -> usize {
        self.position[d.index()] as usize
    }

    /// Successor of `d` along its face walk.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.next_cw(d.twin())
    }

    pub fn face_of(&self, d: DartId) -> FaceId {
        self.dart_face[d.index()]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.index()]
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).map(FaceId::new)
    }

    /// Faces whose boundary contains `v`, in increasing id order.
    pub fn faces_at(&self, v: VertexId) -> &[FaceId] {
        &self.vertex_faces[v.index()]
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.vertex_component[v.index()]
    }

    /// The canonical outer face of a component: the face of its lowest dart.
    pub fn outer_face(&self, component: usize) -> FaceId {
        self.outer_faces[component]
    }

    pub fn is_bridge(&self, e: EdgeId) -> bool {
        self.bridge[e.index()]
    }

    pub fn bridge_count(&self) -> usize {
        self.bridge.iter().filter(|&&b| b).count()
    }

    /// The two faces on either side of `e` (equal for bridges).
    pub fn edge_faces(&self, e: EdgeId) -> [FaceId; 2] {
        [self.face_of(e.dart(0)), self.face_of(e.dart(1))]
    }

    /// `F_odd(G)`.
    pub fn odd_faces(&self) -> FaceSet {
        self.faces.iter().filter(|f| f.is_odd()).map(|f| f.id).collect()
    }

    /// Neighbours of `v` with the connecting edge.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.rotation[v.index()]
            .iter()
            .map(move |&d| (self.head(d), d.edge()))
    }
}

fn check_edges(vertex_count: usize, edges: &[[VertexId; 2]]) -> Result<(), MapError> {
    for (i, e) in edges.iter().enumerate() {
        let edge = EdgeId::new(i);
        for &v in e {
            if v.index() >= vertex_count {
                return Err(MapError::UnknownVertex {
                    edge,
                    vertex: v,
                    vertex_count,
                });
            }
        }
        if e[0] == e[1] {
            return Err(MapError::SelfLoop { edge, vertex: e[0] });
        }
    }
    Ok(())
}

/// Builds a map from `(u, v)` index pairs with the rotation given as edge
/// indices. Convenience for tests and small hand-written instances.
pub fn map_from_lists(
    vertex_count: usize,
    edges: &[(usize, usize)],
    rotation: &[&[usize]],
) -> Result<PlanarMap, MapError> {
    let edges = edges
        .iter()
        .map(|&(u, v)| [VertexId::new(u), VertexId::new(v)])
        .collect();
    let rotation: Vec<Vec<EdgeId>> = rotation
        .iter()
        .map(|r| r.iter().map(|&e| EdgeId::new(e)).collect())
        .collect();
    PlanarMap::new(vertex_count, edges, &rotation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> PlanarMap {
        // Vertex 0 in the centre of triangle 1-2-3.
        // edges: 0:01 1:02 2:03 3:12 4:23 5:31
        map_from_lists(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
            &[&[0, 1, 2], &[3, 0, 5], &[4, 1, 3], &[5, 2, 4]],
        )
        .unwrap()
    }

    #[test]
    fn k4_has_four_triangles() {
        let m = k4();
        assert_eq!(m.face_count(), 4);
        assert!(m.faces().iter().all(|f| f.degree() == 3 && f.is_odd()));
        assert_eq!(m.odd_faces().len(), 4);
    }

    #[test]
    fn single_edge_is_a_bridge() {
        let m = map_from_lists(2, &[(0, 1)], &[&[0], &[0]]).unwrap();
        assert_eq!(m.face_count(), 1);
        let f = &m.faces()[0];
        assert_eq!(f.edges_plus, vec![EdgeId(0), EdgeId(0)]);
        assert!(f.edges.is_empty());
        assert_eq!(f.degree(), 2);
        assert!(!f.is_odd());
    }

    #[test]
    fn cycles_have_two_faces() {
        let c4 = map_from_lists(
            4,
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
            &[&[0, 3], &[1, 0], &[2, 1], &[3, 2]],
        )
        .unwrap();
        assert_eq!(c4.face_count(), 2);
        assert!(c4.faces().iter().all(|f| f.degree() == 4));
        assert!(c4.odd_faces().is_empty());

        let c3 = map_from_lists(3, &[(0, 1), (1, 2), (2, 0)], &[&[0, 2], &[1, 0], &[2, 1]])
            .unwrap();
        assert_eq!(c3.face_count(), 2);
        assert_eq!(c3.odd_faces().len(), 2);
    }

    #[test]
    fn path_face_is_even() {
        let p3 = map_from_lists(3, &[(0, 1), (1, 2)], &[&[0], &[0, 1], &[1]]).unwrap();
        assert_eq!(p3.face_count(), 1);
        let f = &p3.faces()[0];
        assert_eq!(f.degree(), 4);
        assert!(f.edges.is_empty());
        assert!(!f.is_odd());
        assert_eq!(p3.bridge_count(), 2);
    }

    #[test]
    fn isolated_vertices_get_faces() {
        let m = map_from_lists(3, &[(0, 1)], &[&[0], &[0], &[]]).unwrap();
        assert_eq!(m.component_count(), 2);
        assert_eq!(m.face_count(), 2);
        assert_eq!(m.face(FaceId(1)).vertices, vec![VertexId(2)]);
        assert_eq!(m.outer_face(1), FaceId(1));
    }

    #[test]
    fn rejects_self_loop() {
        let err = map_from_lists(1, &[(0, 0)], &[&[0, 0]]).unwrap_err();
        assert!(matches!(err, MapError::SelfLoop { .. }));
    }

    #[test]
    fn rejects_rotation_mismatch() {
        let err = map_from_lists(2, &[(0, 1)], &[&[0], &[]]).unwrap_err();
        assert!(matches!(err, MapError::RotationMismatch { .. }));
        let err = map_from_lists(3, &[(0, 1)], &[&[0], &[0], &[0]]).unwrap_err();
        assert!(matches!(err, MapError::RotationMismatch { .. }));
    }

    #[test]
    fn rejects_toroidal_rotation() {
        // K4 with one vertex's rotation reversed embeds on the torus.
        let err = map_from_lists(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
            &[&[0, 2, 1], &[3, 0, 5], &[4, 1, 3], &[5, 2, 4]],
        )
        .unwrap_err();
        assert!(matches!(err, MapError::NonPlanarEmbedding { .. }));
    }

    #[test]
    fn parallel_edges_make_digons() {
        let m = map_from_lists(2, &[(0, 1), (0, 1)], &[&[0, 1], &[0, 1]]).unwrap();
        assert_eq!(m.face_count(), 2);
        assert!(m.faces().iter().all(|f| f.degree() == 2 && !f.is_odd()));
    }

    #[test]
    fn face_walks_partition_darts() {
        let m = k4();
        let mut seen = vec![false; m.dart_count()];
        for f in m.faces() {
            for d in &f.darts {
                assert!(!seen[d.index()]);
                seen[d.index()] = true;
                assert_eq!(m.face_of(*d), f.id);
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
