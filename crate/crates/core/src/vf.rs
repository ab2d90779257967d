//! The embedded vertex-face incidence graph.

use crate::ids::{DartId, FaceId, VertexId};
use crate::map::{FaceSet, PlanarMap};
use crate::util::DisjointSets;

/// An edge `{v, F}` of the incidence graph, drawn inside `F` to the corner
/// of `v` that follows `anchor` counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VfEdge {
    pub vertex: VertexId,
    pub face: FaceId,
    /// `None` only for the face around an isolated vertex.
    pub anchor: Option<DartId>,
}

/// Bipartite incidence graph on `faces ∪ V(G)`, optionally restricted to a
/// subset of the faces. All vertices of the map are always present.
#[derive(Debug, Clone)]
pub struct VfGraph {
    face_count: usize,
    included: Vec<bool>,
    around_vertex: Vec<Vec<VfEdge>>,
    around_face: Vec<Vec<VfEdge>>,
}

impl VfGraph {
    pub fn new(map: &PlanarMap, restrict: Option<&FaceSet>) -> Self {
        let face_count = map.face_count();
        let included: Vec<bool> = match restrict {
            None => vec![true; face_count],
            Some(set) => {
                let mut inc = vec![false; face_count];
                for f in set {
                    inc[f.index()] = true;
                }
                inc
            }
        };
        let mut around_vertex = vec![Vec::new(); map.vertex_count()];
        for v in map.vertices() {
            let order = &mut around_vertex[v.index()];
            if map.degree(v) == 0 {
                let f = map.faces_at(v)[0];
                if included[f.index()] {
                    order.push(VfEdge {
                        vertex: v,
                        face: f,
                        anchor: None,
                    });
                }
                continue;
            }
            for d in map.canonical_rotation(v) {
                let f = map.face_of(d);
                if included[f.index()] && !order.iter().any(|e: &VfEdge| e.face == f) {
                    order.push(VfEdge {
                        vertex: v,
                        face: f,
                        anchor: Some(d),
                    });
                }
            }
        }
        let mut around_face = vec![Vec::new(); face_count];
        for face in map.faces() {
            if !included[face.id.index()] {
                continue;
            }
            let list = &mut around_face[face.id.index()];
            if face.darts.is_empty() {
                list.push(VfEdge {
                    vertex: face.vertices[0],
                    face: face.id,
                    anchor: None,
                });
                continue;
            }
            for &d in &face.darts {
                let v = map.tail(d);
                let anchored = around_vertex[v.index()]
                    .iter()
                    .any(|e| e.face == face.id && e.anchor == Some(d));
                if anchored {
                    list.push(VfEdge {
                        vertex: v,
                        face: face.id,
                        anchor: Some(d),
                    });
                }
            }
        }
        VfGraph {
            face_count,
            included,
            around_vertex,
            around_face,
        }
    }

    pub fn contains_face(&self, f: FaceId) -> bool {
        self.included[f.index()]
    }

    pub fn face_nodes(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.face_count)
            .filter(|&i| self.included[i])
            .map(FaceId::new)
    }

    pub fn face_node_count(&self) -> usize {
        self.included.iter().filter(|&&b| b).count()
    }

    pub fn vertex_node_count(&self) -> usize {
        self.around_vertex.len()
    }

    pub fn edge_count(&self) -> usize {
        self.around_vertex.iter().map(Vec::len).sum()
    }

    /// Incident vf-edges of `v` in counterclockwise order, starting from the
    /// lowest dart of `v`.
    pub fn at_vertex(&self, v: VertexId) -> &[VfEdge] {
        &self.around_vertex[v.index()]
    }

    /// Incident vf-edges of face node `f` in boundary-walk order.
    pub fn at_face(&self, f: FaceId) -> &[VfEdge] {
        &self.around_face[f.index()]
    }

    pub fn anchor(&self, v: VertexId, f: FaceId) -> Option<DartId> {
        self.around_vertex[v.index()]
            .iter()
            .find(|e| e.face == f)
            .and_then(|e| e.anchor)
    }

    pub fn edges(&self) -> impl Iterator<Item = VfEdge> + '_ {
        self.around_vertex.iter().flatten().copied()
    }

    /// Connected components over all nodes. Face `f` is node `f`, vertex `v`
    /// is node `face_count + v`; excluded faces are singleton components.
    pub fn components(&self) -> DisjointSets {
        let mut dsu = DisjointSets::new(self.face_count + self.around_vertex.len());
        for e in self.edges() {
            dsu.union(e.face.index(), self.face_count + e.vertex.index());
        }
        dsu
    }

    /// Whether the graph on included faces and all vertices is connected.
    pub fn is_connected(&self) -> bool {
        let mut dsu = self.components();
        let mut nodes = self
            .face_nodes()
            .map(|f| f.index())
            .chain((0..self.around_vertex.len()).map(|v| self.face_count + v));
        let Some(first) = nodes.next() else {
            return true;
        };
        let root = dsu.find(first);
        nodes.all(|n| dsu.find(n) == root)
    }
}

/// Builds `vf(G)`, or `vf(G)[faces ∪ V(G)]` when `restrict` is given.
pub fn vf_graph(map: &PlanarMap, restrict: Option<&FaceSet>) -> VfGraph {
    VfGraph::new(map, restrict)
}
