//! Cycle parity through enclosed faces, T-joins and face-set transversals.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::ids::{EdgeId, FaceId, VertexId};
use crate::map::{FaceSet, PlanarMap, VertexSet};
use crate::util::DisjointSets;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParityError {
    #[error("not a simple cycle: {0}")]
    NotACycle(String),
    #[error("face set has odd cardinality {0}")]
    OddCardinality(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// A simple cycle: `edges[i]` joins `vertices[i]` and `vertices[i + 1]`
/// (cyclically).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleWalk {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl CycleWalk {
    pub fn new(
        map: &PlanarMap,
        vertices: Vec<VertexId>,
        edges: Vec<EdgeId>,
    ) -> Result<Self, ParityError> {
        let len = vertices.len();
        if len < 2 || edges.len() != len {
            return Err(ParityError::NotACycle(format!(
                "{} vertices and {} edges",
                len,
                edges.len()
            )));
        }
        if vertices.iter().any(|v| v.index() >= map.vertex_count())
            || edges.iter().any(|e| e.index() >= map.edge_count())
        {
            return Err(ParityError::NotACycle("element out of range".into()));
        }
        let distinct_v: BTreeSet<_> = vertices.iter().collect();
        let distinct_e: BTreeSet<_> = edges.iter().collect();
        if distinct_v.len() != len || distinct_e.len() != len {
            return Err(ParityError::NotACycle("repeated vertex or edge".into()));
        }
        for i in 0..len {
            let (a, b) = (vertices[i], vertices[(i + 1) % len]);
            let [x, y] = map.endpoints(edges[i]);
            if !((x == a && y == b) || (x == b && y == a)) {
                return Err(ParityError::NotACycle(format!(
                    "edge {} does not join {} and {}",
                    edges[i], a, b
                )));
            }
        }
        Ok(CycleWalk { vertices, edges })
    }

    /// Orders an edge set that forms a simple cycle.
    pub fn from_edges(map: &PlanarMap, edges: &[EdgeId]) -> Result<Self, ParityError> {
        if edges.len() < 2 {
            return Err(ParityError::NotACycle("fewer than two edges".into()));
        }
        let mut remaining: Vec<EdgeId> = edges.to_vec();
        let first = remaining.remove(0);
        let [start, mut current] = map.endpoints(first);
        let mut vertices = vec![start];
        let mut ordered = vec![first];
        while !remaining.is_empty() {
            let Some(i) = remaining.iter().position(|&e| map.endpoints(e).contains(&current)) else {
                return Err(ParityError::NotACycle("edge set is not connected".into()));
            };
            let e = remaining.remove(i);
            vertices.push(current);
            let [x, y] = map.endpoints(e);
            current = if x == current { y } else { x };
            ordered.push(e);
        }
        if current != start {
            return Err(ParityError::NotACycle("edge set does not close up".into()));
        }
        CycleWalk::new(map, vertices, ordered)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.edges.len() % 2 == 1
    }
}

/// Faces on the side of `cycle` that does not contain the canonical outer
/// face of its component.
pub fn enclosed_faces(map: &PlanarMap, cycle: &CycleWalk) -> FaceSet {
    let component = map.component_of(cycle.vertices[0]);
    let on_cycle: BTreeSet<EdgeId> = cycle.edges.iter().copied().collect();
    let mut outside = vec![false; map.face_count()];
    let outer = map.outer_face(component);
    outside[outer.index()] = true;
    let mut queue = VecDeque::from([outer]);
    while let Some(f) = queue.pop_front() {
        for &d in &map.face(f).darts {
            if on_cycle.contains(&d.edge()) {
                continue;
            }
            let g = map.face_of(d.twin());
            if !outside[g.index()] {
                outside[g.index()] = true;
                queue.push_back(g);
            }
        }
    }
    map.faces()
        .iter()
        .filter(|f| f.component == component && !outside[f.id.index()])
        .map(|f| f.id)
        .collect()
}

/// Parity of the number of odd faces inside `cycle`; `true` means odd.
pub fn cycle_parity_via_faces(map: &PlanarMap, cycle: &CycleWalk) -> bool {
    enclosed_faces(map, cycle)
        .iter()
        .filter(|f| map.face(**f).is_odd())
        .count()
        % 2
        == 1
}

/// `⊕_{F ∈ faces} E(F)`, sorted.
pub fn face_edge_sum(map: &PlanarMap, faces: &FaceSet) -> Vec<EdgeId> {
    let mut count = vec![0u8; map.edge_count()];
    for f in faces {
        for e in &map.face(*f).edges {
            count[e.index()] ^= 1;
        }
    }
    (0..map.edge_count())
        .filter(|&e| count[e] == 1)
        .map(EdgeId::new)
        .collect()
}

pub fn symmetric_difference<T: Ord + Copy>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> BTreeSet<T> {
    a.symmetric_difference(b).copied().collect()
}

/// A plain undirected multigraph on nodes `0..node_count`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AbstractGraph {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl AbstractGraph {
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>) -> Self {
        Self { node_count, edges }
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }
}

/// An edge set `J` whose odd-degree nodes are exactly `targets`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinSet {
    pub edges: BTreeSet<usize>,
    pub targets: BTreeSet<usize>,
}

impl JoinSet {
    pub fn is_valid(&self, graph: &AbstractGraph) -> bool {
        let mut degree = vec![0usize; graph.node_count];
        for &e in &self.edges {
            let Some(&(a, b)) = graph.edges.get(e) else {
                return false;
            };
            degree[a] += 1;
            degree[b] += 1;
        }
        (0..graph.node_count).all(|v| (degree[v] % 2 == 1) == self.targets.contains(&v))
    }
}

/// A `targets`-join of `graph`, or `None` when some component holds an odd
/// number of targets. Targets are paired in increasing order within each
/// component and joined along shortest paths, accumulating by symmetric
/// difference.
pub fn find_t_join(graph: &AbstractGraph, targets: &BTreeSet<usize>) -> Option<JoinSet> {
    let adj = graph.adjacency();
    let mut dsu = DisjointSets::new(graph.node_count);
    for &(a, b) in &graph.edges {
        dsu.union(a, b);
    }
    let mut by_component: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &t in targets {
        by_component.entry(dsu.find(t)).or_default().push(t);
    }
    if by_component.values().any(|ts| ts.len() % 2 == 1) {
        return None;
    }
    let mut parity = vec![false; graph.edges.len()];
    for ts in by_component.values() {
        for pair in ts.chunks(2) {
            for e in shortest_path_edges(&adj, pair[0], pair[1]) {
                parity[e] ^= true;
            }
        }
    }
    Some(JoinSet {
        edges: (0..graph.edges.len()).filter(|&e| parity[e]).collect(),
        targets: targets.clone(),
    })
}

fn shortest_path_edges(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<usize> {
    let mut pred = vec![usize::MAX; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                pred[w] = e;
                queue.push_back(w);
            }
        }
    }
    let mut out = Vec::new();
    let mut v = to;
    while v != from {
        let e = pred[v];
        out.push(e);
        v = adj[v].iter().find(|&&(_, x)| x == e).map(|&(w, _)| w).unwrap();
    }
    out
}

/// `vf(G)[F(G) ∪ T]` as an abstract graph: face `f` is node `f`, vertex `v`
/// of `T` is node `face_count + v`.
pub fn transversal_graph(map: &PlanarMap, transversal: &VertexSet) -> AbstractGraph {
    let fc = map.face_count();
    let mut edges = Vec::new();
    for &v in transversal {
        for f in map.faces_at(v) {
            edges.push((f.index(), fc + v.index()));
        }
    }
    AbstractGraph::new(fc + map.vertex_count(), edges)
}

/// Union-find over faces, merged through the vertices of `transversal`.
pub fn transversal_components(map: &PlanarMap, transversal: &VertexSet) -> DisjointSets {
    let mut dsu = DisjointSets::new(map.face_count());
    for &v in transversal {
        let faces = map.faces_at(v);
        for w in faces.windows(2) {
            dsu.union(w[0].index(), w[1].index());
        }
    }
    dsu
}

/// Whether every component of `vf(G)[F(G) ∪ T]` contains an even number of
/// faces of `faces`.
pub fn is_f_transversal(
    map: &PlanarMap,
    faces: &FaceSet,
    transversal: &VertexSet,
) -> Result<bool, ParityError> {
    if faces.len() % 2 == 1 {
        return Err(ParityError::OddCardinality(faces.len()));
    }
    Ok(odd_components(map, faces, transversal).is_empty())
}

/// Roots of the components of `vf(G)[F(G) ∪ T]` holding an odd number of
/// `faces`, each paired with the members of `faces` it contains.
pub fn odd_components(
    map: &PlanarMap,
    faces: &FaceSet,
    transversal: &VertexSet,
) -> Vec<(usize, Vec<FaceId>)> {
    let mut dsu = transversal_components(map, transversal);
    let mut groups: std::collections::BTreeMap<usize, Vec<FaceId>> = Default::default();
    for &f in faces {
        groups.entry(dsu.find(f.index())).or_default().push(f);
    }
    groups.into_iter().filter(|(_, g)| g.len() % 2 == 1).collect()
}

/// Whether `T` is an odd cycle transversal, by the odd-face criterion.
pub fn is_oct(map: &PlanarMap, transversal: &VertexSet) -> bool {
    odd_components(map, &map.odd_faces(), transversal).is_empty()
}

/// Whether `G - T` is bipartite, checked by two-colouring.
pub fn is_bipartite_without(map: &PlanarMap, removed: &VertexSet) -> bool {
    let n = map.vertex_count();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for s in map.vertices() {
        if removed.contains(&s) || colour[s.index()].is_some() {
            continue;
        }
        colour[s.index()] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let c = colour[v.index()].unwrap();
            for (w, _) in map.neighbors(v) {
                if removed.contains(&w) {
                    continue;
                }
                match colour[w.index()] {
                    None => {
                        colour[w.index()] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// `T1 ∪ T2`, an `(F1 ⊕ F2)`-transversal when `T1` is an `F1`-transversal
/// and `T2` an `F2`-transversal.
pub fn compose_transversals(
    map: &PlanarMap,
    faces1: &FaceSet,
    t1: &VertexSet,
    faces2: &FaceSet,
    t2: &VertexSet,
) -> Result<VertexSet, ParityError> {
    if !is_f_transversal(map, faces1, t1)? {
        return Err(ParityError::PreconditionViolated(
            "first set is not a transversal of its faces".into(),
        ));
    }
    if !is_f_transversal(map, faces2, t2)? {
        return Err(ParityError::PreconditionViolated(
            "second set is not a transversal of its faces".into(),
        ));
    }
    Ok(t1.union(t2).copied().collect())
}
