//! Merging faces by vertex splits, with the correspondences needed to lift
//! transversals back to the original map.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::ids::{DartId, EdgeId, FaceId, VertexId};
use crate::map::{FaceSet, MapError, PlanarMap, VertexSet};
use crate::parity::{odd_components, symmetric_difference};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("vertex {vertex} is not on both faces {f1} and {f2}")]
    NotSharedVertex {
        f1: FaceId,
        f2: FaceId,
        vertex: VertexId,
    },
    #[error("cannot merge face {0} with itself")]
    SameFace(FaceId),
    #[error("angle {j} at {vertex} does not belong to the expected face")]
    BadAngle { vertex: VertexId, j: usize },
    #[error("face set is not connected through shared vertices")]
    DisconnectedFaceSet,
    #[error("vertex {0} is not in the merged map")]
    UnknownVertex(VertexId),
    #[error("a component with an odd number of odd faces avoids the merged faces")]
    ResidualParityFailure,
    #[error(transparent)]
    Map(#[from] MapError),
}

/// One vertex split. Angle `j` at `v` lies between the `j`-th and the
/// `(j+1)`-th dart counterclockwise from the lowest dart at `v`, so
/// `1 <= j1 < j2 <= deg(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeStep {
    pub f1: FaceId,
    pub f2: FaceId,
    pub vertex: VertexId,
    pub j1: usize,
    pub j2: usize,
    /// `v'`, which receives the darts strictly after angle `j1` up to angle
    /// `j2`. `v''` keeps the id of `v`.
    pub new_vertex: VertexId,
    /// Id of the merged face in the resulting map.
    pub merged: FaceId,
}

/// Angles at `v` as `(j, face)`, `j` counted from 1.
pub fn angles(map: &PlanarMap, v: VertexId) -> Vec<(usize, FaceId)> {
    map.canonical_rotation(v)
        .enumerate()
        .map(|(i, d)| (i + 1, map.face_of(d)))
        .collect()
}

/// Splits `v` so that the angles `j1` (of `f1`) and `j2` (of `f2`) join.
pub fn merge_two_faces_at(
    map: &PlanarMap,
    f1: FaceId,
    f2: FaceId,
    v: VertexId,
    j1: usize,
    j2: usize,
) -> Result<(PlanarMap, MergeStep), SurgeryError> {
    if f1 == f2 {
        return Err(SurgeryError::SameFace(f1));
    }
    let darts: Vec<DartId> = map.canonical_rotation(v).collect();
    let k = darts.len();
    let face_at = |j: usize| (1..=k).contains(&j).then(|| map.face_of(darts[j - 1]));
    let (lo, hi) = (j1.min(j2), j1.max(j2));
    for j in [lo, hi] {
        let f = face_at(j);
        if f != Some(f1) && f != Some(f2) || (lo == hi) {
            return Err(SurgeryError::BadAngle { vertex: v, j });
        }
    }
    if face_at(lo) == face_at(hi) {
        return Err(SurgeryError::BadAngle { vertex: v, j: hi });
    }
    let moved: Vec<DartId> = darts[lo..hi].to_vec();
    let kept: Vec<DartId> = darts[..lo].iter().chain(&darts[hi..]).copied().collect();
    let n = map.vertex_count();
    let new_vertex = VertexId::new(n);
    let mut edges = map.edges().to_vec();
    for d in &moved {
        edges[d.edge().index()][d.side()] = new_vertex;
    }
    let mut rotation: Vec<Vec<DartId>> = map.vertices().map(|w| map.rotation(w).to_vec()).collect();
    rotation[v.index()] = kept;
    rotation.push(moved);
    let merged_map = PlanarMap::from_darts(n + 1, edges, rotation)?;
    let merged = merged_map.face_of(darts[lo - 1]);
    Ok((
        merged_map,
        MergeStep {
            f1,
            f2,
            vertex: v,
            j1: lo,
            j2: hi,
            new_vertex,
            merged,
        },
    ))
}

/// Merges `f1` and `f2` along `v`, taking `j1` as the first angle of either
/// face and `j2` as the next angle of the other face.
pub fn merge_two_faces(
    map: &PlanarMap,
    f1: FaceId,
    f2: FaceId,
    v: VertexId,
) -> Result<(PlanarMap, MergeStep), SurgeryError> {
    if f1 == f2 {
        return Err(SurgeryError::SameFace(f1));
    }
    let ang = angles(map, v);
    let (j1, first) = ang
        .iter()
        .copied()
        .find(|(_, f)| *f == f1 || *f == f2)
        .ok_or(SurgeryError::NotSharedVertex { f1, f2, vertex: v })?;
    let other = if first == f1 { f2 } else { f1 };
    let (j2, _) = ang
        .iter()
        .copied()
        .find(|&(j, f)| j > j1 && f == other)
        .ok_or(SurgeryError::NotSharedVertex { f1, f2, vertex: v })?;
    merge_two_faces_at(map, f1, f2, v, j1, j2)
}

/// Whether a merge step removed exactly one face and the merged face has
/// `E(F) = E(F1) ⊕ E(F2)`, other faces keeping their boundaries.
pub fn merge_step_conserves(before: &PlanarMap, after: &PlanarMap, step: &MergeStep) -> bool {
    if after.face_count() + 1 != before.face_count() {
        return false;
    }
    let set = |m: &PlanarMap, f: FaceId| m.face(f).edges.iter().copied().collect::<BTreeSet<EdgeId>>();
    let expected = symmetric_difference(&set(before, step.f1), &set(before, step.f2));
    if set(after, step.merged) != expected {
        return false;
    }
    before.faces().iter().all(|f| {
        if f.id == step.f1 || f.id == step.f2 || f.darts.is_empty() {
            return true;
        }
        let g = after.face_of(f.darts[0]);
        after.face(g).darts == f.darts
    })
}

/// The result of merging one or more connected face sets.
#[derive(Debug, Clone)]
pub struct MergeTrace {
    pub steps: Vec<MergeStep>,
    /// Vertex of the merged map -> vertex of the original map.
    pub vertex_origin: Vec<VertexId>,
    /// Face of the merged map -> the original faces it replaces.
    pub face_origin: Vec<FaceSet>,
    /// Merged face of each input set, in the resulting map.
    pub merged_faces: Vec<FaceId>,
    /// Splits that had to separate protected faces meeting at the split
    /// vertex.
    pub unprotected_splits: usize,
}

impl MergeTrace {
    pub fn lift_vertex(&self, v: VertexId) -> Result<VertexId, SurgeryError> {
        self.vertex_origin
            .get(v.index())
            .copied()
            .ok_or(SurgeryError::UnknownVertex(v))
    }

    /// Images of `T` under the vertex correspondence.
    pub fn lift_vertices(&self, set: &VertexSet) -> Result<VertexSet, SurgeryError> {
        set.iter().map(|&v| self.lift_vertex(v)).collect()
    }

    /// The original face behind an unmerged face of the merged map.
    pub fn original_face(&self, f: FaceId) -> FaceId {
        *self.face_origin[f.index()].iter().next().expect("faces have origins")
    }
}

/// Face of `map` holding the boundary of `face` of `original`, tracked by a
/// dart for faces with darts and by the vertex otherwise.
fn locate(map: &PlanarMap, original: &PlanarMap, face: FaceId) -> FaceId {
    let f = original.face(face);
    match f.darts.first() {
        Some(&d) => map.face_of(d),
        None => map.faces_at(f.vertices[0])[0],
    }
}

/// Angle pairs `(j1, j2)` at `v` joining `f1` and `f2`, in the order
/// `merge_two_faces` prefers them.
fn angle_pairs(map: &PlanarMap, f1: FaceId, f2: FaceId, v: VertexId) -> Vec<(usize, usize)> {
    let ang = angles(map, v);
    let mut out = Vec::new();
    for &(j1, a) in &ang {
        if a != f1 && a != f2 {
            continue;
        }
        let other = if a == f1 { f2 } else { f1 };
        for &(j2, b) in &ang {
            if j2 > j1 && b == other {
                out.push((j1, j2));
            }
        }
    }
    out
}

/// Whether splitting `v` at angles `j1 < j2` keeps the faces of `protect`
/// lying at `v` on a common copy of `v` (or leaves just one such face).
fn split_keeps_together(map: &PlanarMap, v: VertexId, j1: usize, j2: usize, protect: &FaceSet) -> bool {
    let mut inside = BTreeSet::new();
    let mut outside = BTreeSet::new();
    for (j, f) in angles(map, v) {
        if j == j1 || j == j2 || !protect.contains(&f) {
            continue;
        }
        if j > j1 && j < j2 {
            inside.insert(f);
        } else {
            outside.insert(f);
        }
    }
    inside.is_empty() || outside.is_empty() || inside.union(&outside).count() == 1
}

/// Merges each set of `sets` into one face. Sets must be pairwise
/// vertex-disjoint and each connected in the incidence graph.
///
/// Each step joins two faces of the set that are still separate, trying
/// pairs in breadth-first order from the lowest face, then their shared
/// vertices and angle pairs in increasing order. The first candidate whose
/// split keeps the faces of `protect` at the split vertex on one copy of it
/// is taken; `MergeTrace::unprotected_splits` counts the steps where none
/// does. `on_step` sees every split with the maps before and after it.
pub fn merge_face_sets_with(
    map: &PlanarMap,
    sets: &[FaceSet],
    protect: &FaceSet,
    mut on_step: impl FnMut(&PlanarMap, &PlanarMap, &MergeStep),
) -> Result<(PlanarMap, MergeTrace), SurgeryError> {
    let mut current = map.clone();
    let mut origin: Vec<VertexId> = map.vertices().collect();
    let mut steps = Vec::new();
    let mut anchors = Vec::new();
    let mut unprotected = 0;
    for set in sets {
        let order = bfs_order(map, set)?;
        anchors.push(order[0]);
        loop {
            let mut pieces: Vec<FaceId> = Vec::new();
            for &f in &order {
                let here = locate(&current, map, f);
                if !pieces.contains(&here) {
                    pieces.push(here);
                }
            }
            if pieces.len() < 2 {
                break;
            }
            let guarded: FaceSet = protect
                .iter()
                .filter(|f| !set.contains(f))
                .map(|&f| locate(&current, map, f))
                .collect();
            let pairs = (0..pieces.len()).flat_map(|i| (i + 1..pieces.len()).map(move |k| (i, k)));
            let mut fallback = None;
            let mut chosen = None;
            'search: for (i, k) in pairs {
                let (f1, f2) = (pieces[i], pieces[k]);
                for v in current.face(f1).shared_vertices(current.face(f2)) {
                    for (j1, j2) in angle_pairs(&current, f1, f2, v) {
                        fallback.get_or_insert((f1, f2, v, j1, j2));
                        if split_keeps_together(&current, v, j1, j2, &guarded) {
                            chosen = Some((f1, f2, v, j1, j2));
                            break 'search;
                        }
                    }
                }
            }
            if chosen.is_none() {
                unprotected += usize::from(fallback.is_some());
            }
            let (f1, f2, v, j1, j2) = chosen.or(fallback).ok_or(SurgeryError::DisconnectedFaceSet)?;
            let (after, step) = merge_two_faces_at(&current, f1, f2, v, j1, j2)?;
            on_step(&current, &after, &step);
            origin.push(origin[v.index()]);
            steps.push(step);
            current = after;
        }
    }
    let mut face_origin = vec![FaceSet::new(); current.face_count()];
    for f in map.faces() {
        face_origin[locate(&current, map, f.id).index()].insert(f.id);
    }
    let merged_faces = anchors.iter().map(|&f| locate(&current, map, f)).collect();
    Ok((
        current,
        MergeTrace {
            steps,
            vertex_origin: origin,
            face_origin,
            merged_faces,
            unprotected_splits: unprotected,
        },
    ))
}

pub fn merge_face_sets(map: &PlanarMap, sets: &[FaceSet]) -> Result<(PlanarMap, MergeTrace), SurgeryError> {
    merge_face_sets_with(map, sets, &FaceSet::new(), |_, _, _| {})
}

pub fn merge_face_set(map: &PlanarMap, set: &FaceSet) -> Result<(PlanarMap, MergeTrace), SurgeryError> {
    merge_face_sets(map, std::slice::from_ref(set))
}

/// Faces of `set` in breadth-first order from the lowest one, adjacency
/// being a shared vertex.
fn bfs_order(map: &PlanarMap, set: &FaceSet) -> Result<Vec<FaceId>, SurgeryError> {
    let Some(&root) = set.iter().next() else {
        return Ok(Vec::new());
    };
    let mut seen = BTreeSet::from([root]);
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &v in &map.face(f).vertices {
            for g in map.faces_at(v) {
                if set.contains(g) && seen.insert(*g) {
                    order.push(*g);
                    queue.push_back(*g);
                }
            }
        }
    }
    if order.len() != set.len() {
        return Err(SurgeryError::DisconnectedFaceSet);
    }
    Ok(order)
}

/// One face of `merged` from each component of `vf(G)[F(G) ∪ T]` holding an
/// odd number of odd faces. `T` is then an `(F_odd ⊕ F')`-transversal.
pub fn residual_face_set(
    map: &PlanarMap,
    merged: &FaceSet,
    transversal: &VertexSet,
) -> Result<FaceSet, SurgeryError> {
    let mut out = FaceSet::new();
    let mut dsu = crate::parity::transversal_components(map, transversal);
    let mut lowest: BTreeMap<usize, FaceId> = BTreeMap::new();
    for &f in merged {
        lowest.entry(dsu.find(f.index())).or_insert(f);
    }
    for (root, _) in odd_components(map, &map.odd_faces(), transversal) {
        match lowest.get(&root) {
            Some(&f) => {
                out.insert(f);
            }
            None => return Err(SurgeryError::ResidualParityFailure),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::map_from_lists;

    fn bowtie() -> PlanarMap {
        map_from_lists(
            5,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)],
            &[&[0, 2, 3, 5], &[1, 0], &[2, 1], &[4, 3], &[5, 4]],
        )
        .unwrap()
    }

    #[test]
    fn two_triangles_at_a_vertex() {
        let m = bowtie();
        let tri: Vec<FaceId> = m.faces().iter().filter(|f| f.degree() == 3).map(|f| f.id).collect();
        let (after, step) = merge_two_faces(&m, tri[0], tri[1], VertexId(0)).unwrap();
        assert_eq!(after.face_count(), m.face_count() - 1);
        assert_eq!(after.face(step.merged).degree(), 6);
        assert!(merge_step_conserves(&m, &after, &step));
        assert_eq!(after.vertex_count(), 6);
    }

    #[test]
    fn errors() {
        let m = bowtie();
        assert_eq!(
            merge_two_faces(&m, FaceId(0), FaceId(0), VertexId(0)).unwrap_err(),
            SurgeryError::SameFace(FaceId(0))
        );
        let tri: Vec<FaceId> = m.faces().iter().filter(|f| f.degree() == 3).map(|f| f.id).collect();
        assert!(matches!(
            merge_two_faces(&m, tri[0], tri[1], VertexId(1)),
            Err(SurgeryError::NotSharedVertex { .. })
        ));
    }

    #[test]
    fn lifting_collapses_copies() {
        let m = bowtie();
        let set: FaceSet = m.faces().iter().filter(|f| f.degree() == 3).map(|f| f.id).collect();
        let (after, trace) = merge_face_set(&m, &set).unwrap();
        assert_eq!(after.face_count(), 2);
        assert_eq!(trace.steps.len(), 1);
        let copies: VertexSet = [VertexId(0), VertexId(5)].into();
        assert_eq!(trace.lift_vertices(&copies).unwrap(), [VertexId(0)].into());
        assert!(trace.lift_vertices(&VertexSet::new()).unwrap().is_empty());
        assert_eq!(trace.face_origin[trace.merged_faces[0].index()], set);
        // The merged face is even, so the empty set is an OCT of the result
        // and both triangles must be paired up again.
        let residual = residual_face_set(&m, &set, &VertexSet::new()).unwrap();
        assert_eq!(residual.len(), 2);
    }
}
