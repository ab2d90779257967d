//! Clouds of special faces and small transversals for face sets with
//! packing number one.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::ids::{FaceId, VertexId};
use crate::map::{FaceSet, PlanarMap, VertexSet};
use crate::util::DisjointSets;
use crate::vf::VfGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CloudError {
    #[error("odd face {0} is not special")]
    MissingOddFace(FaceId),
    #[error("faces {0} and {1} are vertex-disjoint")]
    PackingNotOne(FaceId, FaceId),
    #[error("face subset has odd cardinality {0}")]
    OddSubset(usize),
    #[error("face subset is not contained in the face set")]
    NotASubset,
    #[error("no vertex lies on four faces of a set of {0} pairwise intersecting faces")]
    NoHubVertex(usize),
    #[error("no good set of size at most two was found")]
    NoGoodSet,
}

/// A maximal set of special faces connected through shared vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cloud {
    pub faces: FaceSet,
    pub vertices: VertexSet,
    /// Spanning tree of `vf(G)[W ∪ V(W)]` as `(face, vertex)` edges.
    pub tree: Vec<(FaceId, VertexId)>,
}

impl Cloud {
    pub fn lowest_face(&self) -> FaceId {
        *self.faces.iter().next().expect("clouds are nonempty")
    }
}

/// Splits `special` into clouds, ordered by their lowest face.
pub fn cloud_decomposition(map: &PlanarMap, special: &FaceSet) -> Result<Vec<Cloud>, CloudError> {
    if let Some(f) = map.odd_faces().difference(special).next() {
        return Err(CloudError::MissingOddFace(*f));
    }
    let vf = VfGraph::new(map, Some(special));
    let fc = map.face_count();
    let mut seen_face = vec![false; fc];
    let mut seen_vertex = vec![false; map.vertex_count()];
    let mut clouds = Vec::new();
    for &root in special {
        if seen_face[root.index()] {
            continue;
        }
        let mut cloud = Cloud {
            faces: FaceSet::new(),
            vertices: VertexSet::new(),
            tree: Vec::new(),
        };
        seen_face[root.index()] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            cloud.faces.insert(f);
            for e in vf.at_face(f) {
                let v = e.vertex;
                if seen_vertex[v.index()] {
                    continue;
                }
                seen_vertex[v.index()] = true;
                cloud.vertices.insert(v);
                cloud.tree.push((f, v));
                for g in vf.at_vertex(v) {
                    if !seen_face[g.face.index()] {
                        seen_face[g.face.index()] = true;
                        cloud.tree.push((g.face, v));
                        queue.push_back(g.face);
                    }
                }
            }
        }
        clouds.push(cloud);
    }
    Ok(clouds)
}

/// The lexicographically first pair of vertex-disjoint faces, if any.
pub fn nu_exceeds_one(map: &PlanarMap, faces: &FaceSet) -> Option<(FaceId, FaceId)> {
    let list: Vec<FaceId> = faces.iter().copied().collect();
    for (i, &a) in list.iter().enumerate() {
        for &b in &list[i + 1..] {
            if !map.face(a).shares_vertex(map.face(b)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Whether `vf(G)[T ∪ F]` is connected.
pub fn is_good(map: &PlanarMap, faces: &FaceSet, set: &VertexSet) -> bool {
    if faces.is_empty() {
        return set.is_empty();
    }
    let fc = map.face_count();
    let mut dsu = DisjointSets::new(fc + map.vertex_count());
    for &v in set {
        let mut touched = false;
        for f in map.faces_at(v) {
            if faces.contains(f) {
                dsu.union(f.index(), fc + v.index());
                touched = true;
            }
        }
        if !touched {
            return false;
        }
    }
    let first = faces.iter().next().unwrap().index();
    faces.iter().all(|f| dsu.same(first, f.index()))
}

fn lowest_shared(map: &PlanarMap, a: FaceId, b: FaceId) -> Option<VertexId> {
    map.face(a).shared_vertices(map.face(b)).next()
}

/// A transversal of size at most two for an even subset `sub` of a face set
/// whose faces pairwise intersect. For five or more faces the result is good
/// for the whole set.
pub fn nu1_transversal(
    map: &PlanarMap,
    faces: &FaceSet,
    sub: &FaceSet,
) -> Result<VertexSet, CloudError> {
    if sub.len() % 2 == 1 {
        return Err(CloudError::OddSubset(sub.len()));
    }
    if !sub.is_subset(faces) {
        return Err(CloudError::NotASubset);
    }
    if let Some((a, b)) = nu_exceeds_one(map, faces) {
        return Err(CloudError::PackingNotOne(a, b));
    }
    if faces.len() <= 4 {
        let list: Vec<FaceId> = sub.iter().copied().collect();
        return Ok(list
            .chunks(2)
            .map(|p| lowest_shared(map, p[0], p[1]).expect("faces intersect"))
            .collect());
    }
    good_pair(map, faces)
}

/// A good set of at most two vertices for at least five pairwise
/// intersecting faces.
pub fn good_pair(map: &PlanarMap, faces: &FaceSet) -> Result<VertexSet, CloudError> {
    let vf = VfGraph::new(map, Some(faces));
    let hub = map
        .vertices()
        .find(|&v| vf.at_vertex(v).len() >= 4)
        .ok_or(CloudError::NoHubVertex(faces.len()))?;
    let around: Vec<FaceId> = vf.at_vertex(hub).iter().take(4).map(|e| e.face).collect();
    let good = |set: VertexSet| is_good(map, faces, &set).then_some(set);

    for i in 0..2 {
        let (a, b) = (around[i], around[i + 2]);
        if let Some(w) = map.face(a).shared_vertices(map.face(b)).find(|&w| w != hub) {
            return good(BTreeSet::from([hub, w])).ok_or(CloudError::NoGoodSet);
        }
    }
    if let Some(set) = good(BTreeSet::from([hub])) {
        return Ok(set);
    }
    let far = *faces
        .iter()
        .find(|f| !map.face(**f).contains_vertex(hub))
        .ok_or(CloudError::NoGoodSet)?;
    let meet: Vec<VertexId> = around
        .iter()
        .map(|&g| lowest_shared(map, far, g).expect("faces intersect"))
        .collect();
    for (x, y) in [(0, 2), (1, 3)] {
        let triple = [hub, meet[x], meet[y]];
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if let Some(set) = good(BTreeSet::from([triple[p], triple[q]])) {
                return Ok(set);
            }
        }
    }
    Err(CloudError::NoGoodSet)
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

    fn all(map: &PlanarMap) -> FaceSet {
        map.face_ids().collect()
    }

    #[test]
    fn k4_is_one_cloud() {
        let m = k4();
        let clouds = cloud_decomposition(&m, &all(&m)).unwrap();
        assert_eq!(clouds.len(), 1);
        assert_eq!(clouds[0].faces.len(), 4);
        assert_eq!(clouds[0].vertices.len(), 4);
        assert_eq!(nu_exceeds_one(&m, &all(&m)), None);
    }

    #[test]
    fn missing_odd_face() {
        let m = k4();
        let partial: FaceSet = [FaceId(0)].into();
        assert!(matches!(
            cloud_decomposition(&m, &partial),
            Err(CloudError::MissingOddFace(_))
        ));
    }

    #[test]
    fn k4_pairs() {
        let m = k4();
        let f = all(&m);
        for a in 0..4u32 {
            for b in a + 1..4 {
                let sub: FaceSet = [FaceId(a), FaceId(b)].into();
                let t = nu1_transversal(&m, &f, &sub).unwrap();
                assert_eq!(t.len(), 1);
                assert!(crate::parity::is_f_transversal(&m, &sub, &t).unwrap());
            }
        }
        assert_eq!(
            nu1_transversal(&m, &f, &[FaceId(0)].into()),
            Err(CloudError::OddSubset(1))
        );
    }

    #[test]
    fn good_sets() {
        let m = k4();
        let f = all(&m);
        assert!(is_good(&m, &f, &[VertexId(0), VertexId(1)].into()));
        assert!(!is_good(&m, &f, &[VertexId(0)].into()));
    }
}
