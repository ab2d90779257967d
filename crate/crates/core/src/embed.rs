//! Planar embedding by path addition.
//!
//! Each biconnected block is embedded on its own: start from a cycle, then
//! repeatedly pick a fragment (a chord, or a component of the unembedded
//! part together with its attachment edges), choose a face containing all
//! of its attachment vertices, preferring fragments with a single admissible
//! face, and route one attachment-to-attachment path of the fragment through
//! that face. A fragment with no admissible face certifies non-planarity.
//! Blocks are glued at cut vertices by concatenating their rotations.

use crate::ids::{DartId, EdgeId, VertexId};
use crate::map::{MapError, PlanarMap};

/// Computes a counterclockwise dart rotation for a loopless planar graph.
pub fn embed_planar(
    vertex_count: usize,
    edges: &[[VertexId; 2]],
) -> Result<Vec<Vec<DartId>>, MapError> {
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            if v.index() >= vertex_count {
                return Err(MapError::UnknownVertex {
                    edge: EdgeId::new(i),
                    vertex: v,
                    vertex_count,
                });
            }
        }
        if e[0] == e[1] {
            return Err(MapError::SelfLoop {
                edge: EdgeId::new(i),
                vertex: e[0],
            });
        }
    }
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    for (i, e) in edges.iter().enumerate() {
        adjacency[e[0].index()].push((e[1].index(), i));
        adjacency[e[1].index()].push((e[0].index(), i));
    }
    let mut rotation: Vec<Vec<DartId>> = vec![Vec::new(); vertex_count];
    for block in biconnected_blocks(&adjacency) {
        let sigma = if block.len() == 1 {
            Vec::new()
        } else {
            embed_block(edges, &block)?
        };
        // Splice the block's rotation at each of its vertices.
        let mut block_vertices: Vec<usize> = block
            .iter()
            .flat_map(|&e| [edges[e][0].index(), edges[e][1].index()])
            .collect();
        block_vertices.sort_unstable();
        block_vertices.dedup();
        for v in block_vertices {
            let mut local: Vec<DartId> = block
                .iter()
                .flat_map(|&e| {
                    let e = EdgeId::new(e);
                    [e.dart(0), e.dart(1)]
                })
                .filter(|&d| edges[d.edge().index()][d.side()].index() == v)
                .collect();
            local.sort_unstable();
            if block.len() > 1 {
                let start = local[0];
                let mut order = vec![start];
                let mut d = next_in(&sigma, start);
                while d != start {
                    order.push(d);
                    d = next_in(&sigma, d);
                }
                debug_assert_eq!(order.len(), local.len());
                local = order;
            }
            rotation[v].extend(local);
        }
    }
    // Euler check guards the whole construction.
    PlanarMap::from_darts(vertex_count, edges.to_vec(), rotation.clone())?;
    Ok(rotation)
}

fn next_in(sigma: &[(DartId, DartId)], d: DartId) -> DartId {
    let i = sigma
        .binary_search_by_key(&d, |p| p.0)
        .expect("dart missing from block rotation");
    sigma[i].1
}

/// Edge sets of the biconnected blocks, via an iterative Tarjan traversal.
fn biconnected_blocks(adjacency: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let unset = usize::MAX;
    let mut disc = vec![unset; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    // (vertex, edge to parent, next adjacency index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != unset || adjacency[root].is_empty() {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, unset, 0));
        while let Some(&mut (v, parent_edge, ref mut next)) = stack.last_mut() {
            if *next < adjacency[v].len() {
                let (w, e) = adjacency[v][*next];
                *next += 1;
                if e == parent_edge {
                    continue;
                }
                if disc[w] == unset {
                    edge_stack.push(e);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == parent_edge {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Embeds one biconnected block with at least two edges. Returns the
/// counterclockwise successor of every block dart, sorted by dart.
fn embed_block(edges: &[[VertexId; 2]], block: &[usize]) -> Result<Vec<(DartId, DartId)>, MapError> {
    let n = edges.len();
    let vertex_limit = block
        .iter()
        .map(|&e| edges[e][0].index().max(edges[e][1].index()))
        .max()
        .unwrap_or(0)
        + 1;
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_limit];
    for &e in block {
        let [a, b] = edges[e];
        adjacency[a.index()].push((b.index(), e));
        adjacency[b.index()].push((a.index(), e));
    }
    let tail = |d: DartId| edges[d.edge().index()][d.side()].index();

    let mut edge_done = vec![false; n];
    let mut vertex_done = vec![false; vertex_limit];

    // Initial cycle through the lowest block edge.
    let first = block[0];
    let [a, b] = [edges[first][0].index(), edges[first][1].index()];
    let path = bfs_path(&adjacency, edges, b, a, first).expect("block edge lies on a cycle");
    let mut cycle = vec![EdgeId::new(first).dart(0)];
    cycle.extend(path);
    for d in &cycle {
        edge_done[d.edge().index()] = true;
        vertex_done[tail(*d)] = true;
    }
    let reverse: Vec<DartId> = cycle.iter().rev().map(|d| d.twin()).collect();
    let mut faces: Vec<Vec<DartId>> = vec![cycle, reverse];
    let mut remaining = block.len() - faces[0].len();

    while remaining > 0 {
        let fragments = fragments(&adjacency, block, &edge_done, &vertex_done, edges);
        let face_sets: Vec<Vec<bool>> = faces
            .iter()
            .map(|f| {
                let mut on = vec![false; vertex_limit];
                for &d in f {
                    on[tail(d)] = true;
                }
                on
            })
            .collect();
        let mut choice: Option<(usize, usize)> = None;
        for (i, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|&v| face_sets[f][v]))
                .collect();
            match admissible.len() {
                0 => return Err(MapError::NonPlanarInput),
                1 => {
                    choice = Some((i, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((i, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_index) = choice.expect("at least one fragment remains");
        let path = fragment_path(&adjacency, &fragments[fi], &edge_done, &vertex_done, edges);
        let start = tail(path[0]);
        let end = tail(path[path.len() - 1].twin());
        let face = &faces[face_index];
        let ia = face.iter().position(|&d| tail(d) == start).expect("attachment on face");
        let ib = face.iter().position(|&d| tail(d) == end).expect("attachment on face");
        let len = face.len();
        let arc = |from: usize, to: usize| -> Vec<DartId> {
            let mut out = Vec::new();
            let mut i = from;
            while i != to {
                out.push(face[i]);
                i = (i + 1) % len;
            }
            out
        };
        let mut first_face = arc(ia, ib);
        first_face.extend(path.iter().rev().map(|d| d.twin()));
        let mut second_face = arc(ib, ia);
        second_face.extend(path.iter().copied());
        faces[face_index] = first_face;
        faces.push(second_face);
        for d in &path {
            edge_done[d.edge().index()] = true;
            vertex_done[tail(*d)] = true;
        }
        remaining -= path.len();
    }

    let mut sigma = Vec::with_capacity(block.len() * 2);
    for face in &faces {
        for i in 0..face.len() {
            let prev = face[i];
            let next = face[(i + 1) % face.len()];
            sigma.push((next, prev.twin()));
        }
    }
    sigma.sort_unstable();
    Ok(sigma)
}

/// Darts of a shortest path from `from` to `to` avoiding edge `skip`.
fn bfs_path(
    adjacency: &[Vec<(usize, usize)>],
    edges: &[[VertexId; 2]],
    from: usize,
    to: usize,
    skip: usize,
) -> Option<Vec<DartId>> {
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; adjacency.len()];
    let mut seen = vec![false; adjacency.len()];
    let mut queue = std::collections::VecDeque::new();
    seen[from] = true;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(w, e) in &adjacency[v] {
            if e != skip && !seen[w] {
                seen[w] = true;
                pred[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut darts = Vec::new();
    let mut v = to;
    while v != from {
        let (u, e) = pred[v].expect("predecessor");
        let side = if edges[e][0].index() == u { 0 } else { 1 };
        darts.push(EdgeId::new(e).dart(side));
        v = u;
    }
    darts.reverse();
    Some(darts)
}

struct Fragment {
    /// Unembedded vertices of the fragment; empty for a chord.
    interior: Vec<usize>,
    chord: Option<usize>,
    attachments: Vec<usize>,
}

fn fragments(
    adjacency: &[Vec<(usize, usize)>],
    block: &[usize],
    edge_done: &[bool],
    vertex_done: &[bool],
    edges: &[[VertexId; 2]],
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &e in block {
        if edge_done[e] {
            continue;
        }
        let [a, b] = [edges[e][0].index(), edges[e][1].index()];
        if vertex_done[a] && vertex_done[b] {
            let mut att = vec![a, b];
            att.sort_unstable();
            out.push(Fragment {
                interior: Vec::new(),
                chord: Some(e),
                attachments: att,
            });
        }
    }
    let mut seen = vec![false; adjacency.len()];
    for start in 0..adjacency.len() {
        if vertex_done[start] || seen[start] || adjacency[start].is_empty() {
            continue;
        }
        let mut interior = vec![start];
        let mut attachments = Vec::new();
        seen[start] = true;
        let mut i = 0;
        while i < interior.len() {
            let v = interior[i];
            i += 1;
            for &(w, _) in &adjacency[v] {
                if vertex_done[w] {
                    attachments.push(w);
                } else if !seen[w] {
                    seen[w] = true;
                    interior.push(w);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Fragment {
            interior,
            chord: None,
            attachments,
        });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices,
/// as darts oriented from the first attachment.
fn fragment_path(
    adjacency: &[Vec<(usize, usize)>],
    frag: &Fragment,
    edge_done: &[bool],
    vertex_done: &[bool],
    edges: &[[VertexId; 2]],
) -> Vec<DartId> {
    let oriented = |e: usize, from: usize| -> DartId {
        let side = if edges[e][0].index() == from { 0 } else { 1 };
        EdgeId::new(e).dart(side)
    };
    if let Some(e) = frag.chord {
        return vec![oriented(e, frag.attachments[0])];
    }
    let a = frag.attachments[0];
    let mut in_frag = vec![false; adjacency.len()];
    for &v in &frag.interior {
        in_frag[v] = true;
    }
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; adjacency.len()];
    let mut queue = std::collections::VecDeque::new();
    for &(w, e) in &adjacency[a] {
        if in_frag[w] && !edge_done[e] && pred[w].is_none() {
            pred[w] = Some((a, e));
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adjacency[v] {
            if edge_done[e] {
                continue;
            }
            if vertex_done[w] && w != a {
                let mut darts = vec![oriented(e, v)];
                let mut x = v;
                while x != a {
                    let (u, pe) = pred[x].expect("predecessor");
                    darts.push(oriented(pe, u));
                    x = u;
                }
                darts.reverse();
                return darts;
            }
            if in_frag[w] && pred[w].is_none() {
                pred[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment in a biconnected block has two attachments")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(list: &[(usize, usize)]) -> Vec<[VertexId; 2]> {
        list.iter()
            .map(|&(u, v)| [VertexId::new(u), VertexId::new(v)])
            .collect()
    }

    fn complete(n: usize) -> Vec<[VertexId; 2]> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push([VertexId::new(i), VertexId::new(j)]);
            }
        }
        out
    }

    #[test]
    fn k4_embeds_with_four_faces() {
        let e = complete(4);
        let rot = embed_planar(4, &e).unwrap();
        let m = PlanarMap::from_darts(4, e, rot).unwrap();
        assert_eq!(m.face_count(), 4);
    }

    #[test]
    fn k5_and_k33_are_rejected() {
        assert_eq!(embed_planar(5, &complete(5)), Err(MapError::NonPlanarInput));
        let mut k33 = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                k33.push((i, j));
            }
        }
        assert_eq!(embed_planar(6, &edges(&k33)), Err(MapError::NonPlanarInput));
    }

    #[test]
    fn trees_have_one_face_per_component() {
        let e = edges(&[(0, 1), (1, 2), (1, 3), (4, 5)]);
        let rot = embed_planar(7, &e).unwrap();
        let m = PlanarMap::from_darts(7, e, rot).unwrap();
        assert_eq!(m.component_count(), 3);
        assert_eq!(m.face_count(), 3);
    }

    #[test]
    fn octahedron_and_parallel_edges() {
        // Octahedron: all pairs except antipodal ones (0,5), (1,3), (2,4).
        let mut e = complete(6);
        e.retain(|p| {
            let (a, b) = (p[0].index(), p[1].index());
            !matches!((a, b), (0, 5) | (1, 3) | (2, 4))
        });
        let rot = embed_planar(6, &e).unwrap();
        let m = PlanarMap::from_darts(6, e, rot).unwrap();
        assert_eq!(m.face_count(), 8);

        let e = edges(&[(0, 1), (0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let rot = embed_planar(5, &e).unwrap();
        let m = PlanarMap::from_darts(5, e, rot).unwrap();
        assert_eq!(m.face_count(), 2 + 7 - 5);
    }
}
