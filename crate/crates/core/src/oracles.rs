//! Exhaustive reference computations for small maps.
//!
//! Nothing here depends on the solver. Cycles are enumerated by depth-first
//! search from their lowest vertex; packings by branch and bound over the
//! enumerated odd cycles; transversals by trying vertex subsets of
//! increasing size.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::ids::{EdgeId, VertexId};
use crate::map::{FaceSet, PlanarMap, VertexSet};
use crate::parity::{is_bipartite_without, is_f_transversal, CycleWalk, ParityError};

pub const DEFAULT_VERTEX_BOUND: usize = 14;
pub const DEFAULT_CYCLE_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("map has {vertices} vertices, oracle bound is {bound}")]
    TooLarge { vertices: usize, bound: usize },
    #[error("more than {0} cycles")]
    TooManyCycles(usize),
    #[error(transparent)]
    Parity(#[from] ParityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Packing(Vec<CycleWalk>),
    Transversal(VertexSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub value: usize,
    pub witness: Witness,
    pub stats: SearchStats,
}

/// All simple cycles (length >= 2 via parallel edges), each listed once.
pub fn enumerate_cycles(
    map: &PlanarMap,
    max_count: usize,
    odd_only: bool,
) -> Result<Vec<CycleWalk>, OracleError> {
    let n = map.vertex_count();
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut vertices: Vec<VertexId> = Vec::new();
    let mut edges: Vec<EdgeId> = Vec::new();
    let mut count = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        map: &PlanarMap,
        start: VertexId,
        v: VertexId,
        on_path: &mut [bool],
        vertices: &mut Vec<VertexId>,
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<CycleWalk>,
        count: &mut usize,
        max_count: usize,
        odd_only: bool,
    ) -> Result<(), OracleError> {
        for (w, e) in map.neighbors(v) {
            if edges.last() == Some(&e) {
                continue;
            }
            if w == start {
                if edges.is_empty() || edges[0] >= e {
                    continue;
                }
                let len = edges.len() + 1;
                if odd_only && len.is_multiple_of(2) {
                    continue;
                }
                *count += 1;
                if *count > max_count {
                    return Err(OracleError::TooManyCycles(max_count));
                }
                let mut es = edges.clone();
                es.push(e);
                out.push(
                    CycleWalk::new(map, vertices.clone(), es).expect("enumerated cycle is simple"),
                );
                continue;
            }
            if w < start || on_path[w.index()] {
                continue;
            }
            on_path[w.index()] = true;
            vertices.push(w);
            edges.push(e);
            dfs(
                map, start, w, on_path, vertices, edges, out, count, max_count, odd_only,
            )?;
            edges.pop();
            vertices.pop();
            on_path[w.index()] = false;
        }
        Ok(())
    }

    for s in map.vertices() {
        on_path[s.index()] = true;
        vertices.push(s);
        dfs(
            map,
            s,
            s,
            &mut on_path,
            &mut vertices,
            &mut edges,
            &mut out,
            &mut count,
            max_count,
            odd_only,
        )?;
        vertices.pop();
        on_path[s.index()] = false;
    }
    Ok(out)
}

pub fn enumerate_odd_cycles(map: &PlanarMap, max_count: usize) -> Result<Vec<CycleWalk>, OracleError> {
    enumerate_cycles(map, max_count, true)
}

/// Whether `transversal` meets every odd cycle, by explicit enumeration.
pub fn hits_all_odd_cycles(cycles: &[CycleWalk], transversal: &VertexSet) -> bool {
    cycles
        .iter()
        .all(|c| c.vertices().iter().any(|v| transversal.contains(v)))
}

fn check_size(map: &PlanarMap, bound: usize) -> Result<(), OracleError> {
    if map.vertex_count() > bound || map.vertex_count() > 128 {
        return Err(OracleError::TooLarge {
            vertices: map.vertex_count(),
            bound: bound.min(128),
        });
    }
    Ok(())
}

fn mask(c: &CycleWalk) -> u128 {
    c.vertices().iter().fold(0u128, |m, v| m | (1u128 << v.index()))
}

/// Maximum number of pairwise vertex-disjoint odd cycles.
pub fn nu_exact(map: &PlanarMap) -> Result<OracleResult, OracleError> {
    nu_exact_with(map, DEFAULT_VERTEX_BOUND)
}

pub fn nu_exact_with(map: &PlanarMap, vertex_bound: usize) -> Result<OracleResult, OracleError> {
    check_size(map, vertex_bound)?;
    let start = Instant::now();
    let mut cycles = enumerate_odd_cycles(map, DEFAULT_CYCLE_LIMIT)?;
    cycles.sort_by_key(|c| c.len());
    let masks: Vec<u128> = cycles.iter().map(mask).collect();
    let shortest = cycles.first().map_or(3, |c| c.len()) as u32;

    struct Search<'a> {
        masks: &'a [u128],
        shortest: u32,
        best: Vec<usize>,
        chosen: Vec<usize>,
        nodes: u64,
        all: u128,
    }
    impl Search<'_> {
        fn run(&mut self, from: usize, used: u128) {
            self.nodes += 1;
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            let free = (self.all & !used).count_ones();
            if self.chosen.len() + (free / self.shortest) as usize <= self.best.len() {
                return;
            }
            for i in from..self.masks.len() {
                if self.masks[i] & used == 0 {
                    self.chosen.push(i);
                    self.run(i + 1, used | self.masks[i]);
                    self.chosen.pop();
                }
            }
        }
    }
    let all = masks.iter().fold(0u128, |a, m| a | m);
    let mut search = Search {
        masks: &masks,
        shortest,
        best: Vec::new(),
        chosen: Vec::new(),
        nodes: 0,
        all,
    };
    search.run(0, 0);
    let witness: Vec<CycleWalk> = search.best.iter().map(|&i| cycles[i].clone()).collect();
    Ok(OracleResult {
        value: witness.len(),
        witness: Witness::Packing(witness),
        stats: SearchStats {
            nodes: search.nodes,
            elapsed: start.elapsed(),
        },
    })
}

/// Visits `k`-subsets of `0..n` in lexicographic order until `f` returns
/// `true`.
fn find_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return Some(idx);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return None;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimum odd cycle transversal by increasing-size subset search, starting
/// from a greedy disjoint-cycle lower bound.
pub fn tau_exact(map: &PlanarMap) -> Result<OracleResult, OracleError> {
    tau_exact_with(map, DEFAULT_VERTEX_BOUND)
}

pub fn tau_exact_with(map: &PlanarMap, vertex_bound: usize) -> Result<OracleResult, OracleError> {
    check_size(map, vertex_bound)?;
    let start = Instant::now();
    let n = map.vertex_count();
    let mut cycles = enumerate_odd_cycles(map, DEFAULT_CYCLE_LIMIT)?;
    cycles.sort_by_key(|c| c.len());
    let mut used = 0u128;
    let mut lower = 0;
    for c in &cycles {
        let m = mask(c);
        if m & used == 0 {
            used |= m;
            lower += 1;
        }
    }
    let mut nodes = 0u64;
    for k in lower..=n {
        let found = find_subset(n, k, |idx| {
            nodes += 1;
            let t: VertexSet = idx.iter().map(|&i| VertexId::new(i)).collect();
            is_bipartite_without(map, &t)
        });
        if let Some(idx) = found {
            let t: VertexSet = idx.iter().map(|&i| VertexId::new(i)).collect();
            return Ok(OracleResult {
                value: k,
                witness: Witness::Transversal(t),
                stats: SearchStats {
                    nodes,
                    elapsed: start.elapsed(),
                },
            });
        }
    }
    unreachable!("removing every vertex leaves a bipartite graph")
}

/// Minimum `F`-transversal by increasing-size subset search.
pub fn tau_faceset_exact(map: &PlanarMap, faces: &FaceSet) -> Result<OracleResult, OracleError> {
    check_size(map, DEFAULT_VERTEX_BOUND.max(map.vertex_count().min(24)))?;
    if faces.len() % 2 == 1 {
        return Err(ParityError::OddCardinality(faces.len()).into());
    }
    let start = Instant::now();
    let n = map.vertex_count();
    let mut nodes = 0u64;
    for k in 0..=n {
        let found = find_subset(n, k, |idx| {
            nodes += 1;
            let t: VertexSet = idx.iter().map(|&i| VertexId::new(i)).collect();
            is_f_transversal(map, faces, &t).unwrap_or(false)
        });
        if let Some(idx) = found {
            let t: VertexSet = idx.iter().map(|&i| VertexId::new(i)).collect();
            return Ok(OracleResult {
                value: k,
                witness: Witness::Transversal(t),
                stats: SearchStats {
                    nodes,
                    elapsed: start.elapsed(),
                },
            });
        }
    }
    unreachable!("all vertices form a transversal of any even face set on a connected map")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::map_from_lists;
    use crate::parity::is_oct;

    fn k4() -> PlanarMap {
        map_from_lists(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
            &[&[0, 1, 2], &[3, 0, 5], &[4, 1, 3], &[5, 2, 4]],
        )
        .unwrap()
    }

    fn cycle(n: usize) -> PlanarMap {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let rot: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + n - 1) % n]).collect();
        let rot: Vec<&[usize]> = rot.iter().map(Vec::as_slice).collect();
        map_from_lists(n, &edges, &rot).unwrap()
    }

    fn two_triangles() -> PlanarMap {
        map_from_lists(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
            &[&[0, 2], &[1, 0], &[2, 1], &[3, 5], &[4, 3], &[5, 4]],
        )
        .unwrap()
    }

    #[test]
    fn cycle_counts() {
        assert!(enumerate_odd_cycles(&cycle(4), 100).unwrap().is_empty());
        assert_eq!(enumerate_odd_cycles(&cycle(5), 100).unwrap().len(), 1);
        // K4: four triangles, three 4-cycles, no odd cycle longer than 3.
        assert_eq!(enumerate_odd_cycles(&k4(), 100).unwrap().len(), 4);
        assert_eq!(enumerate_cycles(&k4(), 100, false).unwrap().len(), 7);
        assert_eq!(
            enumerate_odd_cycles(&k4(), 2),
            Err(OracleError::TooManyCycles(2))
        );
    }

    #[test]
    fn k4_values() {
        assert_eq!(nu_exact(&k4()).unwrap().value, 1);
        let tau = tau_exact(&k4()).unwrap();
        assert_eq!(tau.value, 2);
        let Witness::Transversal(t) = tau.witness else {
            panic!()
        };
        assert!(is_oct(&k4(), &t));
    }

    #[test]
    fn small_values() {
        assert_eq!(nu_exact(&two_triangles()).unwrap().value, 2);
        assert_eq!(tau_exact(&cycle(5)).unwrap().value, 1);
        assert_eq!(tau_exact(&cycle(6)).unwrap().value, 0);
        let c5 = cycle(5);
        assert_eq!(tau_faceset_exact(&c5, &FaceSet::new()).unwrap().value, 0);
        assert_eq!(tau_faceset_exact(&c5, &c5.odd_faces()).unwrap().value, 1);
    }

    #[test]
    fn size_bound() {
        let big = cycle(15);
        assert!(matches!(nu_exact(&big), Err(OracleError::TooLarge { .. })));
    }
}
