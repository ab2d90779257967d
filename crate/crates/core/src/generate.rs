//! Seeded random plane graphs.
//!
//! A random triangulation is grown by inserting each new vertex into a
//! uniformly chosen triangular face. Edges are then kept independently with
//! probability `keep_probability`, and each surviving edge is subdivided
//! with probability `subdivide_probability`, which flips face parities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ids::{EdgeId, VertexId};
use crate::map::PlanarMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Vertices of the underlying triangulation. Subdivision adds more.
    pub vertices: usize,
    pub keep_probability: f64,
    pub subdivide_probability: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            vertices: 20,
            keep_probability: 1.0,
            subdivide_probability: 0.0,
            seed: 0,
        }
    }
}

struct Builder {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
}

impl Builder {
    fn add_edge(&mut self, u: usize, v: usize) -> usize {
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    fn edge_between(&self, u: usize, v: usize) -> usize {
        *self.rotation[u]
            .iter()
            .find(|&&e| {
                let (a, b) = self.edges[e];
                (a == u && b == v) || (a == v && b == u)
            })
            .expect("triangulation edge")
    }

    /// Inserts `e` immediately counterclockwise after `after` around `v`.
    fn insert_after(&mut self, v: usize, after: usize, e: usize) {
        let pos = self.rotation[v].iter().position(|&x| x == after).unwrap();
        self.rotation[v].insert(pos + 1, e);
    }
}

pub fn gen_planar_map(config: &GeneratorConfig) -> PlanarMap {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.vertices.max(1);
    let mut b = Builder {
        vertices: n,
        edges: Vec::new(),
        rotation: vec![Vec::new(); n],
    };
    if n == 2 {
        let e = b.add_edge(0, 1);
        b.rotation[0].push(e);
        b.rotation[1].push(e);
    } else if n >= 3 {
        let e01 = b.add_edge(0, 1);
        let e12 = b.add_edge(1, 2);
        let e20 = b.add_edge(2, 0);
        b.rotation[0] = vec![e01, e20];
        b.rotation[1] = vec![e12, e01];
        b.rotation[2] = vec![e20, e12];
        // Triangles as counterclockwise corner triples.
        let mut triangles: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1]];
        for w in 3..n {
            let t = rng.gen_range(0..triangles.len());
            let [x, y, z] = triangles.swap_remove(t);
            let exy = b.edge_between(x, y);
            let eyz = b.edge_between(y, z);
            let ezx = b.edge_between(z, x);
            let ex = b.add_edge(x, w);
            let ey = b.add_edge(y, w);
            let ez = b.add_edge(z, w);
            b.insert_after(x, exy, ex);
            b.insert_after(y, eyz, ey);
            b.insert_after(z, ezx, ez);
            b.rotation[w] = vec![ex, ey, ez];
            triangles.extend([[x, y, w], [y, z, w], [z, x, w]]);
        }
    }

    if config.keep_probability < 1.0 {
        let keep: Vec<bool> = (0..b.edges.len())
            .map(|_| rng.gen_bool(config.keep_probability.clamp(0.0, 1.0)))
            .collect();
        let mut renumber = vec![usize::MAX; b.edges.len()];
        let mut edges = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                renumber[i] = edges.len();
                edges.push(b.edges[i]);
            }
        }
        for r in &mut b.rotation {
            r.retain(|&e| keep[e]);
            for e in r.iter_mut() {
                *e = renumber[*e];
            }
        }
        b.edges = edges;
    }

    if config.subdivide_probability > 0.0 {
        let original = b.edges.len();
        for e in 0..original {
            if !rng.gen_bool(config.subdivide_probability.clamp(0.0, 1.0)) {
                continue;
            }
            let (_, v) = b.edges[e];
            let x = b.vertices;
            b.vertices += 1;
            b.edges[e].1 = x;
            let tail = b.add_edge(x, v);
            for slot in b.rotation[v].iter_mut() {
                if *slot == e {
                    *slot = tail;
                }
            }
            b.rotation.push(vec![e, tail]);
        }
    }

    let edges = b
        .edges
        .iter()
        .map(|&(u, v)| [VertexId::new(u), VertexId::new(v)])
        .collect();
    let rotation: Vec<Vec<EdgeId>> = b
        .rotation
        .iter()
        .map(|r| r.iter().map(|&e| EdgeId::new(e)).collect())
        .collect();
    PlanarMap::new(b.vertices, edges, &rotation).expect("generator keeps a genus-0 rotation")
}

/// A named instance of a corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub config: GeneratorConfig,
    pub map: PlanarMap,
}

/// A deterministic mix of dense, sparse and subdivided instances whose final
/// vertex counts do not exceed `max_vertices`.
pub fn corpus(count: usize, max_vertices: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let regime = out.len() % 4;
        let (keep, subdivide) = match regime {
            0 => (1.0, 0.0),
            1 => (rng.gen_range(0.5..0.9), 0.0),
            2 => (rng.gen_range(0.6..1.0), rng.gen_range(0.05..0.35)),
            _ => (rng.gen_range(0.3..0.7), rng.gen_range(0.0..0.5)),
        };
        let upper = max_vertices.max(1);
        let base = match regime {
            2 | 3 => rng.gen_range(1..=upper.div_ceil(2).max(1)),
            _ => rng.gen_range(1..=upper),
        };
        let config = GeneratorConfig {
            vertices: base,
            keep_probability: keep,
            subdivide_probability: subdivide,
            seed: rng.gen(),
        };
        let map = gen_planar_map(&config);
        if map.vertex_count() <= max_vertices {
            out.push(CorpusEntry { config, map });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_inputs() {
        let one = gen_planar_map(&GeneratorConfig {
            vertices: 1,
            ..Default::default()
        });
        assert_eq!(one.vertex_count(), 1);
        assert_eq!(one.face_count(), 1);
        let k4 = gen_planar_map(&GeneratorConfig {
            vertices: 4,
            ..Default::default()
        });
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.face_count(), 4);
        assert!(k4.faces().iter().all(|f| f.degree() == 3));
    }

    #[test]
    fn triangulations_are_maximal() {
        for seed in 0..20 {
            let m = gen_planar_map(&GeneratorConfig {
                vertices: 30,
                seed,
                ..Default::default()
            });
            assert_eq!(m.edge_count(), 3 * 30 - 6);
            assert!(m.faces().iter().all(|f| f.degree() == 3));
        }
    }

    #[test]
    fn same_seed_same_map() {
        let cfg = GeneratorConfig {
            vertices: 50,
            keep_probability: 0.7,
            subdivide_probability: 0.2,
            seed: 99,
        };
        let a = gen_planar_map(&cfg);
        let b = gen_planar_map(&cfg);
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.rotation_edges(), b.rotation_edges());
    }

    #[test]
    fn corpus_respects_vertex_bound() {
        let c = corpus(40, 14, 3);
        assert_eq!(c.len(), 40);
        assert!(c.iter().all(|e| e.map.vertex_count() <= 14));
    }
}
