use std::collections::BTreeSet;

use crate::certificate::{element_vertices, Origin, PackedItem, PackingElement, Provenance};
use crate::ids::VertexId;
use crate::map::{FaceSet, PlanarMap};

/// Above this many elements the disjoint subfamily is chosen greedily.
const EXACT_LIMIT: usize = 40;

/// Makes `packing` vertex-disjoint in `map`.
///
/// Lifting through a split that could not keep the special faces at the
/// split vertex together may leave two elements sharing that vertex. The
/// largest disjoint subfamily is kept and refilled with special faces that
/// avoid it. Returns the number of elements dropped and added.
pub fn repair_packing(
    map: &PlanarMap,
    packing: Vec<PackedItem>,
    special: &FaceSet,
    level: usize,
) -> (Vec<PackedItem>, usize, usize) {
    let sets: Vec<BTreeSet<VertexId>> = packing.iter().map(|p| element_vertices(map, &p.element)).collect();
    let n = sets.len();
    let clash = |a: usize, b: usize| !sets[a].is_disjoint(&sets[b]);
    if (0..n).all(|a| (a + 1..n).all(|b| !clash(a, b))) {
        return (packing, 0, 0);
    }
    let keep = if n <= EXACT_LIMIT {
        let mut best = Vec::new();
        let mut cur = Vec::new();
        max_disjoint(0, n, &clash, &mut cur, &mut best);
        best
    } else {
        let mut keep: Vec<usize> = Vec::new();
        for a in 0..n {
            if keep.iter().all(|&b| !clash(a, b)) {
                keep.push(a);
            }
        }
        keep
    };
    let dropped = n - keep.len();
    let mut used: BTreeSet<VertexId> = keep.iter().flat_map(|&a| sets[a].iter().copied()).collect();
    let mut out: Vec<PackedItem> = packing
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .map(|(_, p)| p)
        .collect();
    let mut added = 0;
    for &f in special {
        let vs = &map.face(f).vertices;
        if vs.iter().all(|v| !used.contains(v)) {
            used.extend(vs.iter().copied());
            out.push(PackedItem {
                element: PackingElement::Face(f),
                provenance: Provenance {
                    level,
                    origin: Origin::Refill,
                },
            });
            added += 1;
        }
    }
    (out, dropped, added)
}

fn max_disjoint(
    i: usize,
    n: usize,
    clash: &dyn Fn(usize, usize) -> bool,
    cur: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if cur.len() + (n - i) <= best.len() {
        return;
    }
    if i == n {
        *best = cur.clone();
        return;
    }
    if cur.iter().all(|&b| !clash(i, b)) {
        cur.push(i);
        max_disjoint(i + 1, n, clash, cur, best);
        cur.pop();
    }
    max_disjoint(i + 1, n, clash, cur, best);
}
