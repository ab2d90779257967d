#![no_main]

use ep4_core::{EdgeId, PlanarMap, VertexId};
use libfuzzer_sys::fuzz_target;

// Byte 0: vertex count, byte 1: edge count, then endpoint pairs, then
// rotation entries dealt out to vertices in order.
fuzz_target!(|data: &[u8]| {
    let [n, m, rest @ ..] = data else { return };
    let n = (*n as usize % 16) + 1;
    let m = *m as usize % 32;
    if rest.len() < 2 * m {
        return;
    }
    let (ends, rot) = rest.split_at(2 * m);
    let edges: Vec<[VertexId; 2]> = ends
        .chunks(2)
        .map(|c| [VertexId::new(c[0] as usize % n), VertexId::new(c[1] as usize % n)])
        .collect();
    let mut rotation = vec![Vec::new(); n];
    for (i, &b) in rot.iter().enumerate() {
        rotation[i % n].push(EdgeId::new(b as usize % m.max(1)));
    }
    if let Ok(map) = PlanarMap::new(n, edges, &rotation) {
        let darts: usize = map.faces().iter().map(|f| f.darts.len()).sum();
        assert_eq!(darts, map.dart_count());
    }
});
