//! Hand-built configurations with known answers.

use ep4_core::certificate::{verify_certificate, PackedItem, PackingElement};
use ep4_core::clouds::{good_pair, is_good, nu1_transversal, nu_exceeds_one};
use ep4_core::conflict::{
    low_degree_face, neighbor_hitting_set, reduced_conflict_graph, LowDegreeKind,
};
use ep4_core::embed::embed_planar;
use ep4_core::map::{map_from_lists, FaceSet, PlanarMap, VertexSet};
use ep4_core::parity::{is_f_transversal, CycleWalk};
use ep4_core::solver::solve;
use ep4_core::surgery::{angles, merge_step_conserves, merge_two_faces, merge_two_faces_at};
use ep4_core::{DartId, VertexId};

fn from_edges(n: usize, edges: &[(usize, usize)]) -> PlanarMap {
    let e: Vec<[VertexId; 2]> = edges.iter().map(|&(a, b)| [VertexId::new(a), VertexId::new(b)]).collect();
    let rot: Vec<Vec<DartId>> = embed_planar(n, &e).unwrap();
    PlanarMap::from_darts(n, e, rot).unwrap()
}

/// Hub 0 with eight spokes e1..e8 (edges 0..7) to 1..8, counterclockwise.
/// The triangle at angle 3 plays F1; F2 is the face reaching the hub at
/// angles 6 and 8, around the triangle 0-7-8.
fn two_choice_merge() -> PlanarMap {
    map_from_lists(
        9,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (0, 5),
            (0, 6),
            (0, 7),
            (0, 8),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 1),
            (7, 8),
        ],
        &[
            &[0, 1, 2, 3, 4, 5, 6, 7],
            &[13, 8, 0],
            &[9, 1, 8],
            &[9, 10, 2],
            &[3, 10, 11],
            &[12, 4, 11],
            &[5, 12, 13],
            &[14, 6],
            &[14, 7],
        ],
    )
    .unwrap()
}

#[test]
fn merge_with_two_angle_choices() {
    let map = two_choice_merge();
    assert_eq!(map.face_count(), 8);
    let hub = VertexId::new(0);
    let ang = angles(&map, hub);
    let f1 = ang[2].1;
    let f2 = ang[5].1;
    assert_eq!(ang[7].1, f2);
    assert_eq!(map.face(f1).degree(), 3);
    assert_eq!(map.face(f2).degree(), 6);

    let (default, step) = merge_two_faces(&map, f1, f2, hub).unwrap();
    assert_eq!((step.j1, step.j2), (3, 6));
    assert!(merge_step_conserves(&map, &default, &step));

    let (wide, step) = merge_two_faces_at(&map, f1, f2, hub, 3, 8).unwrap();
    assert_eq!((step.j1, step.j2), (3, 8));
    assert!(merge_step_conserves(&map, &wide, &step));
    // e4..e8 move to the new copy.
    let moved: Vec<usize> = wide.rotation(step.new_vertex).iter().map(|d| d.edge().index()).collect();
    assert_eq!(moved, vec![3, 4, 5, 6, 7]);
    let merged = wide.face(step.merged);
    assert_eq!(merged.edges.len(), 9);
    assert!(merged.contains_vertex(hub) && merged.contains_vertex(step.new_vertex));

    assert!(merge_two_faces_at(&map, f1, f2, hub, 3, 7).is_err());
    assert!(merge_two_faces_at(&map, f1, f1, hub, 3, 3).is_err());
}

/// Wheel with hub 0 and rim 1..=5.
fn wheel() -> PlanarMap {
    from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
}

#[test]
fn pinwheel_conflict_graph_is_a_five_cycle() {
    let map = wheel();
    let spokes: FaceSet = map.face_ids().filter(|&f| map.face(f).contains_vertex(VertexId::new(0))).collect();
    assert_eq!(spokes.len(), 5);
    let r = reduced_conflict_graph(&map, &spokes).unwrap();
    assert_eq!(r.map().edge_count(), 5);
    assert!(spokes.iter().all(|&f| r.degree(f) == 2));
    assert!(r.identified_count() > 0);
    assert_eq!(low_degree_face(&r).unwrap().1, LowDegreeKind::DegLE4);
}

#[test]
fn pinwheel_with_outlier_has_a_good_pair() {
    let map = wheel();
    let all: FaceSet = map.face_ids().collect();
    assert_eq!(all.len(), 6);
    assert!(nu_exceeds_one(&map, &all).is_none());
    let t = good_pair(&map, &all).unwrap();
    assert!(t.len() <= 2);
    assert!(is_good(&map, &all, &t));
    let sub: FaceSet = all.iter().copied().take(4).collect();
    let t = nu1_transversal(&map, &all, &sub).unwrap();
    assert!(t.len() <= 2 && is_f_transversal(&map, &sub, &t).unwrap());
}

/// Generalized Petersen graph GP(10, 2): the dodecahedron.
fn dodecahedron() -> PlanarMap {
    let mut edges = Vec::new();
    for i in 0..10 {
        edges.push((i, (i + 1) % 10));
        edges.push((i, 10 + i));
        edges.push((10 + i, 10 + (i + 2) % 10));
    }
    from_edges(20, &edges)
}

#[test]
fn icosahedral_conflict_graph() {
    let map = dodecahedron();
    assert_eq!(map.edge_count(), 30);
    assert_eq!(map.face_count(), 12);
    let faces = map.odd_faces();
    assert_eq!(faces.len(), 12);
    let r = reduced_conflict_graph(&map, &faces).unwrap();
    assert_eq!(r.map().edge_count(), 30);
    assert_eq!(r.map().face_count(), 20);
    for n in r.map().vertices() {
        assert_eq!(r.map().degree(n), 5);
        assert_eq!(r.triangle_angles(n), 5);
    }
    assert_eq!(low_degree_face(&r).unwrap().1, LowDegreeKind::Deg5FourTriangles);
}

#[test]
fn icosahedral_cloud_takes_the_degree_five_route() {
    let map = dodecahedron();
    let cert = solve(&map).unwrap();
    assert!(verify_certificate(&map, &cert).passed());
    assert!(cert.trace[0].kind.contains("Deg5FourTriangles"), "{:?}", cert.trace[0]);
}

/// Hexagon face 0..5 with pendant triangles: two at 0, two at 2, one at 4
/// and one at 5.
fn hexagon_with_triangles() -> PlanarMap {
    let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    let mut extra: Vec<Vec<usize>> = vec![Vec::new(); 6];
    let mut small: Vec<Vec<usize>> = Vec::new();
    let mut next = 6;
    for hub in [0, 0, 2, 2, 4, 5] {
        let (p, q) = (next, next + 1);
        next += 2;
        let e = edges.len();
        edges.extend([(hub, p), (p, q), (q, hub)]);
        extra[hub].extend([e, e + 2]);
        small.push(vec![e, e + 1]);
        small.push(vec![e + 1, e + 2]);
    }
    let mut rotation: Vec<Vec<usize>> = (0..6)
        .map(|i| {
            let mut r = vec![(i + 5) % 6];
            r.extend(&extra[i]);
            r.push(i);
            r
        })
        .collect();
    rotation.extend(small);
    let rot: Vec<&[usize]> = rotation.iter().map(Vec::as_slice).collect();
    map_from_lists(next, &edges, &rot).unwrap()
}

#[test]
fn hitting_set_with_half_and_full_charges() {
    let map = hexagon_with_triangles();
    assert_eq!(map.face_count(), 8);
    let hex = map.faces().iter().find(|f| f.degree() == 6 && f.vertices.len() == 6).unwrap().id;
    let set: FaceSet = map.face_ids().filter(|&f| f == hex || map.face(f).degree() == 3).collect();
    assert_eq!(set.len(), 7);
    let r = reduced_conflict_graph(&map, &set).unwrap();
    assert_eq!(r.degree(hex), 6);
    let hs = neighbor_hitting_set(&r, &map, hex).unwrap();
    let ids = |s: &VertexSet| s.iter().map(|v| v.index()).collect::<Vec<_>>();
    assert_eq!(ids(&hs.multi), vec![0, 2]);
    assert_eq!(ids(&hs.single), vec![4, 5]);
    let mut charged: Vec<u32> = hs.charges.values().copied().filter(|&c| c > 0).collect();
    charged.sort();
    assert_eq!(charged, vec![1, 1, 1, 1, 2, 2]);
    for f in set.iter().filter(|&&f| f != hex) {
        assert!(hs.transversal.iter().any(|&v| map.face(*f).contains_vertex(v)));
    }
}

#[test]
fn k4_certificate() {
    let map = from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]);
    let cert = solve(&map).unwrap();
    assert_eq!(cert.packing.len(), 1);
    assert!(cert.transversal.len() <= 4);
    assert!(verify_certificate(&map, &cert).passed());
}

fn failed(map: &PlanarMap, cert: &ep4_core::certificate::Certificate) -> Vec<String> {
    verify_certificate(map, cert)
        .checks
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect()
}

#[test]
fn tampered_transversal_is_caught() {
    let map = from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]);
    let mut cert = solve(&map).unwrap();
    let v = *cert.transversal.iter().next().unwrap();
    cert.transversal.remove(&v);
    assert!(failed(&map, &cert).contains(&"transversal".to_string()));
}

#[test]
fn tampered_packing_is_caught() {
    let map = wheel();
    let mut cert = solve(&map).unwrap();
    let first = cert.packing[0].clone();
    cert.packing.push(first);
    assert!(failed(&map, &cert).contains(&"disjointness".to_string()));

    let mut cert = solve(&map).unwrap();
    // A 4-cycle through the rim is even.
    let vs: Vec<VertexId> = [0, 1, 2, 3].map(VertexId::new).to_vec();
    let edge = |a: usize, b: usize| {
        map.edge_ids()
            .find(|&e| {
                let [x, y] = map.endpoints(e);
                (x.index(), y.index()) == (a, b) || (x.index(), y.index()) == (b, a)
            })
            .unwrap()
    };
    let es = vec![edge(0, 1), edge(1, 2), edge(2, 3), edge(3, 0)];
    cert.packing = vec![PackedItem {
        element: PackingElement::Cycle {
            cycle: CycleWalk::new(&map, vs, es).unwrap(),
            source_face: None,
        },
        provenance: cert.packing[0].provenance,
    }];
    assert!(failed(&map, &cert).contains(&"cycle_oddness".to_string()));
}

#[test]
fn isolated_and_bipartite_inputs() {
    let single = map_from_lists(1, &[], &[&[]]).unwrap();
    let cert = solve(&single).unwrap();
    assert!(cert.packing.is_empty() && cert.transversal.is_empty());
    assert!(verify_certificate(&single, &cert).passed());

    let square = from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let cert = solve(&square).unwrap();
    assert!(cert.packing.is_empty() && cert.transversal.is_empty());
}

#[test]
fn disconnected_components_add_up() {
    let two = from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
    let cert = solve(&two).unwrap();
    assert_eq!(cert.packing.len(), 2);
    assert_eq!(cert.transversal.len(), 2);
    assert!(verify_certificate(&two, &cert).passed());
    let t: VertexSet = cert.transversal.clone();
    assert!(t.iter().any(|v| v.index() < 3) && t.iter().any(|v| v.index() >= 3));
}
