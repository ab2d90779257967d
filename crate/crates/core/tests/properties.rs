use proptest::prelude::*;

use ep4_core::certificate::verify_certificate;
use ep4_core::embed::embed_planar;
use ep4_core::generate::{gen_planar_map, GeneratorConfig};
use ep4_core::io::{read_certificate, read_graph, write_certificate, write_graph, LabeledMap};
use ep4_core::oracles::{enumerate_cycles, enumerate_odd_cycles, hits_all_odd_cycles, nu_exact, tau_exact};
use ep4_core::parity::{cycle_parity_via_faces, is_oct};
use ep4_core::solver::solve;
use ep4_core::surgery::{merge_face_set, merge_step_conserves, merge_two_faces, residual_face_set};
use ep4_core::{FaceSet, PlanarMap, VertexId, VertexSet};

fn config(max_vertices: usize) -> impl Strategy<Value = GeneratorConfig> {
    (1..=max_vertices, 0.2f64..=1.0, 0.0f64..0.5, any::<u64>()).prop_map(|(vertices, keep, sub, seed)| {
        GeneratorConfig {
            vertices,
            keep_probability: keep,
            subdivide_probability: sub,
            seed,
        }
    })
}

fn euler_holds(map: &PlanarMap) -> bool {
    map.vertex_count() + map.face_count() == map.edge_count() + 2 * map.component_count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_maps_are_plane(cfg in config(60)) {
        let map = gen_planar_map(&cfg);
        prop_assert!(euler_holds(&map));
        let darts: usize = map.faces().iter().map(|f| f.darts.len()).sum();
        prop_assert_eq!(darts, map.dart_count());
        prop_assert_eq!(gen_planar_map(&cfg).rotation_edges(), map.rotation_edges());
    }

    #[test]
    fn embedder_matches_face_count(cfg in config(40)) {
        let map = gen_planar_map(&cfg);
        let rot = embed_planar(map.vertex_count(), map.edges()).unwrap();
        let again = PlanarMap::from_darts(map.vertex_count(), map.edges().to_vec(), rot).unwrap();
        prop_assert_eq!(again.face_count(), map.face_count());
    }

    #[test]
    fn graph_json_round_trips(cfg in config(40)) {
        let lm = LabeledMap::unlabeled(gen_planar_map(&cfg));
        let text = write_graph(&lm);
        let back = read_graph(&text).unwrap();
        prop_assert_eq!(write_graph(&back), text);
        let faces = |m: &PlanarMap| m.faces().iter().map(|f| f.darts.clone()).collect::<Vec<_>>();
        prop_assert_eq!(faces(&back.map), faces(&lm.map));
    }

    #[test]
    fn certificates_verify_and_round_trip(cfg in config(60)) {
        let lm = LabeledMap::unlabeled(gen_planar_map(&cfg));
        let cert = solve(&lm.map).unwrap();
        let report = verify_certificate(&lm.map, &cert);
        prop_assert!(report.passed(), "{:?}", report);
        let text = write_certificate(&lm, &cert);
        prop_assert_eq!(read_certificate(&lm, &text).unwrap(), cert);
    }

    #[test]
    fn single_merges_conserve(cfg in config(30), pick in any::<u64>()) {
        let map = gen_planar_map(&cfg);
        let pairs: Vec<_> = map
            .face_ids()
            .flat_map(|a| map.face_ids().map(move |b| (a, b)))
            .filter(|&(a, b)| a < b && map.face(a).shares_vertex(map.face(b)))
            .collect();
        prop_assume!(!pairs.is_empty());
        let (a, b) = pairs[(pick % pairs.len() as u64) as usize];
        let v = map.face(a).shared_vertices(map.face(b)).next().unwrap();
        let (after, step) = merge_two_faces(&map, a, b, v).unwrap();
        prop_assert!(merge_step_conserves(&map, &after, &step));
        prop_assert!(euler_holds(&after));
        prop_assert_eq!(after.component_count(), map.component_count());
    }

    #[test]
    fn lifted_transversals_stay_transversals(cfg in config(24)) {
        let map = gen_planar_map(&cfg);
        let odd = map.odd_faces();
        let Some(&first) = odd.iter().next() else { return Ok(()); };
        // The faces reachable from one odd face through shared vertices.
        let mut set = FaceSet::from([first]);
        for &f in &odd {
            if set.iter().any(|&g| map.face(g).shares_vertex(map.face(f))) {
                set.insert(f);
            }
        }
        let (merged, trace) = merge_face_set(&map, &set).unwrap();
        let t = ep4_core::oracles::tau_exact_with(&merged, 40);
        if let Ok(t) = t {
            let ep4_core::oracles::Witness::Transversal(t) = t.witness else { unreachable!() };
            let lifted = trace.lift_vertices(&t).unwrap();
            // The lifted set leaves odd cycles only through the merged faces.
            let residual = residual_face_set(&map, &set, &lifted).unwrap();
            prop_assert_eq!(residual.len() % 2, 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cycle_parity_matches_face_parity(cfg in config(10)) {
        let map = gen_planar_map(&cfg);
        for c in enumerate_cycles(&map, 1_000_000, false).unwrap() {
            prop_assert_eq!(cycle_parity_via_faces(&map, &c), c.is_odd());
        }
    }

    #[test]
    fn oct_test_matches_cycle_hitting(cfg in config(12), mask in any::<u16>()) {
        let map = gen_planar_map(&cfg);
        let cycles = enumerate_odd_cycles(&map, 1_000_000).unwrap();
        let t: VertexSet = map.vertices().filter(|v| mask >> (v.index() % 16) & 1 == 1).collect();
        prop_assert_eq!(is_oct(&map, &t), hits_all_odd_cycles(&cycles, &t));
    }

    #[test]
    fn exact_values_bracket_certificate(cfg in config(12)) {
        let map = gen_planar_map(&cfg);
        prop_assume!(map.vertex_count() <= 14);
        let cert = solve(&map).unwrap();
        let nu = nu_exact(&map).unwrap();
        let tau = tau_exact(&map).unwrap();
        prop_assert!(tau.value <= cert.transversal.len());
        prop_assert!(cert.packing.len() <= nu.value);
        prop_assert!(tau.value <= 4 * nu.value);
        if let ep4_core::oracles::Witness::Transversal(t) = &tau.witness {
            prop_assert!(is_oct(&map, t));
            for v in t {
                let mut smaller = t.clone();
                smaller.remove(v);
                prop_assert!(!is_oct(&map, &smaller));
            }
        }
    }

    #[test]
    fn removing_a_needed_vertex_breaks_the_certificate(cfg in config(30)) {
        let map = gen_planar_map(&cfg);
        let cert = solve(&map).unwrap();
        for v in cert.transversal.iter().copied().collect::<Vec<VertexId>>() {
            let mut bad = cert.clone();
            bad.transversal.remove(&v);
            let report = verify_certificate(&map, &bad);
            prop_assert_eq!(report.check("transversal").unwrap().passed, is_oct(&map, &bad.transversal));
        }
    }
}
