//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion.

use std::time::Duration;

use ep4_core::audit::{cycle_parity, oct_equivalence, run_corpus, sandwich, Audit};
use ep4_core::certificate::verify_certificate;
use ep4_core::generate::{corpus, CorpusEntry};
use ep4_core::map::map_from_lists;
use ep4_core::oracles::{nu_exact, tau_exact};
use ep4_core::solver::solve;

const SEED: u64 = 0x05ee_de94;
const CYCLE_LIMIT: usize = 2_000_000;

fn k4_anchor() -> Audit {
    let mut a = Audit::new("K4 anchor");
    let k4 = map_from_lists(
        4,
        &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
        &[&[0, 1, 2], &[3, 0, 5], &[4, 1, 3], &[5, 2, 4]],
    )
    .unwrap();
    let nu = nu_exact(&k4).unwrap().value;
    let tau = tau_exact(&k4).unwrap().value;
    a.check(nu == 1, || format!("nu = {nu}"));
    a.check(tau == 2, || format!("tau = {tau}"));
    let cert = solve(&k4).unwrap();
    a.check(verify_certificate(&k4, &cert).passed(), || "certificate rejected".into());
    a.check(cert.packing.len() == 1, || format!("|P*| = {}", cert.packing.len()));
    a.check(cert.transversal.len() <= 4, || format!("|T*| = {}", cert.transversal.len()));
    a
}

fn main() {
    let mut instances: Vec<CorpusEntry> = corpus(1000, 60, SEED);
    instances.extend(corpus(250, 14, SEED + 1));
    let run = run_corpus(&instances, Duration::from_secs(1));
    let small = instances.iter().filter(|e| e.map.vertex_count() <= 14).count();

    let mut c1 = run.headline.clone();
    let big = instances.iter().filter(|e| e.map.vertex_count() <= 60).count();
    c1.check(big >= 1000, || format!("only {big} instances"));
    c1.check(run.total <= Duration::from_secs(600), || format!("total {:?}", run.total));

    let mut c2 = sandwich(&instances, &run.sizes, 14);
    c2.check(small >= 200, || format!("only {small} instances with at most 14 vertices"));

    let tiny: Vec<_> = instances.iter().map(|e| &e.map).filter(|m| m.vertex_count() <= 10).collect();
    let c4 = cycle_parity(&tiny, CYCLE_LIMIT);
    let twelve: Vec<_> = instances.iter().map(|e| &e.map).filter(|m| m.vertex_count() <= 12).collect();
    let c5 = oct_equivalence(&twelve, 4, CYCLE_LIMIT);

    let obs = run.observer;
    let mut c9 = obs.base_case;
    c9.notes.push(format!(
        "{} certified by the heuristic bound, {} decided exactly",
        obs.base_certified, obs.base_exact
    ));

    let rows = [
        ("1", c1),
        ("2", c2),
        ("3", k4_anchor()),
        ("4", c4),
        ("5", c5),
        ("6", obs.min_degree),
        ("7", obs.hitting),
        ("8", obs.packing_one),
        ("9", c9),
        ("10", obs.surgery),
    ];
    let mut failed = Vec::new();
    for (id, audit) in &rows {
        println!("criterion {id}: {audit}");
        if !audit.passed() {
            failed.push(*id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
