//! Invariant suites over generated corpora, shared by the `selftest`
//! command and the acceptance tests.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::certificate::verify_certificate;
use crate::clouds::{nu1_transversal, nu_exceeds_one};
use crate::conflict::{ConflictGraph, HittingSet, LowDegreeKind};
use crate::generate::CorpusEntry;
use crate::ids::{EdgeId, FaceId, VertexId};
use crate::map::{FaceSet, PlanarMap, VertexSet};
use crate::oracles::{enumerate_cycles, enumerate_odd_cycles, hits_all_odd_cycles, nu_exact_with, tau_exact_with};
use crate::parity::{cycle_parity_via_faces, is_f_transversal, is_oct};
use crate::solver::{solve_special, BaseCase, SolveObserver, SolverConfig};
use crate::surgery::{merge_step_conserves, MergeStep};

/// Violations kept verbatim; the rest are only counted.
const KEPT: usize = 5;

#[derive(Debug, Clone, Default)]
pub struct Audit {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    pub examples: Vec<String>,
    pub notes: Vec<String>,
}

impl Audit {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checked > 0
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < KEPT {
                self.examples.push(what());
            }
        }
    }
}

impl fmt::Display for Audit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {}: {} checked, {} violations",
            self.name, self.checked, self.violations
        )?;
        for n in &self.notes {
            write!(f, "; {n}")?;
        }
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

/// Collects the per-step checks while the solver runs.
#[derive(Debug)]
pub struct AuditObserver {
    pub instance: usize,
    pub min_degree: Audit,
    pub hitting: Audit,
    pub packing_one: Audit,
    pub base_case: Audit,
    pub surgery: Audit,
    /// Base cases too large for the oracles, certified by the heuristic
    /// bound.
    pub base_certified: usize,
    /// Base cases decided with exact `tau` and `nu_dead`.
    pub base_exact: usize,
    /// Largest face set for which every even subset is enumerated.
    pub packing_one_limit: usize,
    pub exact_vertex_bound: usize,
}

impl Default for AuditObserver {
    fn default() -> Self {
        Self {
            instance: 0,
            min_degree: Audit::new("low-degree node of the reduced conflict graph"),
            hitting: Audit::new("hitting set size and coverage"),
            packing_one: Audit::new("even subsets of packing-number-one sets"),
            base_case: Audit::new("base case bound"),
            surgery: Audit::new("merge step conservation"),
            base_certified: 0,
            base_exact: 0,
            packing_one_limit: 6,
            exact_vertex_bound: 14,
        }
    }
}

fn qualifies(r: &ConflictGraph, n: VertexId) -> Option<LowDegreeKind> {
    let d = r.map().degree(n);
    if d <= 4 {
        Some(LowDegreeKind::DegLE4)
    } else if d == 5 && r.triangle_angles(n) >= 4 {
        Some(LowDegreeKind::Deg5FourTriangles)
    } else {
        None
    }
}

/// Every nonempty subset of `faces` of even size.
fn even_subsets(faces: &FaceSet) -> Vec<FaceSet> {
    let list: Vec<FaceId> = faces.iter().copied().collect();
    (1u32..1 << list.len())
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| {
            list.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &f)| f)
                .collect()
        })
        .collect()
}

/// The submap induced by the vertices outside `removed`, with the inherited
/// rotation.
pub fn induced_submap(map: &PlanarMap, removed: &VertexSet) -> PlanarMap {
    let keep: Vec<VertexId> = map.vertices().filter(|v| !removed.contains(v)).collect();
    let mut new_id = vec![None; map.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        new_id[v.index()] = Some(VertexId::new(i));
    }
    let mut edge_id = vec![None; map.edge_count()];
    let mut edges = Vec::new();
    for e in map.edge_ids() {
        let [a, b] = map.endpoints(e);
        if let (Some(x), Some(y)) = (new_id[a.index()], new_id[b.index()]) {
            edge_id[e.index()] = Some(EdgeId::new(edges.len()));
            edges.push([x, y]);
        }
    }
    let rotation: Vec<Vec<EdgeId>> = keep
        .iter()
        .map(|&v| {
            map.rotation(v)
                .iter()
                .filter_map(|d| edge_id[d.edge().index()])
                .collect()
        })
        .collect();
    PlanarMap::new(keep.len(), edges, &rotation).expect("restriction of a plane rotation is plane")
}

impl SolveObserver for AuditObserver {
    fn conflict_graph(&mut self, _map: &PlanarMap, cloud: &FaceSet, r: &ConflictGraph, chosen: FaceId, kind: LowDegreeKind) {
        let exists = r.map().vertices().any(|n| qualifies(r, n).is_some());
        let valid = r.node_of(chosen).and_then(|n| qualifies(r, n)) == Some(kind);
        self.min_degree.check(exists && valid, || {
            format!(
                "instance {}: cloud of {} faces, chosen {chosen} ({kind:?}) exists={exists} valid={valid}",
                self.instance,
                cloud.len()
            )
        });
    }

    fn hitting_set(&mut self, map: &PlanarMap, cloud: &FaceSet, r: &ConflictGraph, hs: &HittingSet) {
        let face = map.face(hs.face);
        let inside = hs.transversal.iter().all(|v| face.contains_vertex(*v));
        let size = hs.transversal.len() <= r.degree(hs.face);
        let uncovered: Vec<FaceId> = cloud
            .iter()
            .copied()
            .filter(|&g| g != hs.face && map.face(g).shares_vertex(face))
            .filter(|&g| !hs.transversal.iter().any(|v| map.face(g).contains_vertex(*v)))
            .collect();
        self.hitting.check(inside && size && uncovered.is_empty(), || {
            format!(
                "instance {}: face {} |T|={} deg={} uncovered={uncovered:?}",
                self.instance,
                hs.face,
                hs.transversal.len(),
                r.degree(hs.face)
            )
        });
    }

    fn nu1_family(&mut self, map: &PlanarMap, faces: &FaceSet) {
        if faces.len() > self.packing_one_limit {
            return;
        }
        let instance = self.instance;
        self.packing_one.check(nu_exceeds_one(map, faces).is_none(), || {
            format!("instance {instance}: family {faces:?} has two disjoint faces")
        });
        for sub in even_subsets(faces) {
            let t = nu1_transversal(map, faces, &sub);
            let ok = matches!(&t, Ok(t) if t.len() <= 2 && is_f_transversal(map, &sub, t).unwrap_or(false));
            self.packing_one
                .check(ok, || format!("instance {instance}: subset {sub:?} of {faces:?} got {t:?}"));
        }
    }

    fn base_case(&mut self, map: &PlanarMap, deadly: &FaceSet, outcome: &BaseCase) {
        let d = deadly.len();
        let instance = self.instance;
        let valid_t = is_oct(map, &outcome.transversal);
        let dead: VertexSet = deadly.iter().flat_map(|&f| map.face(f).vertices.iter().copied()).collect();
        let valid_p = outcome.packing.iter().all(|c| c.is_odd() && c.vertices().iter().all(|v| !dead.contains(v)))
            && outcome
                .packing
                .iter()
                .enumerate()
                .all(|(i, a)| {
                    let va: BTreeSet<_> = a.vertices().iter().collect();
                    outcome.packing[i + 1..].iter().all(|b| b.vertices().iter().all(|v| !va.contains(v)))
                });
        if !valid_t || !valid_p {
            self.base_case.check(false, || format!("instance {instance}: invalid base-case T or P"));
            return;
        }
        let small = map.vertex_count() <= self.exact_vertex_bound;
        if outcome.bound_met() && !small {
            // tau <= |T| <= |P| + 2d <= nu_dead + 2d.
            self.base_certified += 1;
            self.base_case.check(true, String::new);
            return;
        }
        if !small {
            self.base_case.check(false, || {
                format!(
                    "instance {instance}: |T|={} > |P|+2d={} on {} vertices, too large to decide exactly",
                    outcome.transversal.len(),
                    outcome.packing.len() + 2 * d,
                    map.vertex_count()
                )
            });
            return;
        }
        self.base_exact += 1;
        let bound = self.exact_vertex_bound;
        let tau = tau_exact_with(map, bound).map(|r| r.value);
        let nu_dead = nu_exact_with(&induced_submap(map, &dead), bound).map(|r| r.value);
        let ok = matches!((&tau, &nu_dead), (Ok(t), Ok(n)) if *t <= n + 2 * d);
        self.base_case
            .check(ok, || format!("instance {instance}: tau={tau:?} nu_dead={nu_dead:?} d={d}"));
    }

    fn merge_step(&mut self, before: &PlanarMap, after: &PlanarMap, step: &MergeStep) {
        // Every component carries its own outer face.
        let euler = |m: &PlanarMap| m.vertex_count() + m.face_count() == m.edge_count() + 2 * m.component_count();
        let parity = before.face(step.f1).is_odd() ^ before.face(step.f2).is_odd() == after.face(step.merged).is_odd();
        let ok = merge_step_conserves(before, after, step)
            && after.vertex_count() == before.vertex_count() + 1
            && after.edge_count() == before.edge_count()
            && after.component_count() == before.component_count()
            && euler(after)
            && parity;
        let instance = self.instance;
        self.surgery
            .check(ok, || format!("instance {instance}: merge of {} and {} at {}", step.f1, step.f2, step.vertex));
    }
}

/// Result of solving and auditing a corpus.
#[derive(Debug)]
pub struct CorpusRun {
    pub headline: Audit,
    pub observer: AuditObserver,
    pub slowest: Duration,
    pub total: Duration,
    /// `(|P*|, |T*|)` per instance.
    pub sizes: Vec<Option<(usize, usize)>>,
}

/// Solves every instance with the auditing observer attached and verifies
/// each certificate.
pub fn run_corpus(corpus: &[CorpusEntry], per_instance_limit: Duration) -> CorpusRun {
    let mut headline = Audit::new("certificates verify with |T| <= 4|P|");
    let mut observer = AuditObserver::default();
    let mut slowest = Duration::ZERO;
    let mut sizes = Vec::with_capacity(corpus.len());
    let start = Instant::now();
    for (i, entry) in corpus.iter().enumerate() {
        observer.instance = i;
        let t0 = Instant::now();
        let result = solve_special(&entry.map, &entry.map.odd_faces(), &SolverConfig::default(), &mut observer)
            .and_then(|c| crate::solver::finalize_packing(&entry.map, &c));
        let took = t0.elapsed();
        slowest = slowest.max(took);
        match result {
            Ok(cert) => {
                let report = verify_certificate(&entry.map, &cert);
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                headline.check(failed.is_empty() && took <= per_instance_limit, || {
                    format!("instance {i} ({:?}): failed {failed:?}, {took:?}", entry.config)
                });
                sizes.push(Some((cert.packing.len(), cert.transversal.len())));
            }
            Err(e) => {
                headline.check(false, || format!("instance {i} ({:?}): {e}", entry.config));
                sizes.push(None);
            }
        }
    }
    let total = start.elapsed();
    headline.notes.push(format!("slowest {slowest:.2?}, total {total:.2?}"));
    CorpusRun {
        headline,
        observer,
        slowest,
        total,
        sizes,
    }
}

/// `tau_exact <= |T*|`, `|P*| <= nu_exact` and `tau_exact <= 4 nu_exact` on
/// the instances with at most `bound` vertices.
pub fn sandwich(corpus: &[CorpusEntry], sizes: &[Option<(usize, usize)>], bound: usize) -> Audit {
    let mut audit = Audit::new("exact sandwich");
    for (i, (entry, size)) in corpus.iter().zip(sizes).enumerate() {
        if entry.map.vertex_count() > bound {
            continue;
        }
        let Some((p, t)) = *size else {
            audit.check(false, || format!("instance {i}: no certificate"));
            continue;
        };
        let tau = tau_exact_with(&entry.map, bound).map(|r| r.value);
        let nu = nu_exact_with(&entry.map, bound).map(|r| r.value);
        let ok = matches!((&tau, &nu), (Ok(tau), Ok(nu)) if *tau <= t && p <= *nu && *tau <= 4 * nu);
        audit.check(ok, || format!("instance {i}: tau={tau:?} nu={nu:?} |T*|={t} |P*|={p}"));
    }
    audit
}

/// Face-parity and edge-count parity agree on every simple cycle.
pub fn cycle_parity(maps: &[&PlanarMap], cycle_limit: usize) -> Audit {
    let mut audit = Audit::new("cycle parity via enclosed odd faces");
    for (i, map) in maps.iter().enumerate() {
        match enumerate_cycles(map, cycle_limit, false) {
            Ok(cycles) => {
                for c in cycles {
                    audit.check(cycle_parity_via_faces(map, &c) == c.is_odd(), || {
                        format!("map {i}: cycle {:?}", c.vertices())
                    });
                }
            }
            Err(e) => audit.check(false, || format!("map {i}: {e}")),
        }
    }
    audit
}

/// `is_oct` agrees with hitting every enumerated odd cycle, for all vertex
/// subsets of size at most `max_size`.
pub fn oct_equivalence(maps: &[&PlanarMap], max_size: usize, cycle_limit: usize) -> Audit {
    let mut audit = Audit::new("vf-based transversal test matches odd-cycle hitting");
    for (i, map) in maps.iter().enumerate() {
        let cycles = match enumerate_odd_cycles(map, cycle_limit) {
            Ok(c) => c,
            Err(e) => {
                audit.check(false, || format!("map {i}: {e}"));
                continue;
            }
        };
        let n = map.vertex_count();
        let mut subset = Vec::with_capacity(max_size);
        subsets(n, max_size, 0, &mut subset, &mut |s| {
            let t: VertexSet = s.iter().map(|&v| VertexId::new(v)).collect();
            audit.check(is_oct(map, &t) == hits_all_odd_cycles(&cycles, &t), || format!("map {i}: subset {s:?}"));
        });
    }
    audit
}

fn subsets(n: usize, max: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    f(cur);
    if cur.len() == max {
        return;
    }
    for v in from..n {
        cur.push(v);
        subsets(n, max, v + 1, cur, f);
        cur.pop();
    }
}
