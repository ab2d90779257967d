//! The recursion producing a special packing `P*` and a transversal `T*`
//! with `|T*| <= 4|P*|`.

mod base;
mod finalize;
mod repair;
mod select;

use thiserror::Error;

pub use base::{base_case_solve, shortest_odd_cycle, BaseCase, BaseCaseConfig};
pub use finalize::{finalize_packing, odd_cycle_in_face};
pub use select::{even_subset_transversal_leq4, select_cloud_subset, ChoiceCase, CloudSubsetChoice};

use crate::certificate::{Certificate, Origin, PackedItem, PackingElement, Provenance, TraceStep};
use crate::clouds::{cloud_decomposition, nu1_transversal, nu_exceeds_one, CloudError};
use crate::conflict::{ConflictError, ConflictGraph, HittingSet, LowDegreeKind};
use crate::ids::{DartId, EdgeId, FaceId, VertexId};
use crate::map::{FaceSet, MapError, PlanarMap, VertexSet};
use crate::parity::{is_oct, CycleWalk, ParityError};
use crate::surgery::{
    merge_face_sets_with, residual_face_set, MergeStep, MergeTrace, SurgeryError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Cloud(#[from] CloudError),
    #[error(transparent)]
    Conflict(#[from] ConflictError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Parity(#[from] ParityError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("case analysis exhausted: {0}")]
    CaseExhaustion(String),
    #[error("face subset has odd cardinality {0}")]
    OddSubset(usize),
    #[error("face subset is not part of the chosen faces")]
    SubsetNotInChoice,
    #[error("face {0} has no odd cycle in its boundary")]
    NoOddCycleInFace(FaceId),
    #[error("lifted transversal at level {0} is not an odd cycle transversal")]
    LiftFailure(usize),
}

/// Hooks into the solver's intermediate objects, for auditing.
#[allow(unused_variables)]
pub trait SolveObserver {
    fn conflict_graph(
        &mut self,
        map: &PlanarMap,
        cloud: &FaceSet,
        r: &ConflictGraph,
        chosen: FaceId,
        kind: LowDegreeKind,
    ) {
    }
    fn hitting_set(&mut self, map: &PlanarMap, cloud: &FaceSet, r: &ConflictGraph, hs: &HittingSet) {}
    /// A face set with packing number one handed to the small-transversal
    /// construction.
    fn nu1_family(&mut self, map: &PlanarMap, faces: &FaceSet) {}
    fn base_case(&mut self, map: &PlanarMap, deadly: &FaceSet, outcome: &BaseCase) {}
    fn merge_step(&mut self, before: &PlanarMap, after: &PlanarMap, step: &MergeStep) {}
}

impl SolveObserver for () {}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverConfig {
    pub base: BaseCaseConfig,
}

/// Solves with `F* = F_odd` and replaces packed faces by odd cycles.
pub fn solve(map: &PlanarMap) -> Result<Certificate, SolveError> {
    let cert = solve_special(map, &map.odd_faces(), &SolverConfig::default(), &mut ())?;
    finalize_packing(map, &cert)
}

/// A special packing for `special ⊇ F_odd` and an odd cycle transversal,
/// solving each connected component separately.
pub fn solve_special(
    map: &PlanarMap,
    special: &FaceSet,
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
) -> Result<Certificate, SolveError> {
    if let Some(f) = map.odd_faces().difference(special).next() {
        return Err(CloudError::MissingOddFace(*f).into());
    }
    let mut cert = Certificate {
        packing: Vec::new(),
        transversal: VertexSet::new(),
        special: special.clone(),
        trace: Vec::new(),
    };
    if map.component_count() <= 1 {
        let (packing, transversal) = solve_level(map, special, 0, config, observer, &mut cert.trace)?;
        cert.packing = packing;
        cert.transversal = transversal;
        return Ok(cert);
    }
    for part in split_components(map)? {
        let sub_special: FaceSet = special
            .iter()
            .filter(|f| map.face(**f).component == part.component)
            .map(|&f| part.face_to_sub(map, f))
            .collect();
        let mut trace = Vec::new();
        let (packing, transversal) =
            solve_level(&part.map, &sub_special, 0, config, observer, &mut trace)?;
        for item in packing {
            let element = match item.element {
                PackingElement::Face(f) => PackingElement::Face(part.face_to_map(map, f)),
                PackingElement::Cycle { cycle, source_face } => PackingElement::Cycle {
                    cycle: CycleWalk::new(
                        map,
                        cycle.vertices().iter().map(|v| part.vertices[v.index()]).collect(),
                        cycle.edges().iter().map(|e| part.edges[e.index()]).collect(),
                    )?,
                    source_face: source_face.map(|f| part.face_to_map(map, f)),
                },
            };
            cert.packing.push(PackedItem {
                element,
                provenance: item.provenance,
            });
        }
        cert.transversal
            .extend(transversal.iter().map(|v| part.vertices[v.index()]));
        cert.trace.extend(trace);
    }
    Ok(cert)
}

struct Part {
    component: usize,
    map: PlanarMap,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    edge_index: Vec<Option<EdgeId>>,
}

impl Part {
    fn face_to_sub(&self, map: &PlanarMap, f: FaceId) -> FaceId {
        let face = map.face(f);
        match face.darts.first() {
            Some(d) => {
                let e = self.edge_index[d.edge().index()].expect("edge of this component");
                self.map.face_of(e.dart(d.side()))
            }
            None => self.map.faces_at(VertexId::new(0))[0],
        }
    }

    fn face_to_map(&self, map: &PlanarMap, f: FaceId) -> FaceId {
        let face = self.map.face(f);
        match face.darts.first() {
            Some(d) => map.face_of(self.edges[d.edge().index()].dart(d.side())),
            None => map.faces_at(self.vertices[0])[0],
        }
    }
}

fn split_components(map: &PlanarMap) -> Result<Vec<Part>, SolveError> {
    let mut local = vec![VertexId(0); map.vertex_count()];
    let mut parts: Vec<(Vec<VertexId>, Vec<EdgeId>)> = vec![Default::default(); map.component_count()];
    for v in map.vertices() {
        let c = map.component_of(v);
        local[v.index()] = VertexId::new(parts[c].0.len());
        parts[c].0.push(v);
    }
    let mut edge_index = vec![None; map.edge_count()];
    for e in map.edge_ids() {
        let c = map.component_of(map.endpoints(e)[0]);
        edge_index[e.index()] = Some(EdgeId::new(parts[c].1.len()));
        parts[c].1.push(e);
    }
    parts
        .into_iter()
        .enumerate()
        .map(|(component, (vertices, edges))| {
            let sub_edges = edges
                .iter()
                .map(|&e| map.endpoints(e).map(|v| local[v.index()]))
                .collect();
            let rotation: Vec<Vec<DartId>> = vertices
                .iter()
                .map(|&v| {
                    map.rotation(v)
                        .iter()
                        .map(|d| edge_index[d.edge().index()].unwrap().dart(d.side()))
                        .collect()
                })
                .collect();
            let sub = PlanarMap::from_darts(vertices.len(), sub_edges, rotation)?;
            let mut part_index = vec![None; map.edge_count()];
            for (i, &e) in edges.iter().enumerate() {
                part_index[e.index()] = Some(EdgeId::new(i));
            }
            Ok(Part {
                component,
                map: sub,
                vertices,
                edges,
                edge_index: part_index,
            })
        })
        .collect()
}

type LevelResult = (Vec<PackedItem>, VertexSet);

fn solve_level(
    map: &PlanarMap,
    special: &FaceSet,
    level: usize,
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
    trace: &mut Vec<TraceStep>,
) -> Result<LevelResult, SolveError> {
    let clouds = cloud_decomposition(map, special)?;
    let Some(cloud) = clouds.iter().find(|c| nu_exceeds_one(map, &c.faces).is_some()) else {
        let sets: Vec<FaceSet> = clouds.into_iter().map(|c| c.faces).collect();
        return solve_base(map, &sets, level, config, observer, trace);
    };

    let choice = select_cloud_subset(map, &cloud.faces, observer)?;
    let (merged, mtrace) = merge_face_sets_with(map, std::slice::from_ref(&choice.faces), special, |a, b, s| {
        observer.merge_step(a, b, s)
    })?;
    let merged_face = mtrace.merged_faces[0];
    let next_special: FaceSet = merged
        .face_ids()
        .filter(|&f| f == merged_face || mtrace.face_origin[f.index()].is_subset(special))
        .collect();
    let trace_index = trace.len();
    trace.push(TraceStep {
        level,
        kind: format!("{}:{:?}", choice.case.tag(), choice.kind),
        faces_before: map.face_count(),
        faces_after: merged.face_count(),
        merged: choice.faces.len(),
        transversal_added: 0,
        packing_added: 1,
    });

    let (inner_packing, inner_t) = solve_level(&merged, &next_special, level + 1, config, observer, trace)?;

    let lifted = mtrace.lift_vertices(&inner_t)?;
    let residual = residual_face_set(map, &choice.faces, &lifted)?;
    let extra = even_subset_transversal_leq4(map, &choice, &residual, observer)?;
    let transversal: VertexSet = lifted.union(&extra).copied().collect();
    if !is_oct(map, &transversal) {
        return Err(SolveError::LiftFailure(level));
    }
    trace[trace_index].transversal_added = extra.len();

    let mut packing = Vec::with_capacity(inner_packing.len() + 1);
    let mut replaced = false;
    for item in inner_packing {
        match item.element {
            PackingElement::Face(f) if f == merged_face => {
                replaced = true;
                for w in [choice.witness.0, choice.witness.1] {
                    packing.push(PackedItem {
                        element: PackingElement::Face(w),
                        provenance: Provenance {
                            level,
                            origin: Origin::WitnessPair,
                        },
                    });
                }
            }
            PackingElement::Face(f) => packing.push(PackedItem {
                element: PackingElement::Face(mtrace.original_face(f)),
                provenance: item.provenance,
            }),
            PackingElement::Cycle { cycle, source_face } => packing.push(PackedItem {
                element: PackingElement::Cycle {
                    cycle: lift_cycle(map, &mtrace, &cycle)?,
                    source_face: source_face.map(|f| mtrace.original_face(f)),
                },
                provenance: item.provenance,
            }),
        }
    }
    if !replaced {
        packing.push(PackedItem {
            element: PackingElement::Face(choice.central),
            provenance: Provenance {
                level,
                origin: Origin::CentralFace,
            },
        });
    }
    {
        let (repaired, dropped, added) = repair::repair_packing(map, packing, special, level);
        if dropped > 0 {
            trace[trace_index].kind.push_str(&format!("+repair(-{dropped},+{added})"));
        }
        packing = repaired;
    }
    Ok((packing, transversal))
}

fn lift_cycle(map: &PlanarMap, trace: &MergeTrace, cycle: &CycleWalk) -> Result<CycleWalk, SolveError> {
    let vertices = cycle
        .vertices()
        .iter()
        .map(|&v| trace.lift_vertex(v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CycleWalk::new(map, vertices, cycle.edges().to_vec())?)
}

fn solve_base(
    map: &PlanarMap,
    clouds: &[FaceSet],
    level: usize,
    config: &SolverConfig,
    observer: &mut dyn SolveObserver,
    trace: &mut Vec<TraceStep>,
) -> Result<LevelResult, SolveError> {
    // G_0 = map, G_i = G_{i-1} with the i-th cloud merged.
    let mut maps = vec![map.clone()];
    let mut traces: Vec<Option<MergeTrace>> = Vec::new();
    let mut located: Vec<FaceSet> = Vec::new();
    for cloud in clouds {
        let current = maps.last().unwrap();
        let here = locate_faces(current, map, cloud);
        if here.len() > 1 {
            let (next, t) = merge_face_sets_with(current, std::slice::from_ref(&here), &FaceSet::new(), |a, b, s| {
                observer.merge_step(a, b, s)
            })?;
            located.push(here);
            traces.push(Some(t));
            maps.push(next);
        } else {
            located.push(here);
            traces.push(None);
            maps.push(current.clone());
        }
    }
    let last = maps.last().unwrap();
    let deadly: FaceSet = clouds
        .iter()
        .map(|c| {
            let f = locate_faces(last, map, c);
            *f.iter().next().expect("cloud face")
        })
        .collect();
    let outcome = base_case_solve(last, &deadly, &config.base)?;
    observer.base_case(last, &deadly, &outcome);

    let mut t = outcome.transversal.clone();
    for i in (0..clouds.len()).rev() {
        let below = &maps[i];
        if let Some(step) = &traces[i] {
            t = step.lift_vertices(&t)?;
        }
        let residual = residual_face_set(below, &located[i], &t)?;
        if !residual.is_empty() {
            observer.nu1_family(below, &located[i]);
            t.extend(nu1_transversal(below, &located[i], &residual)?);
        }
    }
    if !is_oct(map, &t) {
        return Err(SolveError::LiftFailure(level));
    }

    let mut packing = Vec::new();
    for cycle in &outcome.packing {
        packing.push(PackedItem {
            element: PackingElement::Cycle {
                cycle: CycleWalk::new(map, cycle.vertices().to_vec(), cycle.edges().to_vec())?,
                source_face: None,
            },
            provenance: Provenance {
                level,
                origin: Origin::BaseCycle,
            },
        });
    }
    for cloud in clouds {
        packing.push(PackedItem {
            element: PackingElement::Face(*cloud.iter().next().expect("cloud face")),
            provenance: Provenance {
                level,
                origin: Origin::CloudFace,
            },
        });
    }
    trace.push(TraceStep {
        level,
        kind: "base".into(),
        faces_before: map.face_count(),
        faces_after: last.face_count(),
        merged: clouds.iter().map(|c| c.len()).sum(),
        transversal_added: t.len(),
        packing_added: packing.len(),
    });
    Ok((packing, t))
}

/// Faces of `current` carrying the boundaries of `faces` of `original`.
fn locate_faces(current: &PlanarMap, original: &PlanarMap, faces: &FaceSet) -> FaceSet {
    faces
        .iter()
        .map(|&f| {
            let face = original.face(f);
            match face.darts.first() {
                Some(&d) => current.face_of(d),
                None => current.faces_at(face.vertices[0])[0],
            }
        })
        .collect()
}
