//! Graph and certificate JSON, and DOT renderings.
//!
//! Graph JSON is `{"vertices": [ids], "edges": [[u, v], ...], "rotation":
//! {v: [edge indices]}}` with vertex ids that are integers or strings. A
//! missing rotation is computed by the planar embedder. The writer emits the
//! canonical form: compact JSON, rotations keyed in vertex order, each
//! starting at its lowest edge.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::certificate::{Certificate, PackedItem, PackingElement, Provenance, TraceStep};
use crate::conflict::ConflictGraph;
use crate::embed::embed_planar;
use crate::ids::{EdgeId, FaceId, VertexId};
use crate::map::{FaceSet, MapError, PlanarMap, VertexSet};
use crate::parity::{CycleWalk, ParityError};
use crate::vf::VfGraph;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("vertex id {0} listed twice")]
    DuplicateVertex(Label),
    #[error("unknown vertex id {0}")]
    UnknownVertex(String),
    #[error("rotation lists vertices that are not in the graph: {0}")]
    RotationKeys(String),
    #[error("rotation given for some vertices but not {0}")]
    MissingRotation(Label),
    #[error("face {0} does not exist")]
    UnknownFace(usize),
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("bad cycle: {0}")]
    Cycle(#[from] ParityError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// An opaque vertex id as it appears in the input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => write!(f, "{s}"),
        }
    }
}

/// A map together with the external ids of its vertices.
#[derive(Debug, Clone)]
pub struct LabeledMap {
    pub map: PlanarMap,
    pub labels: Vec<Label>,
}

impl LabeledMap {
    /// Labels a map with its vertex indices.
    pub fn unlabeled(map: PlanarMap) -> Self {
        let labels = map.vertices().map(|v| Label::Int(v.index() as i64)).collect();
        Self { map, labels }
    }

    pub fn label(&self, v: VertexId) -> &Label {
        &self.labels[v.index()]
    }

    fn index(&self) -> BTreeMap<&Label, VertexId> {
        self.labels.iter().enumerate().map(|(i, l)| (l, VertexId::new(i))).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphIn {
    vertices: Vec<Label>,
    edges: Vec<[Label; 2]>,
    #[serde(default)]
    rotation: Option<BTreeMap<String, Vec<usize>>>,
}

#[derive(Serialize)]
struct GraphOut<'a> {
    vertices: &'a [Label],
    edges: Vec<[&'a Label; 2]>,
    rotation: RotationOut<'a>,
}

struct RotationOut<'a>(&'a LabeledMap);

impl Serialize for RotationOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let lm = self.0;
        let mut m = s.serialize_map(Some(lm.map.vertex_count()))?;
        for v in lm.map.vertices() {
            let order: Vec<u32> = lm.map.canonical_rotation(v).map(|d| d.edge().0).collect();
            m.serialize_entry(&lm.label(v).to_string(), &order)?;
        }
        m.end()
    }
}

pub fn read_graph(text: &str) -> Result<LabeledMap, IoError> {
    let input: GraphIn = serde_json::from_str(text)?;
    let mut index = BTreeMap::new();
    for (i, l) in input.vertices.iter().enumerate() {
        if index.insert(l.clone(), VertexId::new(i)).is_some() {
            return Err(IoError::DuplicateVertex(l.clone()));
        }
    }
    let lookup = |l: &Label| index.get(l).copied().ok_or_else(|| IoError::UnknownVertex(l.to_string()));
    let edges: Vec<[VertexId; 2]> = input
        .edges
        .iter()
        .map(|[a, b]| Ok([lookup(a)?, lookup(b)?]))
        .collect::<Result<_, IoError>>()?;
    let n = input.vertices.len();
    let map = match input.rotation {
        None => PlanarMap::from_darts(n, edges.clone(), embed_planar(n, &edges)?)?,
        Some(rot) => {
            let by_key: BTreeMap<String, VertexId> =
                input.vertices.iter().enumerate().map(|(i, l)| (l.to_string(), VertexId::new(i))).collect();
            let stray: Vec<&String> = rot.keys().filter(|k| !by_key.contains_key(*k)).collect();
            if !stray.is_empty() {
                return Err(IoError::RotationKeys(
                    stray.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "),
                ));
            }
            let mut rotation = vec![Vec::new(); n];
            for (i, l) in input.vertices.iter().enumerate() {
                match rot.get(&l.to_string()) {
                    Some(order) => rotation[i] = order.iter().map(|&e| EdgeId::new(e)).collect(),
                    None if edges.iter().any(|e| e.contains(&VertexId::new(i))) => {
                        return Err(IoError::MissingRotation(l.clone()))
                    }
                    None => {}
                }
            }
            PlanarMap::new(n, edges, &rotation)?
        }
    };
    Ok(LabeledMap {
        map,
        labels: input.vertices,
    })
}

/// Canonical Graph JSON, newline-terminated.
pub fn write_graph(lm: &LabeledMap) -> String {
    let out = GraphOut {
        vertices: &lm.labels,
        edges: lm
            .map
            .edges()
            .iter()
            .map(|[a, b]| [lm.label(*a), lm.label(*b)])
            .collect(),
        rotation: RotationOut(lm),
    };
    let mut s = serde_json::to_string(&out).expect("graph serializes");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ElementJson {
    Face {
        face: usize,
        vertices: Vec<Label>,
        #[serde(flatten)]
        provenance: Provenance,
    },
    Cycle {
        vertices: Vec<Label>,
        edges: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source_face: Option<usize>,
        #[serde(flatten)]
        provenance: Provenance,
    },
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    packing: Vec<ElementJson>,
    transversal: Vec<Label>,
    special: Vec<usize>,
    ratio_bound_ok: bool,
    #[serde(default)]
    trace: Vec<TraceStep>,
}

pub fn write_certificate(lm: &LabeledMap, cert: &Certificate) -> String {
    let labels = |vs: &mut dyn Iterator<Item = VertexId>| vs.map(|v| lm.label(v).clone()).collect::<Vec<_>>();
    let packing = cert
        .packing
        .iter()
        .map(|item| match &item.element {
            PackingElement::Face(f) => ElementJson::Face {
                face: f.index(),
                vertices: labels(&mut lm.map.face(*f).vertices.iter().copied()),
                provenance: item.provenance,
            },
            PackingElement::Cycle { cycle, source_face } => ElementJson::Cycle {
                vertices: labels(&mut cycle.vertices().iter().copied()),
                edges: cycle.edges().iter().map(|e| e.index()).collect(),
                source_face: source_face.map(|f| f.index()),
                provenance: item.provenance,
            },
        })
        .collect();
    let out = CertificateJson {
        packing,
        transversal: labels(&mut cert.transversal.iter().copied()),
        special: cert.special.iter().map(|f| f.index()).collect(),
        ratio_bound_ok: cert.ratio_bound_ok(),
        trace: cert.trace.clone(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("certificate serializes");
    s.push('\n');
    s
}

/// Reads a certificate for `lm`. Structural validity (ids in range, cycles
/// closed and simple) is checked here; everything else is left to
/// `verify_certificate`.
pub fn read_certificate(lm: &LabeledMap, text: &str) -> Result<Certificate, IoError> {
    let input: CertificateJson = serde_json::from_str(text)?;
    let index = lm.index();
    let vertex = |l: &Label| index.get(l).copied().ok_or_else(|| IoError::UnknownVertex(l.to_string()));
    let face = |f: usize| {
        (f < lm.map.face_count())
            .then(|| FaceId::new(f))
            .ok_or(IoError::UnknownFace(f))
    };
    let mut packing = Vec::with_capacity(input.packing.len());
    for el in input.packing {
        packing.push(match el {
            ElementJson::Face { face: f, provenance, .. } => PackedItem {
                element: PackingElement::Face(face(f)?),
                provenance,
            },
            ElementJson::Cycle {
                vertices,
                edges,
                source_face,
                provenance,
            } => {
                let vs = vertices.iter().map(vertex).collect::<Result<Vec<_>, _>>()?;
                let es = edges
                    .iter()
                    .map(|&e| {
                        (e < lm.map.edge_count())
                            .then(|| EdgeId::new(e))
                            .ok_or(IoError::UnknownEdge(e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PackedItem {
                    element: PackingElement::Cycle {
                        cycle: CycleWalk::new(&lm.map, vs, es)?,
                        source_face: source_face.map(face).transpose()?,
                    },
                    provenance,
                }
            }
        });
    }
    Ok(Certificate {
        packing,
        transversal: input.transversal.iter().map(vertex).collect::<Result<VertexSet, _>>()?,
        special: input.special.into_iter().map(face).collect::<Result<FaceSet, _>>()?,
        trace: input.trace,
    })
}

fn quote(l: &Label) -> String {
    format!("\"{}\"", l.to_string().replace('\\', "\\\\").replace('"', "\\\""))
}

/// `G` as an undirected DOT graph; odd faces are listed in a comment.
pub fn dot_graph(lm: &LabeledMap) -> String {
    let mut s = String::from("graph G {\n");
    for v in lm.map.vertices() {
        let _ = writeln!(s, "  {};", quote(lm.label(v)));
    }
    for (i, [a, b]) in lm.map.edges().iter().enumerate() {
        let _ = writeln!(s, "  {} -- {} [label=\"e{i}\"];", quote(lm.label(*a)), quote(lm.label(*b)));
    }
    let odd: Vec<String> = lm.map.odd_faces().iter().map(|f| format!("f{f}")).collect();
    let _ = writeln!(s, "  // odd faces: {}", odd.join(" "));
    s.push_str("}\n");
    s
}

/// The vertex-face incidence graph; face nodes are boxes, odd ones filled.
pub fn dot_vf(lm: &LabeledMap) -> String {
    let vf = VfGraph::new(&lm.map, None);
    let mut s = String::from("graph vf {\n");
    for v in lm.map.vertices() {
        let _ = writeln!(s, "  {};", quote(lm.label(v)));
    }
    for f in vf.face_nodes() {
        let style = if lm.map.face(f).is_odd() { ", style=filled" } else { "" };
        let _ = writeln!(s, "  \"f{f}\" [shape=box{style}];");
    }
    for e in vf.edges() {
        let _ = writeln!(s, "  {} -- \"f{}\";", quote(lm.label(e.vertex)), e.face);
    }
    s.push_str("}\n");
    s
}

/// A reduced conflict graph; each edge is labelled with the vertices it
/// came from.
pub fn dot_conflict(lm: &LabeledMap, r: &ConflictGraph) -> String {
    let mut s = String::from("graph R {\n");
    for &f in r.nodes() {
        let _ = writeln!(s, "  \"f{f}\" [label=\"f{f} ({})\"];", r.degree(f));
    }
    for e in r.map().edge_ids() {
        let (a, b) = r.edge_faces(e);
        let via: BTreeSet<String> = r.sources(e).iter().map(|src| lm.label(src.vertex).to_string()).collect();
        let via: Vec<String> = via.into_iter().collect();
        let _ = writeln!(s, "  \"f{a}\" -- \"f{b}\" [label=\"{}\"];", via.join(",").replace('"', "'"));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const K4: &str = r#"{"vertices":[0,1,2,3],"edges":[[0,1],[0,2],[0,3],[1,2],[2,3],[3,1]],"rotation":{"0":[0,1,2],"1":[0,5,3],"2":[1,3,4],"3":[2,4,5]}}
"#;

    #[test]
    fn canonical_round_trip() {
        let lm = read_graph(K4).unwrap();
        assert_eq!(lm.map.face_count(), 4);
        assert_eq!(write_graph(&lm), K4);
    }

    #[test]
    fn string_labels_and_embedding() {
        let lm = read_graph(r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"],["c","a"]]}"#).unwrap();
        assert_eq!(lm.map.face_count(), 2);
        let again = read_graph(&write_graph(&lm)).unwrap();
        assert_eq!(write_graph(&again), write_graph(&lm));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(read_graph("{"), Err(IoError::Json(_))));
        assert!(matches!(
            read_graph(r#"{"vertices":[1,1],"edges":[]}"#),
            Err(IoError::DuplicateVertex(_))
        ));
        assert!(matches!(
            read_graph(r#"{"vertices":[1],"edges":[[1,2]]}"#),
            Err(IoError::UnknownVertex(_))
        ));
        assert!(matches!(
            read_graph(r#"{"vertices":[1],"edges":[[1,1]]}"#),
            Err(IoError::Map(MapError::SelfLoop { .. }))
        ));
    }

    #[test]
    fn certificate_round_trip() {
        let lm = read_graph(K4).unwrap();
        let cert = crate::solver::solve(&lm.map).unwrap();
        let text = write_certificate(&lm, &cert);
        let back = read_certificate(&lm, &text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(write_certificate(&lm, &back), text);
    }
}
