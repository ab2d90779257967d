//! Odd cycle packings and transversals on plane graphs with `|T| <= 4|P|`.

pub mod audit;
pub mod certificate;
pub mod clouds;
pub mod conflict;
pub mod embed;
pub mod generate;
pub mod ids;
pub mod io;
pub mod map;
pub mod oracles;
pub mod parity;
pub mod solver;
pub mod surgery;
pub mod util;
pub mod vf;

pub use ids::{DartId, EdgeId, FaceId, VertexId};
pub use map::{Face, FaceSet, MapError, PlanarMap, VertexSet};
pub use vf::{vf_graph, VfEdge, VfGraph};
