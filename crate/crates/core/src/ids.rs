use serde::{Deserialize, Serialize};
use std::fmt;

macro_rules! index_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn new(index: usize) -> Self {
                Self(index as u32)
            }

            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

index_type!(
    /// Index of a vertex of a [`PlanarMap`](crate::PlanarMap).
    VertexId,
    "v"
);
index_type!(
    /// Index of an edge. Edge `e` owns darts `2e` and `2e + 1`.
    EdgeId,
    "e"
);
index_type!(
    /// Index of a dart (half-edge).
    DartId,
    "d"
);
index_type!(
    /// Index of a face. Faces are numbered in order of their lowest dart.
    FaceId,
    "f"
);

impl EdgeId {
    /// Dart of this edge leaving its first endpoint.
    #[inline]
    pub fn dart(self, side: usize) -> DartId {
        DartId(self.0 * 2 + side as u32)
    }
}

impl DartId {
    #[inline]
    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 >> 1)
    }

    #[inline]
    pub fn twin(self) -> DartId {
        DartId(self.0 ^ 1)
    }

    /// 0 if the dart leaves the first endpoint of its edge, 1 otherwise.
    #[inline]
    pub fn side(self) -> usize {
        (self.0 & 1) as usize
    }
}
