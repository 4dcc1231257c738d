use core::fmt;

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident, $prefix:literal) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }

        impl From<u32> for $name {
            fn from(v: u32) -> Self {
                $name(v)
            }
        }
    };
}

id_type!(
    /// Opaque vertex identifier.
    VertexId, "v"
);
id_type!(
    /// Opaque edge identifier.
    EdgeId, "e"
);
id_type!(
    /// Opaque face identifier.
    FaceId, "f"
);
id_type!(
    /// Stable identifier of one traversal of an edge by a face.
    ///
    /// Dart ids survive every cell operation that keeps the traversal alive, so
    /// rotators stored as dart sequences can be carried across contractions.
    DartId, "d"
);
