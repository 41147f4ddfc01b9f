//! Faces as bit sets over the vertex universe `[n]`, `n <= 64`.
//!
//! Vertex `v` (1-based) occupies bit `v - 1`. The empty face is a valid value.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported vertex universe.
pub const MAX_VERTICES: usize = 64;

/// A vertex label in `[1, n]`.
pub type VertexId = u32;

/// A finite set of vertices, stored as a 64-bit mask.
///
/// The total order is lexicographic on the sorted vertex lists, so
/// `{1,4} < {2,3}` and `{1} < {1,2}`. Use [`Face::bits`] when the raw
/// bit-pattern order is wanted instead.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub const fn from_bits(bits: u64) -> Face {
        Face(bits)
    }

    /// Builds a face from 1-based vertex labels. Duplicates collapse.
    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(vertices: I) -> Result<Face> {
        let mut bits = 0u64;
        for v in vertices {
            if v == 0 || v as usize > MAX_VERTICES {
                return Err(Error::VertexOutOfRange { vertex: v, n: MAX_VERTICES });
            }
            bits |= 1 << (v - 1);
        }
        Ok(Face(bits))
    }

    /// The full simplex on `[n]`.
    pub fn full(n: usize) -> Face {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            Face(u64::MAX)
        } else {
            Face((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: VertexId) -> Face {
        debug_assert!(v >= 1 && v as usize <= MAX_VERTICES);
        Face(1 << (v - 1))
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// `len - 1`, so the empty face has dimension -1.
    #[inline]
    pub fn dim(self) -> isize {
        self.len() as isize - 1
    }

    #[inline]
    pub fn contains(self, v: VertexId) -> bool {
        v >= 1 && v as usize <= MAX_VERTICES && self.0 & (1 << (v - 1)) != 0
    }

    #[inline]
    pub const fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    #[inline]
    pub const fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    #[inline]
    pub const fn difference(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn with(self, v: VertexId) -> Face {
        self.union(Face::singleton(v))
    }

    pub fn without(self, v: VertexId) -> Face {
        self.difference(Face::singleton(v))
    }

    /// Largest vertex label, or 0 for the empty face.
    pub fn max_vertex(self) -> VertexId {
        64 - self.0.leading_zeros()
    }

    /// Smallest vertex label, if any.
    pub fn min_vertex(self) -> Option<VertexId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    /// Vertices in increasing order.
    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    /// All subsets of this face, including the empty face and the face itself.
    pub fn subfaces(self) -> impl Iterator<Item = Face> {
        let full = self.0;
        let mut sub = full;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = sub;
            if sub == 0 {
                done = true;
            } else {
                sub = (sub - 1) & full;
            }
            Some(Face(out))
        })
    }

    /// Codimension-one subfaces `F \ {v}`, in increasing order of the removed vertex.
    pub fn boundary_faces(self) -> impl Iterator<Item = Face> {
        self.vertices().map(move |v| self.without(v))
    }
}

/// Iterator over the vertices of a [`Face`].
#[derive(Clone)]
pub struct Vertices(u64);

impl Iterator for Vertices {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Vertices {}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // The sorted lists agree below the lowest differing vertex `p`; the
        // list holding `p` is smaller unless the other list ends there.
        let p = diff.trailing_zeros();
        if self.0 & (1 << p) != 0 {
            if other.0 >> p != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 >> p != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}
