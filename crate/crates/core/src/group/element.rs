use std::fmt;

use smallvec::SmallVec;

/// A group element in model-specific normal form: a short vector of integers.
///
/// The derived ordering is lexicographic on the integer vector, which is the
/// same as lexicographic order on [`Element::canonical_bytes`]. Two elements
/// of one model are equal iff their encodings are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element(SmallVec<[i64; 4]>);

impl Element {
    pub fn new(values: &[i64]) -> Self {
        Element(SmallVec::from_slice(values))
    }

    pub fn from_vec(values: Vec<i64>) -> Self {
        Element(SmallVec::from_vec(values))
    }

    pub fn empty() -> Self {
        Element(SmallVec::new())
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Order-preserving byte encoding: each value as big-endian u64 with the
    /// sign bit flipped.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * self.0.len());
        for &v in &self.0 {
            out.extend_from_slice(&((v as u64) ^ (1 << 63)).to_be_bytes());
        }
        out
    }

    pub fn from_canonical_bytes(bytes: &[u8]) -> Option<Self> {
        if bytes.len() % 8 != 0 {
            return None;
        }
        let values = bytes
            .chunks_exact(8)
            .map(|c| (u64::from_be_bytes(c.try_into().unwrap()) ^ (1 << 63)) as i64)
            .collect();
        Some(Element(values))
    }
}

impl From<Vec<i64>> for Element {
    fn from(v: Vec<i64>) -> Self {
        Element::from_vec(v)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.0.as_slice())
    }
}
