use std::fmt;

use crate::error::{Error, Result};

/// Largest ground-set size supported by subset indices and set functions.
pub const MAX_N: usize = 20;

/// A non-empty subset of `N = {1, ..., n}`, stored as a bitmask where bit
/// `i - 1` stands for index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetIndex {
    n: u8,
    bits: u32,
}

impl SubsetIndex {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::UnsupportedN {
                n,
                allowed: "1..=20",
            });
        }
        if bits == 0 {
            return Err(Error::EmptySubset);
        }
        if bits >> n != 0 {
            return Err(Error::SubsetOutOfRange { bits, n });
        }
        Ok(Self { n: n as u8, bits })
    }

    /// From 1-based indices; order and repetition do not matter.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > n || i > MAX_N {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            bits |= 1 << (i - 1);
        }
        Self::new(bits, n)
    }

    pub fn singleton(i: usize, n: usize) -> Result<Self> {
        Self::from_indices(&[i], n)
    }

    pub fn full(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::UnsupportedN {
                n,
                allowed: "1..=20",
            });
        }
        Self::new(((1u64 << n) - 1) as u32, n)
    }

    pub(crate) fn from_bits_unchecked(bits: u32, n: usize) -> Self {
        debug_assert!(bits != 0 && n <= MAX_N && bits >> n == 0);
        Self { n: n as u8, bits }
    }

    /// Every non-empty subset of `{1..n}` in increasing bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetIndex> {
        let n = n.min(MAX_N);
        (1..(1u32 << n)).map(move |bits| Self::from_bits_unchecked(bits, n))
    }

    /// Every non-empty subset ordered lexicographically by sorted index list:
    /// `{1}, {1,2}, {1,2,3}, {1,3}, {2}, ...`.
    pub fn all_lexicographic(n: usize) -> Vec<SubsetIndex> {
        let mut subsets: Vec<SubsetIndex> = Self::all(n).collect();
        subsets.sort_by_key(|s| s.indices());
        subsets
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Position in a dense array of the `2^n - 1` non-empty subsets.
    pub fn offset(self) -> usize {
        self.bits as usize - 1
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= self.n() && self.bits >> (i - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetIndex) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(self, other: SubsetIndex) -> SubsetIndex {
        Self {
            n: self.n.max(other.n),
            bits: self.bits | other.bits,
        }
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.contains(i)).collect()
    }

    /// Compact name used in inequality labels, e.g. `12` or `1,10`.
    pub fn compact(self) -> String {
        let idx = self.indices();
        if self.n() <= 9 {
            idx.iter().map(ToString::to_string).collect()
        } else {
            idx.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", idx.join(","))
    }
}
