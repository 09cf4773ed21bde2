//! Compressed sparse storage for a list of id sets.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

/// A sequence of segments packed into one flat array.
///
/// Segment `s` is `data[offsets[s]..offsets[s + 1]]`. Ids are `u32` and
/// double as segment indices into other `CsrSets`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CsrSets {
    offsets: Vec<usize>,
    data: Vec<u32>,
}

impl CsrSets {
    /// An instance with `len` empty segments.
    pub fn empty(len: usize) -> Self {
        CsrSets {
            offsets: vec![0; len + 1],
            data: Vec::new(),
        }
    }

    /// Builds from raw parts, checking the offsets are well formed.
    pub fn from_parts(offsets: Vec<usize>, data: Vec<u32>) -> Option<Self> {
        if offsets.first() != Some(&0) || offsets.last() != Some(&data.len()) {
            return None;
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        Some(CsrSets { offsets, data })
    }

    pub fn from_segments<I, S>(segments: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut out = CsrBuilder::new();
        for s in segments {
            out.push_segment(s.as_ref().iter().copied());
        }
        out.finish()
    }

    /// Number of segments.
    #[inline]
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total number of stored ids across all segments.
    #[inline]
    pub fn num_items(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn range(&self, s: usize) -> Range<usize> {
        self.offsets[s]..self.offsets[s + 1]
    }

    #[inline]
    pub fn segment(&self, s: usize) -> &[u32] {
        &self.data[self.range(s)]
    }

    #[inline]
    pub fn segment_len(&self, s: usize) -> usize {
        self.offsets[s + 1] - self.offsets[s]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        (0..self.len()).map(move |s| self.segment(s))
    }

    /// True when every segment is strictly increasing.
    pub fn is_sorted_sets(&self) -> bool {
        self.iter().all(|s| s.windows(2).all(|w| w[0] < w[1]))
    }

    /// Inverts the membership relation: segment `t` of the result holds every
    /// `s` whose segment contains `t`, in increasing order.
    ///
    /// Counting sort over the targets, so the output is sorted without a
    /// comparison sort.
    pub fn transpose(&self, num_targets: usize) -> CsrSets {
        let mut offsets = vec![0usize; num_targets + 1];
        for &t in &self.data {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..num_targets {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut data = vec![0u32; self.data.len()];
        for s in 0..self.len() {
            for &t in self.segment(s) {
                let slot = &mut cursor[t as usize];
                data[*slot] = s as u32;
                *slot += 1;
            }
        }
        CsrSets { offsets, data }
    }
}

/// Incremental builder appending one segment at a time.
#[derive(Debug, Clone, Default)]
pub struct CsrBuilder {
    offsets: Vec<usize>,
    data: Vec<u32>,
}

impl CsrBuilder {
    pub fn new() -> Self {
        CsrBuilder {
            offsets: vec![0],
            data: Vec::new(),
        }
    }

    pub fn with_capacity(segments: usize, items: usize) -> Self {
        let mut offsets = Vec::with_capacity(segments + 1);
        offsets.push(0);
        CsrBuilder {
            offsets,
            data: Vec::with_capacity(items),
        }
    }

    pub fn push_segment(&mut self, items: impl IntoIterator<Item = u32>) {
        self.data.extend(items);
        self.offsets.push(self.data.len());
    }

    /// Appends `items` after sorting and deduplicating them.
    pub fn push_set(&mut self, items: &mut Vec<u32>) {
        items.sort_unstable();
        items.dedup();
        self.push_segment(items.iter().copied());
    }

    pub fn finish(self) -> CsrSets {
        CsrSets {
            offsets: self.offsets,
            data: self.data,
        }
    }
}

/// Size of the union of two strictly increasing lists.
pub fn sorted_union_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
        n += 1;
    }
    n + (a.len() - i) + (b.len() - j)
}

/// Merges two strictly increasing lists into `out` (cleared first).
pub fn sorted_union_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}
