//! Indexed finite ground sets and exact subset algebra on word masks.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported ground set; a subset is then one machine word.
pub const MAX_UNIVERSE: usize = 64;

/// Largest universe for which full powerset streams are allowed.
pub const ENUMERATION_BOUND: usize = 20;

/// A finite ground set of `size` elements, identified by indices
/// `0..size-1`. Labels are presentation-only and never affect identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Universe {
    size: usize,
    labels: Option<Vec<String>>,
}

impl Universe {
    pub fn new(size: usize) -> Result<Self> {
        if !(1..=MAX_UNIVERSE).contains(&size) {
            return Err(Error::SizeOutOfRange(size));
        }
        Ok(Universe { size, labels: None })
    }

    pub fn with_labels(size: usize, labels: Vec<String>) -> Result<Self> {
        let mut u = Universe::new(size)?;
        if labels.len() != size {
            return Err(Error::LabelCount {
                expected: size,
                got: labels.len(),
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        u.labels = Some(labels);
        Ok(u)
    }

    /// Rebuilds a universe parsed from JSON, re-checking the invariants.
    pub fn validated(self) -> Result<Self> {
        match self.labels {
            Some(labels) => Universe::with_labels(self.size, labels),
            None => Universe::new(self.size),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(index)).map(String::as_str)
    }

    pub fn empty(&self) -> Subset {
        Subset::raw(self.size, 0)
    }

    pub fn full(&self) -> Subset {
        Subset::raw(self.size, full_mask(self.size))
    }

    pub fn singleton(&self, index: usize) -> Result<Subset> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.size,
            });
        }
        Ok(Subset::raw(self.size, 1u64 << index))
    }

    /// Builds a subset from member indices; order and repetition are
    /// irrelevant (membership is extensional).
    pub fn subset(&self, indices: &[usize]) -> Result<Subset> {
        let mut mask = 0u64;
        for &index in indices {
            if index >= self.size {
                return Err(Error::IndexOutOfRange {
                    index,
                    size: self.size,
                });
            }
            mask |= 1u64 << index;
        }
        Ok(Subset::raw(self.size, mask))
    }

    pub fn subset_from_mask(&self, mask: u64) -> Result<Subset> {
        if mask & !full_mask(self.size) != 0 {
            return Err(Error::IndexOutOfRange {
                index: (63 - mask.leading_zeros()) as usize,
                size: self.size,
            });
        }
        Ok(Subset::raw(self.size, mask))
    }

    /// Renders a subset with labels when present, e.g. `{a, c}`.
    pub fn render(&self, s: Subset) -> String {
        let parts: Vec<String> = s
            .iter()
            .map(|i| match self.label(i) {
                Some(l) => l.to_string(),
                None => i.to_string(),
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn full_mask(size: usize) -> u64 {
    if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

/// A subset of a [`Universe`], stored as a membership word. Two subsets are
/// equal iff they live over the same universe size and have the same members.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    size: u32,
    mask: u64,
}

impl Subset {
    pub(crate) fn raw(size: usize, mask: u64) -> Self {
        debug_assert!((1..=MAX_UNIVERSE).contains(&size));
        debug_assert_eq!(mask & !full_mask(size), 0);
        Subset {
            size: size as u32,
            mask,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.size as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.size as usize && self.mask >> index & 1 == 1
    }

    pub fn cardinality(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.size as usize)
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut bits = self.mask;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Subset {
        Subset::raw(self.size as usize, !self.mask & full_mask(self.size as usize))
    }

    pub fn union(&self, other: Subset) -> Result<Subset> {
        self.check_universe(other)?;
        Ok(Subset::raw(self.size as usize, self.mask | other.mask))
    }

    pub fn intersect(&self, other: Subset) -> Result<Subset> {
        self.check_universe(other)?;
        Ok(Subset::raw(self.size as usize, self.mask & other.mask))
    }

    pub fn difference(&self, other: Subset) -> Result<Subset> {
        self.check_universe(other)?;
        Ok(Subset::raw(self.size as usize, self.mask & !other.mask))
    }

    pub fn is_subset_of(&self, other: Subset) -> Result<bool> {
        self.check_universe(other)?;
        Ok(self.mask & !other.mask == 0)
    }

    fn check_universe(&self, other: Subset) -> Result<()> {
        if self.size != other.size {
            return Err(Error::UniverseMismatch {
                left: self.size as usize,
                right: other.size as usize,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Canonical JSON form: the sorted array of member indices.
impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.cardinality()))?;
        for i in self.iter() {
            seq.serialize_element(&i)?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
}

pub fn set_algebra(op: SetOp, a: Subset, b: Subset) -> Result<Subset> {
    match op {
        SetOp::Union => a.union(b),
        SetOp::Intersect => a.intersect(b),
        SetOp::Difference => a.difference(b),
    }
}

/// Streams all `2^size` subsets in increasing mask order, from the empty set
/// to the full universe.
pub fn enumerate_subsets(universe: &Universe) -> Result<SubsetIter> {
    let n = universe.size();
    if n > ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            size: n,
            bound: ENUMERATION_BOUND,
        });
    }
    Ok(SubsetIter {
        size: n,
        next: 0,
        end: 1u64 << n,
    })
}

pub struct SubsetIter {
    size: usize,
    next: u64,
    end: u64,
}

impl Iterator for SubsetIter {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        if self.next == self.end {
            return None;
        }
        let s = Subset::raw(self.size, self.next);
        self.next += 1;
        Some(s)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.end - self.next) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for SubsetIter {}
