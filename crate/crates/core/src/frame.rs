//! Frames of discernment and subsets encoded as bitmasks.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported frame. Power-set work is O(2^n) to O(3^n).
pub const MAX_FRAME_SIZE: usize = 24;

/// A subset of a frame, bit `i` set when element `i` is a member.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FocalSet(u32);

impl FocalSet {
    pub const EMPTY: FocalSet = FocalSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        FocalSet(bits)
    }

    pub const fn singleton(index: usize) -> Self {
        FocalSet(1 << index)
    }

    /// The whole frame of `size` elements.
    pub const fn full(size: usize) -> Self {
        FocalSet(((1u64 << size) - 1) as u32)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn is_singleton(self) -> bool {
        self.0.count_ones() == 1
    }

    pub const fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    /// Non-strict inclusion `self ⊆ other`.
    pub const fn is_subset_of(self, other: FocalSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Strict inclusion `self ⊂ other`.
    pub const fn is_strict_subset_of(self, other: FocalSet) -> bool {
        self.is_subset_of(other) && self.0 != other.0
    }

    /// True when one set includes the other.
    pub const fn is_comparable(self, other: FocalSet) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self)
    }

    pub const fn union(self, other: FocalSet) -> FocalSet {
        FocalSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: FocalSet) -> FocalSet {
        FocalSet(self.0 & other.0)
    }

    pub const fn intersects(self, other: FocalSet) -> bool {
        self.0 & other.0 != 0
    }

    pub const fn without(self, index: usize) -> FocalSet {
        FocalSet(self.0 & !(1 << index))
    }

    pub const fn with(self, index: usize) -> FocalSet {
        FocalSet(self.0 | (1 << index))
    }

    pub const fn complement(self, size: usize) -> FocalSet {
        FocalSet(!self.0 & FocalSet::full(size).0)
    }

    /// Element indices in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let index = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(index)
        })
    }

    /// Every subset obtained by removing exactly one element.
    pub fn children(self) -> impl Iterator<Item = FocalSet> {
        self.elements().map(move |i| self.without(i))
    }
}

/// An ordered, finite set of mutually exclusive outcomes.
///
/// Cloning is cheap; labels are shared.
#[derive(Clone, Debug)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for Frame {}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if !is_valid_label(label) {
                return Err(Error::InvalidLabel(label.clone()));
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Frame { labels: labels.into() })
    }

    /// A frame labelled `A`, `B`, `C`, ...
    pub fn letters(size: usize) -> Result<Self> {
        if size > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge(size));
        }
        Frame::new((0..size).map(|i| char::from(b'A' + i as u8).to_string()))
    }

    /// A frame labelled `t1`, `t2`, ..., `tn`.
    pub fn numbered(size: usize) -> Result<Self> {
        Frame::new((1..=size).map(|i| format!("t{i}")))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> FocalSet {
        FocalSet::full(self.size())
    }

    /// Number of subsets, including the empty set.
    pub fn power_set_size(&self) -> usize {
        1 << self.size()
    }

    pub fn contains_subset(&self, set: FocalSet) -> bool {
        set.is_subset_of(self.full())
    }

    pub fn check_subset(&self, set: FocalSet) -> Result<FocalSet> {
        if self.contains_subset(set) {
            Ok(set)
        } else {
            Err(Error::SubsetOutOfFrame {
                bits: set.bits(),
                size: self.size(),
            })
        }
    }

    /// Subset from labels, e.g. `["A", "C"]`.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<FocalSet> {
        labels.iter().try_fold(FocalSet::EMPTY, |acc, label| {
            let label = label.as_ref();
            self.index_of(label)
                .map(|i| acc.with(i))
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))
        })
    }

    /// Parses the `A+B` notation; `_` is the empty set.
    pub fn parse_subset(&self, text: &str) -> Result<FocalSet> {
        let text = text.trim();
        if text == "_" {
            return Ok(FocalSet::EMPTY);
        }
        let parts: Vec<&str> = text.split('+').map(str::trim).collect();
        self.subset(&parts)
    }

    /// Formats a subset in the `A+B` notation; `_` is the empty set.
    pub fn format_subset(&self, set: FocalSet) -> String {
        if set.is_empty() {
            return "_".to_string();
        }
        set.elements().map(|i| self.label(i)).collect::<Vec<_>>().join("+")
    }

    /// Short form for diagrams: `ABC` when every label is one character.
    pub fn compact_subset(&self, set: FocalSet) -> String {
        if set.is_empty() {
            return "∅".to_string();
        }
        if self.labels.iter().all(|l| l.chars().count() == 1) {
            set.elements().map(|i| self.label(i)).collect()
        } else {
            format!(
                "{{{}}}",
                set.elements().map(|i| self.label(i)).collect::<Vec<_>>().join(",")
            )
        }
    }

    /// All subsets in ascending bitmask order, starting with ∅.
    pub fn subsets(&self) -> impl Iterator<Item = FocalSet> {
        (0..self.power_set_size() as u32).map(FocalSet::from_bits)
    }

    /// All subsets of the given cardinality in ascending bitmask order.
    pub fn subsets_of_size(&self, cardinality: usize) -> impl Iterator<Item = FocalSet> {
        self.subsets().filter(move |s| s.len() == cardinality)
    }

    pub fn check_same(&self, other: &Frame) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels.join(","))
    }
}

fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && label != "_"
        && !label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '+' | ':' | ',' | '#' | '"'))
}
