//! Subsets of a finite abelian group as bit-packed membership masks.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

/// A subset of a [`GroupSpec`], stored as a bitmask over `[0, order)`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupSet {
    group: GroupSpec,
    words: Vec<u64>,
    len: usize,
}

impl fmt::Debug for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSet({}, {})", self.group, self)
    }
}

impl fmt::Display for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.indices().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

fn word_count(order: usize) -> usize {
    order.div_ceil(64)
}

impl GroupSet {
    pub fn empty(group: &GroupSpec) -> Self {
        GroupSet {
            group: group.clone(),
            words: vec![0; word_count(group.order())],
            len: 0,
        }
    }

    pub fn full(group: &GroupSpec) -> Self {
        let mut s = Self::empty(group);
        for i in 0..group.order() {
            s.insert_idx(i);
        }
        s
    }

    pub fn singleton(group: &GroupSpec, x: Element) -> Result<Self> {
        Self::from_elements(group, [x])
    }

    /// Builds a set from canonical indices; duplicates are merged.
    pub fn from_indices<I>(group: &GroupSpec, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        let mut s = Self::empty(group);
        for i in indices {
            let e = group.element(i)?;
            s.insert_idx(e.index());
        }
        Ok(s)
    }

    pub fn from_elements<I>(group: &GroupSpec, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = Element>,
    {
        Self::from_indices(group, elements.into_iter().map(|e| e.index() as u64))
    }

    /// Unchecked constructor for crate-internal index iterators.
    pub(crate) fn from_idx_iter<I: IntoIterator<Item = usize>>(group: &GroupSpec, it: I) -> Self {
        let mut s = Self::empty(group);
        for i in it {
            s.insert_idx(i);
        }
        s
    }

    /// Builds the set picked out by `mask` from a list of member indices.
    pub(crate) fn from_member_mask(group: &GroupSpec, members: &[usize], mask: u64) -> Self {
        let mut s = Self::empty(group);
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            s.insert_idx(members[j]);
            m &= m - 1;
        }
        s
    }

    #[inline]
    pub(crate) fn insert_idx(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.len += 1;
        }
        fresh
    }

    #[inline]
    pub(crate) fn remove_idx(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let present = self.words[w] & (1 << b) != 0;
        if present {
            self.words[w] &= !(1 << b);
            self.len -= 1;
        }
        present
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains_idx(&self, i: usize) -> bool {
        i < self.group.order() && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn contains(&self, x: Element) -> bool {
        self.contains_idx(x.index())
    }

    /// Member indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.indices().map(|i| self.group.element(i as u64).expect("member in range"))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.indices().collect()
    }

    pub(crate) fn same_group(&self, other: &GroupSet) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.group.to_string(),
                right: other.group.to_string(),
            })
        }
    }

    fn zip_words(&self, other: &GroupSet, op: impl Fn(u64, u64) -> u64) -> Result<GroupSet> {
        self.same_group(other)?;
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(GroupSet {
            group: self.group.clone(),
            words,
            len,
        })
    }

    pub fn union(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_words(other, |a, b| a & b)
    }

    /// Set difference `self \ other`.
    pub fn minus(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &GroupSet) -> Result<usize> {
        self.same_group(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum())
    }

    pub fn is_subset(&self, other: &GroupSet) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &GroupSet) -> Result<bool> {
        Ok(self.intersection_len(other)? == 0)
    }

    pub fn complement(&self) -> GroupSet {
        GroupSet::from_idx_iter(&self.group, (0..self.group.order()).filter(|&i| !self.contains_idx(i)))
    }

    /// The translate `self + x`.
    pub fn translate(&self, x: Element) -> Result<GroupSet> {
        self.group.element(x.index() as u64)?;
        Ok(GroupSet::from_idx_iter(
            &self.group,
            self.indices().map(|a| self.group.add_idx(a, x.index())),
        ))
    }

    /// The reflection `-self`.
    pub fn negate(&self) -> GroupSet {
        GroupSet::from_idx_iter(&self.group, self.indices().map(|a| self.group.neg_idx(a)))
    }

    /// Numeric value of the membership mask restricted to `members`
    /// (bit `j` set when `members[j]` belongs to this set).
    #[cfg(test)]
    pub(crate) fn member_mask(&self, members: &[usize]) -> u64 {
        members
            .iter()
            .enumerate()
            .filter(|(_, &m)| self.contains_idx(m))
            .fold(0, |acc, (j, _)| acc | (1 << j))
    }
}
