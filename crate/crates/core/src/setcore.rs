//! Subsets of `[n]` as single-word bitmasks, uniform families of them, and
//! the plain-text family format shared by the CLI and golden files.
//!
//! Element `i` of `[n]` (1-based, as printed) lives in bit `i - 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

pub const MAX_UNIVERSE: u32 = 64;

fn universe_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of `[n]`, `n <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetMask {
    bits: u64,
    n: u32,
}

impl SetMask {
    pub fn new(n: u32, bits: u64) -> Result<Self> {
        if n > MAX_UNIVERSE {
            return param(format!("universe size {n} outside 0..=64"));
        }
        if bits & !universe_mask(n) != 0 {
            return param(format!("mask {bits:#x} has bits outside [{n}]"));
        }
        Ok(Self { bits, n })
    }

    pub(crate) fn from_raw(n: u32, bits: u64) -> Self {
        debug_assert!(bits & !universe_mask(n) == 0);
        Self { bits, n }
    }

    /// Builds a subset from 1-based elements.
    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return param(format!("element {e} is not in [1, {n}]"));
            }
            bits |= 1 << (e - 1);
        }
        Self::new(n, bits)
    }

    pub fn empty(n: u32) -> Self {
        Self { bits: 0, n }
    }

    pub fn full(n: u32) -> Self {
        Self {
            bits: universe_mask(n),
            n,
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset_of(&self, other: &SetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn contains(&self, element: u32) -> bool {
        element >= 1 && element <= self.n && self.bits >> (element - 1) & 1 == 1
    }

    pub fn intersection(&self, other: &SetMask) -> SetMask {
        Self::from_raw(self.n, self.bits & other.bits)
    }

    pub fn union(&self, other: &SetMask) -> SetMask {
        Self::from_raw(self.n, self.bits | other.bits)
    }

    pub fn difference(&self, other: &SetMask) -> SetMask {
        Self::from_raw(self.n, self.bits & !other.bits)
    }

    pub fn meet_size(&self, other: &SetMask) -> u32 {
        (self.bits & other.bits).count_ones()
    }

    /// 1-based elements in ascending order.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut b = self.bits;
        while b != 0 {
            out.push(b.trailing_zeros() + 1);
            b &= b - 1;
        }
        out
    }

    /// Parses `"1,2,5"` (an empty string is the empty set).
    pub fn parse(n: u32, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Self::new(n, 0);
        }
        let mut elems = Vec::new();
        for tok in s.split(',') {
            let e: u32 = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("bad element `{tok}`")))?;
            elems.push(e);
        }
        Self::from_elements(n, &elems)
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.elements() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// A duplicate-free family of `k`-subsets of `[n]`, kept in increasing mask order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: u32,
    k: u32,
    members: Vec<u64>,
}

impl Family {
    /// Validates, sorts and deduplicates.
    pub fn new(n: u32, k: u32, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n > MAX_UNIVERSE {
            return param(format!("universe size {n} outside 0..=64"));
        }
        if k > n {
            return param(format!("member size {k} exceeds universe {n}"));
        }
        let um = universe_mask(n);
        let mut members: Vec<u64> = Vec::new();
        for m in masks {
            if m & !um != 0 {
                return param(format!("mask {m:#x} outside [{n}]"));
            }
            if m.count_ones() != k {
                return param(format!(
                    "member {:?} has size {}, expected {k}",
                    SetMask::from_raw(n, m),
                    m.count_ones()
                ));
            }
            members.push(m);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { n, k, members })
    }

    pub fn from_sets(n: u32, k: u32, sets: impl IntoIterator<Item = SetMask>) -> Result<Self> {
        let mut masks = Vec::new();
        for s in sets {
            if s.universe() != n {
                return param(format!("universe mismatch: {} vs {n}", s.universe()));
            }
            masks.push(s.bits());
        }
        Self::new(n, k, masks)
    }

    /// Caller guarantees sortedness, uniqueness and cardinality.
    pub(crate) fn from_sorted(n: u32, k: u32, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|m| m.count_ones() == k));
        Self { n, k, members }
    }

    pub fn empty(n: u32, k: u32) -> Self {
        Self {
            n,
            k,
            members: Vec::new(),
        }
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = SetMask> + '_ {
        self.members.iter().map(|&b| SetMask::from_raw(self.n, b))
    }

    pub fn contains(&self, s: &SetMask) -> bool {
        s.universe() == self.n && self.members.binary_search(&s.bits()).is_ok()
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.n == other.n
            && (self.is_empty() || self.k == other.k)
            && self
                .members
                .iter()
                .all(|m| other.members.binary_search(m).is_ok())
    }

    /// Members containing `s`.
    pub fn restrict(&self, s: &SetMask) -> Result<Family> {
        if s.universe() != self.n {
            return param(format!(
                "universe mismatch: family over [{}], set over [{}]",
                self.n,
                s.universe()
            ));
        }
        let b = s.bits();
        let members = self.members.iter().copied().filter(|m| m & b == b).collect();
        Ok(Self::from_sorted(self.n, self.k, members))
    }

    /// Bitwise AND of all members; the empty family yields the full universe.
    pub fn intersection(&self) -> SetMask {
        let bits = self
            .members
            .iter()
            .fold(universe_mask(self.n), |acc, m| acc & m);
        SetMask::from_raw(self.n, bits)
    }

    pub fn union(&self) -> SetMask {
        SetMask::from_raw(self.n, self.members.iter().fold(0, |acc, m| acc | m))
    }

    pub fn union_with(&self, other: &Family) -> Result<Family> {
        self.check_compatible(other)?;
        let k = if self.is_empty() { other.k } else { self.k };
        Family::new(self.n, k, self.members.iter().chain(&other.members).copied())
    }

    /// Members of `self` absent from `other`.
    pub fn difference(&self, other: &Family) -> Family {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|m| other.members.binary_search(m).is_err())
            .collect();
        Self::from_sorted(self.n, self.k, members)
    }

    pub fn filter(&self, mut keep: impl FnMut(SetMask) -> bool) -> Family {
        let n = self.n;
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&m| keep(SetMask::from_raw(n, m)))
            .collect();
        Self::from_sorted(self.n, self.k, members)
    }

    fn check_compatible(&self, other: &Family) -> Result<()> {
        if self.n != other.n {
            return param(format!("universe mismatch: {} vs {}", self.n, other.n));
        }
        if !self.is_empty() && !other.is_empty() && self.k != other.k {
            return param(format!("member size mismatch: {} vs {}", self.k, other.k));
        }
        Ok(())
    }

    /// Renders the text format: `"n k"` then one member per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for s in self.iter() {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Family> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `n k` header".into(),
        })?;
        let nums: Vec<u32> = header
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: hl,
                msg: format!("bad header `{header}`: {e}"),
            })?;
        let [n, k] = nums[..] else {
            return Err(Error::Parse {
                line: hl,
                msg: format!("header must be `n k`, got `{header}`"),
            });
        };
        let mut masks = Vec::new();
        for (ln, line) in lines {
            let s = SetMask::parse(n, line).map_err(|e| Error::Parse {
                line: ln,
                msg: e.to_string(),
            })?;
            if s.len() != k {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("member `{line}` has size {}, expected {k}", s.len()),
                });
            }
            masks.push(s.bits());
        }
        Family::new(n, k, masks).map_err(|e| Error::Parse {
            line: hl,
            msg: e.to_string(),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::parse_text(s)
    }
}

/// JSON shape of a family: `{"n": 5, "k": 2, "members": [[1,2],[1,3]]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyRecord {
    pub n: u32,
    pub k: u32,
    pub members: Vec<Vec<u32>>,
}

impl From<&Family> for FamilyRecord {
    fn from(f: &Family) -> Self {
        Self {
            n: f.n,
            k: f.k,
            members: f.iter().map(|s| s.elements()).collect(),
        }
    }
}

impl TryFrom<FamilyRecord> for Family {
    type Error = Error;

    fn try_from(r: FamilyRecord) -> Result<Self> {
        let sets = r
            .members
            .iter()
            .map(|m| SetMask::from_elements(r.n, m))
            .collect::<Result<Vec<_>>>()?;
        Family::from_sets(r.n, r.k, sets)
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FamilyRecord::deserialize(d)?;
        Family::try_from(r).map_err(serde::de::Error::custom)
    }
}

/// Iterates k-subsets of `[n]` as raw masks in increasing order (Gosper's hack).
pub(crate) struct KSubsets {
    next: Option<u128>,
    limit: u128,
}

impl KSubsets {
    pub(crate) fn new(n: u32, k: u32) -> Self {
        let limit = 1u128 << n;
        let first = if k == 0 { 0 } else { (1u128 << k) - 1 };
        Self {
            next: (k <= n).then_some(first),
            limit,
        }
    }
}

impl Iterator for KSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt)
        };
        Some(cur as u64)
    }
}

/// Materializes every k-subset of `[n]` in canonical order.
pub fn enumerate_k_subsets(n: u32, k: u32) -> Result<Family> {
    if n > MAX_UNIVERSE {
        return param(format!("universe size {n} outside 0..=64"));
    }
    if k > n {
        return param(format!("k = {k} exceeds n = {n}"));
    }
    Ok(Family::from_sorted(n, k, KSubsets::new(n, k).collect()))
}

/// The free-standing form of [`Family::intersection`].
pub fn family_intersection(f: &Family) -> SetMask {
    f.intersection()
}

pub fn restrict(f: &Family, s: &SetMask) -> Result<Family> {
    f.restrict(s)
}
