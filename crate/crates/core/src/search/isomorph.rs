//! Optional post-pass that keeps one family per relabeling-invariant
//! signature. Two families with equal signatures are not guaranteed to be
//! isomorphic; the reduction only ever merges, never splits, a class.

use std::collections::BTreeSet;

use crate::setcore::Family;

/// Sorted point degrees, sorted pairwise meet sizes, and sorted per-member
/// profiles of meet sizes with the rest of the family.
pub fn signature(f: &Family) -> Vec<Vec<u32>> {
    let n = f.universe();
    let m = f.masks();
    let mut degrees: Vec<u32> = (0..n)
        .map(|i| m.iter().filter(|x| *x >> i & 1 == 1).count() as u32)
        .collect();
    degrees.sort_unstable();
    let mut profiles: Vec<Vec<u32>> = m
        .iter()
        .map(|a| {
            let mut p: Vec<u32> = m.iter().map(|b| (a & b).count_ones()).collect();
            p.sort_unstable();
            p
        })
        .collect();
    profiles.sort();
    let mut out = vec![degrees];
    out.extend(profiles);
    out
}

/// Keeps the first family (in input order) of each signature class.
pub fn reduce(families: Vec<Family>) -> Vec<Family> {
    let mut seen = BTreeSet::new();
    families
        .into_iter()
        .filter(|f| seen.insert(signature(f)))
        .collect()
}
