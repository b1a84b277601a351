//! Decision procedures: r-wise and cross t-intersection, triviality,
//! maximality, duals and t-covers.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setcore::{Family, KSubsets, SetMask};

/// A convention relied on when a family is empty. Reports list these so the
/// reader can see which verdicts did not come from the definitions alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// The intersection of no sets is `[n]`, so an empty family is trivial.
    EmptyIntersectionIsUniverse,
    /// The covering number of an empty family is 0, witnessed by `∅`.
    EmptyCoverIsZero,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::EmptyIntersectionIsUniverse => "empty-intersection-is-universe",
            Convention::EmptyCoverIsZero => "empty-cover-is-zero",
        }
    }
}

/// Distinct intersections of all sub-multisets of `f` with `1..=depth` members.
pub(crate) fn intersection_levels(f: &Family, depth: usize) -> Vec<u64> {
    let mut seen: HashSet<u64> = f.masks().iter().copied().collect();
    let mut frontier: Vec<u64> = f.masks().to_vec();
    for _ in 1..depth {
        let mut next = Vec::new();
        for &i in &frontier {
            for &m in f.masks() {
                let j = i & m;
                if seen.insert(j) {
                    next.push(j);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Every choice of `r` members (repetition allowed) meets in at least `t`
/// points. For `|f| <= 1` this reduces to `k >= t`.
pub fn is_r_wise_t_intersecting(f: &Family, r: usize, t: u32) -> bool {
    if f.k() < t {
        return false;
    }
    intersection_levels(f, r.max(1))
        .iter()
        .all(|m| m.count_ones() >= t)
}

/// `|∩ f| < t`; an empty family counts as trivial.
pub fn is_nontrivial(f: &Family, t: u32) -> bool {
    f.intersection().len() < t
}

/// A pair of families over the same universe, with intersection threshold `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairParams {
    pub t: u32,
    pub first: Family,
    pub second: Family,
}

impl PairParams {
    pub fn new(t: u32, first: Family, second: Family) -> Result<Self> {
        if first.universe() != second.universe() {
            return Err(Error::Parameter(format!(
                "universe mismatch: {} vs {}",
                first.universe(),
                second.universe()
            )));
        }
        Ok(Self { t, first, second })
    }

    pub fn conventions(&self) -> Vec<Convention> {
        if self.first.is_empty() || self.second.is_empty() {
            vec![Convention::EmptyIntersectionIsUniverse]
        } else {
            Vec::new()
        }
    }
}

/// `|∩F1 ∩ ∩F2| < t`.
pub fn is_nontrivial_pair(p: &PairParams) -> bool {
    p.first
        .intersection()
        .intersection(&p.second.intersection())
        .len()
        < p.t
}

pub fn is_cross_t_intersecting(p: &PairParams) -> bool {
    let t = p.t;
    p.first
        .masks()
        .iter()
        .all(|a| p.second.masks().iter().all(|b| (a & b).count_ones() >= t))
}

/// All `k_out`-subsets meeting every member of `f` in at least `t` points.
pub fn dual(f: &Family, k_out: u32, t: u32) -> Result<Family> {
    let n = f.universe();
    if k_out > n {
        return Err(Error::Parameter(format!("k_out = {k_out} exceeds n = {n}")));
    }
    let members = KSubsets::new(n, k_out)
        .filter(|a| f.masks().iter().all(|m| (a & m).count_ones() >= t))
        .collect();
    Ok(Family::from_sorted(n, k_out, members))
}

/// No k-set outside `f` can be added while keeping `f` r-wise t-intersecting.
pub fn is_maximal_rwise(f: &Family, r: usize, t: u32) -> Result<bool> {
    if !is_r_wise_t_intersecting(f, r, t) {
        return Err(Error::Contract(format!(
            "family is not {r}-wise {t}-intersecting"
        )));
    }
    let levels = intersection_levels(f, r.saturating_sub(1).max(1));
    let levels: &[u64] = if r <= 1 || f.is_empty() { &[] } else { &levels };
    let addable = KSubsets::new(f.universe(), f.k()).any(|a| {
        f.masks().binary_search(&a).is_err()
            && a.count_ones() >= t
            && levels.iter().all(|m| (a & m).count_ones() >= t)
    });
    Ok(!addable)
}

/// Both sides are closed: each equals the dual of the other.
pub fn is_maximal_cross_pair(p: &PairParams) -> Result<bool> {
    if !is_cross_t_intersecting(p) {
        return Err(Error::Contract("pair is not cross t-intersecting".into()));
    }
    Ok(dual(&p.first, p.second.k(), p.t)? == p.second
        && dual(&p.second, p.first.k(), p.t)? == p.first)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    TCover,
}

/// A set meeting every member in at least `t` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub cover: SetMask,
    pub size: u32,
    pub kind: CoverKind,
    pub t: u32,
}

impl CoverCertificate {
    pub fn certifies(&self, f: &Family) -> bool {
        self.cover.len() == self.size && f.iter().all(|m| m.meet_size(&self.cover) >= self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub tau: u32,
    pub certificate: CoverCertificate,
    pub conventions: Vec<Convention>,
}

/// Places the low bits of `pos` onto the set bits of `u`, in order.
fn deposit(mut pos: u64, mut u: u64) -> u64 {
    let mut out = 0;
    while pos != 0 && u != 0 {
        let low = u & u.wrapping_neg();
        if pos & 1 == 1 {
            out |= low;
        }
        pos >>= 1;
        u ^= low;
    }
    out
}

/// Subsets of `u` with `s` elements, increasing in position order.
fn subsets_within(u: u64, s: u32) -> impl Iterator<Item = u64> {
    KSubsets::new(u.count_ones(), s).map(move |p| deposit(p, u))
}

fn covers(f: &Family, c: u64, t: u32) -> bool {
    f.masks().iter().all(|m| (m & c).count_ones() >= t)
}

fn check_coverable(f: &Family, t: u32) -> Result<()> {
    if f.k() < t {
        return Err(Error::Parameter(format!(
            "no {t}-cover exists for a family of {}-sets",
            f.k()
        )));
    }
    Ok(())
}

/// `τ_t(f)` with a witness. Candidates are drawn from `∪f` only.
pub fn covering_number(f: &Family, t: u32) -> Result<CoverResult> {
    let n = f.universe();
    if f.is_empty() {
        return Ok(CoverResult {
            tau: 0,
            certificate: CoverCertificate {
                cover: SetMask::empty(n),
                size: 0,
                kind: CoverKind::TCover,
                t,
            },
            conventions: vec![Convention::EmptyCoverIsZero],
        });
    }
    check_coverable(f, t)?;
    let u = f.union().bits();
    for s in t..=u.count_ones() {
        if let Some(c) = subsets_within(u, s).find(|&c| covers(f, c, t)) {
            return Ok(CoverResult {
                tau: s,
                certificate: CoverCertificate {
                    cover: SetMask::new(n, c)?,
                    size: s,
                    kind: CoverKind::TCover,
                    t,
                },
                conventions: Vec::new(),
            });
        }
    }
    unreachable!("the union is a t-cover")
}

/// All t-covers of size `τ_t(f)`, as a family of `τ_t(f)`-sets.
pub fn min_covers(f: &Family, t: u32) -> Result<Family> {
    let tau = covering_number(f, t)?.tau;
    let n = f.universe();
    if f.is_empty() {
        return Family::new(n, 0, [0]);
    }
    // A cover may use points outside ∪f only when it has spare room; those
    // covers are not minimal, so restricting to ∪f loses nothing.
    let u = f.union().bits();
    Family::new(n, tau, subsets_within(u, tau).filter(|&c| covers(f, c, t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_a, build_star, build_threshold, AParams};
    use crate::setcore::enumerate_k_subsets;

    fn set(n: u32, e: &[u32]) -> SetMask {
        SetMask::from_elements(n, e).unwrap()
    }

    fn fam(n: u32, k: u32, sets: &[&[u32]]) -> Family {
        Family::from_sets(n, k, sets.iter().map(|s| set(n, s))).unwrap()
    }

    fn triangle(n: u32) -> Family {
        fam(n, 2, &[&[1, 2], &[1, 3], &[2, 3]])
    }

    // Oracle: every r-tuple with repetition, by nested index loops.
    fn rwise_naive(f: &Family, r: usize, t: u32) -> bool {
        let m = f.masks();
        if m.is_empty() {
            return f.k() >= t;
        }
        let mut idx = vec![0usize; r];
        loop {
            let inter = idx.iter().fold(u64::MAX, |acc, &i| acc & m[i]);
            if inter.count_ones() < t {
                return false;
            }
            let mut p = 0;
            loop {
                if p == r {
                    return true;
                }
                idx[p] += 1;
                if idx[p] < m.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    #[test]
    fn rwise_examples() {
        assert!(is_r_wise_t_intersecting(&triangle(4), 2, 1));
        assert!(!is_r_wise_t_intersecting(&triangle(4), 3, 1));
        for k in 2..=5u32 {
            let m: Vec<u32> = (1..=k + 1).collect();
            let f = enumerate_k_subsets(k + 1, k).unwrap();
            let f = Family::from_sets(k + 3, k, f.iter().map(|s| set(k + 3, &s.elements())))
                .unwrap();
            assert_eq!(m.len() as u32, k + 1);
            for t in 1..k {
                for r in 2..=(k - t + 1) as usize {
                    assert!(is_r_wise_t_intersecting(&f, r, t), "k={k} t={t} r={r}");
                }
                assert!(!is_r_wise_t_intersecting(&f, (k - t + 2) as usize, t));
            }
        }
    }

    #[test]
    fn rwise_agrees_with_naive_on_all_small_families() {
        let all = enumerate_k_subsets(5, 3).unwrap();
        let masks = all.masks().to_vec();
        for sel in 0u32..(1 << masks.len()) {
            if sel.count_ones() > 5 {
                continue;
            }
            let f = Family::new(5, 3, (0..masks.len()).filter(|i| sel >> i & 1 == 1).map(|i| masks[i]))
                .unwrap();
            for r in 2..=4 {
                for t in 1..=2 {
                    assert_eq!(is_r_wise_t_intersecting(&f, r, t), rwise_naive(&f, r, t));
                }
            }
        }
    }

    #[test]
    fn singleton_and_empty() {
        let f = fam(5, 2, &[&[1, 2]]);
        assert!(is_r_wise_t_intersecting(&f, 3, 2));
        assert!(!is_r_wise_t_intersecting(&f, 3, 3));
        assert!(is_r_wise_t_intersecting(&Family::empty(5, 2), 3, 2));
    }

    #[test]
    fn triviality() {
        let star = build_star(6, 3, &set(6, &[1, 2])).unwrap();
        assert!(!is_nontrivial(&star, 2));
        assert!(is_nontrivial(&triangle(4), 1));
        assert!(!is_nontrivial(&Family::empty(5, 2), 1));
        let p = PairParams::new(1, fam(5, 2, &[&[1, 2]]), fam(5, 2, &[&[1, 3]])).unwrap();
        assert!(!is_nontrivial_pair(&p));
        let p = PairParams::new(1, fam(5, 2, &[&[1, 2]]), fam(5, 2, &[&[2, 3], &[1, 3]])).unwrap();
        assert!(is_nontrivial_pair(&p));
        let p = PairParams::new(1, Family::empty(5, 2), fam(5, 2, &[&[1, 3]])).unwrap();
        assert_eq!(p.conventions(), vec![Convention::EmptyIntersectionIsUniverse]);
        assert!(PairParams::new(1, Family::empty(5, 2), Family::empty(6, 2)).is_err());
    }

    #[test]
    fn cross_examples() {
        let tt = set(7, &[1, 2]);
        let p = PairParams::new(
            1,
            build_star(7, 3, &tt).unwrap(),
            build_threshold(7, 2, 1, &tt).unwrap(),
        )
        .unwrap();
        assert!(is_cross_t_intersecting(&p));
        let p = PairParams::new(1, fam(4, 2, &[&[1, 2]]), fam(4, 2, &[&[3, 4]])).unwrap();
        assert!(!is_cross_t_intersecting(&p));
    }

    #[test]
    fn dual_of_single_set_is_hypergeometric() {
        use crate::formulas::binomial;
        let n = 8u32;
        for k1 in 1..=4u32 {
            for k2 in 1..=4u32 {
                for t in 1..=k1.min(k2) {
                    let a: Vec<u32> = (1..=k1).collect();
                    let d = dual(&fam(n, k1, &[&a]), k2, t).unwrap();
                    let want: num_bigint::BigInt = (t..=k1.min(k2))
                        .map(|i| {
                            binomial(k1 as i64, i as i64)
                                * binomial((n - k1) as i64, (k2 - i) as i64)
                        })
                        .sum();
                    assert_eq!(num_bigint::BigInt::from(d.len()), want);
                }
            }
        }
        assert_eq!(
            dual(&Family::empty(6, 2), 3, 1).unwrap(),
            enumerate_k_subsets(6, 3).unwrap()
        );
    }

    #[test]
    fn maximal_rwise() {
        for k in 2..=4u32 {
            for t in 1..k {
                let r = (k - t + 1) as usize;
                let n = k + 3;
                let m: Vec<u32> = (1..=k + 1).collect();
                let f = build_star(n, k, &SetMask::empty(n))
                    .unwrap()
                    .filter(|s| s.is_subset_of(&set(n, &m)));
                assert_eq!(f.len() as u32, k + 1);
                assert!(is_maximal_rwise(&f, r, t).unwrap(), "k={k} t={t}");
            }
        }
        let sub = fam(5, 2, &[&[1, 2], &[1, 3]]);
        assert!(!is_maximal_rwise(&sub, 2, 1).unwrap());
        assert!(matches!(
            is_maximal_rwise(&triangle(5), 3, 1),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn maximal_cross_pair() {
        let x = set(6, &[1]);
        let p = PairParams::new(1, build_star(6, 2, &x).unwrap(), build_star(6, 3, &x).unwrap())
            .unwrap();
        assert!(is_maximal_cross_pair(&p).unwrap());
        let p = PairParams::new(1, fam(6, 2, &[&[1, 2]]), build_star(6, 3, &x).unwrap()).unwrap();
        assert!(!is_maximal_cross_pair(&p).unwrap());
    }

    #[test]
    fn covers() {
        let x = set(7, &[2, 5]);
        let star = build_star(7, 3, &x).unwrap();
        let c = covering_number(&star, 2).unwrap();
        assert_eq!((c.tau, c.certificate.cover), (2, x));
        assert!(c.certificate.certifies(&star));
        assert_eq!(min_covers(&star, 2).unwrap(), fam(7, 2, &[&[2, 5]]));

        let c = covering_number(&triangle(5), 1).unwrap();
        assert_eq!(c.tau, 2);
        assert!(c.certificate.certifies(&triangle(5)));
        assert_eq!(min_covers(&triangle(5), 1).unwrap(), triangle(5));

        let z = set(7, &[1, 2, 3, 4]);
        let t = 2;
        let a = build_a(&AParams::new(7, 3, t, z).unwrap()).unwrap();
        assert_eq!(covering_number(&a, t).unwrap().tau, t + 1);
        let want = build_star(7, t + 1, &SetMask::empty(7))
            .unwrap()
            .filter(|s| s.is_subset_of(&z));
        assert_eq!(min_covers(&a, t).unwrap(), want);

        let e = covering_number(&Family::empty(5, 2), 1).unwrap();
        assert_eq!(e.tau, 0);
        assert_eq!(e.conventions, vec![Convention::EmptyCoverIsZero]);
        assert!(covering_number(&fam(5, 1, &[&[1]]), 2).is_err());
        let apart = fam(5, 1, &[&[1], &[2]]);
        assert_eq!(covering_number(&apart, 1).unwrap().tau, 2);
    }

    #[test]
    fn deposit_places_bits() {
        assert_eq!(deposit(0b101, 0b1011_0000), 0b1001_0000);
        let got: Vec<u64> = subsets_within(0b1101, 2).collect();
        assert_eq!(got, vec![0b0101, 0b1001, 0b1100]);
    }
}
