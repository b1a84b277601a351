//! Classification of closed cross pairs by their t-covering numbers, and
//! the per-pair checks on minimum covers and size bounds.

use std::collections::BTreeMap;

use serde::Serialize;

use super::bitset::Bits;
use super::cross::Context;
use super::{SearchReport, Witness};
use crate::error::{Error, Result};
use crate::formulas::{bound_family_size, ExactInt, ParamSet};
use crate::setcore::Family;
use crate::verify::{covering_number, is_cross_t_intersecting, min_covers, PairParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossCase {
    /// One side empty; classified by convention only.
    EmptySide,
    /// `τ(F) = τ(G) = t`.
    Case1,
    /// `τ(F) = t`, `τ(G) = t + 1`.
    Case2,
    /// `τ(F) = t + 1`, `τ(G) = t`.
    Case3,
    /// One side `t`, the other `>= t + 2`.
    Case4,
    /// Both `>= t + 1`.
    Case5,
}

impl CrossCase {
    pub fn of(tau_f: u32, tau_g: u32, t: u32) -> CrossCase {
        match (tau_f.cmp(&t), tau_g.cmp(&t)) {
            (std::cmp::Ordering::Equal, std::cmp::Ordering::Equal) => CrossCase::Case1,
            (std::cmp::Ordering::Equal, _) if tau_g == t + 1 => CrossCase::Case2,
            (_, std::cmp::Ordering::Equal) if tau_f == t + 1 => CrossCase::Case3,
            (std::cmp::Ordering::Equal, _) | (_, std::cmp::Ordering::Equal) => CrossCase::Case4,
            _ => CrossCase::Case5,
        }
    }
}

/// Structure of a `{t, t+1}` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcase {
    /// Members of the `t+1` side missing `X` all complete `X` to one `M`.
    CommonUnion,
    /// A `(t+1)`-cover of the `t+1` side lies in every member of the `t` side.
    CoverInAll,
    Other,
    NotApplicable,
}

fn subcase(small: &Family, big: &Family, t: u32) -> Result<Subcase> {
    let xs = min_covers(small, t)?;
    for x in xs.iter() {
        let mut unions = big
            .iter()
            .filter(|g| !x.is_subset_of(g))
            .map(|g| g.union(&x));
        if let Some(m) = unions.next() {
            if m.len() == big.k() + 1 && unions.all(|u| u == m) {
                return Ok(Subcase::CommonUnion);
            }
        }
    }
    let ts = min_covers(big, t)?;
    if ts.iter().any(|tt| small.iter().all(|f| tt.is_subset_of(&f))) {
        return Ok(Subcase::CoverInAll);
    }
    Ok(Subcase::Other)
}

/// Case and subcase of a pair; `None` taus when a side is empty.
pub fn classify(f: &Family, g: &Family, t: u32) -> Result<(CrossCase, Subcase, Option<(u32, u32)>)> {
    if f.is_empty() || g.is_empty() {
        return Ok((CrossCase::EmptySide, Subcase::NotApplicable, None));
    }
    let tf = covering_number(f, t)?.tau;
    let tg = covering_number(g, t)?.tau;
    let case = CrossCase::of(tf, tg, t);
    let sub = match case {
        CrossCase::Case2 => subcase(f, g, t)?,
        CrossCase::Case3 => subcase(g, f, t)?,
        _ => Subcase::NotApplicable,
    };
    Ok((case, sub, Some((tf, tg))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub case: CrossCase,
    pub subcase: Subcase,
    pub pairs: u64,
    pub nontrivial: u64,
    #[serde(serialize_with = "super::as_string")]
    pub max_product: ExactInt,
}

/// One row per (case, subcase) present among the report's pairs. Uses the
/// full pair list when the search kept it, otherwise the optima.
pub fn covering_number_census(report: &SearchReport) -> Result<Vec<CensusRow>> {
    let ParamSet::Cross { t, .. } = report.params else {
        return Err(Error::Parameter("census needs a cross search report".into()));
    };
    let t = t as u32;
    let pairs = report.all_pairs.as_ref().unwrap_or(&report.witnesses);
    let mut rows: BTreeMap<(CrossCase, Subcase), CensusRow> = BTreeMap::new();
    for w in pairs {
        let Witness::Pair(f, g) = w else {
            return Err(Error::Parameter("census needs pair witnesses".into()));
        };
        let (case, sub, _) = classify(f, g, t)?;
        let p = PairParams::new(t, f.clone(), g.clone())?;
        let row = rows.entry((case, sub)).or_insert(CensusRow {
            case,
            subcase: sub,
            pairs: 0,
            nontrivial: 0,
            max_product: ExactInt::from(0),
        });
        row.pairs += 1;
        if crate::verify::is_nontrivial_pair(&p) {
            row.nontrivial += 1;
        }
        let v = w.value();
        if v > row.max_product {
            row.max_product = v;
        }
    }
    Ok(rows.into_values().collect())
}

/// Checks on one closed pair of k1- and k2-uniform families over `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairChecks {
    pub tau_first: u32,
    pub tau_second: u32,
    /// Minimum covers of the two sides are cross t-intersecting. Only
    /// evaluated when `n >= k1 + k2`.
    pub min_covers_cross: Option<bool>,
    /// `|F| <= bound(τ(F), τ(G))`.
    pub bound_first: bool,
    /// `|G| <= bound(τ(G), τ(F))`.
    pub bound_second: bool,
    /// `|F||G| <=` the product of the two bounds.
    pub product_bound: bool,
}

impl PairChecks {
    pub fn all_hold(&self) -> bool {
        self.min_covers_cross != Some(false) && self.bound_first && self.bound_second && self.product_bound
    }
}

/// `None` for pairs with an empty side, where covering numbers are conventions.
pub fn check_pair_claims(f: &Family, g: &Family, t: u32) -> Result<Option<PairChecks>> {
    if f.is_empty() || g.is_empty() {
        return Ok(None);
    }
    let n = f.universe();
    let (k1, k2) = (f.k(), g.k());
    let tf = covering_number(f, t)?.tau;
    let tg = covering_number(g, t)?.tau;
    let min_covers_cross = if n >= k1 + k2 {
        let p = PairParams::new(t, min_covers(f, t)?, min_covers(g, t)?)?;
        Some(is_cross_t_intersecting(&p))
    } else {
        None
    };
    let (n, k1, k2, ti) = (n as i64, k1 as i64, k2 as i64, t as i64);
    let bf = bound_family_size(tf as i64, tg as i64, n, k1, k2, ti)?;
    let bg = bound_family_size(tg as i64, tf as i64, n, k2, k1, ti)?;
    let (sf, sg) = (ExactInt::from(f.len()), ExactInt::from(g.len()));
    Ok(Some(PairChecks {
        tau_first: tf,
        tau_second: tg,
        min_covers_cross,
        bound_first: sf <= bf,
        bound_second: sg <= bg,
        product_bound: &sf * &sg <= &bf * &bg,
    }))
}

/// Largest universe the pair scanner accepts; it tabulates all `2^n` covers.
pub const SCAN_MAX_N: u32 = 12;

/// Per-side table: for each candidate cover, the k-sets it t-covers.
struct CoverTable {
    /// Candidate covers sorted by size.
    covers: Vec<u64>,
    hit: Vec<Bits>,
}

impl CoverTable {
    fn new(n: u32, side: &[u64], t: u32) -> Self {
        let mut covers: Vec<u64> = (0..1u64 << n).collect();
        covers.sort_by_key(|c| (c.count_ones(), *c));
        let hit = covers
            .iter()
            .map(|&c| {
                let mut b = Bits::EMPTY;
                for (i, &m) in side.iter().enumerate() {
                    if (m & c).count_ones() >= t {
                        b.insert(i);
                    }
                }
                b
            })
            .collect();
        Self { covers, hit }
    }

    /// `τ_t` and every cover of that size.
    fn min_covers(&self, fam: &Bits, out: &mut Vec<u64>) -> u32 {
        let mut tau = None;
        out.clear();
        for (c, hit) in self.covers.iter().zip(&self.hit) {
            let size = c.count_ones();
            if tau.is_some_and(|t| size > t) {
                break;
            }
            if fam.and_not(hit).is_empty() {
                tau = Some(size);
                out.push(*c);
            }
        }
        tau.expect("the full set covers")
    }
}

/// Aggregate of [`check_pair_claims`] and [`classify`] over every closed pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PairScan {
    pub pairs: u64,
    /// Pairs with an empty side; excluded from every check.
    pub empty_side: u64,
    pub nontrivial: u64,
    /// `None` when `n < k1 + k2`.
    pub min_covers_failures: Option<u64>,
    pub bound_failures: u64,
    pub product_failures: u64,
    pub census: Vec<CensusRow>,
    pub first_failure: Option<String>,
}

impl PairScan {
    pub fn all_hold(&self) -> bool {
        self.min_covers_failures.unwrap_or(0) == 0
            && self.bound_failures == 0
            && self.product_failures == 0
    }
}

fn small_subcase(small: &[u64], xs: &[u64], big: &[u64], big_k: u32, ts: &[u64]) -> Subcase {
    for &x in xs {
        let mut unions = big.iter().filter(|&&g| g & x != x).map(|g| g | x);
        if let Some(m) = unions.next() {
            if m.count_ones() == big_k + 1 && unions.all(|u| u == m) {
                return Subcase::CommonUnion;
            }
        }
    }
    if ts.iter().any(|&tt| small.iter().all(|&f| f & tt == tt)) {
        return Subcase::CoverInAll;
    }
    Subcase::Other
}

/// Runs the cover and bound checks, and the census, on every closed pair of
/// k1- and k2-uniform families over `[n]`, working directly on bitmaps.
pub fn scan_closed_pairs(n: u32, k1: u32, k2: u32, t: u32, budget: u64) -> Result<PairScan> {
    if n > SCAN_MAX_N {
        return Err(Error::Refused {
            reason: "pair scan tabulates every subset of [n]".into(),
            estimate: n as u64,
            budget: SCAN_MAX_N as u64,
        });
    }
    let ctx = Context::new(n, k1, k2, t)?;
    let (lt, rt) = (CoverTable::new(n, &ctx.left, t), CoverTable::new(n, &ctx.right, t));
    let lemma_applies = n >= k1 + k2;
    let (ni, k1i, k2i, ti) = (n as i64, k1 as i64, k2 as i64, t as i64);
    let side = (n as usize + 1) * (n as usize + 1);
    let mut bounds: Vec<Option<i128>> = vec![None; 2 * side];
    let mut bound = |mf: u32, mg: u32, first: bool| -> Result<i128> {
        let slot = first as usize * side + mf as usize * (n as usize + 1) + mg as usize;
        if let Some(b) = bounds[slot] {
            return Ok(b);
        }
        let (k, l) = if first { (k1i, k2i) } else { (k2i, k1i) };
        let b = bound_family_size(mf as i64, mg as i64, ni, k, l, ti)?;
        let b = i128::try_from(&b).map_err(|_| Error::Contract(format!("bound {b} out of range")))?;
        bounds[slot] = Some(b);
        Ok(b)
    };
    let full = (1u64 << n) - 1;
    let mut scan = PairScan {
        min_covers_failures: lemma_applies.then_some(0),
        ..Default::default()
    };
    let mut rows: BTreeMap<(CrossCase, Subcase), CensusRow> = BTreeMap::new();
    let mut err = None;
    let mut empty_nontrivial = 0;
    let (mut lm, mut rm, mut xs, mut ys) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut max_products: BTreeMap<(CrossCase, Subcase), i128> = BTreeMap::new();
    ctx.enumerate(budget, |l, r| {
        scan.pairs += 1;
        if err.is_some() {
            return;
        }
        lm.clear();
        lm.extend(l.iter().map(|i| ctx.left[i]));
        rm.clear();
        rm.extend(r.iter().map(|i| ctx.right[i]));
        let inter = lm.iter().chain(&rm).fold(full, |a, m| a & m);
        let nontrivial = inter.count_ones() < t;
        scan.nontrivial += nontrivial as u64;
        if l.is_empty() || r.is_empty() {
            scan.empty_side += 1;
            empty_nontrivial += nontrivial as u64;
            return;
        }
        let tf = lt.min_covers(l, &mut xs);
        let tg = rt.min_covers(r, &mut ys);
        let mut fail = Vec::new();
        if lemma_applies && !xs.iter().all(|a| ys.iter().all(|b| (a & b).count_ones() >= t)) {
            *scan.min_covers_failures.as_mut().unwrap() += 1;
            fail.push("min covers not cross t-intersecting");
        }
        let (bf, bg) = match (bound(tf, tg, true), bound(tg, tf, false)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                return;
            }
        };
        let (sf, sg) = (lm.len() as i128, rm.len() as i128);
        if sf > bf || sg > bg {
            scan.bound_failures += 1;
            fail.push("size bound");
        }
        let product = sf * sg;
        if product > bf * bg {
            scan.product_failures += 1;
            fail.push("product bound");
        }
        if !fail.is_empty() && scan.first_failure.is_none() {
            scan.first_failure = Some(format!(
                "{}: F = {:?}, G = {:?}",
                fail.join(", "),
                lm,
                rm
            ));
        }
        let case = CrossCase::of(tf, tg, t);
        let sub = match case {
            CrossCase::Case2 => small_subcase(&lm, &xs, &rm, k2, &ys),
            CrossCase::Case3 => small_subcase(&rm, &ys, &lm, k1, &xs),
            _ => Subcase::NotApplicable,
        };
        let row = rows.entry((case, sub)).or_insert(CensusRow {
            case,
            subcase: sub,
            pairs: 0,
            nontrivial: 0,
            max_product: ExactInt::from(0),
        });
        row.pairs += 1;
        row.nontrivial += nontrivial as u64;
        let best = max_products.entry((case, sub)).or_insert(0);
        *best = (*best).max(product);
    })?;
    for (key, p) in max_products {
        rows.get_mut(&key).expect("row exists").max_product = ExactInt::from(p);
    }
    if let Some(e) = err {
        return Err(e);
    }
    if scan.empty_side > 0 {
        rows.insert(
            (CrossCase::EmptySide, Subcase::NotApplicable),
            CensusRow {
                case: CrossCase::EmptySide,
                subcase: Subcase::NotApplicable,
                pairs: scan.empty_side,
                nontrivial: empty_nontrivial,
                max_product: ExactInt::from(0),
            },
        );
    }
    scan.census = rows.into_values().collect();
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_cross_pair_ia, build_cross_pair_threshold, build_star};
    use crate::search::{cross, SearchRequest};
    use crate::setcore::SetMask;

    fn set(n: u32, e: &[u32]) -> SetMask {
        SetMask::from_elements(n, e).unwrap()
    }

    #[test]
    fn case_table() {
        assert_eq!(CrossCase::of(1, 1, 1), CrossCase::Case1);
        assert_eq!(CrossCase::of(1, 2, 1), CrossCase::Case2);
        assert_eq!(CrossCase::of(2, 1, 1), CrossCase::Case3);
        assert_eq!(CrossCase::of(1, 3, 1), CrossCase::Case4);
        assert_eq!(CrossCase::of(4, 1, 1), CrossCase::Case4);
        assert_eq!(CrossCase::of(2, 2, 1), CrossCase::Case5);
        assert_eq!(CrossCase::of(3, 2, 1), CrossCase::Case5);
    }

    #[test]
    fn constructed_pairs_classify() {
        let n = 9;
        let x = set(n, &[1]);
        let (f, g) = (build_star(n, 3, &x).unwrap(), build_star(n, 2, &x).unwrap());
        assert_eq!(classify(&f, &g, 1).unwrap().0, CrossCase::Case1);

        let (f, g) = build_cross_pair_ia(n, 3, 2, 1, &x, &set(n, &[1, 2, 3])).unwrap();
        let (case, sub, taus) = classify(&f, &g, 1).unwrap();
        assert_eq!((case, sub, taus), (CrossCase::Case2, Subcase::CommonUnion, Some((1, 2))));

        let (f, g) = build_cross_pair_threshold(n, 3, 3, 1, &set(n, &[1, 2])).unwrap();
        let (case, sub, _) = classify(&f, &g, 1).unwrap();
        assert_eq!((case, sub), (CrossCase::Case2, Subcase::CoverInAll));
        let (case, sub, _) = classify(&g, &f, 1).unwrap();
        assert_eq!((case, sub), (CrossCase::Case3, Subcase::CoverInAll));
    }

    #[test]
    fn census_partitions_all_pairs() {
        let mut req = SearchRequest::new(ParamSet::Cross { n: 5, k1: 2, k2: 2, t: 1 });
        req.keep_all_pairs = true;
        req.require_nontrivial = false;
        let rep = cross::run(&req).unwrap();
        let rows = covering_number_census(&rep).unwrap();
        let total: u64 = rows.iter().map(|r| r.pairs).sum();
        assert_eq!(total as usize, rep.all_pairs.as_ref().unwrap().len());
        assert!(rows.iter().any(|r| r.case == CrossCase::Case1));
    }

    #[test]
    fn scan_agrees_with_family_checks() {
        use crate::search::for_each_closed_pair;
        for (n, k1, k2, t) in [(6, 3, 2, 1), (6, 2, 2, 1), (6, 3, 3, 2), (5, 3, 2, 1), (7, 2, 2, 1)] {
            let scan = scan_closed_pairs(n, k1, k2, t, u64::MAX).unwrap();
            let mut rows: BTreeMap<(CrossCase, Subcase), (u64, u64)> = BTreeMap::new();
            let mut failures = 0;
            let mut pairs = 0;
            for_each_closed_pair(n, k1, k2, t, u64::MAX, |f, g| {
                pairs += 1;
                let (case, sub, _) = classify(f, g, t).unwrap();
                let p = PairParams::new(t, f.clone(), g.clone()).unwrap();
                let e = rows.entry((case, sub)).or_default();
                e.0 += 1;
                e.1 += crate::verify::is_nontrivial_pair(&p) as u64;
                if let Some(c) = check_pair_claims(f, g, t).unwrap() {
                    failures += !c.all_hold() as u64;
                }
            })
            .unwrap();
            assert_eq!(scan.pairs, pairs);
            assert_eq!(failures, 0);
            assert!(scan.all_hold());
            let got: BTreeMap<_, _> = scan
                .census
                .iter()
                .map(|r| ((r.case, r.subcase), (r.pairs, r.nontrivial)))
                .collect();
            assert_eq!(got, rows, "n={n} k1={k1} k2={k2} t={t}");
        }
    }

    #[test]
    fn pair_checks_on_star_pair() {
        let n = 7;
        let x = set(n, &[1, 2]);
        let (f, g) = (build_star(n, 3, &x).unwrap(), build_star(n, 3, &x).unwrap());
        let c = check_pair_claims(&f, &g, 2).unwrap().unwrap();
        assert!(c.all_hold());
        assert_eq!((c.tau_first, c.tau_second), (2, 2));
        assert!(check_pair_claims(&Family::empty(n, 3), &g, 2).unwrap().is_none());
    }
}
