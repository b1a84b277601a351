//! Closed pairs `(F, G)` with `F = dual(G)` and `G = dual(F)`, enumerated by
//! next-closure over the k1-subsets in lectic order.

use std::time::Instant;

use super::bitset::{Bits, CAPACITY};
use super::{SearchReport, SearchRequest, Witness};
use crate::error::{Error, Result};
use crate::formulas::{ExactInt, ParamSet};
use crate::setcore::{Family, KSubsets};
use crate::verify::Convention;

pub const DEFAULT_MAX_N: u32 = 7;

pub(crate) struct Context {
    pub(crate) left: Vec<u64>,
    pub(crate) right: Vec<u64>,
    /// Right vertices related to each left vertex.
    col: Vec<Bits>,
    /// Left vertices related to each right vertex.
    row: Vec<Bits>,
}

impl Context {
    pub(crate) fn new(n: u32, k1: u32, k2: u32, t: u32) -> Result<Self> {
        let left: Vec<u64> = KSubsets::new(n, k1).collect();
        let right: Vec<u64> = KSubsets::new(n, k2).collect();
        let largest = left.len().max(right.len());
        if largest > CAPACITY {
            return Err(Error::Refused {
                reason: "candidate sets exceed the vertex capacity".into(),
                estimate: largest as u64,
                budget: CAPACITY as u64,
            });
        }
        let rel = |a: u64, b: u64| (a & b).count_ones() >= t;
        let col = left
            .iter()
            .map(|&a| {
                let mut b = Bits::EMPTY;
                for (j, &m) in right.iter().enumerate() {
                    if rel(a, m) {
                        b.insert(j);
                    }
                }
                b
            })
            .collect();
        let row = right
            .iter()
            .map(|&m| {
                let mut b = Bits::EMPTY;
                for (i, &a) in left.iter().enumerate() {
                    if rel(a, m) {
                        b.insert(i);
                    }
                }
                b
            })
            .collect();
        Ok(Self {
            left,
            right,
            col,
            row,
        })
    }

    fn closure(&self, x: &Bits) -> (Bits, Bits) {
        let y = x
            .iter()
            .fold(Bits::prefix(self.right.len()), |acc, a| acc.and(&self.col[a]));
        let xx = y
            .iter()
            .fold(Bits::prefix(self.left.len()), |acc, b| acc.and(&self.row[b]));
        (xx, y)
    }

    /// Visits every closed pair once; returns the number of closures computed.
    pub(crate) fn enumerate(&self, budget: u64, mut visit: impl FnMut(&Bits, &Bits)) -> Result<u64> {
        let n1 = self.left.len();
        let (mut a, y) = self.closure(&Bits::EMPTY);
        let mut closures = 1u64;
        visit(&a, &y);
        'outer: loop {
            for i in (0..n1).rev() {
                if a.contains(i) {
                    a.remove(i);
                    continue;
                }
                let mut probe = a;
                probe.insert(i);
                let (b, y) = self.closure(&probe);
                closures += 1;
                if closures > budget {
                    return Err(Error::Refused {
                        reason: "closure budget exhausted".into(),
                        estimate: closures,
                        budget,
                    });
                }
                if b.below(i) == a {
                    a = b;
                    visit(&a, &y);
                    continue 'outer;
                }
            }
            return Ok(closures);
        }
    }

    fn family(&self, n: u32, k: u32, side: &[u64], bits: &Bits) -> Family {
        Family::new(n, k, bits.iter().map(|i| side[i])).expect("vertices are k-subsets of [n]")
    }
}

fn params(req: &SearchRequest) -> Result<(u32, u32, u32, u32)> {
    let ParamSet::Cross { n, k1, k2, t } = req.params else {
        return Err(Error::Parameter("cross search needs (n, k1, k2, t) parameters".into()));
    };
    if n < 1 || k1 < 1 || k2 < 1 || t < 1 || k1 > n || k2 > n || n > 64 {
        return Err(Error::Parameter(format!(
            "need 1 <= k1, k2 <= n <= 64 and t >= 1 (n={n}, k1={k1}, k2={k2}, t={t})"
        )));
    }
    let max_n = req.limits.max_n.unwrap_or(DEFAULT_MAX_N);
    if n as u32 > max_n {
        return Err(Error::Refused {
            reason: format!("universe {n} exceeds the configured maximum"),
            estimate: n as u64,
            budget: max_n as u64,
        });
    }
    Ok((n as u32, k1 as u32, k2 as u32, t as u32))
}

/// Calls `visit` on every closed pair `(F, G)` of k1- and k2-uniform families.
/// Returns the number of closures computed.
pub fn for_each_closed_pair(
    n: u32,
    k1: u32,
    k2: u32,
    t: u32,
    budget: u64,
    mut visit: impl FnMut(&Family, &Family),
) -> Result<u64> {
    let ctx = Context::new(n, k1, k2, t)?;
    ctx.enumerate(budget, |l, r| {
        visit(&ctx.family(n, k1, &ctx.left, l), &ctx.family(n, k2, &ctx.right, r))
    })
}

/// Maximum product over closed (non-trivial, if requested) pairs, with
/// default limits.
pub fn cross_concepts(n: u32, k1: u32, k2: u32, t: u32, require_nontrivial: bool) -> Result<SearchReport> {
    let mut req = SearchRequest::new(ParamSet::Cross {
        n: n as i64,
        k1: k1 as i64,
        k2: k2 as i64,
        t: t as i64,
    });
    req.require_nontrivial = require_nontrivial;
    run(&req)
}

pub(crate) fn run(req: &SearchRequest) -> Result<SearchReport> {
    let (n, k1, k2, t) = params(req)?;
    let start = Instant::now();
    let ctx = Context::new(n, k1, k2, t)?;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let meet = |side: &[u64], bits: &Bits| bits.iter().fold(full, |acc, i| acc & side[i]);

    let mut report = SearchReport::empty("cross", req);
    let mut best = 0usize;
    let mut optima: Vec<(Bits, Bits)> = Vec::new();
    let mut all = Vec::new();
    let mut saw_empty = false;
    let mut total = 0u64;
    let closures = ctx.enumerate(req.limits.node_budget, |l, r| {
        total += 1;
        if l.is_empty() || r.is_empty() {
            saw_empty = true;
        }
        if req.keep_all_pairs {
            all.push((*l, *r));
        }
        let inter = meet(&ctx.left, l) & meet(&ctx.right, r);
        if req.require_nontrivial && inter.count_ones() >= t {
            return;
        }
        let product = l.len() * r.len();
        if product > best {
            best = product;
            optima.clear();
        }
        if product == best && product > 0 {
            optima.push((*l, *r));
        }
    })?;
    let pair = |(l, r): &(Bits, Bits)| {
        Witness::Pair(
            ctx.family(n, k1, &ctx.left, l),
            ctx.family(n, k2, &ctx.right, r),
        )
    };
    report.optimum = ExactInt::from(best);
    report.witnesses = optima.iter().map(pair).collect();
    report.nodes_explored = closures;
    report.notes.push(format!("{total} closed pairs"));
    if saw_empty {
        report
            .conventions
            .push(Convention::EmptyIntersectionIsUniverse.as_str().to_string());
    }
    if req.keep_all_pairs {
        report.all_pairs = Some(all.iter().map(pair).collect());
    }
    if req.limits.jobs > 1 {
        report
            .notes
            .push("closure enumeration is sequential; --jobs ignored".into());
    }
    report.wall_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
