//! Branch and bound for the largest (non-trivial) r-wise t-intersecting
//! family of k-subsets of `[n]`.
//!
//! Families are built in increasing vertex order, so each one is visited at
//! most once. A node carries the running intersection, the distinct
//! intersections of its sub-families with at most `r - 1` members, and the
//! bitmap of later vertices that may still be added.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use super::bitset::{Bits, CAPACITY};
use super::{isomorph, run_in_pool, PruneCounters, PruneSwitches, SearchReport, SearchRequest, Witness};
use crate::error::{Error, Result};
use crate::formulas::{ExactInt, ParamSet};
use crate::setcore::{Family, KSubsets};

pub const DEFAULT_MAX_N: u32 = 10;

const FLUSH_EVERY: u64 = 1 << 12;

/// Maximum non-trivial (or any, if `require_nontrivial` is false) r-wise
/// t-intersecting family, with default limits.
pub fn max_rwise(n: u32, k: u32, t: u32, r: u32, require_nontrivial: bool) -> Result<SearchReport> {
    let mut req = SearchRequest::new(ParamSet::Rwise {
        n: n as i64,
        k: k as i64,
        t: t as i64,
        r: r as i64,
    });
    req.require_nontrivial = require_nontrivial;
    run(&req, false)
}

struct Sink {
    best: usize,
    found: Vec<Vec<u16>>,
}

struct Ctx {
    verts: Vec<u64>,
    compat: Vec<Bits>,
    depth: usize,
    t: u32,
    nontrivial: bool,
    prunes: PruneSwitches,
    best: AtomicUsize,
    nodes: AtomicU64,
    budget: u64,
    aborted: AtomicBool,
    counters: [AtomicU64; 4],
    sink: Mutex<Sink>,
}

#[derive(Default)]
struct Local {
    nodes: u64,
    unflushed: u64,
    counters: [u64; 4],
}

const BOUND: usize = 0;
const PAIRWISE: usize = 1;
const RWISE: usize = 2;
const TRIVIALITY: usize = 3;

struct Node {
    chosen: Vec<u16>,
    inter: u64,
    /// `levels[j]`: distinct intersections of sub-families of size `<= j + 1`.
    levels: Vec<Vec<u64>>,
    cand: Bits,
}

impl Ctx {
    fn flush(&self, local: &mut Local) {
        let total = self.nodes.fetch_add(local.unflushed, Ordering::Relaxed) + local.unflushed;
        local.unflushed = 0;
        if total > self.budget {
            self.aborted.store(true, Ordering::Relaxed);
        }
    }

    fn addable(&self, levels: &[Vec<u64>], u: u64) -> bool {
        levels
            .last()
            .map_or(true, |top| top.iter().all(|m| (m & u).count_ones() >= self.t))
    }

    fn record(&self, node: &Node) {
        let size = node.chosen.len();
        if size == 0 || size < self.best.load(Ordering::Relaxed) {
            return;
        }
        let mut sink = self.sink.lock().unwrap();
        if size > sink.best {
            sink.best = size;
            sink.found.clear();
        }
        if size == sink.best {
            sink.found.push(node.chosen.clone());
        }
        self.best.fetch_max(size, Ordering::Relaxed);
    }

    fn child(&self, node: &Node, v: usize, local: &mut Local) -> Option<Node> {
        let vm = self.verts[v];
        if !self.prunes.rwise && !self.addable(&node.levels, vm) {
            local.counters[RWISE] += 1;
            return None;
        }
        let mut levels = Vec::with_capacity(self.depth);
        for j in 0..self.depth {
            let mut lv = node.levels[j].clone();
            lv.push(vm);
            if j > 0 {
                lv.extend(node.levels[j - 1].iter().map(|m| m & vm));
            }
            lv.sort_unstable();
            lv.dedup();
            levels.push(lv);
        }
        let after = node.cand.above(v);
        let mut cand = after.and(&self.compat[v]);
        local.counters[PAIRWISE] += (after.len() - cand.len()) as u64;
        if self.prunes.rwise {
            for u in cand.iter().collect::<Vec<_>>() {
                if !self.addable(&levels, self.verts[u]) {
                    cand.remove(u);
                    local.counters[RWISE] += 1;
                }
            }
        }
        let mut chosen = node.chosen.clone();
        chosen.push(v as u16);
        Some(Node {
            chosen,
            inter: node.inter & vm,
            levels,
            cand,
        })
    }

    fn visit(&self, node: Node, local: &mut Local) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        local.nodes += 1;
        local.unflushed += 1;
        if local.unflushed >= FLUSH_EVERY {
            self.flush(local);
        }
        if self.prunes.bound && node.chosen.len() + node.cand.len() < self.best.load(Ordering::Relaxed) {
            local.counters[BOUND] += 1;
            return;
        }
        let trivial = node.inter.count_ones() >= self.t;
        if self.nontrivial && trivial && self.prunes.triviality {
            let all = node.cand.iter().fold(node.inter, |acc, u| acc & self.verts[u]);
            if all.count_ones() >= self.t {
                local.counters[TRIVIALITY] += 1;
                return;
            }
        }
        if !(self.nontrivial && trivial) {
            self.record(&node);
        }
        for v in node.cand.iter() {
            if let Some(c) = self.child(&node, v, local) {
                self.visit(c, local);
            }
        }
    }

    fn merge(&self, local: &Local) {
        for (a, b) in self.counters.iter().zip(local.counters) {
            a.fetch_add(b, Ordering::Relaxed);
        }
    }
}

pub(crate) fn run(req: &SearchRequest, relaxed: bool) -> Result<SearchReport> {
    let name = if relaxed { "rwise-relaxed" } else { "rwise" };
    let ParamSet::Rwise { n, k, t, r } = req.params else {
        return Err(Error::Parameter(format!("{name} needs (n, k, t, r) parameters")));
    };
    if n < 1 || k < 0 || t < 1 || r < 2 || k > n {
        return Err(Error::Parameter(format!(
            "need n >= 1, 0 <= k <= n, t >= 1, r >= 2 (n={n}, k={k}, t={t}, r={r})"
        )));
    }
    let (n, k, t, r) = (n as u32, k as u32, t as u32, r as usize);
    let max_n = req.limits.max_n.unwrap_or(DEFAULT_MAX_N);
    if n > max_n {
        return Err(Error::Refused {
            reason: format!("universe {n} exceeds the configured maximum"),
            estimate: n as u64,
            budget: max_n as u64,
        });
    }
    let verts: Vec<u64> = KSubsets::new(n, k).collect();
    if verts.len() > CAPACITY {
        return Err(Error::Refused {
            reason: format!("C({n}, {k}) candidate sets exceed the vertex capacity"),
            estimate: verts.len() as u64,
            budget: CAPACITY as u64,
        });
    }
    let mut report = SearchReport::empty(name, req);
    if k < t {
        report.notes.push(format!("k = {k} < t = {t}: no {t}-intersecting {k}-sets"));
        return Ok(report);
    }
    let start = Instant::now();

    // With non-triviality, any two members meet in at least t + r - 2 points.
    let thr = if relaxed || (req.prunes.pairwise && req.require_nontrivial) {
        t + r as u32 - 2
    } else if req.prunes.pairwise {
        t
    } else {
        0
    };
    let compat: Vec<Bits> = verts
        .iter()
        .map(|&a| {
            let mut b = Bits::EMPTY;
            for (j, &m) in verts.iter().enumerate() {
                if (a & m).count_ones() >= thr {
                    b.insert(j);
                }
            }
            b
        })
        .collect();
    let depth = if relaxed { 1 } else { r - 1 };
    let ctx = Ctx {
        verts,
        compat,
        depth,
        t,
        nontrivial: req.require_nontrivial,
        prunes: req.prunes,
        best: AtomicUsize::new(0),
        nodes: AtomicU64::new(0),
        budget: req.limits.node_budget,
        aborted: AtomicBool::new(false),
        counters: Default::default(),
        sink: Mutex::new(Sink {
            best: 0,
            found: Vec::new(),
        }),
    };
    let root = Node {
        chosen: Vec::new(),
        inter: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        levels: vec![Vec::new(); depth],
        cand: Bits::prefix(ctx.verts.len()),
    };
    let mut local = Local {
        nodes: 1,
        unflushed: 1,
        counters: [0; 4],
    };
    let firsts: Vec<usize> = root.cand.iter().collect();
    if req.limits.jobs <= 1 {
        for v in firsts {
            if let Some(c) = ctx.child(&root, v, &mut local) {
                ctx.visit(c, &mut local);
            }
        }
        ctx.flush(&mut local);
        ctx.merge(&local);
    } else {
        ctx.flush(&mut local);
        ctx.merge(&local);
        run_in_pool(req.limits.jobs, || {
            firsts.par_iter().for_each(|&v| {
                let mut local = Local::default();
                if let Some(c) = ctx.child(&root, v, &mut local) {
                    ctx.visit(c, &mut local);
                }
                ctx.flush(&mut local);
                ctx.merge(&local);
            })
        })?;
    }
    let nodes = ctx.nodes.load(Ordering::Relaxed);
    if ctx.aborted.load(Ordering::Relaxed) {
        return Err(Error::Refused {
            reason: "node budget exhausted".into(),
            estimate: nodes,
            budget: req.limits.node_budget,
        });
    }
    let sink = ctx.sink.into_inner().unwrap();
    let mut witnesses: Vec<Family> = sink
        .found
        .iter()
        .map(|idx| Family::new(n, k, idx.iter().map(|&i| ctx.verts[i as usize])))
        .collect::<Result<_>>()?;
    witnesses.sort_by(|a, b| a.masks().cmp(b.masks()));
    if req.reduce_isomorphs {
        let before = witnesses.len();
        witnesses = isomorph::reduce(witnesses);
        report.notes.push(format!(
            "isomorph reduction by invariant signature: {before} -> {} witnesses",
            witnesses.len()
        ));
    }
    let c = &ctx.counters;
    report.pruned_by = PruneCounters {
        bound: c[BOUND].load(Ordering::Relaxed),
        pairwise: c[PAIRWISE].load(Ordering::Relaxed),
        rwise: c[RWISE].load(Ordering::Relaxed),
        triviality: c[TRIVIALITY].load(Ordering::Relaxed),
    };
    report.optimum = ExactInt::from(sink.best);
    report.witnesses = witnesses.into_iter().map(Witness::Family).collect();
    report.nodes_explored = nodes;
    report.wall_ms = start.elapsed().as_millis() as u64;
    if relaxed {
        report
            .notes
            .push(format!("relaxation: pairwise {}-intersecting only", t + r as u32 - 2));
    }
    Ok(report)
}
