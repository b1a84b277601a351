//! Exhaustive optimizers over small universes: maximum non-trivial r-wise
//! t-intersecting families, and closed cross t-intersecting pairs.

mod bitset;
pub mod census;
pub mod cross;
pub mod isomorph;
pub mod rwise;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formulas::{ExactInt, ParamSet};
use crate::setcore::Family;

pub use census::{
    check_pair_claims, covering_number_census, scan_closed_pairs, CensusRow, CrossCase, PairChecks, PairScan, Subcase,
};
pub use cross::{cross_concepts, for_each_closed_pair};
pub use rwise::max_rwise;

/// Default node budget when none is given.
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest universe accepted; `None` uses the strategy's own default.
    pub max_n: Option<u32>,
    pub node_budget: u64,
    pub jobs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_n: None,
            node_budget: DEFAULT_NODE_BUDGET,
            jobs: 1,
        }
    }
}

/// Individual pruning rules of the r-wise search. Turning one off changes
/// node counts only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruneSwitches {
    pub bound: bool,
    pub pairwise: bool,
    pub rwise: bool,
    pub triviality: bool,
}

impl Default for PruneSwitches {
    fn default() -> Self {
        Self {
            bound: true,
            pairwise: true,
            rwise: true,
            triviality: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PruneCounters {
    pub bound: u64,
    pub pairwise: u64,
    pub rwise: u64,
    pub triviality: u64,
}

#[derive(Debug, Clone)]
pub struct SearchRequest {
    pub params: ParamSet,
    pub require_nontrivial: bool,
    pub limits: SearchLimits,
    pub prunes: PruneSwitches,
    pub reduce_isomorphs: bool,
    /// Cross searches only: keep every closed pair, not just the optima.
    pub keep_all_pairs: bool,
}

impl SearchRequest {
    pub fn new(params: ParamSet) -> Self {
        Self {
            params,
            require_nontrivial: true,
            limits: SearchLimits::default(),
            prunes: PruneSwitches::default(),
            reduce_isomorphs: false,
            keep_all_pairs: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Family(Family),
    Pair(Family, Family),
}

impl Witness {
    pub fn families(&self) -> Vec<&Family> {
        match self {
            Witness::Family(f) => vec![f],
            Witness::Pair(f, g) => vec![f, g],
        }
    }

    /// Size of a family, or product of sizes of a pair.
    pub fn value(&self) -> ExactInt {
        match self {
            Witness::Family(f) => ExactInt::from(f.len()),
            Witness::Pair(f, g) => ExactInt::from(f.len()) * ExactInt::from(g.len()),
        }
    }
}

fn as_string<S: Serializer>(v: &ExactInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub strategy: String,
    pub params: ParamSet,
    pub require_nontrivial: bool,
    #[serde(serialize_with = "as_string")]
    pub optimum: ExactInt,
    pub witnesses: Vec<Witness>,
    #[serde(rename = "nodes")]
    pub nodes_explored: u64,
    #[serde(rename = "prune_counters")]
    pub pruned_by: PruneCounters,
    pub wall_ms: u64,
    pub notes: Vec<String>,
    pub conventions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_pairs: Option<Vec<Witness>>,
}

impl SearchReport {
    pub(crate) fn empty(strategy: &str, req: &SearchRequest) -> Self {
        Self {
            strategy: strategy.to_string(),
            params: req.params,
            require_nontrivial: req.require_nontrivial,
            optimum: ExactInt::from(0),
            witnesses: Vec::new(),
            nodes_explored: 0,
            pruned_by: PruneCounters::default(),
            wall_ms: 0,
            notes: Vec::new(),
            conventions: Vec::new(),
            all_pairs: None,
        }
    }
}

pub trait SearchStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn run(&self, req: &SearchRequest) -> Result<SearchReport>;
}

struct RwiseExact;
struct RwiseRelaxed;
struct CrossClosure;

impl SearchStrategy for RwiseExact {
    fn name(&self) -> &'static str {
        "rwise"
    }

    fn description(&self) -> &'static str {
        "branch and bound over k-subsets, exact r-wise feasibility"
    }

    fn run(&self, req: &SearchRequest) -> Result<SearchReport> {
        rwise::run(req, false)
    }
}

impl SearchStrategy for RwiseRelaxed {
    fn name(&self) -> &'static str {
        "rwise-relaxed"
    }

    fn description(&self) -> &'static str {
        "pairwise (t+r-2)-intersecting relaxation of the r-wise search"
    }

    fn run(&self, req: &SearchRequest) -> Result<SearchReport> {
        rwise::run(req, true)
    }
}

impl SearchStrategy for CrossClosure {
    fn name(&self) -> &'static str {
        "cross"
    }

    fn description(&self) -> &'static str {
        "next-closure enumeration of closed cross t-intersecting pairs"
    }

    fn run(&self, req: &SearchRequest) -> Result<SearchReport> {
        cross::run(req)
    }
}

pub struct StrategyRegistry {
    items: Vec<Box<dyn SearchStrategy>>,
}

impl StrategyRegistry {
    pub fn new() -> Self {
        Self { items: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::new();
        reg.register(Box::new(RwiseExact));
        reg.register(Box::new(RwiseRelaxed));
        reg.register(Box::new(CrossClosure));
        reg
    }

    pub fn register(&mut self, s: Box<dyn SearchStrategy>) {
        self.items.retain(|o| o.name() != s.name());
        self.items.push(s);
    }

    pub fn get(&self, name: &str) -> Result<&dyn SearchStrategy> {
        self.items
            .iter()
            .find(|s| s.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "search strategy",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.items.iter().map(|s| s.name())
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

pub(crate) fn run_in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs <= 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}
