//! Grid sweeps: one named target evaluated at every point of a [`Grid`].

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Context as _, Result};
use ixlab_core::constructions::{
    build_a, build_cross_pair_ia, build_cross_pair_threshold, build_h, build_h1, AParams, HParams, H1Params,
};
use ixlab_core::formulas::lemmas::{LemmaRegistry, Verdict};
use ixlab_core::formulas::{g1, g2, h1, h2, ExactInt, ParamSet};
use ixlab_core::search::{scan_closed_pairs, SearchRequest, StrategyRegistry};
use ixlab_core::verify::{is_cross_t_intersecting, is_nontrivial, is_r_wise_t_intersecting, PairParams};
use ixlab_core::{Error, SetMask};
use rayon::prelude::*;
use serde::Serialize;

use crate::grid::{Grid, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::Fail => "fail",
            RowStatus::Skipped => "skipped",
        }
    }
}

/// Result of a target at one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub status: RowStatus,
    pub outputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Outcome {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Self {
            status: RowStatus::Skipped,
            outputs: BTreeMap::new(),
            reason: Some(reason.into()),
        }
    }

    fn checked(ok: bool, outputs: Vec<(&str, String)>) -> Self {
        Self {
            status: if ok { RowStatus::Pass } else { RowStatus::Fail },
            outputs: outputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            reason: None,
        }
    }
}

/// Settings shared by every point of a sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepContext {
    pub budget: u64,
}

pub trait SweepTarget: Send + Sync {
    fn name(&self) -> &str;

    fn description(&self) -> &str;

    /// Grid names the target reads.
    fn params(&self) -> &[&'static str];

    fn run(&self, point: &Point, ctx: &SweepContext) -> Outcome;
}

fn get(p: &Point, name: &str) -> i64 {
    p[name]
}

fn small(p: &Point, name: &str) -> std::result::Result<u32, String> {
    u32::try_from(p[name]).map_err(|_| format!("{name} = {} out of range", p[name]))
}

/// `{1, ..., len}` inside `[n]`.
fn prefix(n: u32, len: u32) -> std::result::Result<SetMask, String> {
    SetMask::from_elements(n, &(1..=len).collect::<Vec<_>>()).map_err(|e| e.to_string())
}

macro_rules! try_skip {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Outcome::skipped(e.to_string()),
        }
    };
}

/// Universe limit for targets that materialize families.
const BUILD_MAX_N: u32 = 20;

fn build_n(p: &Point) -> std::result::Result<u32, String> {
    let n = small(p, "n")?;
    if n > BUILD_MAX_N {
        return Err(format!("n = {n} exceeds {BUILD_MAX_N} for materialized families"));
    }
    Ok(n)
}

struct FnTarget {
    name: &'static str,
    description: &'static str,
    params: &'static [&'static str],
    run: fn(&Point, &SweepContext) -> Outcome,
}

impl SweepTarget for FnTarget {
    fn name(&self) -> &str {
        self.name
    }

    fn description(&self) -> &str {
        self.description
    }

    fn params(&self) -> &[&'static str] {
        self.params
    }

    fn run(&self, point: &Point, ctx: &SweepContext) -> Outcome {
        (self.run)(point, ctx)
    }
}

fn h_size(p: &Point, _: &SweepContext) -> Outcome {
    let n = try_skip!(build_n(p));
    let (k, d) = (try_skip!(small(p, "k")), try_skip!(small(p, "d")));
    let x = try_skip!(prefix(n, d));
    let m = try_skip!(prefix(n, k + 1));
    let hp = try_skip!(HParams::new(n, k, d, x, m));
    let fam = try_skip!(build_h(&hp));
    let want = try_skip!(h1(d as i64, k as i64, k as i64 + 1, n as i64));
    let got = ExactInt::from(fam.len());
    Outcome::checked(got == want, vec![("size", got.to_string()), ("h1", want.to_string())])
}

fn a_size(p: &Point, _: &SweepContext) -> Outcome {
    let n = try_skip!(build_n(p));
    let (k, d) = (try_skip!(small(p, "k")), try_skip!(small(p, "d")));
    let z = try_skip!(prefix(n, d + 2));
    let ap = try_skip!(AParams::new(n, k, d, z));
    let fam = try_skip!(build_a(&ap));
    let want = try_skip!(h2(d as i64 + 2, k as i64, n as i64));
    let got = ExactInt::from(fam.len());
    Outcome::checked(got == want, vec![("size", got.to_string()), ("h2", want.to_string())])
}

fn h1_size(p: &Point, _: &SweepContext) -> Outcome {
    let n = try_skip!(build_n(p));
    let (k, t, c) = (try_skip!(small(p, "k")), try_skip!(small(p, "t")), try_skip!(small(p, "c")));
    let x = try_skip!(prefix(n, t));
    let m = try_skip!(prefix(n, k));
    let cc = try_skip!(prefix(n, c));
    let hp = try_skip!(H1Params::new(n, k, t, x, m, cc));
    let fam = try_skip!(build_h1(&hp));
    let want = try_skip!(h1(t as i64, k as i64, c as i64, n as i64));
    let got = ExactInt::from(fam.len());
    let disjoint = fam
        .iter()
        .all(|f| [hp.in_e1(&f), hp.in_e2(&f), hp.in_e3(&f)].iter().filter(|b| **b).count() == 1);
    Outcome::checked(
        got == want && disjoint,
        vec![
            ("size", got.to_string()),
            ("h1", want.to_string()),
            ("parts_disjoint", disjoint.to_string()),
        ],
    )
}

fn rwise_constructions(p: &Point, _: &SweepContext) -> Outcome {
    let n = try_skip!(build_n(p));
    let (k, t, r) = (try_skip!(small(p, "k")), try_skip!(small(p, "t")), try_skip!(small(p, "r")));
    if t < 1 || r < 2 || k < t + r - 1 || n < 2 * k {
        return Outcome::skipped("needs t >= 1, r >= 2, k >= t+r-1 and n >= 2k");
    }
    let d = t + r - 2;
    let x = try_skip!(prefix(n, d));
    let m = try_skip!(prefix(n, k + 1));
    let z = try_skip!(prefix(n, d + 2));
    let h = try_skip!(HParams::new(n, k, d, x, m).and_then(|hp| build_h(&hp)));
    let a = try_skip!(AParams::new(n, k, d, z).and_then(|ap| build_a(&ap)));
    let r = r as usize;
    let (hr, hn) = (is_r_wise_t_intersecting(&h, r, t), is_nontrivial(&h, t));
    let (ar, an) = (is_r_wise_t_intersecting(&a, r, t), is_nontrivial(&a, t));
    Outcome::checked(
        hr && hn && ar && an,
        vec![
            ("h_rwise", hr.to_string()),
            ("h_nontrivial", hn.to_string()),
            ("a_rwise", ar.to_string()),
            ("a_nontrivial", an.to_string()),
        ],
    )
}

fn cross_sizes(p: &Point) -> std::result::Result<(u32, u32, u32, u32), String> {
    Ok((build_n(p)?, small(p, "k1")?, small(p, "k2")?, small(p, "t")?))
}

fn g1_product(p: &Point, _: &SweepContext) -> Outcome {
    let (n, k1, k2, t) = try_skip!(cross_sizes(p));
    let x = try_skip!(prefix(n, t));
    let m = try_skip!(prefix(n, k2 + 1));
    let (f, g) = try_skip!(build_cross_pair_ia(n, k1, k2, t, &x, &m));
    let product = ExactInt::from(f.len()) * ExactInt::from(g.len());
    let want = g1(k1 as i64, k2 as i64, n as i64, t as i64);
    let cross = try_skip!(PairParams::new(t, f, g).map(|pp| is_cross_t_intersecting(&pp)));
    Outcome::checked(
        product == want && cross,
        vec![("product", product.to_string()), ("g1", want.to_string()), ("cross", cross.to_string())],
    )
}

fn g2_product(p: &Point, _: &SweepContext) -> Outcome {
    let (n, k1, k2, t) = try_skip!(cross_sizes(p));
    let tt = try_skip!(prefix(n, t + 1));
    let (f, g) = try_skip!(build_cross_pair_threshold(n, k1, k2, t, &tt));
    let product = ExactInt::from(f.len()) * ExactInt::from(g.len());
    let want = g2(k1 as i64, k2 as i64, n as i64, t as i64);
    let cross = try_skip!(PairParams::new(t, f, g).map(|pp| is_cross_t_intersecting(&pp)));
    Outcome::checked(
        product == want && cross,
        vec![("product", product.to_string()), ("g2", want.to_string()), ("cross", cross.to_string())],
    )
}

fn rwise_search(p: &Point, ctx: &SweepContext) -> Outcome {
    let nontrivial = p.get("nontrivial").copied().unwrap_or(1) != 0;
    let mut req = SearchRequest::new(ParamSet::Rwise {
        n: get(p, "n"),
        k: get(p, "k"),
        t: get(p, "t"),
        r: get(p, "r"),
    });
    req.require_nontrivial = nontrivial;
    req.limits.node_budget = ctx.budget;
    let strategies = StrategyRegistry::builtin();
    let rep = try_skip!(strategies.get("rwise").and_then(|s| s.run(&req)));
    Outcome::checked(
        true,
        vec![
            ("optimum", rep.optimum.to_string()),
            ("witnesses", rep.witnesses.len().to_string()),
            ("nodes", rep.nodes_explored.to_string()),
        ],
    )
}

fn cross_scan(p: &Point, ctx: &SweepContext) -> Outcome {
    let (n, k1, k2, t) = (
        try_skip!(small(p, "n")),
        try_skip!(small(p, "k1")),
        try_skip!(small(p, "k2")),
        try_skip!(small(p, "t")),
    );
    if t < 1 || k1 < 1 || k2 < 1 || k1 > n || k2 > n {
        return Outcome::skipped("needs 1 <= t and 1 <= k1, k2 <= n");
    }
    let scan = try_skip!(scan_closed_pairs(n, k1, k2, t, ctx.budget));
    let mut out = vec![
        ("pairs", scan.pairs.to_string()),
        ("nontrivial", scan.nontrivial.to_string()),
        ("bound_failures", scan.bound_failures.to_string()),
        ("product_failures", scan.product_failures.to_string()),
        (
            "min_cover_failures",
            scan.min_covers_failures.map_or("n/a".into(), |v| v.to_string()),
        ),
    ];
    if let Some(f) = &scan.first_failure {
        out.push(("first_failure", f.clone()));
    }
    Outcome::checked(scan.all_hold(), out)
}

struct LemmaTarget {
    name: String,
    id: &'static str,
}

impl SweepTarget for LemmaTarget {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        "exact inequality check; hypotheses-unmet points are skipped"
    }

    fn params(&self) -> &[&'static str] {
        &["k1", "k2", "n", "t"]
    }

    fn run(&self, p: &Point, _: &SweepContext) -> Outcome {
        let reg = LemmaRegistry::builtin();
        let lemma = reg.get(self.id).expect("registered id");
        let v = lemma.check(&ixlab_core::formulas::lemmas::CrossPoint::new(
            get(p, "k1"),
            get(p, "k2"),
            get(p, "n"),
            get(p, "t"),
        ));
        let mut outputs = BTreeMap::from([
            ("verdict".to_string(), v.verdict.to_string()),
            ("n_at_threshold".to_string(), v.n_at_threshold.to_string()),
        ]);
        if !v.detail.is_empty() {
            outputs.insert("detail".into(), v.detail.clone());
        }
        let (status, reason) = match v.verdict {
            Verdict::Holds => (RowStatus::Pass, None),
            Verdict::Fails => (RowStatus::Fail, None),
            Verdict::HypothesesUnmet => (RowStatus::Skipped, Some("hypotheses-unmet".to_string())),
        };
        Outcome {
            status,
            outputs,
            reason,
        }
    }
}

pub struct TargetRegistry {
    items: Vec<Box<dyn SweepTarget>>,
}

impl TargetRegistry {
    pub fn new() -> Self {
        Self { items: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::new();
        let fns: [(&'static str, &'static str, &'static [&'static str], fn(&Point, &SweepContext) -> Outcome); 8] = [
            ("h-size", "|H(k,d+1,X,M)| against h1(d,k,k+1)", &["n", "k", "d"], h_size),
            ("a-size", "|A(k,d+1,Z)| against h2(d+2)", &["n", "k", "d"], a_size),
            ("h1-size", "|H1(X,M,C)| against h1(t,k,c), parts disjoint", &["n", "k", "t", "c"], h1_size),
            (
                "rwise-constructions",
                "H and A with d = t+r-2 are non-trivial r-wise t-intersecting",
                &["n", "k", "t", "r"],
                rwise_constructions,
            ),
            ("g1-product", "first cross construction product against g1", &["n", "k1", "k2", "t"], g1_product),
            ("g2-product", "star/threshold product against g2", &["n", "k1", "k2", "t"], g2_product),
            (
                "rwise-search",
                "exhaustive optimum; optional axis `nontrivial` (default 1)",
                &["n", "k", "t", "r"],
                rwise_search,
            ),
            (
                "cross-scan",
                "cover and size-bound checks over every closed cross pair",
                &["n", "k1", "k2", "t"],
                cross_scan,
            ),
        ];
        for (name, description, params, run) in fns {
            reg.register(Box::new(FnTarget {
                name,
                description,
                params,
                run,
            }));
        }
        for id in LemmaRegistry::builtin().ids() {
            reg.register(Box::new(LemmaTarget {
                name: format!("lemma-{id}"),
                id,
            }));
        }
        reg
    }

    pub fn register(&mut self, t: Box<dyn SweepTarget>) {
        self.items.retain(|o| o.name() != t.name());
        self.items.push(t);
    }

    pub fn get(&self, name: &str) -> Result<&dyn SweepTarget> {
        self.items
            .iter()
            .find(|t| t.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| {
                Error::Unknown {
                    kind: "sweep target",
                    name: name.to_string(),
                }
                .into()
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn SweepTarget> + '_ {
        self.items.iter().map(|b| b.as_ref())
    }
}

impl Default for TargetRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub grid: Grid,
    pub target: String,
    pub budget: u64,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub point: Point,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepArtifact {
    pub target: String,
    pub grid: String,
    /// Grid axis names in nesting order.
    pub axes: Vec<String>,
    pub summary: Summary,
    pub rows: Vec<SweepRow>,
}

impl SweepArtifact {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    /// CSV projection: index, axes, status, reason, then every output column.
    pub fn to_csv(&self) -> Result<String> {
        let outputs: BTreeSet<&str> = self
            .rows
            .iter()
            .flat_map(|r| r.outcome.outputs.keys().map(String::as_str))
            .collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["index".to_string()];
        header.extend(self.axes.iter().cloned());
        header.extend(["status".to_string(), "reason".to_string()]);
        header.extend(outputs.iter().map(|s| s.to_string()));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.index.to_string()];
            rec.extend(self.axes.iter().map(|a| r.point[a].to_string()));
            rec.push(r.outcome.status.as_str().to_string());
            rec.push(r.outcome.reason.clone().unwrap_or_default());
            rec.extend(
                outputs
                    .iter()
                    .map(|o| r.outcome.outputs.get(*o).cloned().unwrap_or_default()),
            );
            w.write_record(&rec)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// Evaluates the target at every grid point; rows keep grid order.
pub fn run_sweep(spec: &SweepSpec, targets: &TargetRegistry) -> Result<SweepArtifact> {
    let target = targets.get(&spec.target)?;
    let axes: Vec<String> = spec.grid.names().map(str::to_string).collect();
    if !spec.grid.is_empty() {
        for p in target.params() {
            if !axes.iter().any(|a| a == p) {
                bail!("target {} needs grid axis `{p}`", target.name());
            }
        }
    }
    let points = spec.grid.points().context("expanding grid")?;
    let ctx = SweepContext { budget: spec.budget };
    let eval = || -> Vec<SweepRow> {
        points
            .par_iter()
            .enumerate()
            .map(|(index, p)| SweepRow {
                index,
                point: p.clone(),
                outcome: target.run(p, &ctx),
            })
            .collect()
    };
    let rows = if spec.jobs <= 1 {
        points
            .iter()
            .enumerate()
            .map(|(index, p)| SweepRow {
                index,
                point: p.clone(),
                outcome: target.run(p, &ctx),
            })
            .collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()?
            .install(eval)
    };
    let mut summary = Summary::default();
    for r in &rows {
        match r.outcome.status {
            RowStatus::Pass => summary.pass += 1,
            RowStatus::Fail => summary.fail += 1,
            RowStatus::Skipped => summary.skipped += 1,
        }
    }
    Ok(SweepArtifact {
        target: target.name().to_string(),
        grid: spec.grid.text().to_string(),
        axes,
        summary,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(grid: &str, target: &str, jobs: usize) -> SweepArtifact {
        let spec = SweepSpec {
            grid: Grid::parse(grid).unwrap(),
            target: target.into(),
            budget: 1_000_000,
            jobs,
        };
        run_sweep(&spec, &TargetRegistry::builtin()).unwrap()
    }

    #[test]
    fn h_size_rows_pass_or_skip() {
        let a = sweep("n=4..9,k=2..4,d=1..k-1", "h-size", 1);
        assert_eq!(a.summary.fail, 0);
        assert!(a.summary.pass > 5);
        assert!(a.rows.iter().all(|r| r.outcome.status == RowStatus::Pass || r.outcome.reason.is_some()));
    }

    #[test]
    fn parallel_rows_match_sequential() {
        let a = sweep("t=1..2,k2=t+1..4,k1=k2..5,n=k1+k2..10", "g2-product", 1);
        let b = sweep("t=1..2,k2=t+1..4,k1=k2..5,n=k1+k2..10", "g2-product", 3);
        assert_eq!(a, b);
        assert_eq!(a.summary.fail, 0);
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    }

    #[test]
    fn empty_grid_gives_empty_artifact() {
        let a = sweep("", "lemma-4.2", 1);
        assert!(a.rows.is_empty());
        assert_eq!(a.to_csv().unwrap().lines().count(), 1);
    }

    #[test]
    fn lemma_rows_skip_unmet_hypotheses() {
        let a = sweep("t=1,k2=1..2,k1=2,n=thr", "lemma-4.2", 1);
        assert_eq!(a.rows[0].outcome.status, RowStatus::Skipped);
        assert_eq!(a.rows[0].outcome.reason.as_deref(), Some("hypotheses-unmet"));
    }

    #[test]
    fn missing_axis_and_unknown_target() {
        let spec = SweepSpec {
            grid: Grid::parse("n=5,k=2").unwrap(),
            target: "h-size".into(),
            budget: 1,
            jobs: 1,
        };
        assert!(run_sweep(&spec, &TargetRegistry::builtin()).is_err());
        let spec = SweepSpec {
            target: "nope".into(),
            ..spec
        };
        assert!(run_sweep(&spec, &TargetRegistry::builtin()).is_err());
    }

    #[test]
    fn csv_quotes_fields() {
        let a = sweep("n=5,k1=2,k2=2,t=1", "cross-scan", 1);
        let csv = a.to_csv().unwrap();
        assert!(csv.starts_with("index,n,k1,k2,t,status,reason,"));
        assert_eq!(a.summary.pass, 1);
    }
}
