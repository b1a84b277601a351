//! Claim-to-check manifest. Each claim id maps to one executable check whose
//! evidence is kept as JSON next to the summary table.

use std::collections::BTreeSet;

use anyhow::Result;
use ixlab_core::constructions::{build_a, build_e1, build_e2, build_e3, build_h, build_h1, AParams, HParams, H1Params};
use ixlab_core::formulas::{
    binomial, bound_family_size, f2, f_prime, g4, g5, g_w, h1, h2, ExactInt, ExactRat,
    ParamSet,
};
use ixlab_core::search::{SearchRequest, StrategyRegistry, Witness};
use ixlab_core::verify::{is_maximal_rwise, is_nontrivial, is_r_wise_t_intersecting};
use ixlab_core::{enumerate_k_subsets, Family, SetMask};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::grid::Grid;
use crate::sweep::{run_sweep, SweepArtifact, SweepSpec, TargetRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Identity,
    Property,
    Inequality,
    Search,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::Identity => "identity",
            CheckKind::Property => "property",
            CheckKind::Inequality => "inequality",
            CheckKind::Search => "search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceStatus {
    Pass,
    Fail,
    Skipped,
}

impl TraceStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceStatus::Pass => "pass",
            TraceStatus::Fail => "fail",
            TraceStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Full grids.
    Core,
    /// Reduced grids for smoke runs.
    Quick,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "core" => Some(Suite::Core),
            "quick" => Some(Suite::Quick),
            _ => None,
        }
    }

    fn pick<T>(self, core: T, quick: T) -> T {
        match self {
            Suite::Core => core,
            Suite::Quick => quick,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceConfig {
    pub suite: Suite,
    pub budget: u64,
    pub jobs: usize,
}

/// What a check produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub status: TraceStatus,
    pub summary: String,
    pub data: Value,
}

impl Evidence {
    fn new(ok: bool, summary: impl Into<String>, data: Value) -> Self {
        Self {
            status: if ok { TraceStatus::Pass } else { TraceStatus::Fail },
            summary: summary.into(),
            data,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub claim: String,
    pub kind: CheckKind,
    pub status: TraceStatus,
    /// Evidence file, relative to the run directory.
    pub evidence: String,
    pub summary: String,
}

pub trait Claim: Send + Sync {
    fn id(&self) -> &'static str;

    fn kind(&self) -> CheckKind;

    fn check(&self, cfg: &TraceConfig) -> Result<Evidence>;
}

struct FnClaim {
    id: &'static str,
    kind: CheckKind,
    run: fn(&TraceConfig) -> Result<Evidence>,
}

impl Claim for FnClaim {
    fn id(&self) -> &'static str {
        self.id
    }

    fn kind(&self) -> CheckKind {
        self.kind
    }

    fn check(&self, cfg: &TraceConfig) -> Result<Evidence> {
        (self.run)(cfg)
    }
}

pub struct ClaimRegistry {
    claims: Vec<Box<dyn Claim>>,
}

/// Evidence file name for a claim id.
pub fn evidence_file(id: &str) -> String {
    let mut slug = String::new();
    for c in id.chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c.to_ascii_lowercase());
        } else if !slug.ends_with('-') {
            slug.push('-');
        }
    }
    format!("evidence/{}.json", slug.trim_end_matches('-'))
}

impl ClaimRegistry {
    pub fn new() -> Self {
        Self { claims: Vec::new() }
    }

    pub fn builtin() -> Self {
        use CheckKind::*;
        let mut reg = Self::new();
        let items: Vec<(&'static str, CheckKind, fn(&TraceConfig) -> Result<Evidence>)> = vec![
            ("Lemma 2.1(i)", Property, lemma_2_1_i),
            ("Corollary 2.2", Search, corollary_2_2),
            ("Corollary 2.3", Property, corollary_2_3),
            ("Lemma 2.4", Property, lemma_2_4),
            ("Lemma 2.6", Search, lemma_2_6),
            ("Observation 2.7(i)", Identity, obs_2_7_i),
            ("Observation 2.7(ii)", Identity, obs_2_7_ii),
            ("Observation 2.7(iii)", Identity, obs_2_7_iii),
            ("Observation 2.7(iv)", Property, obs_2_7_iv),
            ("Lemma 3.1", Search, lemma_3_1),
            ("Lemma 3.2(iv) Step 1", Inequality, step_1_f_prime),
            ("Lemma 3.5(i)", Inequality, lemma_3_5_i),
            ("Lemma 3.5(ii)", Inequality, lemma_3_5_ii),
            ("Lemma 3.6", Search, lemma_3_6),
            ("Corollary 3.7", Inequality, corollary_3_7),
            ("Eq. (12) dichotomy", Inequality, |c| lemma_sweep("dichotomy", c)),
            ("Lemma 4.1", Inequality, |c| lemma_sweep("4.1", c)),
            ("Lemma 4.2", Inequality, |c| lemma_sweep("4.2", c)),
            ("Lemma 4.3", Inequality, |c| lemma_sweep("4.3", c)),
            ("Lemma 4.4", Inequality, |c| lemma_sweep("4.4", c)),
            ("Lemma 4.5", Inequality, |c| lemma_sweep("4.5", c)),
            ("Lemma 4.6", Inequality, |c| lemma_sweep("4.6", c)),
            ("Lemma 4.7", Inequality, |c| lemma_sweep("4.7", c)),
            ("Lemma 4.8", Inequality, |c| lemma_sweep("4.8", c)),
            ("Lemma 4.9", Inequality, |c| lemma_sweep("4.9", c)),
            ("Lemma 4.10", Inequality, |c| lemma_sweep("4.10", c)),
            ("Theorem 1.3(i) product", Identity, theorem_1_3_i),
            ("Theorem 1.3(ii) product", Identity, theorem_1_3_ii),
        ];
        for (id, kind, run) in items {
            reg.register(Box::new(FnClaim { id, kind, run }));
        }
        reg
    }

    pub fn register(&mut self, c: Box<dyn Claim>) {
        self.claims.retain(|o| o.id() != c.id());
        self.claims.push(c);
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.claims.iter().map(|c| c.id())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Claim> + '_ {
        self.claims.iter().map(|b| b.as_ref())
    }
}

impl Default for ClaimRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Runs every claim once, in manifest order. A check that errors is
/// reported as skipped with the error as its summary.
pub fn run_trace(reg: &ClaimRegistry, cfg: &TraceConfig) -> Vec<(TraceEntry, Evidence)> {
    reg.iter()
        .map(|c| {
            let ev = c.check(cfg).unwrap_or_else(|e| Evidence {
                status: TraceStatus::Skipped,
                summary: format!("check did not run: {e:#}"),
                data: Value::Null,
            });
            let entry = TraceEntry {
                claim: c.id().to_string(),
                kind: c.kind(),
                status: ev.status,
                evidence: evidence_file(c.id()),
                summary: ev.summary.clone(),
            };
            (entry, ev)
        })
        .collect()
}

/// Fixed-width pass/fail table.
pub fn render_table(entries: &[TraceEntry]) -> String {
    let w = entries.iter().map(|e| e.claim.len()).max().unwrap_or(5).max(5);
    let mut out = format!("{:<w$}  {:<10}  {:<7}  summary\n", "claim", "kind", "status");
    for e in entries {
        out.push_str(&format!(
            "{:<w$}  {:<10}  {:<7}  {}\n",
            e.claim,
            e.kind.as_str(),
            e.status.as_str(),
            e.summary
        ));
    }
    out
}

fn sweep(grid: &str, target: &str, cfg: &TraceConfig) -> Result<SweepArtifact> {
    let spec = SweepSpec {
        grid: Grid::parse(grid)?,
        target: target.into(),
        budget: cfg.budget,
        jobs: cfg.jobs,
    };
    run_sweep(&spec, &TargetRegistry::builtin())
}

/// Pass when no row fails and at least one row was evaluated.
fn sweep_evidence(grid: &str, target: &str, cfg: &TraceConfig) -> Result<Evidence> {
    let a = sweep(grid, target, cfg)?;
    let failures: Vec<_> = a
        .rows
        .iter()
        .filter(|r| r.outcome.status == crate::sweep::RowStatus::Fail)
        .take(20)
        .collect();
    let s = &a.summary;
    Ok(Evidence::new(
        s.fail == 0 && s.pass > 0,
        format!("{} pass, {} fail, {} skipped over {grid}", s.pass, s.fail, s.skipped),
        json!({ "target": target, "grid": grid, "summary": s, "first_failures": failures }),
    ))
}

fn prefix(n: u32, len: u32) -> Result<SetMask> {
    Ok(SetMask::from_elements(n, &(1..=len).collect::<Vec<_>>())?)
}

/// All intersections of at most `depth` members.
fn meets(f: &Family, depth: usize) -> BTreeSet<u64> {
    let mut all: BTreeSet<u64> = f.masks().iter().copied().collect();
    let mut level = all.clone();
    for _ in 1..depth {
        level = level
            .iter()
            .flat_map(|a| f.masks().iter().map(move |m| a & m))
            .collect();
        all.extend(&level);
    }
    all
}

/// Smallest `S` with `|S ∩ I| >= t` for every intersection `I` of `r-1` members.
fn smallest_meeting_set(f: &Family, r: usize, t: u32) -> u32 {
    let n = f.universe();
    let targets = meets(f, r - 1);
    (0..1u64 << n)
        .filter(|s| targets.iter().all(|i| (s & i).count_ones() >= t))
        .map(|s| s.count_ones())
        .min()
        .unwrap_or(n + 1)
}

fn rwise_report(n: i64, k: i64, t: i64, r: i64, cfg: &TraceConfig) -> Result<ixlab_core::search::SearchReport> {
    let mut req = SearchRequest::new(ParamSet::Rwise { n, k, t, r });
    req.limits.node_budget = cfg.budget;
    req.limits.jobs = cfg.jobs;
    Ok(StrategyRegistry::builtin().get("rwise")?.run(&req)?)
}

fn lemma_2_1_i(cfg: &TraceConfig) -> Result<Evidence> {
    let mut checked = Vec::new();
    let mut ok = true;
    let mut families: Vec<(String, Family, usize, u32)> = Vec::new();
    let nmax = cfg.suite.pick(9, 7);
    for n in 6..=nmax {
        for (t, r) in [(1u32, 2u32), (1, 3), (2, 2)] {
            let k = t + r;
            if n < 2 * k {
                continue;
            }
            let d = t + r - 2;
            let h = build_h(&HParams::new(n, k, d, prefix(n, d)?, prefix(n, k + 1)?)?)?;
            let a = build_a(&AParams::new(n, k, d, prefix(n, d + 2)?)?)?;
            families.push((format!("H n={n} k={k} t={t} r={r}"), h, r as usize, t));
            families.push((format!("A n={n} k={k} t={t} r={r}"), a, r as usize, t));
        }
    }
    for (n, k, t, r) in [(6, 3, 1, 2), (6, 3, 1, 3), (5, 3, 2, 2)] {
        let rep = rwise_report(n, k, t, r, cfg)?;
        for (i, w) in rep.witnesses.iter().enumerate() {
            if let Witness::Family(f) = w {
                families.push((format!("optimum {i} n={n} k={k} t={t} r={r}"), f.clone(), r as usize, t as u32));
            }
        }
    }
    for (name, f, r, t) in &families {
        if !is_r_wise_t_intersecting(f, *r, *t) || !is_nontrivial(f, *t) {
            continue;
        }
        let s = smallest_meeting_set(f, *r, *t);
        let holds = s >= t + *r as u32 - 1;
        ok &= holds;
        checked.push(json!({ "family": name, "smallest_s": s, "claimed_min": t + *r as u32 - 1, "holds": holds }));
    }
    ok &= !checked.is_empty();
    Ok(Evidence::new(
        ok,
        format!("{} non-trivial r-wise families, smallest admissible S measured", checked.len()),
        json!({ "families": checked }),
    ))
}

fn corollary_2_2(cfg: &TraceConfig) -> Result<Evidence> {
    let mut rows = Vec::new();
    let mut ok = true;
    let nmax = cfg.suite.pick(7, 6);
    for n in 4..=nmax {
        for k in 2..=3.min(n - 1) {
            for t in 1..k {
                for r in (k - t + 2)..=(k - t + 3) {
                    let rep = rwise_report(n, k, t, r, cfg)?;
                    let none = rep.optimum == ExactInt::from(0) && rep.witnesses.is_empty();
                    ok &= none;
                    rows.push(json!({ "n": n, "k": k, "t": t, "r": r, "optimum": rep.optimum.to_string() }));
                }
            }
        }
    }
    Ok(Evidence::new(
        ok,
        format!("{} instances with r > k-t+1, all without non-trivial families", rows.len()),
        json!({ "instances": rows }),
    ))
}

/// Random families of three shapes: uniform random, random subfamilies of
/// constructions, and random subfamilies of `C(M, k)`.
fn random_families(count: usize, seed: u64) -> Result<Vec<(Family, usize, u32)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(5..=8u32);
        let t = rng.gen_range(1..=2u32);
        let r = rng.gen_range(2..=3u32);
        let k = rng.gen_range(t + r - 1..=(t + r + 1).min(n / 2).max(t + r - 1));
        if 2 * k > n {
            continue;
        }
        let pool = match rng.gen_range(0..3) {
            0 => enumerate_k_subsets(n, k)?,
            1 if k > t + r - 2 => {
                let d = t + r - 2;
                if rng.gen_bool(0.5) {
                    build_h(&HParams::new(n, k, d, prefix(n, d)?, prefix(n, k + 1)?)?)?
                } else {
                    build_a(&AParams::new(n, k, d, prefix(n, d + 2)?)?)?
                }
            }
            _ => enumerate_k_subsets(k + 1, k).and_then(|f| Family::new(n, k, f.masks().iter().copied()))?,
        };
        let p = rng.gen_range(0.2..0.9);
        let pick = pool.filter(|_| rng.gen_bool(p));
        if pick.len() >= 2 {
            out.push((pick, r as usize, t));
        }
    }
    Ok(out)
}

fn corollary_2_3(cfg: &TraceConfig) -> Result<Evidence> {
    let count = cfg.suite.pick(1000, 200);
    let fams = random_families(count, 0x5eed_2_3)?;
    let (mut premise, mut bad) = (0, 0);
    for (f, r, t) in &fams {
        if !(is_r_wise_t_intersecting(f, *r, *t) && is_nontrivial(f, *t)) {
            continue;
        }
        premise += 1;
        // |B1 ∩ ... ∩ Bd| >= t + r - d for d <= r, hence pairwise (t+r-2)
        let ms = f.masks();
        let mut holds = true;
        for d in 1..=*r {
            let need = *t + *r as u32 - d as u32;
            holds &= meets(f, d).iter().all(|m| m.count_ones() >= need);
        }
        holds &= ms.iter().all(|a| ms.iter().all(|b| (a & b).count_ones() >= t + *r as u32 - 2));
        bad += !holds as usize;
    }
    Ok(Evidence::new(
        bad == 0 && premise > 0,
        format!("{count} random families, {premise} non-trivial r-wise, {bad} counterexamples"),
        json!({ "families": count, "premise_holds": premise, "counterexamples": bad, "seed": 0x5eed_2_3u64 }),
    ))
}

fn lemma_2_4(cfg: &TraceConfig) -> Result<Evidence> {
    let grid = cfg.suite.pick("t=1..3,r=2..4,k=t+r-1..5,n=2*k..12", "t=1..2,r=2..3,k=t+r-1..4,n=2*k..9");
    sweep_evidence(grid, "rwise-constructions", cfg)
}

fn lemma_2_6(cfg: &TraceConfig) -> Result<Evidence> {
    let mut rows = Vec::new();
    let mut ok = true;
    let nmax = cfg.suite.pick(7, 6);
    for (t, r) in [(1i64, 2i64), (1, 3), (2, 2)] {
        let k = t + r - 1;
        for n in (k + 2)..=nmax {
            let rep = rwise_report(n, k, t, r, cfg)?;
            let want = binomial(n, k + 1);
            let mut all_cmk = true;
            for w in &rep.witnesses {
                let Witness::Family(f) = w else { continue };
                let u = f.union();
                all_cmk &= u.len() as i64 == k + 1
                    && f.len() as i64 == k + 1
                    && is_maximal_rwise(f, r as usize, t as u32)?;
            }
            let holds = all_cmk && ExactInt::from(rep.witnesses.len()) == want;
            ok &= holds;
            rows.push(json!({
                "n": n, "k": k, "t": t, "r": r,
                "optimum": rep.optimum.to_string(),
                "witnesses": rep.witnesses.len(),
                "expected_witnesses": want.to_string(),
                "holds": holds,
            }));
        }
    }
    // exhaustive: every maximal non-trivial r-wise family is some C(M, k)
    let mut exhaustive = Vec::new();
    for (n, k, t, r) in [(4u32, 2u32, 1u32, 2usize), (5, 2, 1, 2), (5, 3, 2, 2), (5, 3, 1, 3), (4, 3, 2, 2)] {
        let all = enumerate_k_subsets(n, k)?;
        let ms = all.masks();
        let mut maximal = 0;
        let mut off = 0;
        for sub in 1u64..1 << ms.len() {
            let f = Family::new(n, k, (0..ms.len()).filter(|i| sub >> i & 1 == 1).map(|i| ms[i]))?;
            if !is_nontrivial(&f, t) || !is_r_wise_t_intersecting(&f, r, t) || !is_maximal_rwise(&f, r, t)? {
                continue;
            }
            maximal += 1;
            if !(f.union().len() == k + 1 && f.len() as u32 == k + 1) {
                off += 1;
            }
        }
        ok &= off == 0 && maximal > 0;
        exhaustive.push(json!({ "n": n, "k": k, "t": t, "r": r, "maximal": maximal, "not_c_m_k": off }));
    }
    Ok(Evidence::new(
        ok,
        format!("{} searched instances, {} exhaustive instances", rows.len(), exhaustive.len()),
        json!({ "search": rows, "exhaustive": exhaustive }),
    ))
}

/// Calls `visit` for every legal Family I parameter set with prefix sets.
fn family_i_grid(nmax: u32, mut visit: impl FnMut(&H1Params) -> Result<bool>) -> Result<(usize, usize)> {
    let (mut total, mut bad) = (0, 0);
    for n in 4..=nmax {
        for k in 2..=5.min(n / 2) {
            for t in 1..k {
                let mut cs: Vec<u32> = (k + 1..=2 * k - t).collect();
                if !cs.contains(&n) {
                    cs.push(n);
                }
                for c in cs {
                    let p = H1Params::new(n, k, t, prefix(n, t)?, prefix(n, k)?, prefix(n, c)?)?;
                    total += 1;
                    bad += !visit(&p)? as usize;
                }
            }
        }
    }
    Ok((total, bad))
}

fn family_i_evidence(cfg: &TraceConfig, what: &str, visit: impl FnMut(&H1Params) -> Result<bool>) -> Result<Evidence> {
    let nmax = cfg.suite.pick(12, 9);
    let (total, bad) = family_i_grid(nmax, visit)?;
    Ok(Evidence::new(
        bad == 0 && total > 0,
        format!("{what}: {total} parameter sets with n <= {nmax}, {bad} failures"),
        json!({ "parameter_sets": total, "failures": bad, "n_max": nmax }),
    ))
}

fn obs_2_7_i(cfg: &TraceConfig) -> Result<Evidence> {
    family_i_evidence(cfg, "c = k+1 gives H(k,t+1,X,C)", |p| {
        if p.c_size() != p.k + 1 {
            return Ok(true);
        }
        let h = build_h(&HParams::new(p.n, p.k, p.t, p.x, p.c)?)?;
        Ok(build_h1(p)? == h)
    })
}

fn obs_2_7_ii(cfg: &TraceConfig) -> Result<Evidence> {
    family_i_evidence(cfg, "|H1| = h1(t,k,c)", |p| {
        let want = h1(p.t as i64, p.k as i64, p.c_size() as i64, p.n as i64)?;
        Ok(ExactInt::from(build_h1(p)?.len()) == want)
    })
}

fn obs_2_7_iii(cfg: &TraceConfig) -> Result<Evidence> {
    family_i_evidence(cfg, "C = [n] gives E1 ∪ E3, and A(k,k-1,M) when t = k-2", |p| {
        if p.c_size() != p.n {
            return Ok(true);
        }
        let h = build_h1(p)?;
        let mut ok = h == build_e1(p)?.union_with(&build_e3(p)?)? && build_e2(p)?.is_empty();
        if p.t + 2 == p.k {
            let a = build_a(&AParams::new(p.n, p.k, p.k - 2, p.m)?)?;
            let (k, n) = (p.k as i64, p.n as i64);
            ok &= h == a && h1(k - 2, k, n, n)? == h2(k, k, n)?;
        }
        Ok(ok)
    })
}

fn obs_2_7_iv(cfg: &TraceConfig) -> Result<Evidence> {
    family_i_evidence(cfg, "C \\ M lies in every member of E2", |p| {
        let outside = p.c.difference(&p.m);
        Ok(build_e2(p)?.iter().all(|f| outside.is_subset_of(&f)))
    })
}

fn cross_grid(cfg: &TraceConfig) -> &'static str {
    cfg.suite.pick("n=2..7,k1=1..3,k2=1..3,t=1..2", "n=2..6,k1=1..3,k2=1..3,t=1..2")
}

fn scan_column(cfg: &TraceConfig, column: &str) -> Result<Evidence> {
    let grid = cross_grid(cfg);
    let a = sweep(grid, "cross-scan", cfg)?;
    let mut failures = 0u64;
    let mut evaluated = 0;
    let mut rows = Vec::new();
    for r in &a.rows {
        let Some(v) = r.outcome.outputs.get(column) else { continue };
        let Ok(v) = v.parse::<u64>() else { continue };
        evaluated += 1;
        failures += v;
        rows.push(json!({ "point": r.point, "pairs": r.outcome.outputs["pairs"], column: v }));
    }
    Ok(Evidence::new(
        failures == 0 && evaluated > 0,
        format!("{evaluated} instances of {grid}, {failures} failing closed pairs"),
        json!({ "grid": grid, "instances": rows, "skipped": a.summary.skipped }),
    ))
}

fn lemma_3_1(cfg: &TraceConfig) -> Result<Evidence> {
    scan_column(cfg, "min_cover_failures")
}

fn lemma_3_6(cfg: &TraceConfig) -> Result<Evidence> {
    scan_column(cfg, "bound_failures")
}

/// Deterministic sample of `(t, l, k)` with `t <= 3`, `t < l <= 8`, `t < k <= 10`.
fn sample_tkl(rng: &mut ChaCha8Rng) -> (i64, i64, i64) {
    let t = rng.gen_range(1..=3i64);
    let l = rng.gen_range(t + 1..=8i64);
    let k = rng.gen_range(t + 1..=10i64);
    (t, k, l)
}

fn samples(cfg: &TraceConfig) -> usize {
    cfg.suite.pick(200, 50)
}

fn step_1_f_prime(cfg: &TraceConfig) -> Result<Evidence> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut bad, mut steps) = (0, 0);
    for _ in 0..samples(cfg) {
        let (t, k, l) = sample_tkl(&mut rng);
        let n0 = (2 * (k - t - 1) * (l + 1 - t) + t + 1).max(k + l);
        let n = n0 + rng.gen_range(0..=50);
        for m in t..l {
            steps += 1;
            bad += (f_prime(n, k, l, m, t) >= f_prime(n, k, l, m + 1, t)) as usize;
        }
    }
    Ok(Evidence::new(
        bad == 0,
        format!("{} sampled tuples, {steps} steps in m, {bad} not strictly increasing", samples(cfg)),
        json!({ "seed": 31, "steps": steps, "failures": bad }),
    ))
}

fn lemma_3_5_i(cfg: &TraceConfig) -> Result<Evidence> {
    let mut rng = ChaCha8Rng::seed_from_u64(351);
    let (mut bad, mut steps) = (0, 0);
    for _ in 0..samples(cfg) {
        let (t, k, l) = sample_tkl(&mut rng);
        let n = 2 * (k - t + 1) * (l - t + 1) + t + 1 + rng.gen_range(0..=50);
        let s = rng.gen_range(t..k);
        for w in 0.max(s + t - k)..t - 1 {
            steps += 1;
            bad += (g_w(w, n, k, l, s, t) >= g_w(w + 1, n, k, l, s, t)) as usize;
        }
    }
    Ok(Evidence::new(
        bad == 0,
        format!("{} sampled tuples, {steps} steps in w, {bad} not strictly increasing", samples(cfg)),
        json!({ "seed": 351, "steps": steps, "failures": bad }),
    ))
}

fn lemma_3_5_ii(cfg: &TraceConfig) -> Result<Evidence> {
    let mut rng = ChaCha8Rng::seed_from_u64(352);
    let (mut bad, mut steps, mut caps) = (0, 0, 0);
    for _ in 0..samples(cfg) {
        let (t, k, l) = sample_tkl(&mut rng);
        let n = (t + 1) * (t + 1) * (k - t + 1) * (l - t + 1) + t + 1 + rng.gen_range(0..=50);
        for m in t..l {
            steps += 1;
            bad += (f2(m + 1, k, l, n, t) >= f2(m, k, l, n, t)) as usize;
        }
        let cap = ExactRat::from_integer(ExactInt::from((t + 1) * (k - t + 1)) * binomial(n - t - 1, l - t - 1));
        for m in t + 2..=l {
            caps += 1;
            bad += (f2(m, k, l, n, t) >= cap) as usize;
        }
    }
    Ok(Evidence::new(
        bad == 0,
        format!(
            "{} sampled tuples, {steps} decreasing steps and {caps} cap comparisons, {bad} failures",
            samples(cfg)
        ),
        json!({ "seed": 352, "steps": steps, "caps": caps, "failures": bad }),
    ))
}

/// Product of the two size bounds against `g4` and `g5` at and above the
/// threshold, plus the per-pair product check on small closed pairs.
fn corollary_3_7(cfg: &TraceConfig) -> Result<Evidence> {
    let span = cfg.suite.pick(20, 3);
    let (mut cases, mut bad, mut ties) = (0, 0, 0);
    for t in 1..=3i64 {
        for l in t + 1..=8 {
            for k in l..=10 {
                let n0 = (t + 1) * (t + 1) * (k - t + 1) * (l - t + 1) + t + 1;
                for n in n0..=n0 + span {
                    for (kk, ll) in [(k, l), (l, k)] {
                        for mf in t..=ll {
                            for mg in mf..=kk {
                                let p = bound_family_size(mf, mg, n, kk, ll, t)?
                                    * bound_family_size(mg, mf, n, ll, kk, t)?;
                                if mf == t && mg >= t + 2 {
                                    cases += 1;
                                    bad += (p > g4(ll, kk, n, t)) as usize;
                                } else if mf > t {
                                    cases += 1;
                                    let g = g5(kk, ll, n, t);
                                    bad += (p > g) as usize;
                                    ties += (p == g) as usize;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let pairs = scan_column(cfg, "product_failures")?;
    Ok(Evidence::new(
        bad == 0 && pairs.status == TraceStatus::Pass,
        format!(
            "{cases} bound products, {bad} above g4/g5, {ties} equal to g5 (m_f = m_g = t+1); closed pairs: {}",
            pairs.summary
        ),
        json!({
            "bound_products": cases,
            "above": bad,
            "equal_to_g5": ties,
            "threshold_span": span,
            "closed_pairs": pairs.data,
        }),
    ))
}

fn lemma_sweep(id: &str, cfg: &TraceConfig) -> Result<Evidence> {
    let grid = cfg.suite.pick(
        "t=1..3,k2=t+1..8,k1=k2..10,n=thr..thr+50",
        "t=1..3,k2=t+1..8,k1=k2..10,n=thr..thr+2",
    );
    sweep_evidence(grid, &format!("lemma-{id}"), cfg)
}

fn theorem_1_3_i(cfg: &TraceConfig) -> Result<Evidence> {
    let grid = cfg.suite.pick("t=1..3,k2=t+1..8,k1=k2..8,n=k1+k2..14", "t=1..2,k2=t+1..4,k1=k2..5,n=k1+k2..10");
    sweep_evidence(grid, "g1-product", cfg)
}

fn theorem_1_3_ii(cfg: &TraceConfig) -> Result<Evidence> {
    let grid = cfg.suite.pick("t=1..3,k2=t+1..8,k1=k2..8,n=k1+k2..14", "t=1..2,k2=t+1..4,k1=k2..5,n=k1+k2..10");
    sweep_evidence(grid, "g2-product", cfg)
}
