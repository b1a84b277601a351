use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use ixlab_cli::grid::Grid;
use ixlab_cli::output::{run_dir, write_families, write_json, write_text};
use ixlab_cli::sweep::{run_sweep, SweepSpec, TargetRegistry};
use ixlab_cli::trace::{render_table, run_trace, ClaimRegistry, Suite, TraceConfig, TraceStatus};
use ixlab_core::constructions::{ConstructionArgs, ConstructionRegistry};
use ixlab_core::formulas::registry::FormulaRegistry;
use ixlab_core::formulas::ParamSet;
use ixlab_core::search::{
    covering_number_census, scan_closed_pairs, PruneSwitches, SearchReport, SearchRequest, StrategyRegistry,
    DEFAULT_NODE_BUDGET,
};
use ixlab_core::verify::{
    covering_number, is_cross_t_intersecting, is_maximal_cross_pair, is_maximal_rwise, is_nontrivial,
    is_nontrivial_pair, is_r_wise_t_intersecting, Convention, PairParams,
};
use ixlab_core::{Error, Family};
use serde_json::{json, Value};

/// Verification laboratory for non-trivial r-wise and cross t-intersecting
/// families.
#[derive(Parser)]
#[command(name = "ixlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Directory that receives `reports/<subcommand>/<timestamp>/`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Node or closure budget for searches.
    #[arg(long, env = "IXLAB_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write zero wall times so reports are byte-stable.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named family and print it in the text format.
    Construct(ConstructCmd),
    /// Decide a property of a family file, or of a pair with --pair.
    Verify(VerifyCmd),
    /// Evaluate a counting function exactly.
    Formula(FormulaCmd),
    /// Evaluate an inequality lemma over a grid; prints a CSV verdict table.
    CheckLemma(CheckLemmaCmd),
    /// Exhaustive searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Evaluate a target over a parameter grid.
    Sweep(SweepCmd),
    /// Run the claim manifest and print a pass/fail table.
    Trace(TraceCmd),
}

#[derive(Args)]
struct ConstructCmd {
    /// One of H, A, E1, E2, E3, H1, star, threshold, cross-ia, cross-threshold.
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    t: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    k1: Option<i64>,
    #[arg(long)]
    k2: Option<i64>,
    #[arg(long = "X")]
    x: Option<String>,
    #[arg(long = "M")]
    m: Option<String>,
    #[arg(long = "Z")]
    z: Option<String>,
    #[arg(long = "C")]
    c: Option<String>,
    #[arg(long = "T")]
    tt: Option<String>,
}

#[derive(Args)]
struct VerifyCmd {
    /// Family file in the text format.
    file: PathBuf,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long)]
    t: u32,
    /// Second family; switches to pair properties.
    #[arg(long)]
    pair: Option<PathBuf>,
    /// rwise, nontrivial, maximal or cover; for pairs cross, nontrivial or maximal.
    #[arg(long)]
    property: Option<String>,
}

#[derive(Args)]
struct FormulaCmd {
    /// h1, h2, g1..g6, gt1..gt6, fprime, f2, gw or bound.
    #[arg(long = "fn")]
    name: String,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    mf: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    mg: Option<i64>,
    /// Alias for --k.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "k")]
    k1: Option<i64>,
    /// Alias for --l.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "l")]
    k2: Option<i64>,
}

#[derive(Args)]
struct CheckLemmaCmd {
    /// 4.1 .. 4.10 or dichotomy.
    #[arg(long)]
    lemma: String,
    /// Grid over k1, k2, n, t; `thr` is the cross-product threshold.
    #[arg(long, default_value = "t=1..3,k2=t+1..8,k1=k2..10,n=thr..thr+50")]
    grid: String,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Maximum (non-trivial) r-wise t-intersecting family.
    Rwise(RwiseCmd),
    /// Closed cross t-intersecting pairs with maximum product.
    Cross(CrossCmd),
}

#[derive(Args)]
struct SearchCommon {
    /// Allow trivial families.
    #[arg(long)]
    trivial_ok: bool,
    /// Largest universe accepted.
    #[arg(long)]
    max_n: Option<u32>,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Args)]
struct RwiseCmd {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    k: i64,
    #[arg(long)]
    t: i64,
    #[arg(long)]
    r: i64,
    /// Search the pairwise (t+r-2)-intersecting relaxation instead.
    #[arg(long)]
    relaxed: bool,
    /// Keep one witness per relabeling signature.
    #[arg(long)]
    reduce_isomorphs: bool,
    #[arg(long)]
    no_bound_prune: bool,
    #[arg(long)]
    no_pairwise_prune: bool,
    #[arg(long)]
    no_rwise_prune: bool,
    #[arg(long)]
    no_triviality_prune: bool,
    #[command(flatten)]
    common: SearchCommon,
}

#[derive(Args)]
struct CrossCmd {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    k1: i64,
    #[arg(long)]
    k2: i64,
    #[arg(long)]
    t: i64,
    /// Add the covering-number census over every closed pair.
    #[arg(long)]
    census: bool,
    #[command(flatten)]
    common: SearchCommon,
}

#[derive(Args)]
struct SweepCmd {
    /// Target name; see --list.
    #[arg(long, required_unless_present = "list")]
    target: Option<String>,
    /// Grid such as `n=4..12,k=2..5,d=1..k-1`. Empty means no points.
    #[arg(long, default_value = "")]
    grid: String,
    /// List targets and exit.
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Args)]
struct TraceCmd {
    /// core or quick.
    #[arg(long, default_value = "core")]
    suite: String,
    #[command(flatten)]
    run: RunOpts,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::Parameter(_) | Error::Unknown { .. } | Error::Parse { .. }) => Failure::Usage(e),
            _ => Failure::Runtime(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

/// `Ok(true)` when every check passed.
type Outcome = std::result::Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Construct(c) => construct(c),
        Command::Verify(c) => verify(c),
        Command::Formula(c) => formula(c),
        Command::CheckLemma(c) => check_lemma(c),
        Command::Search(c) => search(c),
        Command::Sweep(c) => sweep(c),
        Command::Trace(c) => trace(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn parse_set(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u32>().with_context(|| format!("bad set element {p:?}")))
        .collect()
}

fn construct(c: ConstructCmd) -> Outcome {
    let reg = ConstructionRegistry::builtin();
    let con = reg.get(&c.name)?;
    let mut args = ConstructionArgs::default();
    for (name, v) in [("n", c.n), ("k", c.k), ("d", c.d), ("t", c.t), ("r", c.r), ("k1", c.k1), ("k2", c.k2)] {
        if let Some(v) = v {
            args.ints.insert(name.into(), v);
        }
    }
    for (name, v) in [("X", &c.x), ("M", &c.m), ("Z", &c.z), ("C", &c.c), ("T", &c.tt)] {
        if let Some(v) = v {
            args.sets.insert(name.into(), parse_set(v).map_err(Failure::Usage)?);
        }
    }
    let fams = con.build(&args)?;
    let text: Vec<String> = fams.iter().map(Family::to_text).collect();
    print!("{}", text.join("\n"));
    Ok(true)
}

fn read_family(path: &Path) -> std::result::Result<Family, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Usage)?;
    Ok(Family::parse_text(&text)?)
}

fn conventions(list: &[Convention]) -> Vec<&'static str> {
    let mut v: Vec<_> = list.iter().map(Convention::as_str).collect();
    v.sort();
    v.dedup();
    v
}

fn verify(c: VerifyCmd) -> Outcome {
    let f = read_family(&c.file)?;
    let empty_conv = |f: &Family| {
        if f.is_empty() {
            vec![Convention::EmptyIntersectionIsUniverse]
        } else {
            vec![]
        }
    };
    let out: Value = if let Some(second) = &c.pair {
        let g = read_family(second)?;
        let p = PairParams::new(c.t, f, g)?;
        let conv = conventions(&p.conventions());
        let property = c.property.as_deref().unwrap_or("cross");
        let verdict = match property {
            "cross" => is_cross_t_intersecting(&p),
            "nontrivial" => is_nontrivial_pair(&p),
            "maximal" => is_maximal_cross_pair(&p)?,
            other => return Err(usage(format!("unknown pair property {other:?}"))),
        };
        json!({
            "property": match property {
                "cross" => "cross-t-intersecting",
                "nontrivial" => "nontrivial-pair",
                _ => "maximal-cross-t-intersecting",
            },
            "t": c.t,
            "verdict": verdict,
            "conventions_used": conv,
        })
    } else {
        let property = c.property.as_deref().unwrap_or("rwise");
        match property {
            "rwise" => json!({
                "property": "r-wise-t-intersecting",
                "r": c.r,
                "t": c.t,
                "verdict": is_r_wise_t_intersecting(&f, c.r, c.t),
                "conventions_used": Vec::<&str>::new(),
            }),
            "nontrivial" => json!({
                "property": "nontrivial",
                "t": c.t,
                "verdict": is_nontrivial(&f, c.t),
                "conventions_used": conventions(&empty_conv(&f)),
            }),
            "maximal" => json!({
                "property": "maximal-r-wise-t-intersecting",
                "r": c.r,
                "t": c.t,
                "verdict": is_maximal_rwise(&f, c.r, c.t)?,
                "conventions_used": Vec::<&str>::new(),
            }),
            "cover" => {
                let res = covering_number(&f, c.t)?;
                let cert = &res.certificate;
                json!({
                    "property": "t-covering-number",
                    "t": c.t,
                    "verdict": cert.certifies(&f),
                    "tau": res.tau,
                    "certificate": {
                        "cover": cert.cover.elements(),
                        "size": cert.size,
                        "kind": "t-cover",
                        "t": cert.t,
                    },
                    "conventions_used": conventions(&res.conventions),
                })
            }
            other => return Err(usage(format!("unknown property {other:?}"))),
        }
    };
    println!("{}", serde_json::to_string_pretty(&out).map_err(anyhow::Error::from)?);
    Ok(out["verdict"].as_bool().unwrap_or(false))
}

fn formula(c: FormulaCmd) -> Outcome {
    let reg = FormulaRegistry::builtin();
    let mut args = BTreeMap::new();
    let k = c.k.or(c.k1);
    let l = c.l.or(c.k2);
    for (name, v) in [
        ("d", c.d),
        ("k", k),
        ("c", c.c),
        ("n", c.n),
        ("z", c.z),
        ("l", l),
        ("t", c.t),
        ("m", c.m),
        ("w", c.w),
        ("s", c.s),
        ("mf", c.mf),
        ("mg", c.mg),
    ] {
        if let Some(v) = v {
            args.insert(name.to_string(), v);
        }
    }
    let f = reg.get(&c.name)?;
    let extra: Vec<_> = args.keys().filter(|a| !f.params().contains(&a.as_str())).cloned().collect();
    if !extra.is_empty() {
        return Err(usage(format!(
            "{} takes {} (unexpected: {})",
            c.name,
            f.params().join(", "),
            extra.join(", ")
        )));
    }
    println!("{}", reg.evaluate(&c.name, &args)?);
    Ok(true)
}

fn check_lemma(c: CheckLemmaCmd) -> Outcome {
    let targets = TargetRegistry::builtin();
    let target = format!("lemma-{}", c.lemma);
    targets.get(&target).map_err(|_| usage(format!("unknown lemma {:?}", c.lemma)))?;
    let grid = Grid::parse(&c.grid).map_err(Failure::Usage)?;
    let spec = SweepSpec {
        grid,
        target,
        budget: c.run.budget,
        jobs: c.run.jobs,
    };
    let art = run_sweep(&spec, &targets).map_err(Failure::Usage)?;
    let csv = art.to_csv()?;
    let dir = run_dir(&c.run.out, "check-lemma")?;
    write_json(&dir.join("report.json"), &art)?;
    write_text(&dir.join("rows.csv"), &csv)?;
    print!("{csv}");
    eprintln!(
        "lemma {}: {} hold, {} fail, {} hypotheses-unmet; report in {}",
        c.lemma,
        art.summary.pass,
        art.summary.fail,
        art.summary.skipped,
        dir.display()
    );
    Ok(!art.failed())
}

fn witness_rows(rep: &SearchReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "sizes", "value", "files"])?;
    for (i, wit) in rep.witnesses.iter().enumerate() {
        let fams = wit.families();
        let sizes: Vec<String> = fams.iter().map(|f| f.len().to_string()).collect();
        let files: Vec<String> = (0..fams.len()).map(|j| format!("witnesses/{}.fam", stem(i, j, fams.len()))).collect();
        w.write_record([i.to_string(), sizes.join("x"), wit.value().to_string(), files.join(" ")])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn stem(i: usize, j: usize, len: usize) -> String {
    if len == 1 {
        format!("w{i:04}")
    } else {
        format!("w{i:04}-{}", if j == 0 { "first" } else { "second" })
    }
}

fn persist_search(rep: &SearchReport, extra: Option<Value>, run: &RunOpts) -> Result<PathBuf> {
    let dir = run_dir(&run.out, "search")?;
    let mut value = serde_json::to_value(rep)?;
    if let (Some(extra), Some(obj)) = (extra, value.as_object_mut()) {
        if let Some(e) = extra.as_object() {
            obj.extend(e.clone());
        }
    }
    write_json(&dir.join("report.json"), &value)?;
    write_text(&dir.join("rows.csv"), &witness_rows(rep)?)?;
    let items = rep.witnesses.iter().enumerate().flat_map(|(i, w)| {
        let fams = w.families();
        let len = fams.len();
        fams.into_iter().enumerate().map(move |(j, f)| (stem(i, j, len), f))
    });
    write_families(&dir, items)?;
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(dir)
}

fn search(c: SearchCmd) -> Outcome {
    let strategies = StrategyRegistry::builtin();
    match c {
        SearchCmd::Rwise(s) => {
            let mut req = SearchRequest::new(ParamSet::Rwise {
                n: s.n,
                k: s.k,
                t: s.t,
                r: s.r,
            });
            apply_common(&mut req, &s.common);
            req.reduce_isomorphs = s.reduce_isomorphs;
            req.prunes = PruneSwitches {
                bound: !s.no_bound_prune,
                pairwise: !s.no_pairwise_prune,
                rwise: !s.no_rwise_prune,
                triviality: !s.no_triviality_prune,
            };
            let name = if s.relaxed { "rwise-relaxed" } else { "rwise" };
            let mut rep = strategies.get(name)?.run(&req)?;
            if s.common.run.no_timing {
                rep.wall_ms = 0;
            }
            let dir = persist_search(&rep, None, &s.common.run)?;
            eprintln!("optimum {}; report in {}", rep.optimum, dir.display());
            Ok(true)
        }
        SearchCmd::Cross(s) => {
            let mut req = SearchRequest::new(ParamSet::Cross {
                n: s.n,
                k1: s.k1,
                k2: s.k2,
                t: s.t,
            });
            apply_common(&mut req, &s.common);
            req.keep_all_pairs = false;
            let mut rep = strategies.get("cross")?.run(&req)?;
            if s.common.run.no_timing {
                rep.wall_ms = 0;
            }
            let mut ok = true;
            let extra = if s.census {
                let witness_census = covering_number_census(&rep)?;
                let scan = scan_closed_pairs(s.n as u32, s.k1 as u32, s.k2 as u32, s.t as u32, req.limits.node_budget)?;
                ok = scan.all_hold();
                Some(json!({ "optimum_census": witness_census, "pair_scan": scan }))
            } else {
                None
            };
            let dir = persist_search(&rep, extra, &s.common.run)?;
            eprintln!("optimum {}; report in {}", rep.optimum, dir.display());
            Ok(ok)
        }
    }
}

fn apply_common(req: &mut SearchRequest, c: &SearchCommon) {
    req.require_nontrivial = !c.trivial_ok;
    req.limits.max_n = c.max_n;
    req.limits.node_budget = c.run.budget;
    req.limits.jobs = c.run.jobs;
}

fn sweep(c: SweepCmd) -> Outcome {
    let targets = TargetRegistry::builtin();
    if c.list {
        for t in targets.iter() {
            println!("{:<20} [{}] {}", t.name(), t.params().join(","), t.description());
        }
        return Ok(true);
    }
    let target = c.target.expect("required unless --list");
    targets.get(&target).map_err(Failure::Usage)?;
    let grid = Grid::parse(&c.grid).map_err(Failure::Usage)?;
    let spec = SweepSpec {
        grid,
        target,
        budget: c.run.budget,
        jobs: c.run.jobs,
    };
    let art = run_sweep(&spec, &targets).map_err(Failure::Usage)?;
    let dir = run_dir(&c.run.out, "sweep")?;
    write_json(&dir.join("report.json"), &art)?;
    write_text(&dir.join("rows.csv"), &art.to_csv()?)?;
    println!(
        "{}: {} pass, {} fail, {} skipped; report in {}",
        art.target,
        art.summary.pass,
        art.summary.fail,
        art.summary.skipped,
        dir.display()
    );
    Ok(!art.failed())
}

fn trace(c: TraceCmd) -> Outcome {
    let suite = Suite::parse(&c.suite).ok_or_else(|| usage(format!("unknown suite {:?}", c.suite)))?;
    let cfg = TraceConfig {
        suite,
        budget: c.run.budget,
        jobs: c.run.jobs,
    };
    let results = run_trace(&ClaimRegistry::builtin(), &cfg);
    let dir = run_dir(&c.run.out, "trace")?;
    let entries: Vec<_> = results.iter().map(|(e, _)| e.clone()).collect();
    for (e, ev) in &results {
        write_json(&dir.join(&e.evidence), &json!({ "claim": e.claim, "kind": e.kind, "evidence": ev }))?;
    }
    write_json(&dir.join("report.json"), &json!({ "suite": c.suite, "entries": entries }))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["claim", "kind", "status", "evidence", "summary"])
        .map_err(anyhow::Error::from)?;
    for e in &entries {
        w.write_record([&e.claim, e.kind.as_str(), e.status.as_str(), &e.evidence, &e.summary])
            .map_err(anyhow::Error::from)?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?).map_err(anyhow::Error::from)?;
    write_text(&dir.join("rows.csv"), &csv)?;
    print!("{}", render_table(&entries));
    let fails = entries.iter().filter(|e| e.status == TraceStatus::Fail).count();
    println!("{} claims, {fails} failed; evidence in {}", entries.len(), dir.display());
    Ok(fails == 0)
}
