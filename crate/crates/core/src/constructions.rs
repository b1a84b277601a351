//! Builders for the named extremal families. Every parameter struct exposes
//! its membership predicate; builders filter the full k-subset enumeration.

use std::collections::BTreeMap;

use crate::error::{param, Error, Result};
use crate::setcore::{enumerate_k_subsets, Family, SetMask};

fn filter_all(n: u32, k: u32, keep: impl FnMut(SetMask) -> bool) -> Result<Family> {
    Ok(enumerate_k_subsets(n, k)?.filter(keep))
}

fn same_universe(n: u32, sets: &[(&str, &SetMask)]) -> Result<()> {
    for (name, s) in sets {
        if s.universe() != n {
            return param(format!(
                "{name} lives in [{}], expected [{n}]",
                s.universe()
            ));
        }
    }
    Ok(())
}

fn size_is(name: &str, s: &SetMask, want: u32) -> Result<()> {
    if s.len() != want {
        return param(format!("|{name}| = {}, expected {want}", s.len()));
    }
    Ok(())
}

fn subset(a: &str, x: &SetMask, b: &str, y: &SetMask) -> Result<()> {
    if !x.is_subset_of(y) {
        return param(format!("{a} = {{{x}}} is not contained in {b} = {{{y}}}"));
    }
    Ok(())
}

/// Parameters of `H(k, d+1, X, M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HParams {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub x: SetMask,
    pub m: SetMask,
}

impl HParams {
    pub fn new(n: u32, k: u32, d: u32, x: SetMask, m: SetMask) -> Result<Self> {
        same_universe(n, &[("X", &x), ("M", &m)])?;
        if d < 1 || k <= d || n < 2 * k {
            return param(format!("need n >= 2k and k > d >= 1 (n={n}, k={k}, d={d})"));
        }
        size_is("X", &x, d)?;
        size_is("M", &m, k + 1)?;
        subset("X", &x, "M", &m)?;
        Ok(Self { n, k, d, x, m })
    }

    /// `X ⊆ F` and `|F ∩ M| >= d + 1`, or `F ⊆ M`.
    pub fn contains(&self, f: &SetMask) -> bool {
        f.len() == self.k
            && ((self.x.is_subset_of(f) && f.meet_size(&self.m) > self.d) || f.is_subset_of(&self.m))
    }
}

pub fn build_h(p: &HParams) -> Result<Family> {
    filter_all(p.n, p.k, |f| p.contains(&f))
}

/// Parameters of `A(k, d+1, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AParams {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub z: SetMask,
}

impl AParams {
    pub fn new(n: u32, k: u32, d: u32, z: SetMask) -> Result<Self> {
        same_universe(n, &[("Z", &z)])?;
        if d < 1 || k <= d || n < 2 * k {
            return param(format!("need n >= 2k and k > d >= 1 (n={n}, k={k}, d={d})"));
        }
        size_is("Z", &z, d + 2)?;
        Ok(Self { n, k, d, z })
    }

    /// `|F ∩ Z| >= d + 1`.
    pub fn contains(&self, f: &SetMask) -> bool {
        f.len() == self.k && f.meet_size(&self.z) > self.d
    }
}

pub fn build_a(p: &AParams) -> Result<Family> {
    filter_all(p.n, p.k, |f| p.contains(&f))
}

/// Parameters of the three-part family built from `X ⊆ M ⊆ C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct H1Params {
    pub n: u32,
    pub k: u32,
    pub t: u32,
    pub x: SetMask,
    pub m: SetMask,
    pub c: SetMask,
}

impl H1Params {
    pub fn new(n: u32, k: u32, t: u32, x: SetMask, m: SetMask, c: SetMask) -> Result<Self> {
        same_universe(n, &[("X", &x), ("M", &m), ("C", &c)])?;
        if t < 1 || k < t + 1 || n < 2 * k {
            return param(format!("need n >= 2k and k >= t + 1 >= 2 (n={n}, k={k}, t={t})"));
        }
        size_is("X", &x, t)?;
        size_is("M", &m, k)?;
        subset("X", &x, "M", &m)?;
        subset("M", &m, "C", &c)?;
        let cs = c.len();
        if !((k + 1..=2 * k - t).contains(&cs) || cs == n) {
            return param(format!(
                "|C| = {cs} not in {{{}..{}}} ∪ {{{n}}}",
                k + 1,
                2 * k - t
            ));
        }
        Ok(Self { n, k, t, x, m, c })
    }

    pub fn c_size(&self) -> u32 {
        self.c.len()
    }

    /// `X ⊆ F`, `|F ∩ M| >= t + 1`.
    pub fn in_e1(&self, f: &SetMask) -> bool {
        f.len() == self.k && self.x.is_subset_of(f) && f.meet_size(&self.m) > self.t
    }

    /// `F ∩ M = X`, `|F ∩ C| = c - k + t`.
    pub fn in_e2(&self, f: &SetMask) -> bool {
        f.len() == self.k
            && f.intersection(&self.m) == self.x
            && f.meet_size(&self.c) + self.k == self.c_size() + self.t
    }

    /// `F ⊆ C`, `|F ∩ X| = t - 1`, `|F ∩ M| = k - 1`.
    pub fn in_e3(&self, f: &SetMask) -> bool {
        f.len() == self.k
            && f.is_subset_of(&self.c)
            && f.meet_size(&self.x) + 1 == self.t
            && f.meet_size(&self.m) + 1 == self.k
    }

    pub fn contains(&self, f: &SetMask) -> bool {
        self.in_e1(f) || self.in_e2(f) || self.in_e3(f)
    }
}

pub fn build_e1(p: &H1Params) -> Result<Family> {
    filter_all(p.n, p.k, |f| p.in_e1(&f))
}

pub fn build_e2(p: &H1Params) -> Result<Family> {
    filter_all(p.n, p.k, |f| p.in_e2(&f))
}

pub fn build_e3(p: &H1Params) -> Result<Family> {
    filter_all(p.n, p.k, |f| p.in_e3(&f))
}

/// `E1 ∪ E2 ∪ E3`.
pub fn build_h1(p: &H1Params) -> Result<Family> {
    filter_all(p.n, p.k, |f| p.contains(&f))
}

/// All k-sets containing `x`.
pub fn build_star(n: u32, k: u32, x: &SetMask) -> Result<Family> {
    same_universe(n, &[("X", x)])?;
    if x.len() > k {
        return param(format!("|X| = {} exceeds k = {k}", x.len()));
    }
    filter_all(n, k, |f| x.is_subset_of(&f))
}

/// All k-sets meeting `tt` in at least `t` points.
pub fn build_threshold(n: u32, k: u32, t: u32, tt: &SetMask) -> Result<Family> {
    same_universe(n, &[("T", tt)])?;
    if t > tt.len() || t > k {
        return param(format!("need t <= min(|T|, k) (t={t}, |T|={}, k={k})", tt.len()));
    }
    filter_all(n, k, |f| f.meet_size(tt) >= t)
}

fn cross_sizes(k1: u32, k2: u32, t: u32, n: u32) -> Result<()> {
    if t < 1 || k2 < t + 1 || k1 < k2 || k1 > n {
        return param(format!(
            "need k1 >= k2 >= t + 1 >= 2 and k1 <= n (k1={k1}, k2={k2}, t={t}, n={n})"
        ));
    }
    Ok(())
}

/// `F1 = {X ⊆ F, |F ∩ M| >= t+1}`, `F2 = {X ⊆ G} ∪ C(M, k2)`.
pub fn build_cross_pair_ia(
    n: u32,
    k1: u32,
    k2: u32,
    t: u32,
    x: &SetMask,
    m: &SetMask,
) -> Result<(Family, Family)> {
    same_universe(n, &[("X", x), ("M", m)])?;
    cross_sizes(k1, k2, t, n)?;
    size_is("X", x, t)?;
    size_is("M", m, k2 + 1)?;
    subset("X", x, "M", m)?;
    let f1 = filter_all(n, k1, |f| x.is_subset_of(&f) && f.meet_size(m) > t)?;
    let f2 = filter_all(n, k2, |g| x.is_subset_of(&g) || g.is_subset_of(m))?;
    Ok((f1, f2))
}

/// `F1 = star(T)` of k1-sets, `F2 = threshold(T, t)` of k2-sets, `|T| = t+1`.
pub fn build_cross_pair_threshold(
    n: u32,
    k1: u32,
    k2: u32,
    t: u32,
    tt: &SetMask,
) -> Result<(Family, Family)> {
    same_universe(n, &[("T", tt)])?;
    cross_sizes(k1, k2, t, n)?;
    size_is("T", tt, t + 1)?;
    Ok((build_star(n, k1, tt)?, build_threshold(n, k2, t, tt)?))
}

/// The integer and set arguments of a named construction.
#[derive(Debug, Clone, Default)]
pub struct ConstructionArgs {
    pub ints: BTreeMap<String, i64>,
    pub sets: BTreeMap<String, Vec<u32>>,
}

impl ConstructionArgs {
    pub fn int(&self, name: &str) -> Result<u32> {
        let v = *self
            .ints
            .get(name)
            .ok_or_else(|| Error::Parameter(format!("missing integer argument `{name}`")))?;
        u32::try_from(v).or_else(|_| param(format!("`{name}` = {v} out of range")))
    }

    pub fn set(&self, name: &str, n: u32) -> Result<SetMask> {
        let v = self
            .sets
            .get(name)
            .ok_or_else(|| Error::Parameter(format!("missing set argument `{name}`")))?;
        SetMask::from_elements(n, v)
    }
}

/// A named family (or pair of families) that can be built from arguments.
pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;

    fn int_params(&self) -> &'static [&'static str];

    fn set_params(&self) -> &'static [&'static str];

    /// One family, or two for cross pairs.
    fn build(&self, args: &ConstructionArgs) -> Result<Vec<Family>>;
}

type Builder = fn(&ConstructionArgs) -> Result<Vec<Family>>;

struct Named {
    name: &'static str,
    ints: &'static [&'static str],
    sets: &'static [&'static str],
    build: Builder,
}

impl Construction for Named {
    fn name(&self) -> &'static str {
        self.name
    }

    fn int_params(&self) -> &'static [&'static str] {
        self.ints
    }

    fn set_params(&self) -> &'static [&'static str] {
        self.sets
    }

    fn build(&self, args: &ConstructionArgs) -> Result<Vec<Family>> {
        (self.build)(args)
    }
}

fn h_args(a: &ConstructionArgs) -> Result<HParams> {
    let n = a.int("n")?;
    HParams::new(n, a.int("k")?, a.int("d")?, a.set("X", n)?, a.set("M", n)?)
}

fn a_args(a: &ConstructionArgs) -> Result<AParams> {
    let n = a.int("n")?;
    AParams::new(n, a.int("k")?, a.int("d")?, a.set("Z", n)?)
}

fn h1_args(a: &ConstructionArgs) -> Result<H1Params> {
    let n = a.int("n")?;
    H1Params::new(
        n,
        a.int("k")?,
        a.int("t")?,
        a.set("X", n)?,
        a.set("M", n)?,
        a.set("C", n)?,
    )
}

const H1_INTS: &[&str] = &["n", "k", "t"];
const H1_SETS: &[&str] = &["X", "M", "C"];
const CROSS_INTS: &[&str] = &["n", "k1", "k2", "t"];

fn builtin() -> Vec<Named> {
    vec![
        Named {
            name: "H",
            ints: &["n", "k", "d"],
            sets: &["X", "M"],
            build: |a| Ok(vec![build_h(&h_args(a)?)?]),
        },
        Named {
            name: "A",
            ints: &["n", "k", "d"],
            sets: &["Z"],
            build: |a| Ok(vec![build_a(&a_args(a)?)?]),
        },
        Named {
            name: "E1",
            ints: H1_INTS,
            sets: H1_SETS,
            build: |a| Ok(vec![build_e1(&h1_args(a)?)?]),
        },
        Named {
            name: "E2",
            ints: H1_INTS,
            sets: H1_SETS,
            build: |a| Ok(vec![build_e2(&h1_args(a)?)?]),
        },
        Named {
            name: "E3",
            ints: H1_INTS,
            sets: H1_SETS,
            build: |a| Ok(vec![build_e3(&h1_args(a)?)?]),
        },
        Named {
            name: "H1",
            ints: H1_INTS,
            sets: H1_SETS,
            build: |a| Ok(vec![build_h1(&h1_args(a)?)?]),
        },
        Named {
            name: "star",
            ints: &["n", "k"],
            sets: &["X"],
            build: |a| {
                let n = a.int("n")?;
                Ok(vec![build_star(n, a.int("k")?, &a.set("X", n)?)?])
            },
        },
        Named {
            name: "threshold",
            ints: &["n", "k", "t"],
            sets: &["T"],
            build: |a| {
                let n = a.int("n")?;
                Ok(vec![build_threshold(n, a.int("k")?, a.int("t")?, &a.set("T", n)?)?])
            },
        },
        Named {
            name: "cross-ia",
            ints: CROSS_INTS,
            sets: &["X", "M"],
            build: |a| {
                let n = a.int("n")?;
                let (f, g) = build_cross_pair_ia(
                    n,
                    a.int("k1")?,
                    a.int("k2")?,
                    a.int("t")?,
                    &a.set("X", n)?,
                    &a.set("M", n)?,
                )?;
                Ok(vec![f, g])
            },
        },
        Named {
            name: "cross-threshold",
            ints: CROSS_INTS,
            sets: &["T"],
            build: |a| {
                let n = a.int("n")?;
                let (f, g) = build_cross_pair_threshold(
                    n,
                    a.int("k1")?,
                    a.int("k2")?,
                    a.int("t")?,
                    &a.set("T", n)?,
                )?;
                Ok(vec![f, g])
            },
        },
    ]
}

pub struct ConstructionRegistry {
    items: Vec<Box<dyn Construction>>,
}

impl ConstructionRegistry {
    pub fn new() -> Self {
        Self { items: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::new();
        for c in builtin() {
            reg.register(Box::new(c));
        }
        reg
    }

    pub fn register(&mut self, c: Box<dyn Construction>) {
        self.items.retain(|d| d.name() != c.name());
        self.items.push(c);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Construction> {
        self.items
            .iter()
            .find(|c| c.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "construction",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.items.iter().map(|c| c.name())
    }
}

impl Default for ConstructionRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
