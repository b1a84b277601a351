//! Exact checkers for the inequalities between `g1..g6` used to compare
//! non-trivial cross t-intersecting constructions.
//!
//! Every checker is registered under a short id (`"4.1"` … `"4.10"`, plus
//! `"dichotomy"` for the g1-versus-g2 sign split) and selected at runtime.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::hypotheses::{cross_excluded, theorem_cross_threshold};
use super::{binomial, g1, g2, g3, g4, g5, g6};
use crate::error::{Error, Result};

/// A grid point `(k1, k2, n, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossPoint {
    pub k1: i64,
    pub k2: i64,
    pub n: i64,
    pub t: i64,
}

impl CrossPoint {
    pub fn new(k1: i64, k2: i64, n: i64, t: i64) -> Self {
        Self { k1, k2, n, t }
    }

    /// `t >= 1` and `k1 >= k2 >= t + 1`.
    pub fn standing(&self) -> bool {
        self.t >= 1 && self.k1 >= self.k2 && self.k2 >= self.t + 1
    }

    pub fn threshold(&self) -> i64 {
        theorem_cross_threshold(self.k1, self.k2, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    HypothesesUnmet,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::HypothesesUnmet => "hypotheses-unmet",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub lemma: String,
    pub point: CrossPoint,
    pub verdict: Verdict,
    /// Whether `n` reaches the cross-product threshold. Verdicts are computed
    /// either way so sweeps can look below it.
    pub n_at_threshold: bool,
    pub detail: String,
}

/// One registered inequality.
pub trait InequalityLemma: Send + Sync {
    fn id(&self) -> &'static str;

    fn statement(&self) -> &'static str;

    /// Side conditions beyond `k1 >= k2 >= t + 1`.
    fn applies(&self, p: &CrossPoint) -> bool;

    /// Evaluates the strict inequality; the string names the compared values.
    fn evaluate(&self, p: &CrossPoint) -> (bool, String);

    fn check(&self, p: &CrossPoint) -> LemmaVerdict {
        let n_at_threshold = p.n >= p.threshold();
        if !p.standing() || !self.applies(p) {
            return LemmaVerdict {
                lemma: self.id().to_string(),
                point: *p,
                verdict: Verdict::HypothesesUnmet,
                n_at_threshold,
                detail: String::new(),
            };
        }
        let (ok, detail) = self.evaluate(p);
        LemmaVerdict {
            lemma: self.id().to_string(),
            point: *p,
            verdict: if ok { Verdict::Holds } else { Verdict::Fails },
            n_at_threshold,
            detail,
        }
    }
}

type Side = fn(&CrossPoint) -> bool;
type Claim = fn(&CrossPoint) -> (bool, String);

struct Inequality {
    id: &'static str,
    statement: &'static str,
    side: Side,
    claim: Claim,
}

impl InequalityLemma for Inequality {
    fn id(&self) -> &'static str {
        self.id
    }

    fn statement(&self) -> &'static str {
        self.statement
    }

    fn applies(&self, p: &CrossPoint) -> bool {
        (self.side)(p)
    }

    fn evaluate(&self, p: &CrossPoint) -> (bool, String) {
        (self.claim)(p)
    }
}

fn gt(lhs_name: &str, lhs: &BigInt, rhs_name: &str, rhs: &BigInt) -> (bool, String) {
    let rel = match lhs.cmp(rhs) {
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
        std::cmp::Ordering::Greater => ">",
    };
    (lhs > rhs, format!("{lhs_name} {rel} {rhs_name}"))
}

fn always(_: &CrossPoint) -> bool {
    true
}

fn args(p: &CrossPoint) -> (i64, i64, i64, i64) {
    (p.k1, p.k2, p.n, p.t)
}

fn g6_g1_chain(p: &CrossPoint) -> (bool, String) {
    let (k1, k2, n, t) = args(p);
    let a = g6(k1, k2, n, t);
    let b = g1(k1, k2, n, t);
    let cap = BigInt::from(k2 - t + 1)
        * binomial(n - t - 1, k1 - t - 1)
        * (binomial(n - t, k2 - t) + BigInt::from(t));
    let (lower, d1) = gt("g1", &b, "g6", &a);
    let (upper, d2) = gt("cap", &cap, "g1", &b);
    (lower && upper, format!("{d1}; {d2}"))
}

fn g1_over_g2(p: &CrossPoint) -> (bool, String) {
    let (k1, k2, n, t) = args(p);
    gt("g1", &g1(k1, k2, n, t), "g2", &g2(k1, k2, n, t))
}

fn g2_over_g1(p: &CrossPoint) -> (bool, String) {
    let (k1, k2, n, t) = args(p);
    gt("g2", &g2(k1, k2, n, t), "g1", &g1(k1, k2, n, t))
}

fn g1_swap(p: &CrossPoint) -> (bool, String) {
    let (k1, k2, n, t) = args(p);
    gt("g1(k1,k2)", &g1(k1, k2, n, t), "g1(k2,k1)", &g1(k2, k1, n, t))
}

fn g2_swap(p: &CrossPoint) -> (bool, String) {
    let (k1, k2, n, t) = args(p);
    gt("g2(k1,k2)", &g2(k1, k2, n, t), "g2(k2,k1)", &g2(k2, k1, n, t))
}

fn g1_over_g3(p: &CrossPoint) -> (bool, String) {
    let (k1, k2, n, t) = args(p);
    let m = g3(k1, k2, n, t).max(g3(k2, k1, n, t));
    gt("g1", &g1(k1, k2, n, t), "max g3", &m)
}

fn g1_over_g4(p: &CrossPoint) -> (bool, String) {
    let (k1, k2, n, t) = args(p);
    let m = g4(k1, k2, n, t).max(g4(k2, k1, n, t));
    gt("g1", &g1(k1, k2, n, t), "max g4", &m)
}

fn g1_over_g5(p: &CrossPoint) -> (bool, String) {
    let (k1, k2, n, t) = args(p);
    gt("g1", &g1(k1, k2, n, t), "g5", &g5(k1, k2, n, t))
}

fn dichotomy(p: &CrossPoint) -> (bool, String) {
    if p.k2 >= 2 * p.t + 1 {
        g1_over_g2(p)
    } else {
        g2_over_g1(p)
    }
}

fn builtin() -> Vec<Inequality> {
    vec![
        Inequality {
            id: "4.1",
            statement: "g6 < g1 < (k2-t+1) C(n-t-1,k1-t-1) (C(n-t,k2-t) + t)",
            side: always,
            claim: g6_g1_chain,
        },
        Inequality {
            id: "4.2",
            statement: "k2 >= 2t+1  =>  g1 > g2",
            side: |p| p.k2 >= 2 * p.t + 1,
            claim: g1_over_g2,
        },
        Inequality {
            id: "4.3",
            statement: "k2 = 2t, t >= 2, (k1,k2) != (4,4)  =>  g2 > g1",
            side: |p| p.k2 == 2 * p.t && p.t >= 2 && (p.k1, p.k2) != (4, 4),
            claim: g2_over_g1,
        },
        Inequality {
            id: "4.4",
            statement: "t+2 <= k2 <= 2t-1  =>  g2 > g1",
            side: |p| p.t + 2 <= p.k2 && p.k2 <= 2 * p.t - 1,
            claim: g2_over_g1,
        },
        Inequality {
            id: "4.5",
            statement: "k2 = t+1, (k1,t) not in {(2,1),(3,1),(4,1)}  =>  g2 > g1",
            side: |p| p.k2 == p.t + 1 && !(p.t == 1 && (2..=4).contains(&p.k1)),
            claim: g2_over_g1,
        },
        Inequality {
            id: "4.6",
            statement: "k1 > k2  =>  g1(k1,k2) > g1(k2,k1)",
            side: |p| p.k1 > p.k2,
            claim: g1_swap,
        },
        Inequality {
            id: "4.7",
            statement: "k1 > k2  =>  g2(k1,k2) > g2(k2,k1)",
            side: |p| p.k1 > p.k2,
            claim: g2_swap,
        },
        Inequality {
            id: "4.8",
            statement: "g1 > max{g3(k1,k2), g3(k2,k1)}",
            side: always,
            claim: g1_over_g3,
        },
        Inequality {
            id: "4.9",
            statement: "g1 > max{g4(k1,k2), g4(k2,k1)}",
            side: always,
            claim: g1_over_g4,
        },
        Inequality {
            id: "4.10",
            statement: "g1 > g5",
            side: always,
            claim: g1_over_g5,
        },
        Inequality {
            id: "dichotomy",
            statement: "g1 > g2 if k2 >= 2t+1, g1 < g2 if k2 <= 2t (excluded tuples skipped)",
            side: |p| !cross_excluded(p.k1, p.k2, p.t),
            claim: dichotomy,
        },
    ]
}

/// Name-indexed collection of inequality checkers.
pub struct LemmaRegistry {
    lemmas: Vec<Box<dyn InequalityLemma>>,
}

impl LemmaRegistry {
    pub fn new() -> Self {
        Self { lemmas: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::new();
        for l in builtin() {
            reg.register(Box::new(l));
        }
        reg
    }

    /// Adds a checker, replacing any previous one with the same id.
    pub fn register(&mut self, lemma: Box<dyn InequalityLemma>) {
        self.lemmas.retain(|l| l.id() != lemma.id());
        self.lemmas.push(lemma);
    }

    pub fn get(&self, id: &str) -> Result<&dyn InequalityLemma> {
        self.lemmas
            .iter()
            .find(|l| l.id() == id)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "lemma",
                name: id.to_string(),
            })
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.lemmas.iter().map(|l| l.id())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn InequalityLemma> + '_ {
        self.lemmas.iter().map(|b| b.as_ref())
    }
}

impl Default for LemmaRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Evaluates lemma `id` at `(k1, k2, n, t)` against the built-in registry.
pub fn check_inequality_lemma(id: &str, k1: i64, k2: i64, n: i64, t: i64) -> Result<LemmaVerdict> {
    let reg = LemmaRegistry::builtin();
    Ok(reg.get(id)?.check(&CrossPoint::new(k1, k2, n, t)))
}
