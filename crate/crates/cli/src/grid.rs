//! Parameter grids such as `t=1..3,k2=t+1..8,k1=k2..10,n=thr..thr+50`.
//!
//! Axes are comma separated and nest left to right, so later bounds may use
//! earlier names. A bound is a sum of terms; a term is a product of integers
//! and names. `a|b|c` lists explicit values. `thr` is the cross-product
//! threshold, available once `k1`, `k2` and `t` are bound.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, ensure, Result};
use ixlab_core::formulas::theorem_cross_threshold;

/// Largest number of points a grid may expand to.
pub const MAX_POINTS: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Factor {
    Int(i64),
    Name(String),
}

/// Sum of signed products.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Expr(Vec<(i64, Vec<Factor>)>);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Values {
    Range(Expr, Expr),
    List(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Axis {
    name: String,
    values: Values,
}

/// One grid point, keyed by parameter name.
pub type Point = BTreeMap<String, i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    text: String,
    axes: Vec<Axis>,
}

fn parse_expr(s: &str) -> Result<Expr> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    ensure!(!s.is_empty(), "empty bound");
    let mut terms = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    let flush = |cur: &mut String, sign: i64, terms: &mut Vec<(i64, Vec<Factor>)>| -> Result<()> {
        ensure!(!cur.is_empty(), "dangling operator");
        let factors = cur
            .split('*')
            .map(|f| {
                if let Ok(v) = f.parse::<i64>() {
                    Ok(Factor::Int(v))
                } else if !f.is_empty() && f.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    Ok(Factor::Name(f.to_string()))
                } else {
                    Err(anyhow!("bad factor {f:?}"))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        terms.push((sign, factors));
        cur.clear();
        Ok(())
    };
    for (i, c) in s.chars().enumerate() {
        match c {
            '+' | '-' if i == 0 => sign = if c == '-' { -1 } else { 1 },
            '+' | '-' => {
                flush(&mut cur, sign, &mut terms)?;
                sign = if c == '-' { -1 } else { 1 };
            }
            _ => cur.push(c),
        }
    }
    flush(&mut cur, sign, &mut terms)?;
    Ok(Expr(terms))
}

impl Expr {
    fn eval(&self, env: &Point) -> Result<i64> {
        let mut total = 0i64;
        for (sign, factors) in &self.0 {
            let mut p = *sign;
            for f in factors {
                let v = match f {
                    Factor::Int(v) => *v,
                    Factor::Name(n) => lookup(env, n)?,
                };
                p = p.checked_mul(v).ok_or_else(|| anyhow!("bound overflows"))?;
            }
            total = total.checked_add(p).ok_or_else(|| anyhow!("bound overflows"))?;
        }
        Ok(total)
    }
}

fn lookup(env: &Point, name: &str) -> Result<i64> {
    if let Some(v) = env.get(name) {
        return Ok(*v);
    }
    if name == "thr" {
        if let (Some(k1), Some(k2), Some(t)) = (env.get("k1"), env.get("k2"), env.get("t")) {
            return Ok(theorem_cross_threshold(*k1, *k2, *t));
        }
        bail!("thr needs k1, k2 and t bound first");
    }
    bail!("unknown name {name:?} (names must be bound by an earlier axis)")
}

impl Grid {
    /// Parses a grid. The empty string is the empty grid.
    pub fn parse(text: &str) -> Result<Grid> {
        let mut axes = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, rhs) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("axis {part:?} is not name=values"))?;
            let name = name.trim().to_string();
            ensure!(
                !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
                "bad axis name {name:?}"
            );
            ensure!(name != "thr", "thr is reserved");
            ensure!(axes.iter().all(|a: &Axis| a.name != name), "axis {name} given twice");
            let values = if let Some((lo, hi)) = rhs.split_once("..") {
                Values::Range(parse_expr(lo)?, parse_expr(hi)?)
            } else {
                Values::List(rhs.split('|').map(parse_expr).collect::<Result<_>>()?)
            };
            axes.push(Axis { name, values });
        }
        Ok(Grid {
            text: text.trim().to_string(),
            axes,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.axes.iter().map(|a| a.name.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    /// Expands the grid in nesting order.
    pub fn points(&self) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        if !self.axes.is_empty() {
            self.expand(0, &mut Point::new(), &mut out)?;
        }
        Ok(out)
    }

    fn expand(&self, depth: usize, env: &mut Point, out: &mut Vec<Point>) -> Result<()> {
        let Some(axis) = self.axes.get(depth) else {
            ensure!(out.len() < MAX_POINTS, "grid exceeds {MAX_POINTS} points");
            out.push(env.clone());
            return Ok(());
        };
        let values: Vec<i64> = match &axis.values {
            Values::Range(lo, hi) => (lo.eval(env)?..=hi.eval(env)?).collect(),
            Values::List(items) => items.iter().map(|e| e.eval(env)).collect::<Result<_>>()?,
        };
        for v in values {
            env.insert(axis.name.clone(), v);
            self.expand(depth + 1, env, out)?;
        }
        env.remove(&axis.name);
        Ok(())
    }
}
