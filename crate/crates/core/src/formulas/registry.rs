//! Named access to the counting functions, for the command line and sweeps.

use std::collections::BTreeMap;
use std::fmt;

use super::{
    bound_family_size, f2, f_prime, format_rat, g, g_tilde, g_w, h1, h2, ExactInt, ExactRat,
};
use crate::error::{param, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaValue {
    Int(ExactInt),
    Rat(ExactRat),
}

impl fmt::Display for FormulaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaValue::Int(v) => write!(f, "{v}"),
            FormulaValue::Rat(v) => f.write_str(&format_rat(v)),
        }
    }
}

pub trait Formula: Send + Sync {
    fn name(&self) -> &str;

    /// Argument names, in the order `eval` expects them.
    fn params(&self) -> &[&'static str];

    fn eval(&self, args: &[i64]) -> Result<FormulaValue>;
}

type Eval = Box<dyn Fn(&[i64]) -> Result<FormulaValue> + Send + Sync>;

struct Closed {
    name: String,
    params: &'static [&'static str],
    eval: Eval,
}

impl Formula for Closed {
    fn name(&self) -> &str {
        &self.name
    }

    fn params(&self) -> &[&'static str] {
        self.params
    }

    fn eval(&self, args: &[i64]) -> Result<FormulaValue> {
        (self.eval)(args)
    }
}

const KLNT: &[&str] = &["k", "l", "n", "t"];

pub struct FormulaRegistry {
    formulas: Vec<Box<dyn Formula>>,
}

impl FormulaRegistry {
    pub fn new() -> Self {
        Self {
            formulas: Vec::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::new();
        let mut add = |name: &str, params: &'static [&'static str], eval: Eval| {
            reg.register(Box::new(Closed {
                name: name.to_string(),
                params,
                eval,
            }))
        };
        add(
            "h1",
            &["d", "k", "c", "n"],
            Box::new(|a| h1(a[0], a[1], a[2], a[3]).map(FormulaValue::Int)),
        );
        add(
            "h2",
            &["z", "k", "n"],
            Box::new(|a| h2(a[0], a[1], a[2]).map(FormulaValue::Int)),
        );
        for i in 1..=6u8 {
            add(
                &format!("g{i}"),
                KLNT,
                Box::new(move |a| g(i, a[0], a[1], a[2], a[3]).map(FormulaValue::Int)),
            );
            add(
                &format!("gt{i}"),
                KLNT,
                Box::new(move |a| g_tilde(i, a[0], a[1], a[2], a[3]).map(FormulaValue::Rat)),
            );
        }
        add(
            "fprime",
            &["n", "k", "l", "m", "t"],
            Box::new(|a| Ok(FormulaValue::Int(f_prime(a[0], a[1], a[2], a[3], a[4])))),
        );
        add(
            "f2",
            &["m", "k", "l", "n", "t"],
            Box::new(|a| Ok(FormulaValue::Rat(f2(a[0], a[1], a[2], a[3], a[4])))),
        );
        add(
            "gw",
            &["w", "n", "k", "l", "s", "t"],
            Box::new(|a| Ok(FormulaValue::Int(g_w(a[0], a[1], a[2], a[3], a[4], a[5])))),
        );
        add(
            "bound",
            &["mf", "mg", "n", "k", "l", "t"],
            Box::new(|a| {
                bound_family_size(a[0], a[1], a[2], a[3], a[4], a[5]).map(FormulaValue::Int)
            }),
        );
        reg
    }

    pub fn register(&mut self, f: Box<dyn Formula>) {
        self.formulas.retain(|g| g.name() != f.name());
        self.formulas.push(f);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Formula> {
        self.formulas
            .iter()
            .find(|f| f.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "formula",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.formulas.iter().map(|f| f.name())
    }

    /// Evaluates `name` with arguments looked up by parameter name.
    pub fn evaluate(&self, name: &str, args: &BTreeMap<String, i64>) -> Result<FormulaValue> {
        let f = self.get(name)?;
        let mut v = Vec::with_capacity(f.params().len());
        for p in f.params() {
            match args.get(*p) {
                Some(x) => v.push(*x),
                None => return param(format!("{name} needs argument `{p}`")),
            }
        }
        f.eval(&v)
    }
}

impl Default for FormulaRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn evaluate_by_name() {
        let reg = FormulaRegistry::builtin();
        let v = reg
            .evaluate("h1", &args(&[("d", 1), ("k", 2), ("c", 3), ("n", 6)]))
            .unwrap();
        assert_eq!(v.to_string(), "3");
        let v = reg
            .evaluate("g1", &args(&[("k", 2), ("l", 2), ("n", 5), ("t", 1)]))
            .unwrap();
        assert_eq!(v.to_string(), "10");
        let v = reg
            .evaluate("f2", &args(&[("m", 2), ("k", 3), ("l", 3), ("n", 9), ("t", 2)]))
            .unwrap();
        assert_eq!(v.to_string(), "28/9");
    }

    #[test]
    fn missing_argument_and_unknown_name() {
        let reg = FormulaRegistry::builtin();
        assert!(reg.evaluate("h2", &args(&[("z", 3)])).is_err());
        assert!(matches!(reg.get("h9"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn all_names_present() {
        let reg = FormulaRegistry::builtin();
        let names: Vec<_> = reg.names().collect();
        assert_eq!(names.len(), 2 + 12 + 4);
        for n in ["gt6", "fprime", "gw", "bound"] {
            assert!(names.contains(&n));
        }
    }
}
