//! Flattened floating-point form of symbolic expressions used in per-cell
//! loops (conductivity models, initial profiles).

use crate::{Result, SimError};
use lagsym::expr::{Atom, Context, Expr};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
enum Leaf {
    S,
    Var(usize),
    Exp(Box<Compiled>),
    Log(Box<Compiled>),
    Pow(Box<Compiled>),
    Sin(Box<Compiled>),
    Cos(Box<Compiled>),
}

#[derive(Debug, Clone)]
struct Term {
    coeff: f64,
    factors: Vec<(Leaf, f64)>,
}

/// Expression in `s` and a fixed list of named variables.
#[derive(Debug, Clone)]
pub struct Compiled {
    terms: Vec<Term>,
}

/// Parsing context for numeric input: `rho`, `p` as variables, `sin`/`cos`
/// as one-argument functions and `pi` as a constant.
pub fn numeric_context() -> Context {
    lagsym::corpus::corpus_context().constants(&["pi"]).function("sin", &["s"]).function("cos", &["s"])
}

impl Compiled {
    pub fn parse(text: &str, vars: &[&str], consts: &BTreeMap<String, f64>) -> Result<Compiled> {
        let e = numeric_context().parse(text).map_err(|e| SimError::Expr(text.to_string(), e.to_string()))?;
        Compiled::new(&e, vars, consts).map_err(|msg| SimError::Expr(text.to_string(), msg))
    }

    pub fn constant(v: f64) -> Compiled {
        Compiled { terms: vec![Term { coeff: v, factors: Vec::new() }] }
    }

    pub fn new(e: &Expr, vars: &[&str], consts: &BTreeMap<String, f64>) -> std::result::Result<Compiled, String> {
        let mut c = consts.clone();
        c.entry("pi".into()).or_insert(std::f64::consts::PI);
        Self::build(e, vars, &c)
    }

    fn build(e: &Expr, vars: &[&str], consts: &BTreeMap<String, f64>) -> std::result::Result<Compiled, String> {
        let cval = |n: &str| consts.get(n).copied();
        let num = |c: &lagsym::expr::Coeff| c.eval_f64(&cval).ok_or_else(|| format!("unresolved constant in `{}`", Expr::from_coeff(c.clone())));
        let sub = |x: &Expr| Self::build(x, vars, consts).map(Box::new);
        let mut terms = Vec::new();
        for (m, c) in e.terms() {
            let mut factors = Vec::new();
            for (a, k) in &m.0 {
                let leaf = match a {
                    Atom::S => Leaf::S,
                    Atom::Jet(j) if j.order() == 0 => {
                        let i = vars.iter().position(|v| **v == *j.dep).ok_or_else(|| format!("`{}` is not allowed here", j.dep))?;
                        Leaf::Var(i)
                    }
                    Atom::Exp(mm) => Leaf::Exp(sub(&Expr::from_mono(mm.clone()))?),
                    Atom::Log(x) => Leaf::Log(sub(x)?),
                    Atom::Pow(x) => Leaf::Pow(sub(x)?),
                    Atom::Func(f) if f.args.len() == 1 && f.derivs.iter().all(|d| *d == 0) && (&*f.name == "sin" || &*f.name == "cos") => {
                        let arg = sub(&f.args[0])?;
                        if &*f.name == "sin" {
                            Leaf::Sin(arg)
                        } else {
                            Leaf::Cos(arg)
                        }
                    }
                    other => return Err(format!("`{}` cannot be evaluated numerically", Expr::atom(other.clone()))),
                };
                factors.push((leaf, num(k)?));
            }
            terms.push(Term { coeff: num(c)?, factors });
        }
        Ok(Compiled { terms })
    }

    pub fn eval(&self, s: f64, vars: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.factors.iter().fold(t.coeff, |acc, (leaf, k)| {
                    let base = match leaf {
                        Leaf::S => s,
                        Leaf::Var(i) => vars[*i],
                        Leaf::Exp(x) => x.eval(s, vars).exp(),
                        Leaf::Log(x) => x.eval(s, vars).ln(),
                        Leaf::Pow(x) => x.eval(s, vars),
                        Leaf::Sin(x) => x.eval(s, vars).sin(),
                        Leaf::Cos(x) => x.eval(s, vars).cos(),
                    };
                    acc * if *k == 1.0 { base } else if k.fract() == 0.0 && k.abs() < 64.0 { base.powi(*k as i32) } else { base.powf(*k) }
                })
            })
            .sum()
    }

    /// Whether the expression involves any of the variables.
    pub fn is_constant_in_vars(&self) -> bool {
        fn leaf_ok(l: &Leaf) -> bool {
            match l {
                Leaf::S => true,
                Leaf::Var(_) => false,
                Leaf::Exp(x) | Leaf::Log(x) | Leaf::Pow(x) | Leaf::Sin(x) | Leaf::Cos(x) => x.is_constant_in_vars(),
            }
        }
        self.terms.iter().all(|t| t.factors.iter().all(|(l, _)| leaf_ok(l)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> BTreeMap<String, f64> {
        [("gamma".to_string(), 1.4)].into_iter().collect()
    }

    #[test]
    fn evaluates_profiles() {
        let c = Compiled::parse("1 + 0.1*sin(2*pi*s)", &[], &consts()).unwrap();
        assert!((c.eval(0.25, &[]) - 1.1).abs() < 1e-14);
        let sig = Compiled::parse("rho^gamma*exp(p) + 2", &["rho", "p"], &consts()).unwrap();
        let want = 2f64.powf(1.4) * 0.5f64.exp() + 2.0;
        assert!((sig.eval(0.0, &[2.0, 0.5]) - want).abs() < 1e-12);
        assert!(!sig.is_constant_in_vars());
    }

    #[test]
    fn rejects_unknown_symbols() {
        assert!(Compiled::parse("u + 1", &["rho", "p"], &consts()).is_err());
        assert!(Compiled::parse("rho*q", &["rho"], &consts()).is_err());
    }
}
