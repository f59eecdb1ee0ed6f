//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-'|'+') factor | base ('^' factor)?
//! base   := number | ident | ident '(' args ')' | '(' expr ')'
//! ```
//!
//! Jet suffixes follow an underscore (`u_s`, `rho_ts`). Function partials use
//! primes for one-argument functions (`S''`) and underscore slot names
//! otherwise (`sigma_rho_p`, or 1-based indices such as `f1_4`).

use super::poly::{Sym, Q};
use super::{Atom, Expr, ExprError, FuncSym, JetVar, Result};
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};

/// Symbol tables for parsing.
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub constants: BTreeSet<Sym>,
    pub dependents: BTreeSet<Sym>,
    /// Declared functions with their default argument lists.
    pub functions: BTreeMap<Sym, Vec<Expr>>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constants(mut self, names: &[&str]) -> Self {
        for n in names {
            self.constants.insert(Sym::from(*n));
        }
        self
    }

    pub fn dependents(mut self, names: &[&str]) -> Self {
        for n in names {
            self.dependents.insert(Sym::from(*n));
        }
        self
    }

    /// Declare `name(args...)`; the argument texts are parsed in `self`.
    pub fn function(mut self, name: &str, args: &[&str]) -> Self {
        let parsed: Vec<Expr> = args
            .iter()
            .map(|a| self.parse(a).unwrap_or_else(|e| panic!("bad default argument `{}` for {}: {}", a, name, e)))
            .collect();
        self.functions.insert(Sym::from(name), parsed);
        self
    }

    pub fn function_exprs(mut self, name: &str, args: Vec<Expr>) -> Self {
        self.functions.insert(Sym::from(name), args);
        self
    }

    pub fn without_function(mut self, name: &str) -> Self {
        self.functions.remove(name);
        self
    }

    pub fn without_constant(mut self, name: &str) -> Self {
        self.constants.remove(name);
        self
    }

    pub fn merge(mut self, other: &Context) -> Self {
        self.constants.extend(other.constants.iter().cloned());
        self.dependents.extend(other.dependents.iter().cloned());
        for (k, v) in &other.functions {
            self.functions.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        parse_expression(text, self)
    }

    /// Parse corpus text that is known to be well-formed.
    pub fn p(&self, text: &str) -> Expr {
        self.parse(text).unwrap_or_else(|e| panic!("corpus expression `{}`: {}", text, e))
    }

    /// Default application of a declared function.
    pub fn func(&self, name: &str) -> Option<Expr> {
        let args = self.functions.get(name)?;
        Some(Expr::func(name, args.clone()))
    }
}

pub fn parse_expression(text: &str, ctx: &Context) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, ctx, len: text.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ExprError::Syntax { pos: p.toks[p.pos].1, msg: "unexpected trailing input".into() });
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|x| x.1.is_ascii_digit())) {
            let mut int_part = String::new();
            let mut frac_part = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                int_part.push(chars[i].1);
                i += 1;
            }
            if i < chars.len() && chars[i].1 == '.' {
                i += 1;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    frac_part.push(chars[i].1);
                    i += 1;
                }
            }
            let digits = format!("{}{}", int_part, frac_part);
            let n: BigInt = digits.parse().map_err(|_| ExprError::Syntax { pos, msg: "bad number".into() })?;
            let d = BigInt::from(10u32).pow(frac_part.len() as u32);
            out.push((Tok::Num(Q::new(n, d)), pos));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                s.push(chars[i].1);
                i += 1;
            }
            while i < chars.len() && chars[i].1 == '\'' {
                s.push('\'');
                i += 1;
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        if "+-*/^(),".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
            continue;
        }
        return Err(ExprError::Syntax { pos, msg: format!("unexpected character `{}`", c) });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a Context,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.len)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ExprError::Syntax { pos: self.here(), msg: format!("expected `{}`", c) })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                let at = self.here();
                let d = self.factor()?;
                acc = acc.div(&d).map_err(|e| match e {
                    ExprError::DivisionByZero => ExprError::Syntax { pos: at, msg: "division by zero".into() },
                    other => other,
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        if self.eat('+') {
            return self.factor();
        }
        let b = self.base()?;
        if self.eat('^') {
            let at = self.here();
            let e = self.factor()?;
            let k = e.as_coeff().ok_or_else(|| ExprError::ExponentOutsideFragment(e.to_string()))?;
            return b.pow(&k).map_err(|err| match err {
                ExprError::DivisionByZero => ExprError::Syntax { pos: at, msg: "zero to a negative power".into() },
                other => other,
            });
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::from_q(n))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = Vec::new();
                    if !self.eat(')') {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(')') {
                                break;
                            }
                            self.expect(',')?;
                        }
                    }
                    self.call(&name, args, at)
                } else {
                    self.ident(&name)
                }
            }
            Some(Tok::Op(c)) => Err(ExprError::Syntax { pos: at, msg: format!("unexpected `{}`", c) }),
            None => Err(ExprError::Syntax { pos: at, msg: "unexpected end of input".into() }),
        }
    }

    fn call(&mut self, name: &str, args: Vec<Expr>, at: usize) -> Result<Expr> {
        if name == "exp" || name == "log" {
            if args.len() != 1 {
                return Err(ExprError::Syntax { pos: at, msg: format!("{} takes one argument", name) });
            }
            return if name == "exp" { Ok(args[0].exp()) } else { args[0].log() };
        }
        let (base, primes, suffix) = split_ident(name);
        let declared = self.ctx.functions.get(base).ok_or_else(|| ExprError::Undeclared(base.to_string()))?;
        if declared.len() != args.len() {
            return Err(ExprError::Syntax {
                pos: at,
                msg: format!("{} expects {} arguments, got {}", base, declared.len(), args.len()),
            });
        }
        let derivs = func_derivs(name, &args, primes, suffix)?;
        Ok(Expr::atom(Atom::Func(FuncSym { name: Sym::from(base), args, derivs })))
    }

    fn ident(&mut self, name: &str) -> Result<Expr> {
        let (base, primes, suffix) = split_ident(name);
        if name == "t" {
            return Ok(Expr::t());
        }
        if name == "s" {
            return Ok(Expr::s());
        }
        if self.ctx.dependents.contains(base) {
            if primes > 0 {
                return Err(ExprError::MalformedSuffix(name.to_string()));
            }
            let (ot, os) = match suffix {
                None => (0, 0),
                Some(sfx) => jet_orders(sfx).ok_or_else(|| ExprError::MalformedSuffix(name.to_string()))?,
            };
            return Ok(Expr::atom(Atom::Jet(JetVar { dep: Sym::from(base), ot, os })));
        }
        if self.ctx.constants.contains(base) {
            if primes > 0 || suffix.is_some() {
                return Err(ExprError::MalformedSuffix(name.to_string()));
            }
            return Ok(Expr::constant(base));
        }
        if let Some(args) = self.ctx.functions.get(base) {
            let derivs = func_derivs(name, args, primes, suffix)?;
            return Ok(Expr::atom(Atom::Func(FuncSym { name: Sym::from(base), args: args.clone(), derivs })));
        }
        if matches!(base, "t" | "s") {
            return Err(ExprError::MalformedSuffix(name.to_string()));
        }
        Err(ExprError::Undeclared(base.to_string()))
    }
}

fn split_ident(name: &str) -> (&str, usize, Option<&str>) {
    let trimmed = name.trim_end_matches('\'');
    let primes = name.len() - trimmed.len();
    match trimmed.find('_') {
        Some(i) => (&trimmed[..i], primes, Some(&trimmed[i + 1..])),
        None => (trimmed, primes, None),
    }
}

fn jet_orders(sfx: &str) -> Option<(u32, u32)> {
    if sfx.is_empty() {
        return None;
    }
    let mut ot = 0;
    let mut os = 0;
    for c in sfx.chars() {
        match c {
            't' => ot += 1,
            's' => os += 1,
            _ => return None,
        }
    }
    Some((ot, os))
}

fn func_derivs(name: &str, args: &[Expr], primes: usize, suffix: Option<&str>) -> Result<Vec<u32>> {
    let mut derivs = vec![0u32; args.len()];
    if primes > 0 {
        if args.len() != 1 || suffix.is_some() {
            return Err(ExprError::MalformedSuffix(name.to_string()));
        }
        derivs[0] = primes as u32;
    }
    if let Some(sfx) = suffix {
        for slot in sfx.split('_') {
            if slot.is_empty() {
                return Err(ExprError::MalformedSuffix(name.to_string()));
            }
            let idx = if let Ok(k) = slot.parse::<usize>() {
                if k == 0 || k > args.len() {
                    return Err(ExprError::MalformedSuffix(name.to_string()));
                }
                k - 1
            } else {
                args.iter()
                    .position(|a| arg_ident(a).as_deref() == Some(slot))
                    .ok_or_else(|| ExprError::MalformedSuffix(name.to_string()))?
            };
            derivs[idx] += 1;
        }
    }
    Ok(derivs)
}

fn arg_ident(e: &Expr) -> Option<String> {
    match e.as_atom()? {
        Atom::T => Some("t".into()),
        Atom::S => Some("s".into()),
        Atom::Jet(j) if j.ot == 0 && j.os == 0 => Some(j.dep.to_string()),
        _ => None,
    }
}
