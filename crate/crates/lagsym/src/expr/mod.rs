//! Canonical symbolic expressions over jet variables, function symbols and
//! symbolic constants.
//!
//! An [`Expr`] is always stored in normal form: a sum of monomials with
//! coefficients in Q(constants), each monomial a sorted product of atoms raised
//! to exponents that are themselves constant-only coefficients. Equality of
//! normal forms is equality of expressions, which is what the verification
//! layers lean on.

mod parse;
pub mod poly;
mod render;

pub use parse::{parse_expression, Context};
pub use poly::{q, qf, CPoly, Coeff, Sym, Q};

use num_traits::One;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared identifier `{0}`")]
    Undeclared(String),
    #[error("malformed derivative suffix in `{0}`")]
    MalformedSuffix(String),
    #[error("exponent `{0}` is not a constant-only expression")]
    ExponentOutsideFragment(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot bind `{0}`: {1}")]
    BadBinding(String, String),
}

pub type Result<T> = std::result::Result<T, ExprError>;

/// A dependent variable with its derivative multi-index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetVar {
    pub dep: Sym,
    pub ot: u32,
    pub os: u32,
}

impl JetVar {
    pub fn new(dep: &str, ot: u32, os: u32) -> Self {
        JetVar { dep: Sym::from(dep), ot, os }
    }

    pub fn order(&self) -> u32 {
        self.ot + self.os
    }

    pub fn bump_t(&self) -> JetVar {
        JetVar { dep: self.dep.clone(), ot: self.ot + 1, os: self.os }
    }

    pub fn bump_s(&self) -> JetVar {
        JetVar { dep: self.dep.clone(), ot: self.ot, os: self.os + 1 }
    }

    pub fn base(&self) -> JetVar {
        JetVar { dep: self.dep.clone(), ot: 0, os: 0 }
    }
}

/// Application of an arbitrary function, possibly differentiated in its slots.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FuncSym {
    pub name: Sym,
    pub args: Vec<Expr>,
    pub derivs: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    T,
    S,
    Jet(JetVar),
    Func(FuncSym),
    /// `exp(m)` for a unit-coefficient monomial `m`; scalar multiples of `m`
    /// live in the exponent.
    Exp(Mono),
    Log(Box<Expr>),
    /// Opaque base for powers that cannot be expanded (sums raised to
    /// negative or symbolic exponents).
    Pow(Box<Expr>),
}

impl Atom {
    pub fn jet(dep: &str, ot: u32, os: u32) -> Atom {
        Atom::Jet(JetVar::new(dep, ot, os))
    }

    pub fn as_jet(&self) -> Option<&JetVar> {
        match self {
            Atom::Jet(j) => Some(j),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(pub BTreeMap<Atom, Coeff>);

impl Mono {
    pub fn one() -> Mono {
        Mono(BTreeMap::new())
    }

    pub fn atom(a: Atom) -> Mono {
        let mut m = BTreeMap::new();
        m.insert(a, Coeff::one());
        Mono(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (big, small) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut r = big.0.clone();
        for (a, e) in &small.0 {
            match r.get_mut(a) {
                Some(x) => {
                    *x = x.add(e);
                    if x.is_zero() {
                        r.remove(a);
                    }
                }
                None => {
                    r.insert(a.clone(), e.clone());
                }
            }
        }
        Mono(r)
    }

    pub fn with_exponent(&self, a: &Atom, e: Coeff) -> Mono {
        let mut r = self.0.clone();
        if e.is_zero() {
            r.remove(a);
        } else {
            r.insert(a.clone(), e);
        }
        Mono(r)
    }

    fn scale_exponents(&self, k: &Coeff) -> Mono {
        Mono(self.0.iter().map(|(a, e)| (a.clone(), e.mul(k))).filter(|(_, e)| !e.is_zero()).collect())
    }
}

/// Canonical expression: map from monomial to nonzero coefficient.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Expr {
    terms: BTreeMap<Mono, Coeff>,
}

/// What a partial derivative is taken with respect to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Wrt {
    Atom(Atom),
    Const(Sym),
}

impl Wrt {
    pub fn jet(dep: &str, ot: u32, os: u32) -> Wrt {
        Wrt::Atom(Atom::jet(dep, ot, os))
    }
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        Expr::from_coeff(Coeff::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_coeff(Coeff::from_int(n))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::from_coeff(Coeff::from_q(qf(n, d)))
    }

    pub fn from_q(c: Q) -> Expr {
        Expr::from_coeff(Coeff::from_q(c))
    }

    pub fn from_coeff(c: Coeff) -> Expr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        Expr { terms }
    }

    pub fn constant(name: &str) -> Expr {
        Expr::from_coeff(Coeff::sym(&Sym::from(name)))
    }

    pub fn atom(a: Atom) -> Expr {
        Expr::term(Coeff::one(), Mono::atom(a))
    }

    pub fn t() -> Expr {
        Expr::atom(Atom::T)
    }

    pub fn s() -> Expr {
        Expr::atom(Atom::S)
    }

    pub fn jet(dep: &str, ot: u32, os: u32) -> Expr {
        Expr::atom(Atom::jet(dep, ot, os))
    }

    pub fn var(dep: &str) -> Expr {
        Expr::jet(dep, 0, 0)
    }

    pub fn func(name: &str, args: Vec<Expr>) -> Expr {
        let n = args.len();
        Expr::atom(Atom::Func(FuncSym { name: Sym::from(name), args, derivs: vec![0; n] }))
    }

    pub fn func_deriv(name: &str, args: Vec<Expr>, derivs: Vec<u32>) -> Expr {
        assert_eq!(args.len(), derivs.len());
        Expr::atom(Atom::Func(FuncSym { name: Sym::from(name), args, derivs }))
    }

    pub fn from_mono(m: Mono) -> Expr {
        Expr::term(Coeff::one(), m)
    }

    /// Single term `c * m`, expanding opaque powers whose exponent became a
    /// nonnegative integer.
    pub fn term(c: Coeff, m: Mono) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        let expand: Vec<(Atom, Coeff)> = m
            .0
            .iter()
            .filter(|(a, e)| matches!(a, Atom::Pow(_)) && e.as_small_int().is_some_and(|n| n > 0))
            .map(|(a, e)| (a.clone(), e.clone()))
            .collect();
        if expand.is_empty() {
            let mut terms = BTreeMap::new();
            terms.insert(m, c);
            return Expr { terms };
        }
        let mut rest = m.clone();
        let mut out = Expr::from_coeff(c);
        for (a, e) in expand {
            rest.0.remove(&a);
            if let Atom::Pow(b) = a {
                let n = e.as_small_int().unwrap_or(0);
                out = out.mul(&b.pow_u(n as u32));
            }
        }
        out.mul(&Expr::term(Coeff::one(), rest))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this expression has no atoms.
    pub fn as_coeff(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_q(&self) -> Option<Q> {
        self.as_coeff()?.as_q()
    }

    /// `Some((c, m))` when the expression is a single term.
    pub fn as_single_term(&self) -> Option<(&Mono, &Coeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        let (m, c) = self.as_single_term()?;
        if !c.is_one() || m.0.len() != 1 {
            return None;
        }
        let (a, e) = m.0.iter().next()?;
        if e.is_one() {
            Some(a)
        } else {
            None
        }
    }

    fn add_term_mut(&mut self, m: Mono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Expr) -> Expr {
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut r = big.clone();
        for (m, c) in &small.terms {
            r.add_term_mut(m.clone(), c.clone());
        }
        r
    }

    pub fn add_assign(&mut self, o: &Expr) {
        for (m, c) in &o.terms {
            self.add_term_mut(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Expr {
        Expr { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term_mut(m.clone(), c.neg());
        }
        r
    }

    pub fn scale(&self, k: &Coeff) -> Expr {
        if k.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Expr {
        self.scale(&Coeff::from_int(n))
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        if self.is_zero() || o.is_zero() {
            return Expr::zero();
        }
        if let Some(k) = o.as_coeff() {
            return self.scale(&k);
        }
        if let Some(k) = self.as_coeff() {
            return o.scale(&k);
        }
        let mut r = Expr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1.mul(c2);
                if m.0.keys().any(|a| matches!(a, Atom::Pow(_))) {
                    r.add_assign(&Expr::term(c, m));
                } else {
                    r.add_term_mut(m, c);
                }
            }
        }
        r
    }

    pub fn pow_u(&self, n: u32) -> Expr {
        let mut result = Expr::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `self^e` for a constant-only exponent.
    pub fn pow(&self, e: &Coeff) -> Result<Expr> {
        if e.is_zero() {
            return Ok(Expr::one());
        }
        if let Some(n) = e.as_small_int() {
            if n > 0 {
                return Ok(self.pow_u(n as u32));
            }
        }
        if self.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if let Some((m, c)) = self.as_single_term() {
            if let Some(n) = e.as_small_int() {
                let ck = c.pow_int(n).ok_or(ExprError::DivisionByZero)?;
                return Ok(Expr::term(ck, m.scale_exponents(e)));
            }
            if c.is_one() {
                return Ok(Expr::term(Coeff::one(), m.scale_exponents(e)));
            }
            if let Some(cm) = self.as_coeff() {
                // constant base under a symbolic power: keep it opaque
                return Ok(Expr::term(Coeff::one(), Mono(BTreeMap::from([(
                    Atom::Pow(Box::new(Expr::from_coeff(cm))),
                    e.clone(),
                )]))));
            }
        }
        if e.as_small_int().is_some() {
            // pull out the first coefficient so the opaque base is normalized
            let lead = self.terms.values().next().cloned().expect("nonzero");
            let inv = lead.inv().ok_or(ExprError::DivisionByZero)?;
            let base = self.scale(&inv);
            let n = e.as_small_int().unwrap_or(0);
            let ck = lead.pow_int(n).ok_or(ExprError::DivisionByZero)?;
            return Ok(Expr::term(ck, Mono(BTreeMap::from([(Atom::Pow(Box::new(base)), e.clone())]))));
        }
        Ok(Expr::term(Coeff::one(), Mono(BTreeMap::from([(Atom::Pow(Box::new(self.clone())), e.clone())]))))
    }

    pub fn powi(&self, n: i64) -> Result<Expr> {
        self.pow(&Coeff::from_int(n))
    }

    pub fn inv(&self) -> Result<Expr> {
        self.powi(-1)
    }

    pub fn div(&self, o: &Expr) -> Result<Expr> {
        if let Some(k) = o.as_coeff() {
            let ki = k.inv().ok_or(ExprError::DivisionByZero)?;
            return Ok(self.scale(&ki));
        }
        Ok(self.mul(&o.inv()?))
    }

    /// `exp(self)`, split over the terms of the argument.
    pub fn exp(&self) -> Expr {
        let mut m = Mono::one();
        for (mono, c) in &self.terms {
            m = m.mul(&Mono(BTreeMap::from([(Atom::Exp(mono.clone()), c.clone())])));
        }
        Expr::term(Coeff::one(), m)
    }

    pub fn log(&self) -> Result<Expr> {
        if self.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if let Some((m, c)) = self.as_single_term() {
            if c.is_one() && m.0.len() == 1 {
                if let Some((Atom::Exp(inner), k)) = m.0.iter().next() {
                    return Ok(Expr::from_mono(inner.clone()).scale(k));
                }
            }
        }
        if self.as_coeff().is_some_and(|c| c.is_one()) {
            return Ok(Expr::zero());
        }
        Ok(Expr::atom(Atom::Log(Box::new(self.clone()))))
    }

    /// Every atom occurring anywhere, including inside function arguments.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        for m in self.terms.keys() {
            collect_mono_atoms(m, out);
        }
    }

    pub fn jets(&self) -> BTreeSet<JetVar> {
        self.atoms().into_iter().filter_map(|a| if let Atom::Jet(j) = a { Some(j) } else { None }).collect()
    }

    /// Constant symbols used in coefficients and exponents.
    pub fn constants(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<Sym>) {
        for (m, c) in &self.terms {
            out.extend(c.vars());
            for (a, e) in &m.0 {
                out.extend(e.vars());
                match a {
                    Atom::Func(f) => f.args.iter().for_each(|x| x.collect_constants(out)),
                    Atom::Exp(mm) => Expr::from_mono(mm.clone()).collect_constants(out),
                    Atom::Log(x) | Atom::Pow(x) => x.collect_constants(out),
                    _ => {}
                }
            }
        }
    }

    pub fn depends_on_atom(&self, pred: &dyn Fn(&Atom) -> bool) -> bool {
        self.atoms().iter().any(pred)
    }

    /// Apply a derivation. `leaf` supplies the derivative of base atoms
    /// (t, s, jets, and any atom it wants to treat as a leaf); function
    /// symbols, exponentials, logs and opaque powers go through the chain
    /// rule. `wrt_const` additionally differentiates coefficients and
    /// exponents in that constant.
    pub fn derive_with(&self, leaf: &dyn Fn(&Atom) -> Option<Expr>, wrt_const: Option<&str>) -> Expr {
        let d = Deriver { leaf, wrt_const, cache: RefCell::new(HashMap::new()) };
        d.expr(self)
    }

    pub fn partial(&self, wrt: &Wrt) -> Expr {
        match wrt {
            Wrt::Atom(x) => {
                let x = x.clone();
                self.derive_with(&move |a| if *a == x { Some(Expr::one()) } else { leaf_zero(a) }, None)
            }
            Wrt::Const(c) => self.derive_with(&leaf_zero, Some(c)),
        }
    }

    pub fn d_jet(&self, j: &JetVar) -> Expr {
        self.partial(&Wrt::Atom(Atom::Jet(j.clone())))
    }

    /// Simultaneous substitution followed by canonicalization.
    pub fn substitute(&self, b: &Bindings) -> Result<Expr> {
        if b.is_empty() {
            return Ok(self.clone());
        }
        let mut cache = HashMap::new();
        self.subst_inner(b, &mut cache)
    }

    fn subst_inner(&self, b: &Bindings, cache: &mut HashMap<Atom, Expr>) -> Result<Expr> {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut t = b.subst_coeff(c)?;
            for (a, e) in &m.0 {
                let base = match cache.get(a) {
                    Some(v) => v.clone(),
                    None => {
                        let v = b.subst_atom(a, cache)?;
                        cache.insert(a.clone(), v.clone());
                        v
                    }
                };
                let ee = b.subst_coeff(e)?;
                let ek = ee.as_coeff().ok_or_else(|| ExprError::ExponentOutsideFragment(ee.to_string()))?;
                t = t.mul(&base.pow(&ek)?);
                if t.is_zero() {
                    break;
                }
            }
            out.add_assign(&t);
        }
        Ok(out)
    }

    /// Group terms by the part of their monomial made of atoms selected by
    /// `pred`; the remaining factors form the coefficient expressions.
    pub fn split_by(&self, pred: &dyn Fn(&Atom) -> bool) -> BTreeMap<Mono, Expr> {
        let mut out: BTreeMap<Mono, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = BTreeMap::new();
            let mut rest = BTreeMap::new();
            for (a, e) in &m.0 {
                if pred(a) {
                    key.insert(a.clone(), e.clone());
                } else {
                    rest.insert(a.clone(), e.clone());
                }
            }
            out.entry(Mono(key)).or_default().add_assign(&Expr::term(c.clone(), Mono(rest)));
        }
        out
    }

    /// Numeric evaluation; `None` if some atom or constant is unresolved.
    pub fn eval_f64(&self, env: &dyn NumEnv) -> Option<f64> {
        let cenv = |n: &str| env.constant(n);
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.eval_f64(&cenv)?;
            for (a, e) in &m.0 {
                let base = match a {
                    Atom::T => env.t()?,
                    Atom::S => env.s()?,
                    Atom::Jet(j) => env.jet(j)?,
                    Atom::Func(f) => {
                        let args: Option<Vec<f64>> = f.args.iter().map(|x| x.eval_f64(env)).collect();
                        env.func(&f.name, &args?, &f.derivs)?
                    }
                    Atom::Exp(mm) => Expr::from_mono(mm.clone()).eval_f64(env)?.exp(),
                    Atom::Log(x) => x.eval_f64(env)?.ln(),
                    Atom::Pow(x) => x.eval_f64(env)?,
                };
                let ev = e.eval_f64(&cenv)?;
                v *= if ev == ev.round() && ev.abs() < 64.0 { base.powi(ev as i32) } else { base.powf(ev) };
            }
            acc += v;
        }
        Some(acc)
    }
}

/// Lookup table for numeric evaluation.
pub trait NumEnv {
    fn t(&self) -> Option<f64> {
        None
    }
    fn s(&self) -> Option<f64> {
        None
    }
    fn jet(&self, _j: &JetVar) -> Option<f64> {
        None
    }
    fn constant(&self, _name: &str) -> Option<f64> {
        None
    }
    fn func(&self, _name: &str, _args: &[f64], _derivs: &[u32]) -> Option<f64> {
        None
    }
}

fn collect_mono_atoms(m: &Mono, out: &mut BTreeSet<Atom>) {
    for a in m.0.keys() {
        out.insert(a.clone());
        match a {
            Atom::Func(f) => f.args.iter().for_each(|x| x.collect_atoms(out)),
            Atom::Exp(mm) => collect_mono_atoms(mm, out),
            Atom::Log(x) | Atom::Pow(x) => x.collect_atoms(out),
            _ => {}
        }
    }
}

/// Leaf rule treating every base atom as constant.
pub fn leaf_zero(a: &Atom) -> Option<Expr> {
    match a {
        Atom::T | Atom::S | Atom::Jet(_) => Some(Expr::zero()),
        _ => None,
    }
}

struct Deriver<'a> {
    leaf: &'a dyn Fn(&Atom) -> Option<Expr>,
    wrt_const: Option<&'a str>,
    cache: RefCell<HashMap<Atom, Expr>>,
}

impl<'a> Deriver<'a> {
    fn expr(&self, e: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &e.terms {
            if let Some(x) = self.wrt_const {
                let dc = c.derivative(x);
                if !dc.is_zero() {
                    out.add_assign(&Expr::term(dc, m.clone()));
                }
            }
            out.add_assign(&self.mono(m).scale(c));
        }
        out
    }

    fn mono(&self, m: &Mono) -> Expr {
        let mut out = Expr::zero();
        for (a, k) in &m.0 {
            let da = self.atom(a);
            let mut contrib = Expr::zero();
            if !da.is_zero() {
                let lowered = m.with_exponent(a, k.sub(&Coeff::one()));
                contrib = Expr::term(k.clone(), lowered).mul(&da);
            }
            if let Some(x) = self.wrt_const {
                let dk = k.derivative(x);
                if !dk.is_zero() {
                    let lg = match a {
                        Atom::Exp(inner) => Expr::from_mono(inner.clone()),
                        Atom::Pow(b) => b.log().unwrap_or_else(|_| Expr::zero()),
                        other => Expr::atom(other.clone()).log().unwrap_or_else(|_| Expr::zero()),
                    };
                    contrib.add_assign(&Expr::term(dk, m.clone()).mul(&lg));
                }
            }
            out.add_assign(&contrib);
        }
        out
    }

    fn atom(&self, a: &Atom) -> Expr {
        if let Some(v) = self.cache.borrow().get(a) {
            return v.clone();
        }
        let v = self.atom_uncached(a);
        self.cache.borrow_mut().insert(a.clone(), v.clone());
        v
    }

    fn atom_uncached(&self, a: &Atom) -> Expr {
        if let Some(v) = (self.leaf)(a) {
            return v;
        }
        match a {
            Atom::T | Atom::S | Atom::Jet(_) => Expr::zero(),
            Atom::Func(f) => {
                let mut out = Expr::zero();
                for (k, arg) in f.args.iter().enumerate() {
                    let darg = self.expr(arg);
                    if darg.is_zero() {
                        continue;
                    }
                    let mut derivs = f.derivs.clone();
                    derivs[k] += 1;
                    let g = Expr::atom(Atom::Func(FuncSym { name: f.name.clone(), args: f.args.clone(), derivs }));
                    out.add_assign(&g.mul(&darg));
                }
                out
            }
            Atom::Exp(m) => {
                let dm = self.mono(m);
                if dm.is_zero() {
                    return Expr::zero();
                }
                Expr::atom(a.clone()).mul(&dm)
            }
            Atom::Log(x) => {
                let dx = self.expr(x);
                if dx.is_zero() {
                    return Expr::zero();
                }
                dx.mul(&x.inv().expect("log of nonzero"))
            }
            Atom::Pow(b) => self.expr(b),
        }
    }
}

/// Simultaneous substitution table.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub atoms: BTreeMap<Atom, Expr>,
    pub consts: BTreeMap<Sym, Expr>,
    /// Function name to (formal parameters, body).
    pub funcs: BTreeMap<Sym, (Vec<Atom>, Expr)>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.consts.is_empty() && self.funcs.is_empty()
    }

    pub fn atom(mut self, a: Atom, v: Expr) -> Self {
        self.atoms.insert(a, v);
        self
    }

    pub fn jet(self, dep: &str, ot: u32, os: u32, v: Expr) -> Self {
        self.atom(Atom::jet(dep, ot, os), v)
    }

    pub fn constant(mut self, name: &str, v: Expr) -> Self {
        self.consts.insert(Sym::from(name), v);
        self
    }

    pub fn func(mut self, name: &str, params: Vec<Atom>, body: Expr) -> Self {
        self.funcs.insert(Sym::from(name), (params, body));
        self
    }

    fn subst_cpoly(&self, p: &CPoly) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &p.0 {
            let mut t = Expr::from_q(c.clone());
            for (n, e) in &m.0 {
                let v = match self.consts.get(n) {
                    Some(v) => v.clone(),
                    None => Expr::constant(n),
                };
                t = t.mul(&v.pow_u(*e));
            }
            out.add_assign(&t);
        }
        out
    }

    fn subst_coeff(&self, c: &Coeff) -> Result<Expr> {
        if self.consts.is_empty() || c.vars().iter().all(|v| !self.consts.contains_key(v)) {
            return Ok(Expr::from_coeff(c.clone()));
        }
        let n = self.subst_cpoly(c.num());
        let d = self.subst_cpoly(c.den());
        n.div(&d)
    }

    fn subst_atom(&self, a: &Atom, cache: &mut HashMap<Atom, Expr>) -> Result<Expr> {
        if let Some(v) = self.atoms.get(a) {
            return Ok(v.clone());
        }
        match a {
            Atom::T | Atom::S | Atom::Jet(_) => Ok(Expr::atom(a.clone())),
            Atom::Func(f) => {
                let args: Vec<Expr> = f.args.iter().map(|x| x.subst_inner(self, cache)).collect::<Result<_>>()?;
                if let Some((params, body)) = self.funcs.get(&f.name) {
                    if params.len() != args.len() {
                        return Err(ExprError::BadBinding(f.name.to_string(), "arity mismatch".into()));
                    }
                    let mut d = body.clone();
                    for (k, n) in f.derivs.iter().enumerate() {
                        for _ in 0..*n {
                            d = d.partial(&Wrt::Atom(params[k].clone()));
                        }
                    }
                    let mut pb = Bindings::new();
                    for (p, v) in params.iter().zip(args.iter()) {
                        if Expr::atom(p.clone()) != *v {
                            pb.atoms.insert(p.clone(), v.clone());
                        }
                    }
                    return d.substitute(&pb);
                }
                Ok(Expr::atom(Atom::Func(FuncSym { name: f.name.clone(), args, derivs: f.derivs.clone() })))
            }
            Atom::Exp(m) => Ok(Expr::from_mono(m.clone()).subst_inner(self, cache)?.exp()),
            Atom::Log(x) => x.subst_inner(self, cache)?.log(),
            Atom::Pow(x) => x.subst_inner(self, cache),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render::render(self))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render::render_atom(self))
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render::render_jet(self))
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl std::ops::Add for &Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        Expr::add(self, o)
    }
}

impl std::ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, o: &Expr) -> Expr {
        Expr::sub(self, o)
    }
}

impl std::ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        Expr::mul(self, o)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        Expr::add(&self, &o)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        Expr::sub(&self, &o)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        Expr::mul(&self, &o)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

/// True when `c` is a rational number equal to one; handy in tests.
pub fn coeff_is_one(c: &Coeff) -> bool {
    c.as_q().is_some_and(|x| x.is_one())
}

#[cfg(test)]
mod tests;
