//! Total derivatives, prolongation of point generators, the Euler operator and
//! the Noether operators on the jet space over (t, s).

use crate::expr::{Atom, Expr, JetVar, Sym, Wrt};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("generator `{label}` is not a point generator: coefficient `{coeff}` involves jet `{jet}`")]
    NotPoint { label: String, coeff: String, jet: String },
    #[error("prolongation order {0} is not supported (max 2)")]
    OrderTooHigh(u32),
    #[error("Lagrangian is not first order: contains `{0}`")]
    NotFirstOrder(String),
    #[error("`{0}` is not a dependent of the Lagrangian")]
    UnknownDependent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    T,
    S,
}

/// Total derivative on the free jet space.
pub fn total_derivative(e: &Expr, dir: Dir) -> Expr {
    e.derive_with(
        &|a| match a {
            Atom::T => Some(if dir == Dir::T { Expr::one() } else { Expr::zero() }),
            Atom::S => Some(if dir == Dir::S { Expr::one() } else { Expr::zero() }),
            Atom::Jet(j) => Some(Expr::atom(Atom::Jet(if dir == Dir::T { j.bump_t() } else { j.bump_s() }))),
            _ => None,
        },
        None,
    )
}

pub fn dt(e: &Expr) -> Expr {
    total_derivative(e, Dir::T)
}

pub fn ds(e: &Expr) -> Expr {
    total_derivative(e, Dir::S)
}

/// Point vector field `xi_t d/dt + xi_s d/ds + sum eta^i d/du^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub xi_t: Expr,
    pub xi_s: Expr,
    pub etas: BTreeMap<Sym, Expr>,
    pub label: String,
}

impl Generator {
    pub fn new(label: &str, xi_t: Expr, xi_s: Expr, etas: BTreeMap<Sym, Expr>) -> Result<Self, JetError> {
        let g = Generator { xi_t, xi_s, etas: etas.into_iter().filter(|(_, v)| !v.is_zero()).collect(), label: label.to_string() };
        g.check_point()?;
        Ok(g)
    }

    pub fn zero(label: &str) -> Self {
        Generator { xi_t: Expr::zero(), xi_s: Expr::zero(), etas: BTreeMap::new(), label: label.to_string() }
    }

    fn check_point(&self) -> Result<(), JetError> {
        let coeffs = [("xi_t", &self.xi_t), ("xi_s", &self.xi_s)];
        let named = coeffs.iter().map(|(n, e)| (n.to_string(), *e)).chain(self.etas.iter().map(|(k, v)| (format!("eta_{}", k), v)));
        for (name, e) in named {
            if let Some(j) = e.jets().into_iter().find(|j| j.order() > 0) {
                return Err(JetError::NotPoint { label: self.label.clone(), coeff: name, jet: j.to_string() });
            }
        }
        Ok(())
    }

    pub fn eta(&self, dep: &str) -> Expr {
        self.etas.get(dep).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.xi_t.is_zero() && self.xi_s.is_zero() && self.etas.values().all(|e| e.is_zero())
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn scale(&self, k: &Expr) -> Generator {
        Generator {
            xi_t: self.xi_t.mul(k),
            xi_s: self.xi_s.mul(k),
            etas: self.etas.iter().map(|(d, e)| (d.clone(), e.mul(k))).filter(|(_, e)| !e.is_zero()).collect(),
            label: self.label.clone(),
        }
    }

    pub fn add(&self, o: &Generator) -> Generator {
        let mut etas = self.etas.clone();
        for (d, e) in &o.etas {
            let v = etas.get(d).cloned().unwrap_or_default().add(e);
            etas.insert(d.clone(), v);
        }
        etas.retain(|_, e| !e.is_zero());
        Generator { xi_t: self.xi_t.add(&o.xi_t), xi_s: self.xi_s.add(&o.xi_s), etas, label: self.label.clone() }
    }

    /// `a*g1 + b*g2 + ...` with a combined label.
    pub fn combine(label: &str, parts: &[(Expr, &Generator)]) -> Generator {
        let mut acc = Generator::zero(label);
        for (k, g) in parts {
            acc = acc.add(&g.scale(k));
        }
        acc.with_label(label)
    }

    /// Characteristic `eta^i - xi_t u^i_t - xi_s u^i_s`.
    pub fn characteristic(&self, dep: &str) -> Expr {
        self.eta(dep).sub(&self.xi_t.mul(&Expr::jet(dep, 1, 0))).sub(&self.xi_s.mul(&Expr::jet(dep, 0, 1)))
    }

    /// Prolonged coefficients of every jet up to `order` for the given
    /// dependents (defaults to those with a nonzero eta).
    pub fn prolong(&self, order: u32, deps: Option<&[&str]>) -> Result<BTreeMap<JetVar, Expr>, JetError> {
        if order > 2 {
            return Err(JetError::OrderTooHigh(order));
        }
        let names: Vec<Sym> = match deps {
            Some(d) => d.iter().map(|s| Sym::from(*s)).collect(),
            None => self.etas.keys().cloned().collect(),
        };
        let pr = Prolongation::new(self);
        let mut out = BTreeMap::new();
        for n in names {
            for k in 0..=order {
                for ot in 0..=k {
                    let j = JetVar { dep: n.clone(), ot, os: k - ot };
                    out.insert(j.clone(), pr.coeff(&j));
                }
            }
        }
        Ok(out)
    }

    /// Apply the prolonged generator to an expression.
    pub fn apply(&self, e: &Expr) -> Expr {
        Prolongation::new(self).apply(e)
    }

    /// Render as `xi_t*D_t + ...` for reports.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.xi_t.is_zero() {
            parts.push(format!("({})*d/dt", self.xi_t));
        }
        if !self.xi_s.is_zero() {
            parts.push(format!("({})*d/ds", self.xi_s));
        }
        for (d, e) in &self.etas {
            parts.push(format!("({})*d/d{}", e, d));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Lazily computed prolongation coefficients of one generator.
pub struct Prolongation<'a> {
    g: &'a Generator,
    dxi: [[Expr; 2]; 2],
    cache: RefCell<HashMap<JetVar, Expr>>,
}

impl<'a> Prolongation<'a> {
    pub fn new(g: &'a Generator) -> Self {
        let dxi = [[dt(&g.xi_t), ds(&g.xi_t)], [dt(&g.xi_s), ds(&g.xi_s)]];
        Prolongation { g, dxi, cache: RefCell::new(HashMap::new()) }
    }

    /// zeta_{J,k} = D_k(zeta_J) - u_{J,t} D_k(xi_t) - u_{J,s} D_k(xi_s)
    pub fn coeff(&self, j: &JetVar) -> Expr {
        if let Some(v) = self.cache.borrow().get(j) {
            return v.clone();
        }
        let v = if j.ot == 0 && j.os == 0 {
            self.g.eta(&j.dep)
        } else {
            let (parent, k) = if j.ot > 0 {
                (JetVar { dep: j.dep.clone(), ot: j.ot - 1, os: j.os }, 0)
            } else {
                (JetVar { dep: j.dep.clone(), ot: 0, os: j.os - 1 }, 1)
            };
            let z = self.coeff(&parent);
            let dz = if k == 0 { dt(&z) } else { ds(&z) };
            let ut = Expr::atom(Atom::Jet(parent.bump_t()));
            let us = Expr::atom(Atom::Jet(parent.bump_s()));
            dz.sub(&ut.mul(&self.dxi[0][k])).sub(&us.mul(&self.dxi[1][k]))
        };
        self.cache.borrow_mut().insert(j.clone(), v.clone());
        v
    }

    pub fn apply(&self, e: &Expr) -> Expr {
        e.derive_with(
            &|a| match a {
                Atom::T => Some(self.g.xi_t.clone()),
                Atom::S => Some(self.g.xi_s.clone()),
                Atom::Jet(j) => Some(self.coeff(j)),
                _ => None,
            },
            None,
        )
    }
}

/// First-order Lagrangian density in the dependents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lagrangian {
    pub density: Expr,
    pub dependents: Vec<Sym>,
}

impl Lagrangian {
    pub fn new(density: Expr, dependents: &[&str]) -> Result<Self, JetError> {
        if let Some(j) = density.jets().into_iter().find(|j| j.order() > 1) {
            return Err(JetError::NotFirstOrder(j.to_string()));
        }
        Ok(Lagrangian { density, dependents: dependents.iter().map(|d| Sym::from(*d)).collect() })
    }

    fn check_dep(&self, dep: &str) -> Result<(), JetError> {
        if self.dependents.iter().any(|d| &**d == dep) {
            Ok(())
        } else {
            Err(JetError::UnknownDependent(dep.to_string()))
        }
    }
}

/// Variational derivative `dL/du - D_t(dL/du_t) - D_s(dL/du_s)`.
pub fn euler_operator(l: &Lagrangian, dep: &str) -> Result<Expr, JetError> {
    l.check_dep(dep)?;
    let e = &l.density;
    Ok(e.partial(&Wrt::jet(dep, 0, 0)).sub(&dt(&e.partial(&Wrt::jet(dep, 1, 0)))).sub(&ds(&e.partial(&Wrt::jet(dep, 0, 1)))))
}

/// Euler operator for a general expression (used on divergence checks).
pub fn euler_of(e: &Expr, dep: &str) -> Expr {
    e.partial(&Wrt::jet(dep, 0, 0)).sub(&dt(&e.partial(&Wrt::jet(dep, 1, 0)))).sub(&ds(&e.partial(&Wrt::jet(dep, 0, 1))))
}

/// `(N^t L, N^s L)`.
pub fn noether_operators(g: &Generator, l: &Lagrangian) -> (Expr, Expr) {
    let mut nt = g.xi_t.mul(&l.density);
    let mut ns = g.xi_s.mul(&l.density);
    for d in &l.dependents {
        let w = g.characteristic(d);
        if w.is_zero() {
            continue;
        }
        nt.add_assign(&w.mul(&l.density.partial(&Wrt::jet(d, 1, 0))));
        ns.add_assign(&w.mul(&l.density.partial(&Wrt::jet(d, 0, 1))));
    }
    (nt, ns)
}

/// `XL + L(D_t xi_t + D_s xi_s)`.
pub fn action_variation(g: &Generator, l: &Lagrangian) -> Expr {
    g.apply(&l.density).add(&l.density.mul(&dt(&g.xi_t).add(&ds(&g.xi_s))))
}

/// The Noether identity residual; identically zero for every pair.
pub fn noether_identity_residual(g: &Generator, l: &Lagrangian) -> Expr {
    let mut r = action_variation(g, l);
    for d in &l.dependents {
        let el = euler_operator(l, d).expect("own dependent");
        r = r.sub(&g.characteristic(d).mul(&el));
    }
    let (nt, ns) = noether_operators(g, l);
    r.sub(&dt(&nt)).sub(&ds(&ns))
}

/// Divergence potential pair `(B1, B2)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivergencePair {
    pub b1: Expr,
    pub b2: Expr,
}

impl DivergencePair {
    pub fn new(b1: Expr, b2: Expr) -> Result<Self, JetError> {
        for e in [&b1, &b2] {
            if let Some(j) = e.jets().into_iter().find(|j| j.order() > 0) {
                return Err(JetError::NotPoint { label: "divergence pair".into(), coeff: e.to_string(), jet: j.to_string() });
            }
        }
        Ok(DivergencePair { b1, b2 })
    }

    pub fn zero() -> Self {
        DivergencePair::default()
    }

    pub fn is_zero(&self) -> bool {
        self.b1.is_zero() && self.b2.is_zero()
    }

    pub fn divergence(&self) -> Expr {
        dt(&self.b1).add(&ds(&self.b2))
    }
}

/// All dependents mentioned by a set of expressions.
pub fn dependents_of<'a>(es: impl IntoIterator<Item = &'a Expr>) -> BTreeSet<Sym> {
    let mut out = BTreeSet::new();
    for e in es {
        out.extend(e.jets().into_iter().map(|j| j.dep));
    }
    out
}
