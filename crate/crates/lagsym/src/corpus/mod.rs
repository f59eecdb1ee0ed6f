//! Executable transcription of the plane MHD systems in mass Lagrangian
//! coordinates: evolution systems, Lagrangians, generator lists,
//! conservation laws and classification tables.

mod extended;
mod equivalence;
mod generators;
mod laws;
mod tables;

pub use extended::{
    extension_subalgebras, published_commutators, published_equivalence_maps, published_inner_automorphisms,
};
pub use equivalence::{builtin_equivalence_generators, equivalence_system, ElementDecl, EquivalenceList};
pub use generators::{
    builtin_generators, finite_general_generator, lagr_flat_ops, lagr_flat_ops8, symmetry_form_1, symmetry_form_2,
    GeneratorEntry,
};
pub use laws::{builtin_conservation_laws, energy_vector_form, ConservationLaw};
pub use tables::{table, table_ids, ArbitraryElement, RowCheck, TableId, TableRow, Variant};

use crate::expr::{Atom, Bindings, Context, Expr, ExprError, JetVar, Sym};
use crate::jet::{ds, dt, JetError, Lagrangian};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("inconsistent override for {case}: {reason}")]
    InconsistentOverride { case: CaseId, reason: String },
    #[error("reduction did not terminate after {0} passes (mis-oriented system)")]
    NonTermination(usize),
    #[error("case {0} has no Lagrangian")]
    NotVariational(CaseId),
    #[error("aux equations `{tag}` are not available for {case}")]
    MissingAux { case: CaseId, tag: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

pub type Result<T> = std::result::Result<T, CorpusError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    FiniteSigmaH0nz,
    FiniteSigmaH0zeroReduced,
    FiniteSigmaH0zeroResidual,
    InfiniteSigmaH0nz,
    InfiniteSigmaH0zeroReduced,
    VariationalH0nz,
    VariationalH0zero,
    VariationalGamma2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMode {
    Finite,
    Infinite,
    Potential,
}

impl CaseId {
    pub const ALL: [CaseId; 8] = [
        CaseId::FiniteSigmaH0nz,
        CaseId::FiniteSigmaH0zeroReduced,
        CaseId::FiniteSigmaH0zeroResidual,
        CaseId::InfiniteSigmaH0nz,
        CaseId::InfiniteSigmaH0zeroReduced,
        CaseId::VariationalH0nz,
        CaseId::VariationalH0zero,
        CaseId::VariationalGamma2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CaseId::FiniteSigmaH0nz => "finite-h0nz",
            CaseId::FiniteSigmaH0zeroReduced => "finite-h0zero",
            CaseId::FiniteSigmaH0zeroResidual => "finite-h0zero-residual",
            CaseId::InfiniteSigmaH0nz => "infinite-h0nz",
            CaseId::InfiniteSigmaH0zeroReduced => "infinite-h0zero",
            CaseId::VariationalH0nz => "var-h0nz",
            CaseId::VariationalH0zero => "var-h0zero",
            CaseId::VariationalGamma2 => "var-gamma2",
        }
    }

    pub fn sigma_mode(self) -> SigmaMode {
        match self {
            CaseId::FiniteSigmaH0nz | CaseId::FiniteSigmaH0zeroReduced | CaseId::FiniteSigmaH0zeroResidual => {
                SigmaMode::Finite
            }
            CaseId::InfiniteSigmaH0nz | CaseId::InfiniteSigmaH0zeroReduced => SigmaMode::Infinite,
            _ => SigmaMode::Potential,
        }
    }

    pub fn h0_nonzero(self) -> bool {
        matches!(self, CaseId::FiniteSigmaH0nz | CaseId::InfiniteSigmaH0nz | CaseId::VariationalH0nz)
    }

    pub fn is_variational(self) -> bool {
        self.sigma_mode() == SigmaMode::Potential
    }

    /// Whether `sigma` appears as an arbitrary element.
    pub fn has_sigma(self) -> bool {
        matches!(self, CaseId::FiniteSigmaH0nz | CaseId::FiniteSigmaH0zeroReduced)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CaseId {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL.iter().copied().find(|c| c.id() == s).ok_or_else(|| CorpusError::UnknownCase(s.to_string()))
    }
}

/// Symbol table shared by the whole corpus.
pub fn corpus_context() -> Context {
    let mut consts = vec!["gamma", "H0", "alpha", "beta", "C", "q", "kS", "S0", "A0", "B0", "a"];
    let names: Vec<String> = (1..=8).map(|i| format!("a{}", i)).chain((1..=12).map(|i| format!("k{}", i))).collect();
    consts.extend(names.iter().map(|s| s.as_str()));
    Context::new()
        .constants(&consts)
        .dependents(&["rho", "u", "v", "w", "p", "Hy", "Hz", "Ey", "Ez", "x", "y", "z", "phi", "psi", "chi"])
        .function("sigma", &["rho", "p"])
        .function("S", &["s"])
        .function("A", &["s"])
        .function("B", &["s"])
        .function("Fy", &["s"])
        .function("Fz", &["s"])
}

/// Oriented rule `lead -> rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lead: JetVar,
    /// Right-hand side with all other leads eliminated.
    pub rhs: Expr,
    /// Right-hand side as transcribed, before orientation.
    pub printed: Expr,
    pub label: String,
}

impl Rule {
    /// The equation `lead - rhs = 0` in its transcribed form.
    pub fn equation(&self) -> Expr {
        Expr::atom(Atom::Jet(self.lead.clone())).sub(&self.printed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamStatus {
    Symbolic,
    Fixed(Expr),
}

#[derive(Debug, Clone)]
pub struct PdeSystem {
    pub case: CaseId,
    pub ctx: Context,
    pub dependents: Vec<Sym>,
    pub rules: Vec<Rule>,
    pub aux: BTreeMap<String, Vec<Rule>>,
    pub overrides: Bindings,
    pub params: BTreeMap<String, ParamStatus>,
}

const FINITE_H0NZ: &[(&str, &str)] = &[
    ("rho_t", "-rho^2*u_s"),
    ("u_t", "-p_s - Hy*Hy_s - Hz*Hz_s"),
    ("x_t", "u"),
    ("v_t", "H0*Hy_s"),
    ("y_t", "v"),
    ("w_t", "H0*Hz_s"),
    ("z_t", "w"),
    ("p_t", "-gamma*rho*p*u_s + (gamma-1)*sigma*(Ey^2 + Ez^2)"),
    ("Hy_t", "rho*(H0*v_s - Hy*u_s + Ez_s)"),
    ("Hz_t", "rho*(H0*w_s - Hz*u_s - Ey_s)"),
    ("Ey", "-rho*Hz_s/sigma"),
    ("Ez", "rho*Hy_s/sigma"),
];

const FINITE_H0ZERO: &[(&str, &str)] = &[
    ("rho_t", "-rho^2*u_s"),
    ("u_t", "-p_s - Hy*Hy_s - Hz*Hz_s"),
    ("x_t", "u"),
    ("p_t", "-gamma*rho*p*u_s + (gamma-1)*sigma*(Ey^2 + Ez^2)"),
    ("Hy_t", "rho*(-Hy*u_s + Ez_s)"),
    ("Hz_t", "rho*(-Hz*u_s - Ey_s)"),
    ("Ey", "-rho*Hz_s/sigma"),
    ("Ez", "rho*Hy_s/sigma"),
];

const PART2: &[(&str, &str)] = &[("v_t", "0"), ("y_t", "v"), ("w_t", "0"), ("z_t", "w")];

const INFINITE_H0NZ: &[(&str, &str)] = &[
    ("rho_t", "-rho^2*u_s"),
    ("u_t", "-p_s - Hy*Hy_s - Hz*Hz_s"),
    ("x_t", "u"),
    ("v_t", "H0*Hy_s"),
    ("y_t", "v"),
    ("w_t", "H0*Hz_s"),
    ("z_t", "w"),
    ("p_t", "-gamma*rho*p*u_s"),
    ("Hy_t", "rho*(H0*v_s - Hy*u_s)"),
    ("Hz_t", "rho*(H0*w_s - Hz*u_s)"),
];

const INFINITE_H0ZERO: &[(&str, &str)] = &[
    ("rho_t", "-rho^2*u_s"),
    ("u_t", "-p_s - Hy*Hy_s - Hz*Hz_s"),
    ("x_t", "u"),
    ("p_t", "-gamma*rho*p*u_s"),
    ("Hy_t", "-rho*Hy*u_s"),
    ("Hz_t", "-rho*Hz*u_s"),
];

fn lead_of(ctx: &Context, text: &str) -> JetVar {
    ctx.p(text).as_atom().and_then(|a| a.as_jet()).cloned().expect("lead is a jet")
}

fn rules_from(ctx: &Context, table: &[(&str, &str)]) -> Vec<Rule> {
    table
        .iter()
        .map(|(l, r)| {
            let rhs = ctx.p(r);
            Rule { lead: lead_of(ctx, l), rhs: rhs.clone(), printed: rhs, label: format!("{} = {}", l, r) }
        })
        .collect()
}

fn variational_rules(ctx: &Context, case: CaseId) -> Vec<Rule> {
    let mk = |lead: &str, potential: &str, sign: i64| {
        let rhs = ds(&ctx.p(potential)).scale_int(sign);
        Rule { lead: lead_of(ctx, lead), rhs: rhs.clone(), printed: rhs, label: format!("{} = D_s[{}]*({})", lead, potential, sign) }
    };
    match case {
        CaseId::VariationalH0nz => vec![
            mk("phi_tt", "S*phi_s^(-gamma) + H0^2*(psi_s^2 + chi_s^2)/(2*phi_s^2)", -1),
            mk("psi_tt", "H0^2*psi_s/phi_s", 1),
            mk("chi_tt", "H0^2*chi_s/phi_s", 1),
        ],
        CaseId::VariationalH0zero => vec![mk("phi_tt", "S*phi_s^(-gamma) + A/phi_s^2", -1)],
        CaseId::VariationalGamma2 => vec![mk("phi_tt", "B/phi_s^2", -1)],
        _ => unreachable!(),
    }
}

fn case_dependents(case: CaseId) -> &'static [&'static str] {
    match case {
        CaseId::FiniteSigmaH0nz => &["rho", "u", "x", "v", "y", "w", "z", "p", "Hy", "Hz", "Ey", "Ez"],
        CaseId::FiniteSigmaH0zeroReduced => &["rho", "u", "x", "p", "Hy", "Hz", "Ey", "Ez"],
        CaseId::FiniteSigmaH0zeroResidual => &["v", "y", "w", "z"],
        CaseId::InfiniteSigmaH0nz => &["rho", "u", "x", "v", "y", "w", "z", "p", "Hy", "Hz"],
        CaseId::InfiniteSigmaH0zeroReduced => &["rho", "u", "x", "p", "Hy", "Hz"],
        CaseId::VariationalH0nz => &["phi", "psi", "chi"],
        CaseId::VariationalH0zero | CaseId::VariationalGamma2 => &["phi"],
    }
}

fn aux_rules(ctx: &Context, case: CaseId) -> BTreeMap<String, Vec<Rule>> {
    let mut out = BTreeMap::new();
    let mut put = |tag: &str, t: &[(&str, &str)]| {
        out.insert(tag.to_string(), rules_from(ctx, t));
    };
    match case {
        CaseId::FiniteSigmaH0nz => put("x", &[("x_s", "1/rho")]),
        CaseId::FiniteSigmaH0zeroReduced => {
            put("x", &[("x_s", "1/rho")]);
            put("part2", PART2);
        }
        CaseId::InfiniteSigmaH0nz => {
            put("x", &[("x_s", "1/rho")]);
            put("yszs", &[("y_s", "Hy/(H0*rho)"), ("z_s", "Hz/(H0*rho)")]);
            put("entropy-profile", &[("p", "S*rho^gamma")]);
        }
        CaseId::InfiniteSigmaH0zeroReduced => {
            put("x", &[("x_s", "1/rho")]);
            put("part2", PART2);
            put("entropy-profile", &[("p", "S*rho^gamma")]);
            put("field-profile", &[("Hy", "rho*Fy"), ("Hz", "rho*Fz")]);
        }
        _ => {}
    }
    out
}

/// Replace the algebraic leads (order zero) inside the differential rules.
fn orient(rules: Vec<Rule>) -> Vec<Rule> {
    let (alg, diff): (Vec<Rule>, Vec<Rule>) = rules.into_iter().partition(|r| r.lead.order() == 0);
    if alg.is_empty() {
        return diff;
    }
    let reducer = Reducer::new(alg.clone());
    let mut out: Vec<Rule> = diff
        .into_iter()
        .map(|r| {
            let rhs = reducer.reduce(&r.rhs).expect("algebraic leads are explicit");
            Rule { rhs, ..r }
        })
        .collect();
    out.extend(alg);
    out
}

fn override_names(b: &Bindings) -> Vec<String> {
    b.consts.keys().chain(b.funcs.keys()).map(|k| k.to_string()).collect()
}

fn check_overrides(case: CaseId, b: &Bindings) -> Result<()> {
    let bad = |reason: String| Err(CorpusError::InconsistentOverride { case, reason });
    if !b.atoms.is_empty() {
        return bad("only constants and arbitrary functions may be overridden".into());
    }
    for name in override_names(b) {
        let allowed = match name.as_str() {
            "sigma" => case.has_sigma(),
            "H0" => case.h0_nonzero(),
            "gamma" => case != CaseId::VariationalGamma2 && case != CaseId::FiniteSigmaH0zeroResidual,
            "S" => matches!(case, CaseId::VariationalH0nz | CaseId::VariationalH0zero)
                || case == CaseId::InfiniteSigmaH0nz
                || case == CaseId::InfiniteSigmaH0zeroReduced,
            "A" => case == CaseId::VariationalH0zero,
            "B" => case == CaseId::VariationalGamma2,
            "Fy" | "Fz" => case == CaseId::InfiniteSigmaH0zeroReduced,
            _ => true,
        };
        if !allowed {
            return bad(format!("`{}` is not an element of this case", name));
        }
    }
    if let Some(h) = b.consts.get("H0") {
        if h.is_zero() {
            return bad("H0 = 0 requested in an H0 != 0 case".into());
        }
    }
    if let Some(g) = b.consts.get("gamma") {
        if case == CaseId::VariationalH0zero && *g == Expr::int(2) {
            return bad("gamma = 2 merges the entropy and field terms; use var-gamma2".into());
        }
        if let Some(v) = g.as_q() {
            if v <= crate::expr::q(1) {
                return bad("gamma must exceed 1".into());
            }
        }
    }
    Ok(())
}

/// Build the oriented system of a case with constant/function overrides.
pub fn build_system(case: CaseId, overrides: &Bindings) -> Result<PdeSystem> {
    check_overrides(case, overrides)?;
    let ctx = corpus_context();
    let raw = match case {
        CaseId::FiniteSigmaH0nz => rules_from(&ctx, FINITE_H0NZ),
        CaseId::FiniteSigmaH0zeroReduced => rules_from(&ctx, FINITE_H0ZERO),
        CaseId::FiniteSigmaH0zeroResidual => rules_from(&ctx, PART2),
        CaseId::InfiniteSigmaH0nz => rules_from(&ctx, INFINITE_H0NZ),
        CaseId::InfiniteSigmaH0zeroReduced => rules_from(&ctx, INFINITE_H0ZERO),
        _ => variational_rules(&ctx, case),
    };
    let mut params = BTreeMap::new();
    params.insert("gamma".to_string(), ParamStatus::Symbolic);
    if case == CaseId::VariationalGamma2 {
        params.insert("gamma".to_string(), ParamStatus::Fixed(Expr::int(2)));
    }
    params.insert(
        "H0".to_string(),
        if case.h0_nonzero() { ParamStatus::Symbolic } else { ParamStatus::Fixed(Expr::zero()) },
    );
    for (k, v) in &overrides.consts {
        params.insert(k.to_string(), ParamStatus::Fixed(v.clone()));
    }
    let sys = PdeSystem {
        case,
        ctx,
        dependents: case_dependents(case).iter().map(|d| Sym::from(*d)).collect(),
        rules: orient(raw),
        aux: aux_rules(&corpus_context(), case),
        overrides: Bindings::new(),
        params,
    };
    sys.with_overrides(overrides)
}

impl PdeSystem {
    /// Apply further bindings to every rule.
    pub fn with_overrides(&self, b: &Bindings) -> Result<PdeSystem> {
        if b.is_empty() {
            return Ok(self.clone());
        }
        let sub = |rs: &[Rule]| -> Result<Vec<Rule>> {
            rs.iter()
                .map(|r| {
                    Ok(Rule {
                        lead: r.lead.clone(),
                        rhs: r.rhs.substitute(b)?,
                        printed: r.printed.substitute(b)?,
                        label: r.label.clone(),
                    })
                })
                .collect()
        };
        let mut out = self.clone();
        out.rules = sub(&self.rules)?;
        for (k, v) in &self.aux {
            out.aux.insert(k.clone(), sub(v)?);
        }
        let mut ov = self.overrides.clone();
        ov.atoms.extend(b.atoms.clone());
        ov.consts.extend(b.consts.clone());
        ov.funcs.extend(b.funcs.clone());
        out.overrides = ov;
        for (k, v) in &b.consts {
            out.params.insert(k.to_string(), ParamStatus::Fixed(v.clone()));
        }
        Ok(out)
    }

    /// Differential rules (order > 0 leads).
    pub fn evolution_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| r.lead.order() > 0)
    }

    pub fn aux_tags(&self) -> Vec<&str> {
        self.aux.keys().map(|k| k.as_str()).collect()
    }

    pub fn dependent_names(&self) -> Vec<&str> {
        self.dependents.iter().map(|d| &**d).collect()
    }

    /// Leads whose prolongations appear on some rhs; empty for a fully oriented system.
    pub fn orientation_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rules {
            for j in r.rhs.jets() {
                if let Some(l) = self.rules.iter().find(|l| covers(&l.lead, &j)) {
                    out.push(format!("{}: rhs mentions {} (lead {})", r.label, j, l.lead));
                }
            }
        }
        out
    }

    fn reducer(&self, tags: &[&str]) -> Result<Reducer> {
        let mut rules = Vec::new();
        for t in tags {
            match self.aux.get(*t) {
                Some(rs) => rules.extend(rs.iter().cloned()),
                None => return Err(CorpusError::MissingAux { case: self.case, tag: t.to_string() }),
            }
        }
        rules.extend(self.rules.iter().cloned());
        Ok(Reducer::new(rules))
    }

    /// Reduce `e` modulo the system (and the selected aux equations).
    pub fn reduce(&self, e: &Expr, tags: &[&str]) -> Result<Expr> {
        let e = e.substitute(&self.overrides)?;
        self.reducer(tags)?.reduce(&e)
    }

    /// Reduce many expressions sharing one memo table.
    pub fn reduce_all(&self, es: &[Expr], tags: &[&str]) -> Result<Vec<Expr>> {
        let r = self.reducer(tags)?;
        es.iter().map(|e| r.reduce(&e.substitute(&self.overrides)?)).collect()
    }
}

/// Free function form of [`PdeSystem::reduce`].
pub fn reduce_mod_system(e: &Expr, sys: &PdeSystem, use_aux: &[&str]) -> Result<Expr> {
    sys.reduce(e, use_aux)
}

fn covers(lead: &JetVar, j: &JetVar) -> bool {
    lead.dep == j.dep && lead.ot <= j.ot && lead.os <= j.os
}

const GUARD: usize = 200;

/// Rewriting engine: each jet covered by a lead is replaced by the matching
/// total derivative of the rule's right-hand side.
struct Reducer {
    rules: Vec<Rule>,
    memo: std::cell::RefCell<HashMap<(usize, u32, u32), Expr>>,
}

impl Reducer {
    fn new(rules: Vec<Rule>) -> Self {
        Reducer { rules, memo: Default::default() }
    }

    fn derived(&self, k: usize, ot: u32, os: u32) -> Expr {
        if let Some(v) = self.memo.borrow().get(&(k, ot, os)) {
            return v.clone();
        }
        let v = if ot == 0 && os == 0 {
            self.rules[k].rhs.clone()
        } else if os > 0 {
            ds(&self.derived(k, ot, os - 1))
        } else {
            dt(&self.derived(k, ot - 1, 0))
        };
        self.memo.borrow_mut().insert((k, ot, os), v.clone());
        v
    }

    fn replacement(&self, j: &JetVar) -> Option<Expr> {
        let k = self.rules.iter().position(|r| covers(&r.lead, j))?;
        let l = &self.rules[k].lead;
        Some(self.derived(k, j.ot - l.ot, j.os - l.os))
    }

    fn reduce(&self, e: &Expr) -> Result<Expr> {
        let mut cur = e.clone();
        for _ in 0..GUARD {
            let mut b = Bindings::new();
            for j in cur.jets() {
                if let Some(v) = self.replacement(&j) {
                    b = b.atom(Atom::Jet(j), v);
                }
            }
            if b.is_empty() {
                return Ok(cur);
            }
            cur = cur.substitute(&b)?;
        }
        Err(CorpusError::NonTermination(GUARD))
    }
}

/// Lagrangian of a variational case.
pub fn builtin_lagrangian(case: CaseId) -> Result<Lagrangian> {
    let ctx = corpus_context();
    let (text, deps): (&str, &[&str]) = match case {
        CaseId::VariationalH0nz => (
            "1/2*(phi_t^2 + psi_t^2 + chi_t^2) - S/(gamma-1)*phi_s^(1-gamma) - H0^2*(psi_s^2 + chi_s^2)/(2*phi_s)",
            &["phi", "psi", "chi"],
        ),
        CaseId::VariationalH0zero => ("1/2*phi_t^2 - S/(gamma-1)*phi_s^(1-gamma) - A/phi_s", &["phi"]),
        CaseId::VariationalGamma2 => ("1/2*phi_t^2 - B/phi_s", &["phi"]),
        _ => return Err(CorpusError::NotVariational(case)),
    };
    Ok(Lagrangian::new(ctx.p(text), deps)?)
}

/// Binding of a one-argument arbitrary function of `s`.
pub fn bind_fn_of_s(name: &str, body: Expr) -> Bindings {
    Bindings::new().func(name, vec![Atom::S], body)
}

/// Binding of `sigma(rho, p)`.
pub fn bind_sigma(body: Expr) -> Bindings {
    Bindings::new().func("sigma", vec![Atom::jet("rho", 0, 0), Atom::jet("p", 0, 0)], body)
}

/// Parse an override such as `sigma=2*rho` or `gamma=5/3`.
pub fn parse_override(ctx: &Context, text: &str) -> Result<Bindings> {
    let (name, body) = text
        .split_once('=')
        .ok_or_else(|| CorpusError::Expr(ExprError::Syntax { pos: 0, msg: "expected name=expression".into() }))?;
    let name = name.trim();
    let body = ctx.parse(body.trim())?;
    if let Some(args) = ctx.functions.get(name) {
        let params: Vec<Atom> = args
            .iter()
            .map(|a| a.as_atom().cloned().ok_or_else(|| ExprError::BadBinding(name.into(), "non-atomic parameter".into())))
            .collect::<std::result::Result<_, _>>()?;
        return Ok(Bindings::new().func(name, params, body));
    }
    if ctx.constants.contains(name) {
        return Ok(Bindings::new().constant(name, body));
    }
    Err(CorpusError::Expr(ExprError::Undeclared(name.to_string())))
}

#[cfg(test)]
mod tests;
