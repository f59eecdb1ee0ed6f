//! Noether correspondence for the potential Lagrangians: symmetry
//! classification, conserved currents, and conversion of laws to physical
//! and Eulerian variables.

use crate::corpus::{
    build_system, builtin_conservation_laws, builtin_generators, builtin_lagrangian, corpus_context, table, CaseId,
    ConservationLaw, CorpusError, PdeSystem, RowCheck, TableId,
};
use crate::expr::{Atom, Bindings, Coeff, Expr, ExprError, JetVar, Sym, Q};
use std::collections::BTreeSet;
use crate::jet::{action_variation, ds, dt, noether_operators, DivergencePair, Generator, JetError, Lagrangian};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NoetherError {
    #[error("`{label}` is not a variational or divergence symmetry: XL + L div(xi) - div(B) = {residual}")]
    NotASymmetry { label: String, residual: String },
    #[error("{0} has no potential-to-physical map for `{1}`")]
    NoPhysicalMap(CaseId, String),
    #[error("{0} is not a table of Lagrangian symmetries")]
    NotVariationalTable(TableId),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

pub type Result<T> = std::result::Result<T, NoetherError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    Variational,
    Divergence,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryClass {
    pub kind: SymmetryKind,
    pub pair: Option<DivergencePair>,
    /// `XL + L(D_t xi_t + D_s xi_s)` before subtracting any pair.
    pub variation: Expr,
}

pub fn symmetry_class(g: &Generator, l: &Lagrangian, candidate: Option<&DivergencePair>) -> SymmetryClass {
    let variation = action_variation(g, l);
    let kind = if variation.is_zero() {
        SymmetryKind::Variational
    } else if candidate.is_some_and(|p| variation.sub(&p.divergence()).is_zero()) {
        SymmetryKind::Divergence
    } else {
        SymmetryKind::None
    };
    let pair = match kind {
        SymmetryKind::Variational => Some(DivergencePair::zero()),
        SymmetryKind::Divergence => candidate.cloned(),
        SymmetryKind::None => None,
    };
    SymmetryClass { kind, pair, variation }
}

/// `(N^t L - B1, N^s L - B2)` for a symmetry with divergence pair `pair`.
pub fn conservation_from_symmetry(
    g: &Generator,
    l: &Lagrangian,
    pair: &DivergencePair,
    case: CaseId,
) -> Result<ConservationLaw> {
    let class = symmetry_class(g, l, Some(pair));
    if class.kind == SymmetryKind::None || (class.kind == SymmetryKind::Variational && !pair.is_zero()) {
        let residual = class.variation.sub(&pair.divergence());
        if !residual.is_zero() {
            return Err(NoetherError::NotASymmetry { label: g.label.clone(), residual: residual.to_string() });
        }
    }
    let (nt, ns) = noether_operators(g, l);
    Ok(ConservationLaw {
        id: format!("noether.{}.{}", case.id(), g.label),
        case,
        label: format!("Noether law of {}", g.label),
        tt: nt.sub(&pair.b1),
        ts: ns.sub(&pair.b2),
        requires_aux: Vec::new(),
        conditions: Vec::new(),
        printed: None,
        note: None,
    })
}

fn system_for(cl: &ConservationLaw, sys: &PdeSystem) -> Result<PdeSystem> {
    let mut out = sys.clone();
    for c in &cl.conditions {
        out = out.with_overrides(c)?;
    }
    Ok(out)
}

/// `D_t Tt + D_s Ts` reduced modulo `sys` under the law's conditions and aux
/// equations; zero iff the law holds.
pub fn verify_conservation_law(cl: &ConservationLaw, sys: &PdeSystem) -> Result<Expr> {
    let s = system_for(cl, sys)?;
    let tags: Vec<&str> = cl.requires_aux.iter().map(String::as_str).collect();
    Ok(s.reduce(&dt(&cl.tt).add(&ds(&cl.ts)), &tags)?)
}

/// Euler operator in `s` alone with respect to the coordinate `dep` with
/// `ot` time derivatives: `sum_k (-D_s)^k d/d(dep_{t^ot s^k})`.
fn s_euler(e: &Expr, dep: &str, ot: u32) -> Expr {
    let top = e.jets().iter().filter(|j| &*j.dep == dep && j.ot == ot).map(|j| j.os).max().unwrap_or(0);
    let mut out = Expr::zero();
    for k in (0..=top).rev() {
        out = e.d_jet(&JetVar::new(dep, ot, k)).sub(&ds(&out));
    }
    out
}

/// Whether `(Tt, Ts)` is a trivial law modulo the system: the reduced
/// density is a total `s`-derivative and the divergence vanishes.
pub fn is_trivial_law(cl: &ConservationLaw, sys: &PdeSystem) -> Result<bool> {
    if !verify_conservation_law(cl, sys)?.is_zero() {
        return Ok(false);
    }
    let s = system_for(cl, sys)?;
    let tags: Vec<&str> = cl.requires_aux.iter().map(String::as_str).collect();
    let density = s.reduce(&cl.tt, &tags)?;
    let coords: BTreeSet<(Sym, u32)> = density.jets().into_iter().map(|j| (j.dep, j.ot)).collect();
    for (dep, ot) in coords {
        if !s.reduce(&s_euler(&density, &dep, ot), &tags)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `a - factor * b` is a trivial law.
pub fn equivalent_laws(a: &ConservationLaw, b: &ConservationLaw, factor: &Expr, sys: &PdeSystem) -> Result<bool> {
    let mut diff = a.with_pair(a.tt.sub(&factor.mul(&b.tt)), a.ts.sub(&factor.mul(&b.ts)));
    for t in &b.requires_aux {
        if !diff.requires_aux.contains(t) {
            diff.requires_aux.push(t.clone());
        }
    }
    diff.conditions.extend(b.conditions.iter().cloned());
    is_trivial_law(&diff, sys)
}

/// Physical system described by the potentials of a variational case.
pub fn physical_case(case: CaseId) -> Option<CaseId> {
    match case {
        CaseId::VariationalH0nz => Some(CaseId::InfiniteSigmaH0nz),
        CaseId::VariationalH0zero | CaseId::VariationalGamma2 => Some(CaseId::InfiniteSigmaH0zeroReduced),
        _ => None,
    }
}

fn potential_map(case: CaseId) -> Bindings {
    let c = corpus_context();
    let mut b = Bindings::new()
        .jet("phi", 0, 0, c.p("x"))
        .jet("phi", 1, 0, c.p("u"))
        .jet("phi", 0, 1, c.p("1/rho"));
    if case == CaseId::VariationalH0nz {
        b = b
            .jet("psi", 0, 0, c.p("y"))
            .jet("psi", 1, 0, c.p("v"))
            .jet("psi", 0, 1, c.p("Hy/(H0*rho)"))
            .jet("chi", 0, 0, c.p("z"))
            .jet("chi", 1, 0, c.p("w"))
            .jet("chi", 0, 1, c.p("Hz/(H0*rho)"));
    }
    b
}

/// Map a condition on the potential profiles `A(s)`, `B(s)` to one on the
/// physical profiles `Fz(s)`, `S(s)`.
fn physical_condition(b: &Bindings) -> Result<Bindings> {
    let c = corpus_context();
    let half = Coeff::from_q(Q::new(1.into(), 2.into()));
    let mut out = Bindings { atoms: b.atoms.clone(), consts: b.consts.clone(), funcs: Default::default() };
    for (name, (params, body)) in &b.funcs {
        let (target, new_body) = match &**name {
            "A" => ("Fz", body.scale_int(2).sub(&c.p("Fy^2")).pow(&half)?),
            "B" => ("S", body.sub(&c.p("(Fy^2 + Fz^2)/2"))),
            other => (other, body.clone()),
        };
        out = out.func(target, params.clone(), new_body);
    }
    Ok(out)
}

/// Rewrite a law in the potentials `phi, psi, chi` in physical variables.
pub fn physicalize(cl: &ConservationLaw) -> Result<ConservationLaw> {
    let Some(target) = physical_case(cl.case) else {
        return Ok(cl.clone());
    };
    if cl.case != CaseId::VariationalH0nz {
        for e in [&cl.tt, &cl.ts] {
            if let Some(j) = e.jets().into_iter().find(|j| &*j.dep == "psi" || &*j.dep == "chi") {
                return Err(NoetherError::NoPhysicalMap(cl.case, j.to_string()));
            }
        }
    }
    if let Some(j) = [&cl.tt, &cl.ts].iter().flat_map(|e| e.jets()).find(|j| j.order() > 1) {
        return Err(NoetherError::NoPhysicalMap(cl.case, j.to_string()));
    }
    let c = corpus_context();
    let mut map = potential_map(cl.case);
    let mut conditions = Vec::new();
    let mut aux = vec!["x".to_string(), "entropy-profile".to_string()];
    match cl.case {
        CaseId::VariationalH0nz => aux.push("yszs".into()),
        CaseId::VariationalH0zero => {
            map = map.func("A", vec![Atom::S], c.p("(Fy^2 + Fz^2)/2"));
            aux.push("field-profile".into());
        }
        _ => {
            map = map.func("B", vec![Atom::S], c.p("S + (Fy^2 + Fz^2)/2"));
            aux.push("field-profile".into());
            conditions.push(Bindings::new().constant("gamma", Expr::int(2)));
        }
    }
    for b in &cl.conditions {
        conditions.push(physical_condition(b)?);
    }
    Ok(ConservationLaw {
        id: format!("{}.physical", cl.id),
        case: target,
        label: cl.label.clone(),
        tt: cl.tt.substitute(&map)?,
        ts: cl.ts.substitute(&map)?,
        requires_aux: aux,
        conditions,
        printed: None,
        note: cl.note.clone(),
    })
}

/// Density and flux in Eulerian coordinates `(t, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerianConservationLaw {
    pub density: Expr,
    pub flux: Expr,
}

pub fn eulerian_form(cl: &ConservationLaw) -> EulerianConservationLaw {
    let rho = Expr::var("rho");
    let density = rho.mul(&cl.tt);
    let flux = Expr::var("u").mul(&density).add(&cl.ts);
    EulerianConservationLaw { density, flux }
}

/// `rho (D_t Tt + D_s Ts) - (D_t^E (rho Tt) + D_x (rho u Tt + Ts))`, with the
/// Eulerian derivatives expressed through `s_x = rho`, `s_t = -rho u`,
/// reduced modulo the system.
pub fn eulerian_identity_residual(cl: &ConservationLaw, sys: &PdeSystem) -> Result<Expr> {
    let s = system_for(cl, sys)?;
    let e = eulerian_form(cl);
    let (rho, u) = (Expr::var("rho"), Expr::var("u"));
    let dt_e = dt(&e.density).sub(&rho.mul(&u).mul(&ds(&e.density)));
    let dx = rho.mul(&ds(&e.flux));
    let lagr = rho.mul(&dt(&cl.tt).add(&ds(&cl.ts)));
    Ok(s.reduce(&lagr.sub(&dt_e).sub(&dx), &[])?)
}

/// One symmetry pushed through the Noether correspondence.
#[derive(Debug, Clone)]
pub struct NoetherReport {
    pub generator: String,
    pub kind: SymmetryKind,
    pub law: Option<ConservationLaw>,
    /// Reduced `D_t Tt + D_s Ts`; `None` when no law was produced.
    pub residual: Option<Expr>,
    pub conserved: bool,
}

fn noether_one(id: &str, g: &Generator, l: &Lagrangian, pair: Option<&DivergencePair>, sys: &PdeSystem) -> Result<NoetherReport> {
    let class = symmetry_class(g, l, pair);
    if class.kind == SymmetryKind::None {
        return Ok(NoetherReport { generator: id.to_string(), kind: class.kind, law: None, residual: None, conserved: false });
    }
    let p = class.pair.clone().unwrap_or_default();
    let mut law = conservation_from_symmetry(g, l, &p, sys.case)?;
    law.id = format!("noether.{}.{}", sys.case.id(), id.rsplit('.').next().unwrap_or(id));
    let r = verify_conservation_law(&law, sys)?;
    Ok(NoetherReport { generator: id.to_string(), kind: class.kind, conserved: r.is_zero(), residual: Some(r), law: Some(law) })
}

/// Noether laws of the published generators of a variational case.
pub fn noether_builtin(case: CaseId) -> Result<Vec<NoetherReport>> {
    noether_builtin_with(case, &Bindings::new())
}

/// As [`noether_builtin`], with arbitrary elements (e.g. the entropy profile)
/// fixed by `overrides` in both the Lagrangian and the system.
pub fn noether_builtin_with(case: CaseId, overrides: &Bindings) -> Result<Vec<NoetherReport>> {
    let base = builtin_lagrangian(case)?;
    let deps: Vec<&str> = base.dependents.iter().map(|d| &**d).collect();
    let l = Lagrangian::new(base.density.substitute(overrides)?, &deps)?;
    let sys = build_system(case, overrides)?;
    builtin_generators(case)
        .par_iter()
        .map(|e| noether_one(&e.id, &e.generator, &l, e.pair.as_ref(), &sys))
        .collect()
}

/// Noether laws for the reference generators of every row of a table of
/// Lagrangian symmetries, each checked on the system with the row's element.
pub fn noether_table(id: TableId) -> Result<Vec<NoetherReport>> {
    if id.check() != RowCheck::Variational {
        return Err(NoetherError::NotVariationalTable(id));
    }
    let case = id.case();
    let base = builtin_lagrangian(case)?;
    let deps: Vec<&str> = base.dependents.iter().map(|d| &**d).collect();
    let mut out = Vec::new();
    for row in table(id) {
        let v = row.reference();
        let l = Lagrangian::new(base.density.substitute(&v.element.bindings)?, &deps)?;
        let sys = build_system(case, &v.element.bindings)?;
        let reports: Vec<NoetherReport> = v
            .generators
            .par_iter()
            .map(|g| noether_one(&format!("{}.{}", row.id, g.label), g, &l, None, &sys))
            .collect::<Result<_>>()?;
        out.extend(reports);
    }
    Ok(out)
}

/// Noether law of a potential-case generator set against a direct law.
#[derive(Debug, Clone)]
pub struct Correspondence {
    pub generator: String,
    pub law: String,
    pub factor: Expr,
    pub equivalent: bool,
}

/// Pairing of the kernel symmetries of the nonzero-`H0` Lagrangian with the
/// directly computed laws of the infinite-conductivity system.
const KERNEL_PAIRING: &[(&str, &str, i64)] = &[
    ("X1", "energy", -1),
    ("X2", "momentum-x", 1),
    ("X3", "momentum-y", 1),
    ("X4", "momentum-z", 1),
    ("X5", "center-x", 1),
    ("X6", "center-y", 1),
    ("X7", "center-z", 1),
    ("X8", "angular", 1),
];

pub fn direct_correspondence() -> Result<Vec<Correspondence>> {
    let case = CaseId::VariationalH0nz;
    let target = physical_case(case).expect("potential case");
    let reports = noether_builtin(case)?;
    let direct = builtin_conservation_laws(target);
    let sys = build_system(target, &Bindings::new())?;
    KERNEL_PAIRING
        .par_iter()
        .map(|&(g, law, k)| {
            let rep = reports.iter().find(|r| r.generator.ends_with(&format!(".{g}"))).expect("kernel generator");
            let noether = rep.law.as_ref().ok_or_else(|| NoetherError::NotASymmetry {
                label: g.to_string(),
                residual: "no divergence pair".into(),
            })?;
            let phys = physicalize(noether)?;
            let d = direct.iter().find(|l| l.short_id() == law).expect("direct law");
            let factor = Expr::int(k);
            Ok(Correspondence {
                generator: g.to_string(),
                law: d.id.clone(),
                equivalent: equivalent_laws(&phys, d, &factor, &sys)?,
                factor,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
