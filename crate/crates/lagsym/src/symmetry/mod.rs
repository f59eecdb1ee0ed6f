//! Admitted-symmetry checks, classifying equations and the Lie-algebra
//! structure of the extended algebra.

mod algebra;

pub use algebra::{
    adjoint_coefficient_map, apply_map, commutator, decompose, equivalence_action_report, is_ideal, is_subalgebra,
    kappa_vector, structure_table, verify_equivalence_action_match, ActionMatch, AdjointMap, StructureTable,
};

use crate::corpus::{
    build_system, builtin_equivalence_generators, builtin_lagrangian, table, CaseId, CorpusError, ElementDecl,
    EquivalenceList, GeneratorEntry, PdeSystem, RowCheck, TableId, TableRow, Variant,
};
use crate::expr::{Atom, Expr, FuncSym, JetVar, Wrt};
use crate::jet::{action_variation, Generator, JetError, Lagrangian, Prolongation};
use rayon::prelude::*;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("generator {label} acts on `{dep}`, which is not a dependent of {case}")]
    ForeignDependent { label: String, dep: String, case: CaseId },
    #[error("[{0}, {1}] is not in the span of the basis")]
    NotClosed(String, String),
    #[error("no closed form for the inner automorphism of basis element {0}")]
    NoClosedForm(usize),
    #[error("basis index {0} out of range")]
    BadIndex(usize),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

pub type Result<T> = std::result::Result<T, SymmetryError>;

/// Outcome of checking one generator against one system.
#[derive(Debug, Clone)]
pub struct ClassifyingReport {
    pub generator: String,
    pub case: CaseId,
    /// One residual per system equation, in rule order.
    pub residuals: Vec<Expr>,
    pub admitted: bool,
    /// Nonzero residuals with the label of their equation.
    pub conditions: Vec<(String, Expr)>,
}

impl ClassifyingReport {
    fn new(generator: &str, case: CaseId, labels: &[String], residuals: Vec<Expr>) -> Self {
        let conditions: Vec<(String, Expr)> =
            labels.iter().zip(&residuals).filter(|(_, r)| !r.is_zero()).map(|(l, r)| (l.clone(), r.clone())).collect();
        ClassifyingReport { generator: generator.to_string(), case, admitted: conditions.is_empty(), residuals, conditions }
    }
}

fn check_dependents(g: &Generator, sys: &PdeSystem, extra: &[&str]) -> Result<()> {
    for d in g.etas.keys() {
        if !sys.dependents.iter().any(|x| x == d) && !extra.contains(&&**d) {
            return Err(SymmetryError::ForeignDependent { label: g.label.clone(), dep: d.to_string(), case: sys.case });
        }
    }
    Ok(())
}

/// `X(F)` reduced modulo the system, one entry per equation `lead - rhs`.
pub fn invariance_residuals(g: &Generator, sys: &PdeSystem) -> Result<Vec<Expr>> {
    check_dependents(g, sys, &[])?;
    let pr = Prolongation::new(g);
    let applied: Vec<Expr> = sys.rules.iter().map(|r| pr.apply(&r.equation())).collect();
    Ok(sys.reduce_all(&applied, &[])?)
}

pub fn check_generator(g: &Generator, sys: &PdeSystem) -> Result<ClassifyingReport> {
    let residuals = invariance_residuals(g, sys)?;
    let labels: Vec<String> = sys.rules.iter().map(|r| r.label.clone()).collect();
    Ok(ClassifyingReport::new(&g.label, sys.case, &labels, residuals))
}

/// Check every generator; results keep the input order.
pub fn check_generators(gs: &[Generator], sys: &PdeSystem) -> Result<Vec<ClassifyingReport>> {
    gs.par_iter().map(|g| check_generator(g, sys)).collect()
}

/// Reports for the published generator list of a case, each checked under
/// the parameter values it requires.
pub fn check_builtin(case: CaseId, entries: &[GeneratorEntry]) -> Result<Vec<ClassifyingReport>> {
    let base = build_system(case, &Default::default())?;
    entries
        .par_iter()
        .map(|e| {
            let sys = if e.requires.is_empty() { base.clone() } else { base.with_overrides(&e.requires)? };
            let mut r = check_generator(&e.generator, &sys)?;
            r.generator = e.id.clone();
            Ok(r)
        })
        .collect()
}

/// Whether the element enters the classifying equations with `H0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H0Mode {
    Zero,
    Nonzero,
}

/// Classifying equations of the finite-conductivity system evaluated on
/// the coefficients `a5..a8` (and `f1..f4`, zero when absent) of the
/// general generator, for a conductivity `sigma(rho, p)`.
pub fn classifying_residuals(coeffs: &BTreeMap<&str, Expr>, sigma: &Expr, mode: H0Mode) -> Vec<Expr> {
    let get = |k: &str| coeffs.get(k).cloned().unwrap_or_default();
    let (a5, a6, a7, a8) = (get("a5"), get("a6"), get("a7"), get("a8"));
    let (rho, p) = (Expr::var("rho"), Expr::var("p"));
    let s_rho = sigma.partial(&Wrt::jet("rho", 0, 0));
    let s_p = sigma.partial(&Wrt::jet("p", 0, 0));
    let main = a6
        .sub(&a7)
        .add(&a8)
        .scale_int(2)
        .mul(&rho)
        .mul(&s_rho)
        .add(&a8.scale_int(2).mul(&p).mul(&s_p))
        .sub(&a6.sub(&a7.scale_int(2)).mul(sigma));
    if mode == H0Mode::Zero {
        return vec![main];
    }
    let (t, y, z, v, w) = (Expr::t(), Expr::var("y"), Expr::var("z"), Expr::var("v"), Expr::var("w"));
    let k = a7.sub(&a6);
    let eta_y = get("f3").mul(&t).add(&a7.mul(&y)).sub(&a5.mul(&z)).add(&get("f1"));
    let eta_z = get("f4").mul(&t).add(&a5.mul(&y)).add(&a7.mul(&z)).add(&get("f2"));
    let eta_v = k.mul(&v).sub(&a5.mul(&w)).add(&get("f3"));
    let eta_w = a5.mul(&v).add(&k.mul(&w)).add(&get("f4"));
    let d = |e: &Expr, x: &str| if x == "s" { e.partial(&Wrt::Atom(Atom::S)) } else { e.partial(&Wrt::jet(x, 0, 0)) };
    let h0 = Expr::constant("H0");
    let mut out = vec![main, h0.mul(&a8)];
    let rest = [
        d(&eta_y, "v"),
        d(&eta_y, "w"),
        d(&eta_z, "v"),
        d(&eta_z, "w"),
        d(&eta_v, "s"),
        d(&eta_v, "y"),
        d(&eta_v, "z"),
        d(&eta_v, "v").sub(&k),
        d(&eta_v, "w").add(&a5),
        d(&eta_w, "s"),
        d(&eta_w, "y"),
        d(&eta_w, "z"),
        d(&eta_w, "v").sub(&a5),
        d(&eta_w, "w").sub(&k),
    ];
    out.extend(rest.iter().map(|e| h0.mul(e)));
    out
}

/// Prolongation extended to the arbitrary elements of an equivalence list:
/// an element `E(y1..yk)` and its partials are coordinates with their own
/// variations.
struct ExtendedProlongation<'a> {
    g: &'a Generator,
    base: Prolongation<'a>,
    elements: &'a [ElementDecl],
    cache: RefCell<HashMap<(String, Vec<u32>), Expr>>,
}

fn coord_coeff(g: &Generator, a: &Atom) -> Expr {
    match a {
        Atom::T => g.xi_t.clone(),
        Atom::S => g.xi_s.clone(),
        Atom::Jet(j) if j.order() == 0 => g.eta(&j.dep),
        _ => Expr::zero(),
    }
}

fn d_coord(e: &Expr, a: &Atom) -> Expr {
    e.partial(&Wrt::Atom(a.clone()))
}

impl<'a> ExtendedProlongation<'a> {
    fn new(g: &'a Generator, elements: &'a [ElementDecl]) -> Self {
        ExtendedProlongation { g, base: Prolongation::new(g), elements, cache: Default::default() }
    }

    fn decl(&self, f: &FuncSym) -> Option<&ElementDecl> {
        self.elements.iter().find(|d| d.name == f.name && !d.is_constant() && f.args.len() == d.args.len())
    }

    fn element_atom(d: &ElementDecl, derivs: Vec<u32>) -> Expr {
        let args = d.args.iter().map(|a| Expr::atom(a.clone())).collect();
        Expr::func_deriv(&d.name, args, derivs)
    }

    /// zeta_{n+e_i} = D_i zeta_n - sum_j E_{n+e_j} D_i zeta^{y_j}
    fn element_coeff(&self, d: &ElementDecl, n: &[u32]) -> Expr {
        let key = (d.name.to_string(), n.to_vec());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let v = match n.iter().position(|k| *k > 0) {
            None => self.g.eta(&d.name),
            Some(i) => {
                let mut parent = n.to_vec();
                parent[i] -= 1;
                let yi = &d.args[i];
                let mut out = d_coord(&self.element_coeff(d, &parent), yi);
                for (j, yj) in d.args.iter().enumerate() {
                    let mut m = parent.clone();
                    m[j] += 1;
                    out = out.sub(&Self::element_atom(d, m).mul(&d_coord(&coord_coeff(self.g, yj), yi)));
                }
                out
            }
        };
        self.cache.borrow_mut().insert(key, v.clone());
        v
    }

    fn apply(&self, e: &Expr) -> Expr {
        let mut out = e.derive_with(
            &|a| match a {
                Atom::Func(f) => self.decl(f).map(|d| self.element_coeff(d, &f.derivs)),
                Atom::T | Atom::S | Atom::Jet(_) => Some(match a {
                    Atom::Jet(j) => self.base.coeff(j),
                    _ => coord_coeff(self.g, a),
                }),
                _ => None,
            },
            None,
        );
        for d in self.elements.iter().filter(|d| d.is_constant()) {
            let z = self.g.eta(&d.name);
            if !z.is_zero() {
                out.add_assign(&z.mul(&e.partial(&Wrt::Const(d.name.clone()))));
            }
        }
        out
    }

    /// Variations of the vanishing partials of each element with respect
    /// to the coordinates it does not depend on.
    fn side_conditions(&self, coords: &[Atom]) -> Vec<(String, Expr)> {
        let mut out = Vec::new();
        for d in self.elements {
            let zeta = self.g.eta(&d.name);
            for z in coords.iter().filter(|z| !d.args.contains(z)) {
                let mut r = d_coord(&zeta, z);
                for (j, yj) in d.args.iter().enumerate() {
                    let mut m = vec![0; d.args.len()];
                    m[j] = 1;
                    r = r.sub(&Self::element_atom(d, m).mul(&d_coord(&coord_coeff(self.g, yj), z)));
                }
                out.push((format!("d{}/d{}", d.name, z), r));
            }
            for c in self.elements.iter().filter(|c| c.is_constant() && c.name != d.name) {
                out.push((format!("d{}/d{}", d.name, c.name), zeta.partial(&Wrt::Const(c.name.clone()))));
            }
        }
        out
    }
}

/// Equivalence-generator check: invariance of the system on the space
/// extended by the arbitrary elements, plus the side conditions that keep
/// each element a function of its declared arguments only.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub id: String,
    pub residuals: Vec<Expr>,
    pub side_conditions: Vec<(String, Expr)>,
    pub admitted: bool,
}

pub fn equivalence_residuals(entry: &GeneratorEntry, list: &EquivalenceList, sys: &PdeSystem) -> Result<EquivalenceReport> {
    let g = &entry.generator;
    let extra: Vec<&str> = list.elements.iter().map(|d| &*d.name).collect();
    check_dependents(g, sys, &extra)?;
    let pr = ExtendedProlongation::new(g, &list.elements);
    let applied: Vec<Expr> = sys.rules.iter().map(|r| pr.apply(&r.equation())).collect();
    let residuals = sys.reduce_all(&applied, &[])?;
    let mut coords = vec![Atom::T, Atom::S];
    coords.extend(sys.dependents.iter().map(|d| Atom::Jet(JetVar::new(d, 0, 0))));
    let side: Vec<(String, Expr)> = pr.side_conditions(&coords).into_iter().filter(|(_, r)| !r.is_zero()).collect();
    let admitted = residuals.iter().all(|r| r.is_zero()) && side.is_empty();
    Ok(EquivalenceReport { id: entry.id.clone(), residuals, side_conditions: side, admitted })
}

pub fn verify_equivalence_list(case: CaseId) -> Result<Vec<EquivalenceReport>> {
    let list = builtin_equivalence_generators(case);
    let sys = list.system()?;
    list.generators.par_iter().map(|e| equivalence_residuals(e, &list, &sys)).collect()
}

/// Per-generator outcome of one table variant.
#[derive(Debug, Clone)]
pub struct VariantOutcome {
    pub element: String,
    pub reports: Vec<ClassifyingReport>,
    pub admitted: bool,
}

#[derive(Debug, Clone)]
pub struct RowReport {
    pub id: String,
    pub row: usize,
    pub printed: VariantOutcome,
    pub corrected: Option<VariantOutcome>,
    /// The perturbed element fails for at least one reference generator.
    pub perturbed_rejected: bool,
    pub pass: bool,
    pub note: Option<String>,
}

fn variational_report(g: &Generator, l: &Lagrangian, case: CaseId) -> ClassifyingReport {
    let r = action_variation(g, l);
    ClassifyingReport::new(&g.label, case, &["XL + L div(xi)".to_string()], vec![r])
}

fn run_variant(case: CaseId, check: RowCheck, element: &crate::corpus::ArbitraryElement, gens: &[Generator]) -> Result<VariantOutcome> {
    let reports: Vec<ClassifyingReport> = match check {
        RowCheck::Invariance => {
            let sys = build_system(case, &element.bindings)?;
            check_generators(gens, &sys)?
        }
        RowCheck::Variational => {
            let base = builtin_lagrangian(case)?;
            let density = base.density.substitute(&element.bindings).map_err(CorpusError::from)?;
            let deps: Vec<&str> = base.dependents.iter().map(|d| &**d).collect();
            let l = Lagrangian::new(density, &deps)?;
            gens.par_iter().map(|g| variational_report(g, &l, case)).collect()
        }
    };
    let admitted = reports.iter().all(|r| r.admitted);
    Ok(VariantOutcome { element: element.text.clone(), reports, admitted })
}

fn verify_row(row: &TableRow) -> Result<RowReport> {
    let (case, check) = (row.case(), row.check());
    let run = |v: &Variant| run_variant(case, check, &v.element, &v.generators);
    let printed = run(&row.printed)?;
    let corrected = row.corrected.as_ref().map(run).transpose()?;
    let perturbed = run_variant(case, check, &row.perturbed, &row.reference().generators)?;
    let ok = printed.admitted || corrected.as_ref().is_some_and(|c| c.admitted);
    Ok(RowReport {
        id: row.id.clone(),
        row: row.row,
        perturbed_rejected: !perturbed.admitted,
        pass: ok && !perturbed.admitted,
        printed,
        corrected,
        note: row.note.clone(),
    })
}

/// Check every row of a classification table.
pub fn verify_table(id: TableId) -> Result<Vec<RowReport>> {
    table(id).par_iter().map(verify_row).collect()
}

#[cfg(test)]
mod tests;
