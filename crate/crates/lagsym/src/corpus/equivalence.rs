use super::generators::{field, GeneratorEntry, ROT_FULL, ROT_REDUCED};
use super::{build_system, corpus_context, CaseId, PdeSystem, Result};
use crate::expr::{Atom, Bindings, Context, Expr, Sym};
use crate::jet::Generator;

/// An arbitrary element promoted to a coordinate of the extended space.
/// `args` lists the coordinates it depends on; empty for a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementDecl {
    pub name: Sym,
    pub args: Vec<Atom>,
}

impl ElementDecl {
    fn func(name: &str, args: Vec<Atom>) -> Self {
        ElementDecl { name: Sym::from(name), args }
    }

    fn constant(name: &str) -> Self {
        ElementDecl { name: Sym::from(name), args: Vec::new() }
    }

    pub fn is_constant(&self) -> bool {
        self.args.is_empty()
    }
}

/// Published equivalence generators of one case together with the
/// arbitrary elements they act on.
#[derive(Debug, Clone)]
pub struct EquivalenceList {
    pub case: CaseId,
    pub elements: Vec<ElementDecl>,
    pub generators: Vec<GeneratorEntry>,
}

impl EquivalenceList {
    /// The system whose arbitrary elements are left symbolic.
    pub fn system(&self) -> Result<PdeSystem> {
        equivalence_system(self.case)
    }

    pub fn element(&self, name: &str) -> Option<&ElementDecl> {
        self.elements.iter().find(|e| &*e.name == name)
    }
}

/// System on which the equivalence generators of `case` act.
pub fn equivalence_system(case: CaseId) -> Result<PdeSystem> {
    build_system(case, &Bindings::new())
}

fn rho_p() -> Vec<Atom> {
    vec![Atom::jet("rho", 0, 0), Atom::jet("p", 0, 0)]
}

fn list(case: CaseId, ctx: &Context, items: &[(&str, &[(&str, &str)])]) -> Vec<GeneratorEntry> {
    items
        .iter()
        .map(|(l, parts)| GeneratorEntry::new(format!("equiv.{}.{}", case.id(), l), field(ctx, l, parts)))
        .collect()
}

fn fix_gamma2(g: &Generator) -> Generator {
    let b = Bindings::new().constant("gamma", Expr::int(2));
    let sub = |e: &Expr| e.substitute(&b).expect("polynomial in gamma");
    Generator {
        xi_t: sub(&g.xi_t),
        xi_s: sub(&g.xi_s),
        etas: g.etas.iter().map(|(k, v)| (k.clone(), sub(v))).filter(|(_, v)| !v.is_zero()).collect(),
        label: g.label.clone(),
    }
}

/// Equivalence generators listed for `case`; cases without a published
/// list return an empty generator sequence.
pub fn builtin_equivalence_generators(case: CaseId) -> EquivalenceList {
    let (elements, generators) = match case {
        CaseId::FiniteSigmaH0nz => {
            let c = corpus_context().function("h1", &["s"]).function("h2", &["s"]);
            let gens = list(
                case,
                &c,
                &[
                    ("Xe1", &[("t", "1")]),
                    ("Xe2", &[("s", "1")]),
                    ("Xe3", &[("x", "1")]),
                    ("Xe4", &[("x", "t"), ("u", "1")]),
                    ("Xe5", ROT_FULL),
                    (
                        "Xe6",
                        &[
                            ("t", "t"),
                            ("s", "2*s"),
                            ("v", "-v"),
                            ("u", "-u"),
                            ("w", "-w"),
                            ("rho", "2*rho"),
                            ("Ey", "-Ey"),
                            ("Ez", "-Ez"),
                            ("sigma", "sigma"),
                        ],
                    ),
                    (
                        "Xe7",
                        &[
                            ("s", "-s"),
                            ("x", "x"),
                            ("y", "y"),
                            ("z", "z"),
                            ("v", "v"),
                            ("u", "u"),
                            ("w", "w"),
                            ("rho", "-2*rho"),
                            ("Ey", "Ey"),
                            ("Ez", "Ez"),
                            ("sigma", "-2*sigma"),
                        ],
                    ),
                    (
                        "Xe8",
                        &[
                            ("s", "2*s"),
                            ("rho", "2*rho"),
                            ("p", "2*p"),
                            ("Ey", "Ey"),
                            ("Ez", "Ez"),
                            ("Hy", "Hy"),
                            ("Hz", "Hz"),
                            ("H0", "H0"),
                        ],
                    ),
                    ("Xe9", &[("y", "h1")]),
                    ("Xe10", &[("z", "h2")]),
                    ("Xe11", &[("y", "t"), ("v", "1")]),
                    ("Xe12", &[("z", "t"), ("w", "1")]),
                ],
            );
            (vec![ElementDecl::func("sigma", rho_p()), ElementDecl::constant("H0")], gens)
        }
        CaseId::FiniteSigmaH0zeroReduced => {
            let c = corpus_context();
            let gens = list(
                case,
                &c,
                &[
                    ("Xe1", &[("t", "1")]),
                    ("Xe2", &[("s", "1")]),
                    ("Xe3", &[("x", "1")]),
                    ("Xe4", &[("x", "t"), ("u", "1")]),
                    ("Xe5", ROT_REDUCED),
                    (
                        "Xe6",
                        &[
                            ("t", "t"),
                            ("s", "2*s"),
                            ("u", "-u"),
                            ("rho", "2*rho"),
                            ("Ey", "-Ey"),
                            ("Ez", "-Ez"),
                            ("sigma", "sigma"),
                        ],
                    ),
                    (
                        "Xe7",
                        &[
                            ("s", "-s"),
                            ("x", "x"),
                            ("u", "u"),
                            ("rho", "-2*rho"),
                            ("Ey", "Ey"),
                            ("Ez", "Ez"),
                            ("sigma", "-2*sigma"),
                        ],
                    ),
                    (
                        "Xe8",
                        &[("s", "2*s"), ("rho", "2*rho"), ("p", "2*p"), ("Ey", "Ey"), ("Ez", "Ez"), ("Hy", "Hy"), ("Hz", "Hz")],
                    ),
                ],
            );
            (vec![ElementDecl::func("sigma", rho_p())], gens)
        }
        CaseId::InfiniteSigmaH0nz => {
            let c = corpus_context().function("q1", &["s", "p/rho^gamma"]).function("q2", &["s", "p/rho^gamma"]);
            let gens = list(
                case,
                &c,
                &[
                    ("Xe1", &[("t", "1")]),
                    ("Xe2", &[("s", "1")]),
                    ("Xe3", &[("x", "1")]),
                    ("Xe4", &[("x", "t"), ("u", "1")]),
                    ("Xe5", &[("y", "z"), ("z", "-y"), ("v", "w"), ("w", "-v"), ("Hy", "Hz"), ("Hz", "-Hy")]),
                    ("Xe6", &[("t", "t"), ("s", "2*s"), ("u", "-u"), ("v", "-v"), ("w", "-w"), ("rho", "2*rho")]),
                    (
                        "Xe7",
                        &[("s", "-s"), ("x", "x"), ("y", "y"), ("z", "z"), ("u", "u"), ("v", "v"), ("w", "w"), ("rho", "-2*rho")],
                    ),
                    ("Xe8", &[("s", "2*s"), ("p", "2*p"), ("rho", "2*rho"), ("Hy", "Hy"), ("Hz", "Hz"), ("H0", "H0")]),
                    ("Xe9", &[("y", "q1")]),
                    ("Xe10", &[("z", "q2")]),
                    ("Xe11", &[("y", "t"), ("v", "1")]),
                    ("Xe12", &[("z", "t"), ("w", "1")]),
                ],
            );
            (vec![ElementDecl::constant("H0")], gens)
        }
        CaseId::VariationalH0nz => {
            let c = corpus_context();
            let mut gens = list(
                case,
                &c,
                &[
                    ("Xe1", &[("t", "1")]),
                    ("Xe2", &[("s", "1")]),
                    ("Xe3", &[("phi", "1")]),
                    ("Xe4", &[("psi", "1")]),
                    ("Xe5", &[("chi", "1")]),
                    ("Xe6", &[("phi", "t")]),
                    ("Xe7", &[("psi", "t")]),
                    ("Xe8", &[("chi", "t")]),
                    ("Xe9", &[("psi", "chi"), ("chi", "-psi")]),
                    ("Xe10", &[("t", "t"), ("s", "s"), ("phi", "phi"), ("psi", "psi"), ("chi", "chi")]),
                    ("Xe11", &[("t", "t"), ("s", "2*s"), ("S", "-2*gamma*S")]),
                    ("Xe12", &[("t", "(1-gamma)*t"), ("s", "2*s"), ("H0", "gamma*H0")]),
                ],
            );
            gens[8].printed = Some(field(&c, "Xe9", &[("psi", "chi"), ("chi", "-phi")]));
            gens[8].note = Some("printed with phi in the second term; the rotation needs psi".into());
            (vec![ElementDecl::func("S", vec![Atom::S]), ElementDecl::constant("H0")], gens)
        }
        CaseId::VariationalH0zero => {
            let c = corpus_context();
            let gens = list(
                case,
                &c,
                &[
                    ("Xe1", &[("t", "1")]),
                    ("Xe2", &[("s", "1")]),
                    ("Xe3", &[("phi", "1")]),
                    ("Xe4", &[("phi", "t")]),
                    ("Xe5", &[("t", "t"), ("s", "s"), ("phi", "phi")]),
                    ("Xe6", &[("t", "t"), ("s", "-2*s"), ("S", "2*(gamma-2)*S")]),
                    ("Xe7", &[("t", "(1-gamma)*t"), ("s", "2*s"), ("A", "2*(gamma-2)*A")]),
                ],
            );
            (vec![ElementDecl::func("S", vec![Atom::S]), ElementDecl::func("A", vec![Atom::S])], gens)
        }
        CaseId::VariationalGamma2 => {
            let c = corpus_context();
            let mut gens = list(
                case,
                &c,
                &[
                    ("Xe1", &[("t", "1")]),
                    ("Xe2", &[("s", "1")]),
                    ("Xe3", &[("phi", "1")]),
                    ("Xe4", &[("phi", "t")]),
                    ("Xe5", &[("t", "(1-gamma)*t"), ("s", "2*s")]),
                    ("Xe6", &[("t", "t"), ("s", "s"), ("phi", "phi")]),
                    ("Xe7", &[("t", "t"), ("B", "-2*B")]),
                ],
            );
            let printed = gens[4].generator.clone();
            gens[4].generator = fix_gamma2(&printed);
            gens[4].printed = Some(printed);
            gens[4].note = Some("printed with symbolic gamma; evaluated at gamma = 2".into());
            (vec![ElementDecl::func("B", vec![Atom::S])], gens)
        }
        CaseId::FiniteSigmaH0zeroResidual | CaseId::InfiniteSigmaH0zeroReduced => (Vec::new(), Vec::new()),
    };
    EquivalenceList { case, elements, generators }
}
