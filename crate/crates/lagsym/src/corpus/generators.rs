use super::{corpus_context, CaseId};
use crate::expr::{Bindings, Context, Expr, Sym};
use crate::jet::{DivergencePair, Generator};
use std::collections::BTreeMap;

/// A transcribed generator with its corpus id.
#[derive(Debug, Clone)]
pub struct GeneratorEntry {
    pub id: String,
    pub generator: Generator,
    /// The form as printed when it differs from `generator`.
    pub printed: Option<Generator>,
    /// Parameter values under which the generator is listed (e.g. gamma = 2).
    pub requires: Bindings,
    /// Divergence pair for Lagrangian symmetries.
    pub pair: Option<DivergencePair>,
    pub note: Option<String>,
}

impl GeneratorEntry {
    pub(super) fn new(id: String, generator: Generator) -> Self {
        GeneratorEntry { id, generator, printed: None, requires: Bindings::new(), pair: None, note: None }
    }
}

/// Build a point generator from `(coordinate, coefficient)` text pairs; the
/// coordinate is `t`, `s` or a dependent name.
pub(crate) fn field(ctx: &Context, label: &str, parts: &[(&str, &str)]) -> Generator {
    let mut xi_t = Expr::zero();
    let mut xi_s = Expr::zero();
    let mut etas: BTreeMap<Sym, Expr> = BTreeMap::new();
    for (k, v) in parts {
        let e = ctx.p(v);
        match *k {
            "t" => xi_t = xi_t.add(&e),
            "s" => xi_s = xi_s.add(&e),
            d => {
                let cur = etas.remove(d).unwrap_or_default();
                etas.insert(Sym::from(d), cur.add(&e));
            }
        }
    }
    Generator::new(label, xi_t, xi_s, etas).unwrap_or_else(|e| panic!("corpus generator {}: {}", label, e))
}

pub(super) fn entries(prefix: &str, ctx: &Context, list: &[(&str, &[(&str, &str)])]) -> Vec<GeneratorEntry> {
    list.iter().map(|(l, parts)| GeneratorEntry::new(format!("gen.{}.{}", prefix, l), field(ctx, l, parts))).collect()
}

pub(super) const ROT_FULL: &[(&str, &str)] = &[
    ("y", "z"),
    ("z", "-y"),
    ("v", "w"),
    ("w", "-v"),
    ("Ey", "Ez"),
    ("Ez", "-Ey"),
    ("Hy", "Hz"),
    ("Hz", "-Hy"),
];
pub(super) const ROT_REDUCED: &[(&str, &str)] = &[("Ey", "Ez"), ("Ez", "-Ey"), ("Hy", "Hz"), ("Hz", "-Hy")];

fn arbf_context() -> Context {
    let args = ["s", "v", "w", "y - t*v", "z - t*w"];
    let mut c = corpus_context();
    for i in 1..=4 {
        c = c.function(&format!("f{}", i), &args);
    }
    c
}

/// Basis of the extended algebra of the finite-conductivity system.
pub fn lagr_flat_ops() -> Vec<Generator> {
    let c = arbf_context();
    vec![
        field(&c, "Y1", &[("t", "1")]),
        field(&c, "Y2", &[("s", "1")]),
        field(&c, "Y3", &[("x", "1")]),
        field(&c, "Y4", &[("x", "t"), ("u", "1")]),
        field(&c, "Y5", ROT_FULL),
        field(&c, "Y6", &[("t", "t"), ("s", "2*s"), ("u", "-u"), ("v", "-v"), ("w", "-w"), ("rho", "2*rho"), ("Ey", "-Ey"), ("Ez", "-Ez")]),
        field(
            &c,
            "Y7",
            &[
                ("s", "-s"),
                ("x", "x"),
                ("y", "y"),
                ("z", "z"),
                ("u", "u"),
                ("v", "v"),
                ("w", "w"),
                ("rho", "-2*rho"),
                ("Ey", "Ey"),
                ("Ez", "Ez"),
            ],
        ),
        field(&c, "Y8", &[("s", "2*s"), ("rho", "2*rho"), ("p", "2*p"), ("Ey", "Ey"), ("Ez", "Ez"), ("Hy", "Hy"), ("Hz", "Hz")]),
        field(&c, "Y9", &[("y", "f1")]),
        field(&c, "Y10", &[("z", "f2")]),
        field(&c, "Y11", &[("y", "t*f3"), ("v", "f3")]),
        field(&c, "Y12", &[("z", "t*f4"), ("w", "f4")]),
    ]
}

/// Truncated basis for the reduced H0 = 0 system.
pub fn lagr_flat_ops8() -> Vec<Generator> {
    let c = corpus_context();
    vec![
        field(&c, "Y1", &[("t", "1")]),
        field(&c, "Y2", &[("s", "1")]),
        field(&c, "Y3", &[("x", "1")]),
        field(&c, "Y4", &[("x", "t"), ("u", "1")]),
        field(&c, "Y5", ROT_REDUCED),
        field(&c, "Y6", &[("t", "t"), ("s", "2*s"), ("u", "-u"), ("rho", "2*rho"), ("Ey", "-Ey"), ("Ez", "-Ez")]),
        field(&c, "Y7", &[("s", "-s"), ("x", "x"), ("u", "u"), ("rho", "-2*rho"), ("Ey", "Ey"), ("Ez", "Ez")]),
        field(&c, "Y8", &[("s", "2*s"), ("rho", "2*rho"), ("p", "2*p"), ("Ey", "Ey"), ("Ez", "Ez"), ("Hy", "Hy"), ("Hz", "Hz")]),
    ]
}

/// Generator with general coefficients `a1..a8` and arbitrary `f1..f4`.
pub fn finite_general_generator() -> Generator {
    let c = arbf_context();
    field(
        &c,
        "X(a)",
        &[
            ("t", "a6*t + a1"),
            ("s", "(2*a6 - a7 + 2*a8)*s + a2"),
            ("x", "a4*t + a7*x + a3"),
            ("y", "f3*t + a7*y - a5*z + f1"),
            ("z", "f4*t + a5*y + a7*z + f2"),
            ("u", "(a7 - a6)*u + a4"),
            ("v", "(a7 - a6)*v - a5*w + f3"),
            ("w", "a5*v + (a7 - a6)*w + f4"),
            ("rho", "2*(a6 - a7 + a8)*rho"),
            ("p", "2*a8*p"),
            ("Ey", "(a7 + a8 - a6)*Ey - a5*Ez"),
            ("Ez", "a5*Ey + (a7 + a8 - a6)*Ez"),
            ("Hy", "a8*Hy - a5*Hz"),
            ("Hz", "a5*Hy + a8*Hz"),
        ],
    )
}

const SCALE3: &[(&str, &str)] = &[("phi", "phi"), ("psi", "psi"), ("chi", "chi")];

/// Basis of the symmetry ansatz for the three-potential PDE system.
pub fn symmetry_form_1() -> Vec<GeneratorEntry> {
    let c = corpus_context();
    let mut out = entries(
        "symmetry_form_1",
        &c,
        &[
            ("Y1", &[("t", "1")]),
            ("Y2", &[("s", "1")]),
            ("Y3", &[("phi", "1")]),
            ("Y4", &[("psi", "1")]),
            ("Y5", &[("chi", "1")]),
            ("Y6", &[("phi", "t")]),
            ("Y7", &[("psi", "t")]),
            ("Y8", &[("chi", "t")]),
            ("Y9", &[("psi", "chi"), ("chi", "-psi")]),
            ("Y10", &[("t", "t")]),
            ("Y11", &[("s", "s")]),
            ("Y12", SCALE3),
        ],
    );
    out[8].printed = Some(field(&c, "Y9", &[("psi", "chi"), ("chi", "-phi")]));
    out[8].note = Some("printed with phi in the second term; the rotation needs psi".into());
    out
}

/// Basis of the symmetry ansatz for the single-potential PDE.
pub fn symmetry_form_2() -> Vec<GeneratorEntry> {
    let c = corpus_context();
    entries(
        "symmetry_form_2",
        &c,
        &[
            ("Y1", &[("t", "1")]),
            ("Y2", &[("s", "1")]),
            ("Y3", &[("phi", "1")]),
            ("Y4", &[("phi", "t")]),
            ("Y5", &[("t", "t")]),
            ("Y6", &[("s", "s")]),
            ("Y7", &[("phi", "phi")]),
        ],
    )
}

fn pair(c: &Context, b1: &str, b2: &str) -> DivergencePair {
    DivergencePair::new(c.p(b1), c.p(b2)).expect("point pair")
}

/// Generator lists published for each case.
pub fn builtin_generators(case: CaseId) -> Vec<GeneratorEntry> {
    match case {
        CaseId::FiniteSigmaH0nz => {
            let c = corpus_context().function("h1", &["s"]).function("h2", &["s"]);
            entries(
                "kern01",
                &c,
                &[
                    ("X1", &[("t", "1")]),
                    ("X2", &[("s", "1")]),
                    ("X3", &[("x", "1")]),
                    ("X4", &[("x", "t"), ("u", "1")]),
                    ("X5", ROT_FULL),
                    ("X6", &[("y", "h1")]),
                    ("X7", &[("z", "h2")]),
                    ("X8", &[("y", "t"), ("v", "1")]),
                    ("X9", &[("z", "t"), ("w", "1")]),
                ],
            )
        }
        CaseId::FiniteSigmaH0zeroReduced => {
            let c = corpus_context();
            entries(
                "kern01a",
                &c,
                &[
                    ("X1", &[("t", "1")]),
                    ("X2", &[("s", "1")]),
                    ("X3", &[("x", "1")]),
                    ("X4", &[("x", "t"), ("u", "1")]),
                    ("X5", ROT_REDUCED),
                ],
            )
        }
        CaseId::FiniteSigmaH0zeroResidual => {
            let c = arbf_context();
            entries(
                "arbf",
                &c,
                &[
                    ("Y9", &[("y", "f1")]),
                    ("Y10", &[("z", "f2")]),
                    ("Y11", &[("y", "t*f3"), ("v", "f3")]),
                    ("Y12", &[("z", "t*f4"), ("w", "f4")]),
                ],
            )
        }
        CaseId::InfiniteSigmaH0nz => {
            let c = corpus_context().function("q1", &["s", "p/rho^gamma"]).function("q2", &["s", "p/rho^gamma"]);
            entries(
                "inf-h0nz",
                &c,
                &[
                    ("X1", &[("t", "1")]),
                    ("X2", &[("s", "1")]),
                    ("X3", &[("x", "1")]),
                    ("X4", &[("x", "t"), ("u", "1")]),
                    ("X5", &[("y", "z"), ("z", "-y"), ("v", "w"), ("w", "-v"), ("Hy", "Hz"), ("Hz", "-Hy")]),
                    ("X6", &[("t", "t"), ("s", "2*s"), ("u", "-u"), ("v", "-v"), ("w", "-w"), ("rho", "2*rho")]),
                    (
                        "X7",
                        &[
                            ("s", "-s"),
                            ("x", "x"),
                            ("y", "y"),
                            ("z", "z"),
                            ("u", "u"),
                            ("v", "v"),
                            ("w", "w"),
                            ("rho", "-2*rho"),
                        ],
                    ),
                    ("X8", &[("y", "q1")]),
                    ("X9", &[("z", "q2")]),
                    ("X10", &[("y", "t"), ("v", "1")]),
                    ("X11", &[("z", "t"), ("w", "1")]),
                ],
            )
        }
        CaseId::InfiniteSigmaH0zeroReduced => {
            let args = ["s", "p/rho^gamma", "Hy/rho", "Hz/rho"];
            let c = corpus_context().function("h1", &args).function("h2", &args);
            let mut out = entries(
                "inf-h0zero",
                &c,
                &[
                    ("X1", &[("t", "1")]),
                    ("X2", &[("s", "1")]),
                    ("X3", &[("x", "1")]),
                    ("X4", &[("x", "t"), ("u", "1")]),
                    ("X5", &[("Hy", "h1*Hz"), ("Hz", "-h1*Hy")]),
                    ("X6", &[("s", "-s"), ("x", "x"), ("u", "u"), ("rho", "-2*rho")]),
                    ("X7", &[("t", "t"), ("s", "2*s"), ("u", "-u"), ("rho", "2*rho")]),
                    ("X8", &[("s", "2*s"), ("rho", "2*rho"), ("p", "2*p"), ("Hy", "Hy"), ("Hz", "Hz")]),
                ],
            );
            out[7].printed = Some(field(&c, "X8", &[("s", "2*s"), ("rho", "2*rho"), ("p", "2*p"), ("Hz", "Hy"), ("Hz", "Hz")]));
            out[7].note = Some("printed with a repeated d/dHz; stored with Hy*d/dHy".into());
            let c2 = c.clone().function("h2", &["s", "p/rho^2", "Hy/rho", "Hz/rho"]);
            let mut x9 = GeneratorEntry::new("gen.inf-h0zero.X9".into(), field(&c2, "X9", &[("Hy", "rho*h2"), ("p", "-rho*h2*Hy")]));
            x9.requires = Bindings::new().constant("gamma", Expr::int(2));
            x9.note = Some("admitted for gamma = 2 only".into());
            out.push(x9);
            out
        }
        CaseId::VariationalH0nz => {
            let c = corpus_context();
            let mut out = entries(
                "var-h0nz",
                &c,
                &[
                    ("X1", &[("t", "1")]),
                    ("X2", &[("phi", "1")]),
                    ("X3", &[("psi", "1")]),
                    ("X4", &[("chi", "1")]),
                    ("X5", &[("phi", "t")]),
                    ("X6", &[("psi", "t")]),
                    ("X7", &[("chi", "t")]),
                    ("X8", &[("psi", "chi"), ("chi", "-psi")]),
                ],
            );
            for e in out.iter_mut() {
                e.pair = Some(DivergencePair::zero());
            }
            out[4].pair = Some(pair(&c, "phi", "0"));
            out[5].pair = Some(pair(&c, "psi", "0"));
            out[5].note = Some("pair printed as (phi, 0); the potential of t*d/dpsi is psi".into());
            out[6].pair = Some(pair(&c, "chi", "0"));
            out
        }
        CaseId::VariationalH0zero | CaseId::VariationalGamma2 => {
            let c = corpus_context();
            let (prefix, list): (&str, &[(&str, &[(&str, &str)])]) = if case == CaseId::VariationalH0zero {
                ("kernel0", &[("X1", &[("t", "1")]), ("X2", &[("phi", "1")]), ("X3", &[("phi", "t")])])
            } else {
                (
                    "kernel1",
                    &[
                        ("X1", &[("t", "1")]),
                        ("X2", &[("phi", "1")]),
                        ("X3", &[("phi", "t")]),
                        ("X4", &[("t", "3*t"), ("phi", "2*phi")]),
                    ],
                )
            };
            let mut out = entries(prefix, &c, list);
            for e in out.iter_mut() {
                e.pair = Some(DivergencePair::zero());
            }
            out[2].pair = Some(pair(&c, "phi", "0"));
            if case == CaseId::VariationalGamma2 {
                out[3].pair = None;
                out[3].note = Some("symmetry of the PDE, not of the Lagrangian".into());
            }
            out
        }
    }
}
