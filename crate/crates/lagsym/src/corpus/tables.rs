use super::generators::{field, lagr_flat_ops, lagr_flat_ops8};
use super::{bind_sigma, corpus_context, CaseId, CorpusError, Result};
use crate::expr::{Atom, Bindings, Context, Expr};
use crate::jet::Generator;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
}

impl TableId {
    pub const ALL: [TableId; 8] =
        [TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5, TableId::T6, TableId::T7, TableId::T8];

    pub fn case(self) -> CaseId {
        match self {
            TableId::T1 => CaseId::FiniteSigmaH0nz,
            TableId::T2 => CaseId::FiniteSigmaH0zeroReduced,
            TableId::T3 | TableId::T4 => CaseId::VariationalH0nz,
            TableId::T5 | TableId::T6 => CaseId::VariationalH0zero,
            TableId::T7 | TableId::T8 => CaseId::VariationalGamma2,
        }
    }

    pub fn check(self) -> RowCheck {
        match self {
            TableId::T4 | TableId::T6 | TableId::T8 => RowCheck::Variational,
            _ => RowCheck::Invariance,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for TableId {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .iter()
            .copied()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| CorpusError::UnknownCase(format!("table {}", s)))
    }
}

pub fn table_ids() -> &'static [TableId] {
    &TableId::ALL
}

/// How a row's generators are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowCheck {
    /// Point symmetry of the PDE system.
    Invariance,
    /// Variational symmetry of the Lagrangian (zero divergence pair).
    Variational,
}

/// A concrete choice of the arbitrary element(s) of a case.
#[derive(Debug, Clone)]
pub struct ArbitraryElement {
    pub text: String,
    pub bindings: Bindings,
}

#[derive(Debug, Clone)]
pub struct Variant {
    pub element: ArbitraryElement,
    pub generators: Vec<Generator>,
}

#[derive(Debug, Clone)]
pub struct TableRow {
    pub id: String,
    pub table: TableId,
    pub row: usize,
    pub condition: Option<String>,
    pub printed: Variant,
    pub corrected: Option<Variant>,
    /// Element violating the row's side condition; checked against the
    /// reference generators.
    pub perturbed: ArbitraryElement,
    pub note: Option<String>,
}

impl TableRow {
    pub fn case(&self) -> CaseId {
        self.table.case()
    }

    pub fn check(&self) -> RowCheck {
        self.table.check()
    }

    /// The corrected variant when present, otherwise the printed one.
    pub fn reference(&self) -> &Variant {
        self.corrected.as_ref().unwrap_or(&self.printed)
    }
}

fn sigma_el(ctx: &Context, text: &str) -> ArbitraryElement {
    ArbitraryElement { text: format!("sigma = {}", text), bindings: bind_sigma(ctx.p(text)) }
}

/// Functions of `s`, given as `(name, body)` pairs.
fn s_el(ctx: &Context, parts: &[(&str, &str)]) -> ArbitraryElement {
    let mut b = Bindings::new();
    let mut text = Vec::new();
    for (name, body) in parts {
        b = b.func(name, vec![Atom::S], ctx.p(body));
        text.push(format!("{} = {}", name, body));
    }
    ArbitraryElement { text: text.join(", "), bindings: b }
}

struct RowBuilder {
    table: TableId,
    rows: Vec<TableRow>,
}

impl RowBuilder {
    fn new(table: TableId) -> Self {
        RowBuilder { table, rows: Vec::new() }
    }

    fn row(&mut self, element: ArbitraryElement, generators: Vec<Generator>, perturbed: ArbitraryElement) -> &mut Self {
        let row = self.rows.len() + 1;
        self.rows.push(TableRow {
            id: format!("table.{}.row{}", self.table, row),
            table: self.table,
            row,
            condition: None,
            printed: Variant { element, generators },
            corrected: None,
            perturbed,
            note: None,
        });
        self
    }

    fn last(&mut self) -> &mut TableRow {
        self.rows.last_mut().expect("row")
    }

    fn cond(&mut self, c: &str) -> &mut Self {
        self.last().condition = Some(c.to_string());
        self
    }

    fn corrected(&mut self, v: Variant, note: &str) -> &mut Self {
        let r = self.last();
        r.corrected = Some(v);
        r.note = Some(note.to_string());
        self
    }

    fn note(&mut self, n: &str) -> &mut Self {
        self.last().note = Some(n.to_string());
        self
    }
}

fn combo(label: &str, basis: &[Generator], parts: &[(&str, usize)]) -> Generator {
    let ctx = corpus_context();
    let ps: Vec<(Expr, &Generator)> = parts.iter().map(|(k, i)| (ctx.p(k), &basis[*i - 1])).collect();
    Generator::combine(label, &ps)
}

const PHI3: &[(&str, &str)] = &[("phi", "phi"), ("psi", "psi"), ("chi", "chi")];

fn scaled3(ctx: &Context, label: &str, t: &str, s: &str, k: &str) -> Generator {
    let mut parts: Vec<(&str, String)> = vec![("t", t.to_string()), ("s", s.to_string())];
    for (d, _) in PHI3 {
        parts.push((d, format!("({})*{}", k, d)));
    }
    let refs: Vec<(&str, &str)> = parts.iter().map(|(a, b)| (*a, b.as_str())).collect();
    field(ctx, label, &refs)
}

/// Rows of a classification table.
pub fn table(id: TableId) -> Vec<TableRow> {
    let mut b = RowBuilder::new(id);
    match id {
        TableId::T1 => {
            let c = corpus_context().function("F", &["p"]);
            let y = lagr_flat_ops();
            let x10 = combo("X10", &y, &[("2*(alpha-1)", 6), ("2*alpha-1", 7)]);
            b.row(sigma_el(&c, "rho^alpha*F"), vec![x10], sigma_el(&c, "rho^(alpha+1)*F"));
        }
        TableId::T2 => {
            let y = lagr_flat_ops8();
            let cp = corpus_context().function("F", &["p"]);
            b.row(sigma_el(&cp, "rho*F"), vec![combo("X6", &y, &[("1", 7)])], sigma_el(&cp, "rho^2*F"));
            b.row(
                sigma_el(&cp, "rho^((2*alpha-1)/(2*(alpha-1)))*F"),
                vec![combo("X6", &y, &[("1", 6), ("alpha", 7)])],
                sigma_el(&cp, "rho^((2*alpha-1)/(2*(alpha-1)) + 1)*F"),
            )
            .cond("alpha != 1");
            let cr = corpus_context().function("F", &["rho*p^(beta-alpha-1)"]);
            b.row(
                sigma_el(&cr, "p^(alpha/2-beta)*F"),
                vec![combo("X6", &y, &[("1", 8), ("alpha", 6), ("beta", 7)])],
                sigma_el(&cr, "p^(alpha/2-beta+1)*F"),
            );
            b.row(
                sigma_el(&cp, "C*rho*p^(-(alpha+2)/2)"),
                vec![combo("X6", &y, &[("1", 8), ("alpha", 6)]), combo("X7", &y, &[("1", 7)])],
                sigma_el(&cp, "C*rho*p^(-(alpha+2)/2 + 1)"),
            );
            b.row(
                sigma_el(&cp, "C*rho^((2*beta-1)/(2*(beta-1)))*p^((alpha-2*beta+1)/(2*(beta-1)))"),
                vec![combo("X6", &y, &[("1", 8), ("alpha", 7)]), combo("X7", &y, &[("1", 6), ("beta", 7)])],
                sigma_el(&cp, "C*rho^((2*beta-1)/(2*(beta-1)) + 1)*p^((alpha-2*beta+1)/(2*(beta-1)))"),
            )
            .cond("beta != 1");
        }
        TableId::T3 => {
            let c = corpus_context();
            b.row(
                s_el(&c, &[("S", "S0")]),
                vec![field(&c, "X9", &[("s", "1")]), scaled3(&c, "X10", "t", "s", "1")],
                s_el(&c, &[("S", "S0*s")]),
            );
            b.row(
                s_el(&c, &[("S", "S0*s^q")]),
                vec![scaled3(&c, "X9", "(2*gamma+q)*t", "2*gamma*s", "2*(gamma+q)")],
                s_el(&c, &[("S", "S0*s^(q+1)")]),
            )
            .cond("q != 0");
            let g = vec![scaled3(&c, "X9", "q*t", "2*gamma", "2*q")];
            b.row(s_el(&c, &[("S", "S0*exp(q*x)")]), g.clone(), s_el(&c, &[("S", "S0*exp((q+1)*s)")]))
                .cond("q != 0")
                .corrected(
                    Variant { element: s_el(&c, &[("S", "S0*exp(q*s)")]), generators: g },
                    "printed with exp(q*x); S depends on s only",
                );
        }
        TableId::T4 => {
            let c = corpus_context();
            b.row(s_el(&c, &[("S", "S0")]), vec![field(&c, "X9", &[("s", "1")])], s_el(&c, &[("S", "S0*s")]));
            b.row(
                s_el(&c, &[("S", "S0*s^(-4*gamma/3)")]),
                vec![scaled3(&c, "X9", "t", "3*s", "-1")],
                s_el(&c, &[("S", "S0*s^(-4*gamma/3 + 1)")]),
            )
            .cond("q = -4*gamma/3");
        }
        TableId::T5 => {
            let c = corpus_context();
            b.row(
                s_el(&c, &[("S", "S0"), ("A", "A0")]),
                vec![field(&c, "X4", &[("s", "1")]), field(&c, "X5", &[("t", "t"), ("s", "s"), ("phi", "phi")])],
                s_el(&c, &[("S", "S0"), ("A", "A0*s")]),
            );
            let el = s_el(&c, &[("S", "S0*s^alpha"), ("A", "A0*s^beta")]);
            let t_coeff = "(2*(gamma-2) + 3*alpha - beta*(gamma+1))*t";
            let printed =
                field(&c, "X4", &[("t", t_coeff), ("s", "2*(gamma-2)*s"), ("phi", "(gamma-2+alpha-beta)*phi")]);
            let fixed =
                field(&c, "X4", &[("t", t_coeff), ("s", "2*(gamma-2)*s"), ("phi", "2*(gamma-2+alpha-beta)*phi")]);
            b.row(el.clone(), vec![printed], s_el(&c, &[("S", "S0*s^alpha"), ("A", "A0*s^(beta+1)")]))
                .cond("alpha^2 + beta^2 != 0")
                .corrected(
                    Variant { element: el, generators: vec![fixed] },
                    "the phi coefficient needs a factor 2 for the scaling weights to balance",
                );
            b.row(
                s_el(&c, &[("S", "S0*exp(kS*s)"), ("A", "A0*exp(q*s)")]),
                vec![field(
                    &c,
                    "X4",
                    &[("t", "(-q*(gamma+1) + 3*kS)*t"), ("s", "2*(gamma-2)"), ("phi", "2*(kS-q)*phi")],
                )],
                s_el(&c, &[("S", "S0*exp(kS*s)"), ("A", "A0*exp((q+1)*s)")]),
            )
            .cond("kS^2 + q^2 != 0")
            .note("the exponent of S is renamed kS; p denotes the pressure");
        }
        TableId::T6 => {
            let c = corpus_context();
            b.row(
                s_el(&c, &[("S", "S0"), ("A", "A0")]),
                vec![field(&c, "X4", &[("s", "1")])],
                s_el(&c, &[("S", "S0"), ("A", "A0*s")]),
            );
            let alpha = "-beta*(gamma-3) - 4*(gamma-2)";
            b.row(
                s_el(&c, &[("S", &format!("S0*s^({})", alpha)), ("A", "A0*s^beta")]),
                vec![field(&c, "X4", &[("t", "(2*beta+5)*t"), ("s", "-s"), ("phi", "(beta+3)*phi")])],
                s_el(&c, &[("S", &format!("S0*s^({} + 1)", alpha)), ("A", "A0*s^beta")]),
            )
            .cond("alpha + beta*(gamma-3) = -4*(gamma-2)");
            b.row(
                s_el(&c, &[("S", "S0*exp(-q*(gamma-3)*s)"), ("A", "A0*exp(q*s)")]),
                vec![field(&c, "X4", &[("t", "2*q*t"), ("s", "-1"), ("phi", "q*phi")])],
                s_el(&c, &[("S", "S0*exp((1-q*(gamma-3))*s)"), ("A", "A0*exp(q*s)")]),
            )
            .cond("kS + q*(gamma-3) = 0")
            .note("the exponent of S is renamed kS; p denotes the pressure");
        }
        TableId::T7 => {
            let c = corpus_context();
            b.row(
                s_el(&c, &[("B", "B0")]),
                vec![field(&c, "X5", &[("s", "1")]), field(&c, "X6", &[("t", "t"), ("s", "s"), ("phi", "phi")])],
                s_el(&c, &[("B", "B0*s")]),
            );
            b.row(
                s_el(&c, &[("B", "B0*s^beta")]),
                vec![field(&c, "X5", &[("t", "(beta+1)*t"), ("s", "-2*s")])],
                s_el(&c, &[("B", "B0*s^(beta+1)")]),
            )
            .cond("beta != 0");
            b.row(
                s_el(&c, &[("B", "B0*exp(q*s)")]),
                vec![field(&c, "X5", &[("t", "q*t"), ("s", "-2")])],
                s_el(&c, &[("B", "B0*exp((q+1)*s)")]),
            )
            .cond("q != 0");
        }
        TableId::T8 => {
            let c = corpus_context();
            b.row(
                s_el(&c, &[("B", "B0")]),
                vec![
                    field(&c, "X4", &[("s", "1")]),
                    field(&c, "X5", &[("t", "5*t"), ("s", "-s"), ("phi", "3*phi")]),
                ],
                s_el(&c, &[("B", "B0*s")]),
            );
            b.row(
                s_el(&c, &[("B", "B0*s^beta")]),
                vec![field(&c, "X4", &[("t", "(2*beta+5)*t"), ("s", "-s"), ("phi", "(beta+3)*phi")])],
                s_el(&c, &[("B", "B0*s^(beta+1)")]),
            )
            .cond("beta != 0");
            b.row(
                s_el(&c, &[("B", "B0*exp(q*s)")]),
                vec![field(&c, "X4", &[("t", "2*q*t"), ("s", "-1"), ("phi", "q*phi")])],
                s_el(&c, &[("B", "B0*exp((q+1)*s)")]),
            )
            .cond("q != 0");
        }
    }
    b.rows
}
