use super::poly::{fmt_q, CPoly, Coeff};
use super::{Atom, Expr, JetVar, Mono};
use num_traits::{One, Signed};

pub fn render(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().enumerate() {
        let (neg, body) = render_term(m, c);
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

pub fn render_jet(j: &JetVar) -> String {
    if j.ot == 0 && j.os == 0 {
        return j.dep.to_string();
    }
    format!("{}_{}{}", j.dep, "t".repeat(j.ot as usize), "s".repeat(j.os as usize))
}

fn simple_ident(e: &Expr) -> Option<String> {
    match e.as_atom()? {
        Atom::T => Some("t".into()),
        Atom::S => Some("s".into()),
        Atom::Jet(j) if j.ot == 0 && j.os == 0 => Some(j.dep.to_string()),
        _ => None,
    }
}

pub fn render_atom(a: &Atom) -> String {
    match a {
        Atom::T => "t".into(),
        Atom::S => "s".into(),
        Atom::Jet(j) => render_jet(j),
        Atom::Func(f) => {
            let mut name = f.name.to_string();
            if f.args.len() == 1 {
                name.push_str(&"'".repeat(f.derivs[0] as usize));
            } else {
                for (k, n) in f.derivs.iter().enumerate() {
                    let slot = simple_ident(&f.args[k]).unwrap_or_else(|| (k + 1).to_string());
                    for _ in 0..*n {
                        name.push('_');
                        name.push_str(&slot);
                    }
                }
            }
            let args: Vec<String> = f.args.iter().map(render).collect();
            format!("{}({})", name, args.join(", "))
        }
        Atom::Exp(m) => format!("exp({})", render(&Expr::from_mono(m.clone()))),
        Atom::Log(x) => format!("log({})", render(x)),
        Atom::Pow(x) => format!("({})", render(x)),
    }
}

fn render_exponent(e: &Coeff) -> String {
    if e.is_polynomial() {
        let p = e.num();
        if let Some(c) = p.as_constant() {
            if c.is_integer() && !c.is_negative() {
                return fmt_q(&c);
            }
            return format!("({})", fmt_q(&c));
        }
        if p.0.len() == 1 {
            let (m, c) = p.0.iter().next().unwrap();
            if c.is_one() && m.0.len() == 1 && m.0[0].1 == 1 {
                return m.0[0].0.to_string();
            }
        }
        return format!("({})", p);
    }
    format!("(({})/({}))", e.num(), e.den())
}

fn factor(a: &Atom, e: &Coeff) -> String {
    if let Atom::Exp(m) = a {
        return format!("exp({})", render(&Expr::term(e.clone(), m.clone())));
    }
    let base = render_atom(a);
    if e.is_one() {
        return base;
    }
    format!("{}^{}", base, render_exponent(e))
}

fn cpoly_factor(p: &CPoly) -> String {
    if p.0.len() == 1 {
        let (m, c) = p.0.iter().next().unwrap();
        if c.is_one() && m.0.len() == 1 {
            return p.to_string();
        }
    }
    format!("({})", p)
}

fn render_term(m: &Mono, c: &Coeff) -> (bool, String) {
    let mut neg = false;
    let mut numer: Vec<String> = Vec::new();
    let mut denom: Vec<String> = Vec::new();
    let num = c.num();
    if num.0.len() == 1 {
        let (cm, qv) = num.0.iter().next().unwrap();
        neg = qv.is_negative();
        let a = qv.abs();
        if !a.is_one() {
            numer.push(fmt_q(&a));
        }
        for (n, e) in &cm.0 {
            if *e == 1 {
                numer.push(n.to_string());
            } else {
                numer.push(format!("{}^{}", n, e));
            }
        }
    } else {
        numer.push(format!("({})", num));
    }
    if !c.den().is_one() {
        denom.push(cpoly_factor(c.den()));
    }
    for (a, e) in &m.0 {
        if !matches!(a, Atom::Exp(_)) && e.looks_negative() {
            denom.push(factor(a, &e.neg()));
        } else {
            numer.push(factor(a, e));
        }
    }
    let mut s = if numer.is_empty() { "1".to_string() } else { numer.join("*") };
    for d in denom {
        s.push('/');
        s.push_str(&d);
    }
    (neg, s)
}
