#![allow(dead_code)]

use lagsym::corpus::CaseId;
use lagsym::expr::Bindings;
use lagsym::jet::Generator;
use lagsym_sim::SimConfig;

/// Smooth periodic data used across the numeric tests.
pub fn smooth(case: CaseId, cells: usize, sigma: &str) -> SimConfig {
    let mut c = SimConfig::new(case, cells, 0.1);
    c.scheme.sigma = sigma.into();
    c.initial.rho = "1 + 0.1*sin(2*pi*s)".into();
    c.initial.p = "1 + 0.1*cos(2*pi*s)".into();
    c.initial.u = "0.05*sin(4*pi*s)".into();
    c.initial.hy = "0.2 + 0.1*cos(2*pi*s)".into();
    c.initial.hz = "0.1*sin(2*pi*s)".into();
    c.stride = 10;
    if case.h0_nonzero() {
        c.scheme.h0 = 0.5;
        c.initial.v = "0.05*cos(2*pi*s)".into();
    }
    c
}

pub fn monitors(c: &mut SimConfig, laws: &[&str]) {
    c.monitors = laws.iter().map(|s| s.to_string()).collect();
}

pub fn substitute(g: &Generator, b: &Bindings) -> Generator {
    let sub = |e: &lagsym::expr::Expr| e.substitute(b).expect("substitution");
    Generator::new(&g.label, sub(&g.xi_t), sub(&g.xi_s), g.etas.iter().map(|(k, v)| (k.clone(), sub(v))).collect())
        .expect("point generator")
}
