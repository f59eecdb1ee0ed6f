mod common;

use common::{monitors, smooth};
use lagsym::corpus::{builtin_conservation_laws, CaseId};
use lagsym::expr::{JetVar, NumEnv};
use lagsym_sim::*;
use std::collections::BTreeMap;

#[test]
fn constant_state_is_a_fixed_point() {
    let mut cfg = SimConfig::new(CaseId::FiniteSigmaH0nz, 16, 1.0);
    cfg.scheme.h0 = 0.7;
    cfg.initial.rho = "1.3".into();
    cfg.initial.u = "0.2".into();
    cfg.initial.p = "0.8".into();
    cfg.initial.hy = "0.3".into();
    cfg.initial.hz = "-0.1".into();
    cfg.initial.v = "0.05".into();
    let model = Model::new(&cfg.scheme, &cfg).unwrap();
    let s0 = init_state(&cfg).unwrap();
    let mut st = s0.clone();
    for _ in 0..10_000 {
        st = model.step(&st, 1e-3).unwrap().0;
    }
    for (a, b) in [(&st.tau, &s0.tau), (&st.p, &s0.p), (&st.by, &s0.by), (&st.bz, &s0.bz), (&st.u, &s0.u), (&st.v, &s0.v)] {
        assert_eq!(a, b);
    }
}

#[test]
fn constant_config_has_zero_drift() {
    let mut cfg = SimConfig::new(CaseId::InfiniteSigmaH0zeroReduced, 8, 0.5);
    cfg.scheme.sigma = "infinite".into();
    cfg.initial.hy = "0.4".into();
    monitors(&mut cfg, &["mass", "momentum-x", "flux-y", "energy", "entropy"]);
    let r = run(&cfg).unwrap();
    assert!(r.monitors.iter().all(|m| m.drift == 0.0), "{:?}", r.monitors);
}

fn flux_form_drifts(cfg: &SimConfig) -> (usize, Vec<(String, f64)>) {
    let t = integrate(cfg, cfg.cells).unwrap();
    (t.steps, t.monitors.iter().map(|m| (m.law.clone(), m.drift)).collect())
}

#[test]
fn flux_form_totals_are_exact_with_infinite_conductivity() {
    let mut cfg = smooth(CaseId::InfiniteSigmaH0nz, 400, "infinite");
    cfg.t_final = 0.7;
    monitors(&mut cfg, &["mass", "momentum-x", "momentum-y", "momentum-z", "flux-y", "flux-z"]);
    let (steps, drifts) = flux_form_drifts(&cfg);
    assert!(steps >= 900, "{steps}");
    for (law, d) in drifts {
        assert!(d <= 1e-12 * (steps as f64 / 1e3).max(1.0), "{law}: {d:e}");
    }
}

#[test]
fn flux_form_totals_are_exact_with_finite_conductivity() {
    let mut cfg = smooth(CaseId::FiniteSigmaH0zeroReduced, 200, "rho");
    cfg.t_final = 2e-2;
    monitors(&mut cfg, &["mass", "momentum-x", "flux-y", "flux-z"]);
    let (steps, drifts) = flux_form_drifts(&cfg);
    assert!(steps >= 900, "{steps}");
    for (law, d) in drifts {
        assert!(d <= 1e-12 * (steps as f64 / 1e3).max(1.0), "{law}: {d:e}");
    }
}

#[test]
fn mass_total_is_the_physical_length() {
    let cfg = smooth(CaseId::FiniteSigmaH0nz, 32, "rho");
    let st = init_state(&cfg).unwrap();
    let model = Model::new(&cfg.scheme, &cfg).unwrap();
    let totals = monitor_totals(&st, &model, &[LawId::Mass]).unwrap();
    let direct: f64 = (0..32).map(|i| st.ds / st.rho(i)).sum();
    assert!((totals[0].1 - direct).abs() < 1e-15);
    assert!((st.length() - direct).abs() < 1e-15);
    assert!((st.x[31] - direct).abs() < 1e-14);
}

struct Cell(BTreeMap<&'static str, f64>);

impl NumEnv for Cell {
    fn jet(&self, j: &JetVar) -> Option<f64> {
        if j.ot + j.os > 0 {
            return None;
        }
        self.0.get(&*j.dep).copied()
    }
    fn constant(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }
}

#[test]
fn energy_total_matches_law_density() {
    let cfg = smooth(CaseId::FiniteSigmaH0nz, 64, "rho");
    let st = init_state(&cfg).unwrap();
    let model = Model::new(&cfg.scheme, &cfg).unwrap();
    let law = builtin_conservation_laws(CaseId::FiniteSigmaH0nz).into_iter().find(|l| l.short_id() == "energy").unwrap();
    let n = st.n();
    let mut total = 0.0;
    for i in 0..n {
        let uc = 0.5 * (st.u[(i + n - 1) % n] + st.u[i]);
        let env = Cell(BTreeMap::from([
            ("rho", st.rho(i)),
            ("u", uc),
            ("v", st.v[i]),
            ("w", st.w[i]),
            ("p", st.p[i]),
            ("Hy", st.hy(i)),
            ("Hz", st.hz(i)),
            ("gamma", cfg.scheme.gamma),
            ("H0", cfg.scheme.h0),
        ]));
        total += law.tt.eval_f64(&env).unwrap() * st.ds;
    }
    let grid = monitor_totals(&st, &model, &[LawId::Energy]).unwrap()[0].1;
    assert!((grid - total).abs() < 1e-4 * total.abs(), "{grid} vs {total}");
}

#[test]
fn angular_momentum_is_constant_without_normal_field() {
    let mut cfg = smooth(CaseId::InfiniteSigmaH0zeroReduced, 64, "infinite");
    cfg.initial.v = "0.1*cos(2*pi*s)".into();
    cfg.initial.w = "0.2 + 0.1*sin(2*pi*s)".into();
    cfg.track_yz = true;
    monitors(&mut cfg, &["angular", "center-y", "center-z"]);
    let r = run(&cfg).unwrap();
    for m in &r.monitors {
        assert!(m.drift < 1e-14, "{}: {:e}", m.law, m.drift);
    }
}
