mod common;

use common::{monitors, smooth};
use lagsym::corpus::CaseId;
use lagsym_sim::*;

fn base() -> SimConfig {
    smooth(CaseId::FiniteSigmaH0zeroReduced, 16, "rho")
}

#[test]
fn density_with_zero_crossing_is_rejected() {
    let mut cfg = base();
    cfg.initial.rho = "sin(2*pi*s)".into();
    assert!(matches!(init_state(&cfg), Err(SimError::NonPositive { ref field, .. }) if field == "rho"));
    cfg.initial.rho = "1".into();
    cfg.initial.p = "cos(2*pi*s)".into();
    assert!(matches!(init_state(&cfg), Err(SimError::NonPositive { ref field, .. }) if field == "p"));
}

#[test]
fn non_periodic_profile_is_rejected() {
    let mut cfg = base();
    cfg.initial.u = "s".into();
    assert_eq!(init_state(&cfg), Err(SimError::NonPeriodic("u".into())));
}

#[test]
fn profile_must_depend_on_s_only() {
    let mut cfg = base();
    cfg.initial.hy = "t*s".into();
    assert!(matches!(init_state(&cfg), Err(SimError::Expr(..))));
}

#[test]
fn unknown_and_untracked_laws() {
    let mut cfg = base();
    monitors(&mut cfg, &["momentum-w"]);
    assert_eq!(run(&cfg).unwrap_err(), SimError::UnknownLaw("momentum-w".into()));
    monitors(&mut cfg, &["angular"]);
    assert!(matches!(run(&cfg), Err(SimError::UntrackedField { .. })));
    let mut inf = smooth(CaseId::InfiniteSigmaH0zeroReduced, 16, "infinite");
    monitors(&mut inf, &["ext-sHz"]);
    assert!(matches!(run(&inf), Err(SimError::UntrackedField { .. })));
}

#[test]
fn invalid_configurations() {
    let cases: Vec<Box<dyn Fn(&mut SimConfig)>> = vec![
        Box::new(|c| c.cells = 7),
        Box::new(|c| c.scheme.cfl = 1.2),
        Box::new(|c| c.scheme.time_order = 3),
        Box::new(|c| c.scheme.gamma = 1.0),
        Box::new(|c| c.scheme.sigma = "infinite".into()),
        Box::new(|c| c.scheme.h0 = 0.3),
        Box::new(|c| c.case = "var-h0nz".into()),
        Box::new(|c| c.case = "no-such-case".into()),
        Box::new(|c| c.stride = 0),
    ];
    for f in cases {
        let mut c = base();
        f(&mut c);
        assert!(matches!(c.validate(), Err(SimError::Config(_))), "{c:?}");
    }
    assert!(base().validate().is_ok());
}

#[test]
fn json_config_round_trip_and_unknown_fields() {
    let c = base();
    let text = serde_json::to_string(&c).unwrap();
    assert_eq!(SimConfig::from_json(&text).unwrap(), c);
    let bad = text.replacen("\"cells\"", "\"cellz\": 3, \"cells\"", 1);
    assert!(matches!(SimConfig::from_json(&bad), Err(SimError::Config(_))));
    let minimal = r#"{"case": "finite-h0zero", "cells": 8, "t_final": 0.01}"#;
    let m = SimConfig::from_json(minimal).unwrap();
    assert_eq!(m.scheme.sigma, "rho");
    assert_eq!(m.initial.rho, "1");
}

#[test]
fn blow_up_is_reported() {
    let mut cfg = base();
    cfg.initial.u = "5*sin(2*pi*s)".into();
    cfg.scheme.sigma = "1000*rho".into();
    cfg.t_final = 1.0;
    cfg.scheme.cfl = 0.9;
    cfg.scheme.time_order = 1;
    assert!(matches!(run(&cfg), Err(SimError::BlowUp { .. })));
}
