use super::*;
use crate::jet::euler_operator;

fn law_residual(law: &ConservationLaw) -> Expr {
    let mut sys = build_system(law.case, &Bindings::new()).unwrap();
    for c in &law.conditions {
        sys = sys.with_overrides(c).unwrap();
    }
    let tags: Vec<&str> = law.requires_aux.iter().map(|s| s.as_str()).collect();
    let e = dt(&law.tt).add(&ds(&law.ts));
    sys.reduce(&e, &tags).unwrap()
}

#[test]
fn every_builtin_law_is_conserved() {
    for case in CaseId::ALL {
        for law in builtin_conservation_laws(case) {
            let r = law_residual(&law);
            assert!(r.is_zero(), "{}: residual {}", law.id, r);
        }
    }
}

#[test]
fn printed_variants_of_corrected_laws_fail() {
    let mut seen = 0;
    for case in CaseId::ALL {
        for law in builtin_conservation_laws(case) {
            if let Some((tt, ts)) = &law.printed {
                seen += 1;
                assert!(!law_residual(&law.with_pair(tt.clone(), ts.clone())).is_zero(), "{}", law.id);
            }
        }
    }
    assert_eq!(seen, 3);
}

#[test]
fn perturbed_laws_fail() {
    let ctx = corpus_context();
    for case in CaseId::ALL {
        for law in builtin_conservation_laws(case) {
            let bumped = law.with_pair(law.tt.add(&ctx.p("rho_s + phi_s*t + v*s")), law.ts.clone());
            assert!(!law_residual(&bumped).is_zero(), "{}", law.id);
        }
    }
}

#[test]
fn extension_law_needs_sigma_equal_rho() {
    let law = builtin_conservation_laws(CaseId::FiniteSigmaH0zeroReduced)
        .into_iter()
        .find(|l| l.short_id() == "ext-sHz")
        .unwrap();
    let ctx = corpus_context();
    let mut off = law.clone();
    off.conditions = vec![bind_sigma(ctx.p("2*rho"))];
    let r = law_residual(&off);
    assert_eq!(r, ctx.p("1/2*Hz_s"));
}

#[test]
fn rule_counts() {
    let n = |c: CaseId| build_system(c, &Bindings::new()).unwrap().evolution_rules().count();
    assert_eq!(n(CaseId::FiniteSigmaH0nz), 10);
    assert_eq!(n(CaseId::FiniteSigmaH0zeroReduced), 6);
    assert_eq!(n(CaseId::InfiniteSigmaH0nz), 10);
    assert_eq!(n(CaseId::InfiniteSigmaH0zeroReduced), 6);
    assert_eq!(n(CaseId::VariationalGamma2), 1);
    assert_eq!(n(CaseId::VariationalH0nz), 3);
}

#[test]
fn systems_are_oriented() {
    for case in CaseId::ALL {
        let sys = build_system(case, &Bindings::new()).unwrap();
        assert!(sys.orientation_violations().is_empty(), "{}: {:?}", case, sys.orientation_violations());
    }
}

#[test]
fn reduction_examples() {
    let sys = build_system(CaseId::FiniteSigmaH0nz, &Bindings::new()).unwrap();
    let c = &sys.ctx;
    assert!(sys.reduce(&c.p("rho_t + rho^2*u_s"), &[]).unwrap().is_zero());
    assert_eq!(sys.reduce(&c.p("u_t"), &[]).unwrap(), c.p("-p_s - Hy*Hy_s - Hz*Hz_s"));
    assert_eq!(sys.reduce(&c.p("u_s"), &[]).unwrap(), c.p("u_s"));
    let e = c.p("Hy_ts*u + p_t^2");
    let once = sys.reduce(&e, &[]).unwrap();
    assert_eq!(sys.reduce(&once, &[]).unwrap(), once);
}

#[test]
fn missing_aux_is_reported() {
    let sys = build_system(CaseId::VariationalH0zero, &Bindings::new()).unwrap();
    assert!(matches!(sys.reduce(&Expr::one(), &["yszs"]), Err(CorpusError::MissingAux { .. })));
}

#[test]
fn euler_lagrange_reproduces_systems() {
    for case in [CaseId::VariationalH0nz, CaseId::VariationalH0zero, CaseId::VariationalGamma2] {
        let l = builtin_lagrangian(case).unwrap();
        let sys = build_system(case, &Bindings::new()).unwrap();
        for r in &sys.rules {
            let el = euler_operator(&l, &r.lead.dep).unwrap();
            assert!(el.add(&r.equation()).is_zero(), "{} {}", case, r.label);
        }
    }
    assert!(matches!(builtin_lagrangian(CaseId::FiniteSigmaH0nz), Err(CorpusError::NotVariational(_))));
}

#[test]
fn override_consistency() {
    let ctx = corpus_context();
    let h0 = Bindings::new().constant("H0", Expr::one());
    assert!(build_system(CaseId::FiniteSigmaH0zeroReduced, &h0).is_err());
    assert!(build_system(CaseId::FiniteSigmaH0nz, &h0).is_ok());
    let g2 = Bindings::new().constant("gamma", Expr::int(2));
    assert!(build_system(CaseId::VariationalH0zero, &g2).is_err());
    assert!(build_system(CaseId::InfiniteSigmaH0nz, &bind_sigma(ctx.p("rho"))).is_err());
    let sys = build_system(CaseId::FiniteSigmaH0nz, &parse_override(&ctx, "sigma=rho").unwrap()).unwrap();
    assert!(sys.rules.iter().all(|r| !format!("{}", r.rhs).contains("sigma")));
}

#[test]
fn energy_forms_differ_by_mass() {
    let laws = builtin_conservation_laws(CaseId::FiniteSigmaH0nz);
    let get = |n: &str| laws.iter().find(|l| l.short_id() == n).unwrap().clone();
    let (e, m) = (get("energy"), get("mass"));
    let (vt, vs) = energy_vector_form();
    let h = corpus_context().p("H0^2/2");
    assert_eq!(vt.sub(&e.tt), m.tt.mul(&h));
    assert_eq!(vs.sub(&e.ts), m.ts.mul(&h));
}

#[test]
fn list_sizes() {
    let n = |c| builtin_generators(c).len();
    assert_eq!(n(CaseId::FiniteSigmaH0nz), 9);
    assert_eq!(n(CaseId::FiniteSigmaH0zeroReduced), 5);
    let sizes: Vec<usize> = CaseId::ALL.iter().map(|c| builtin_equivalence_generators(*c).generators.len()).collect();
    assert_eq!(sizes, vec![12, 8, 0, 12, 0, 12, 7, 7]);
    let rows: Vec<usize> = table_ids().iter().map(|t| table(*t).len()).collect();
    assert_eq!(rows, vec![1, 5, 3, 2, 3, 3, 3, 3]);
    assert_eq!(builtin_conservation_laws(CaseId::FiniteSigmaH0nz).len(), 10);
}

#[test]
fn case_ids_round_trip() {
    for c in CaseId::ALL {
        assert_eq!(c.id().parse::<CaseId>().unwrap(), c);
    }
    assert!("nope".parse::<CaseId>().is_err());
}
