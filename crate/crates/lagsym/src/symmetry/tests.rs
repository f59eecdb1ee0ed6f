use super::*;
use crate::corpus::{
    bind_sigma, builtin_generators, corpus_context, extension_subalgebras, lagr_flat_ops, lagr_flat_ops8,
    published_commutators, symmetry_form_1, table_ids,
};
use crate::expr::Coeff;
use proptest::prelude::*;

fn sys(case: CaseId) -> PdeSystem {
    build_system(case, &Default::default()).unwrap()
}

fn q(n: i64) -> Coeff {
    Coeff::from_int(n)
}

#[test]
fn builtin_generators_are_admitted() {
    for case in CaseId::ALL {
        let entries = builtin_generators(case);
        assert!(!entries.is_empty(), "{case}");
        for r in check_builtin(case, &entries).unwrap() {
            assert!(r.admitted, "{} {}: {:?}", case, r.generator, r.conditions);
        }
    }
}

#[test]
fn printed_generator_variants_fail() {
    let mut seen = 0;
    for case in CaseId::ALL {
        let s = sys(case);
        for e in builtin_generators(case) {
            let Some(p) = &e.printed else { continue };
            seen += 1;
            let r = check_generator(p, &s).unwrap();
            assert!(!r.admitted, "{} printed form should fail", e.id);
        }
    }
    assert_eq!(seen, 1);
    let y9 = &symmetry_form_1()[8];
    let s = sys(CaseId::VariationalH0nz);
    assert!(check_generator(&y9.generator, &s).unwrap().admitted);
    assert!(!check_generator(y9.printed.as_ref().unwrap(), &s).unwrap().admitted);
}

#[test]
fn scaling_alone_is_not_admitted_for_arbitrary_sigma() {
    let s = sys(CaseId::FiniteSigmaH0zeroReduced);
    let y6 = &lagr_flat_ops8()[5];
    let r = check_generator(y6, &s).unwrap();
    assert!(!r.admitted);
    assert!(!r.conditions.is_empty());
}

#[test]
fn scaling_combination_for_power_conductivity() {
    let c = corpus_context();
    let s = build_system(CaseId::FiniteSigmaH0zeroReduced, &bind_sigma(c.p("rho^alpha*exp(p)"))).unwrap();
    let ops = lagr_flat_ops8();
    let alpha = c.p("alpha");
    let x = Generator::combine(
        "X",
        &[(alpha.sub(&Expr::one()).scale_int(2), &ops[5]), (alpha.scale_int(2).sub(&Expr::one()), &ops[6])],
    );
    assert!(check_generator(&x, &s).unwrap().admitted);
    let wrong = Generator::combine("W", &[(Expr::one(), &ops[5]), (Expr::one(), &ops[6])]);
    assert!(!check_generator(&wrong, &s).unwrap().admitted);
}

#[test]
fn foreign_dependent_is_an_error() {
    let s = sys(CaseId::VariationalH0zero);
    let g = lagr_flat_ops8()[2].clone();
    assert!(matches!(check_generator(&g, &s), Err(SymmetryError::ForeignDependent { .. })));
}

#[test]
fn tables_pass_with_reported_variants() {
    let mut corrected = Vec::new();
    for &t in table_ids() {
        for r in verify_table(t).unwrap() {
            assert!(r.pass, "{}", r.id);
            assert!(r.perturbed_rejected, "{}", r.id);
            if let Some(c) = &r.corrected {
                assert!(c.admitted);
                assert!(!r.printed.admitted);
                corrected.push(r.id.clone());
            }
        }
    }
    assert_eq!(corrected, ["table.T3.row3", "table.T5.row2"]);
}

#[test]
fn equivalence_lists_are_admitted() {
    for case in CaseId::ALL {
        for r in verify_equivalence_list(case).unwrap() {
            assert!(r.admitted, "{}: {:?} {:?}", r.id, r.residuals, r.side_conditions);
        }
    }
}

#[test]
fn equivalence_check_rejects_wrong_element_action() {
    let case = CaseId::FiniteSigmaH0zeroReduced;
    let list = builtin_equivalence_generators(case);
    let s = list.system().unwrap();
    let mut e = list.generators[5].clone();
    let sigma = e.generator.eta("sigma");
    e.generator.etas.insert("sigma".into(), sigma.scale_int(3));
    let r = equivalence_residuals(&e, &list, &s).unwrap();
    assert!(!r.admitted);
}

#[test]
fn commutator_examples() {
    let ops = lagr_flat_ops8();
    let c16 = commutator(&ops[0], &ops[5]);
    assert_eq!(decompose(&c16, &ops).unwrap(), vec![q(1), q(0), q(0), q(0), q(0), q(0), q(0), q(0)]);
    let c28 = commutator(&ops[1], &ops[7]);
    assert_eq!(decompose(&c28, &ops).unwrap()[1], q(2));
    let c46 = commutator(&ops[3], &ops[5]);
    assert_eq!(decompose(&c46, &ops).unwrap()[3], q(-1));
    assert!(commutator(&ops[0], &ops[0]).is_zero());
}

#[test]
fn decompose_outside_span() {
    let ops = lagr_flat_ops8();
    assert!(decompose(&ops[7], &ops[..7]).is_none());
    let two = ops[0].scale(&Expr::int(2));
    assert_eq!(decompose(&two, &ops[..1]).unwrap(), vec![q(2)]);
}

#[test]
fn structure_table_matches_published() {
    let t = structure_table(&lagr_flat_ops8()).unwrap();
    assert!(t.mismatches(&published_commutators()).is_empty());
    assert!(t.is_antisymmetric());
    assert!(t.jacobi_holds());
}

#[test]
fn structure_table_detects_a_changed_entry() {
    let t = structure_table(&lagr_flat_ops8()).unwrap();
    let mut published = published_commutators();
    published[0][5][0] = 2;
    assert_eq!(t.mismatches(&published), vec![(1, 6)]);
}

#[test]
fn kernel_is_an_ideal() {
    let ops = lagr_flat_ops8();
    assert!(is_ideal(&ops[..5], &ops));
    assert!(is_subalgebra(&ops));
    assert!(!is_ideal(&ops[5..6], &ops));
    let full = lagr_flat_ops();
    assert!(is_subalgebra(&full[..8]));
    assert!(matches!(structure_table(&full), Err(SymmetryError::NotClosed(..))));
}

#[test]
fn extension_subalgebras_close() {
    let subs = extension_subalgebras();
    assert_eq!(subs.len(), 7);
    for (name, gens) in subs {
        assert!(is_subalgebra(&gens), "{name}");
    }
}

#[test]
fn adjoint_maps() {
    let t = structure_table(&lagr_flat_ops8()).unwrap();
    let a = Expr::constant("a");
    let k = kappa_vector(8);
    let m1 = apply_map(&adjoint_coefficient_map(&t, 1, &a).unwrap(), &k);
    assert_eq!(m1[0], k[0].sub(&a.mul(&k[5])));
    assert_eq!(m1[1], k[1]);
    let m6 = apply_map(&adjoint_coefficient_map(&t, 6, &a).unwrap(), &k);
    assert_eq!(m6[1], a.scale_int(2).exp().mul(&k[1]));
    let zero = adjoint_coefficient_map(&t, 4, &Expr::zero()).unwrap();
    assert_eq!(apply_map(&zero, &k), k);
    assert!(matches!(adjoint_coefficient_map(&t, 9, &a), Err(SymmetryError::BadIndex(9))));
}

#[test]
fn adjoint_group_property() {
    let t = structure_table(&lagr_flat_ops8()).unwrap();
    let (a, b) = (Expr::constant("a"), Expr::constant("k9"));
    let k = kappa_vector(8);
    for j in [1, 4, 7] {
        let ma = adjoint_coefficient_map(&t, j, &a).unwrap();
        let mb = adjoint_coefficient_map(&t, j, &b).unwrap();
        let mab = adjoint_coefficient_map(&t, j, &a.add(&b)).unwrap();
        assert_eq!(apply_map(&ma, &apply_map(&mb, &k)), apply_map(&mab, &k), "j = {j}");
    }
}

#[test]
fn equivalence_action_coincides() {
    let report = equivalence_action_report().unwrap();
    assert_eq!(report.len(), 7);
    for m in &report {
        assert!(m.inner_ok && m.equivalence_ok && m.generator_route_ok, "index {}", m.index);
    }
    assert!(verify_equivalence_action_match().unwrap());
}

#[test]
fn classifying_equations() {
    let c = corpus_context();
    let sigma = c.p("rho^alpha*exp(p)");
    let mut coeffs = BTreeMap::new();
    coeffs.insert("a6", c.p("2*alpha - 2"));
    coeffs.insert("a7", c.p("2*alpha - 1"));
    let r = classifying_residuals(&coeffs, &sigma, H0Mode::Zero);
    assert!(r.iter().all(Expr::is_zero));
    coeffs.insert("a8", Expr::one());
    let r = classifying_residuals(&coeffs, &sigma, H0Mode::Zero);
    assert_eq!(r.len(), 1);
    assert!(!r[0].is_zero());

    let mut c2 = BTreeMap::new();
    c2.insert("a5", Expr::one());
    let rs = classifying_residuals(&c2, &c.p("sigma(rho, p)"), H0Mode::Nonzero);
    assert_eq!(rs.len(), 16);
    assert!(rs.iter().all(Expr::is_zero));
    c2.insert("a8", Expr::one());
    let rs = classifying_residuals(&c2, &c.p("rho"), H0Mode::Nonzero);
    assert!(!rs[1].is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residuals_are_linear(c1 in -4i64..5, c2 in -4i64..5, i in 0usize..8, j in 0usize..8) {
        let s = sys(CaseId::FiniteSigmaH0zeroReduced);
        let ops = lagr_flat_ops8();
        let (e1, e2) = (Expr::int(c1), Expr::int(c2));
        let g = Generator::combine("G", &[(e1.clone(), &ops[i]), (e2.clone(), &ops[j])]);
        let r = invariance_residuals(&g, &s).unwrap();
        let r1 = invariance_residuals(&ops[i], &s).unwrap();
        let r2 = invariance_residuals(&ops[j], &s).unwrap();
        for ((x, y), z) in r.iter().zip(&r1).zip(&r2) {
            prop_assert_eq!(x, &e1.mul(y).add(&e2.mul(z)));
        }
    }

    #[test]
    fn commutator_is_antisymmetric(i in 0usize..8, j in 0usize..8) {
        let ops = lagr_flat_ops8();
        let a = commutator(&ops[i], &ops[j]);
        let b = commutator(&ops[j], &ops[i]);
        prop_assert!(a.add(&b).is_zero());
    }
}
