use super::*;
use crate::corpus::bind_sigma;
use proptest::prelude::*;

fn ctx() -> crate::expr::Context {
    corpus_context()
}

fn gen(case: CaseId, short: &str) -> crate::corpus::GeneratorEntry {
    builtin_generators(case).into_iter().find(|e| e.id.ends_with(&format!(".{short}"))).unwrap()
}

fn law(case: CaseId, short: &str) -> ConservationLaw {
    builtin_conservation_laws(case).into_iter().find(|l| l.short_id() == short).unwrap()
}

fn sys(case: CaseId) -> PdeSystem {
    build_system(case, &Bindings::new()).unwrap()
}

fn s_translation() -> Generator {
    Generator::new("Ds", Expr::zero(), Expr::one(), Default::default()).unwrap()
}

#[test]
fn classification_examples() {
    let c = ctx();
    let l = builtin_lagrangian(CaseId::VariationalH0nz).unwrap();
    let x5 = gen(CaseId::VariationalH0nz, "X5");
    let pair = DivergencePair::new(c.p("phi"), Expr::zero()).unwrap();
    assert_eq!(symmetry_class(&x5.generator, &l, Some(&pair)).kind, SymmetryKind::Divergence);
    assert_eq!(symmetry_class(&x5.generator, &l, None).kind, SymmetryKind::None);

    let l0 = builtin_lagrangian(CaseId::VariationalH0zero).unwrap();
    let x1 = gen(CaseId::VariationalH0zero, "X1");
    let cl = symmetry_class(&x1.generator, &l0, None);
    assert_eq!(cl.kind, SymmetryKind::Variational);
    assert_eq!(cl.pair, Some(DivergencePair::zero()));

    let ds_class = symmetry_class(&s_translation(), &l0, None);
    assert_eq!(ds_class.kind, SymmetryKind::None);
    let expected = Expr::func_deriv("S", vec![Expr::s()], vec![1])
        .mul(&c.p("phi_s^(1-gamma)/(gamma-1)"))
        .add(&Expr::func_deriv("A", vec![Expr::s()], vec![1]).mul(&c.p("1/phi_s")))
        .neg();
    assert_eq!(ds_class.variation, expected);
}

#[test]
fn non_symmetry_is_an_error() {
    let l = builtin_lagrangian(CaseId::VariationalH0zero).unwrap();
    let r = conservation_from_symmetry(&s_translation(), &l, &DivergencePair::zero(), CaseId::VariationalH0zero);
    assert!(matches!(r, Err(NoetherError::NotASymmetry { .. })));
    let x1 = gen(CaseId::VariationalH0zero, "X1");
    let bogus = DivergencePair::new(ctx().p("phi"), Expr::zero()).unwrap();
    assert!(conservation_from_symmetry(&x1.generator, &l, &bogus, CaseId::VariationalH0zero).is_err());
}

#[test]
fn rotation_gives_angular_momentum() {
    let c = ctx();
    let l = builtin_lagrangian(CaseId::VariationalH0nz).unwrap();
    let x8 = gen(CaseId::VariationalH0nz, "X8");
    let cl = conservation_from_symmetry(&x8.generator, &l, &DivergencePair::zero(), CaseId::VariationalH0nz).unwrap();
    assert_eq!(cl.tt, c.p("chi*psi_t - psi*chi_t"));
    assert_eq!(cl.ts, c.p("-H0^2*(chi*psi_s - psi*chi_s)/phi_s"));
    let phys = physicalize(&cl).unwrap();
    assert_eq!(phys.case, CaseId::InfiniteSigmaH0nz);
    assert_eq!(phys.tt, c.p("z*v - y*w"));
    assert_eq!(phys.ts, c.p("H0*(y*Hz - z*Hy)"));
    assert!(verify_conservation_law(&phys, &sys(CaseId::InfiniteSigmaH0nz)).unwrap().is_zero());
}

#[test]
fn time_translation_gives_energy() {
    let c = ctx();
    let l = builtin_lagrangian(CaseId::VariationalH0nz).unwrap();
    let x1 = gen(CaseId::VariationalH0nz, "X1");
    let cl = conservation_from_symmetry(&x1.generator, &l, &DivergencePair::zero(), CaseId::VariationalH0nz).unwrap();
    let phys = physicalize(&cl).unwrap();
    assert_eq!(phys.tt.neg(), c.p("1/2*(u^2 + v^2 + w^2) + S*rho^(gamma-1)/(gamma-1) + (Hy^2 + Hz^2)/(2*rho)"));
}

#[test]
fn s_translation_for_constant_b() {
    let c = ctx();
    let case = CaseId::VariationalGamma2;
    let b0 = crate::corpus::bind_fn_of_s("B", c.p("B0"));
    let l = builtin_lagrangian(case).unwrap();
    let l = Lagrangian::new(l.density.substitute(&b0).unwrap(), &["phi"]).unwrap();
    let cl = conservation_from_symmetry(&s_translation(), &l, &DivergencePair::zero(), case).unwrap();
    assert_eq!(cl.tt.neg(), c.p("phi_s*phi_t"));
    assert_eq!(cl.ts.neg(), c.p("-1/2*phi_t^2 + 2*B0/phi_s"));
    let direct = law(case, "s-translation");
    assert!(equivalent_laws(&cl, &direct, &Expr::int(-1), &sys(case)).unwrap());
    assert!(!equivalent_laws(&cl, &direct, &Expr::int(1), &sys(case)).unwrap());
}

#[test]
fn verification_examples() {
    let c = ctx();
    let fin = sys(CaseId::FiniteSigmaH0nz);
    assert!(verify_conservation_law(&law(CaseId::FiniteSigmaH0nz, "energy"), &fin).unwrap().is_zero());

    let ext = law(CaseId::FiniteSigmaH0zeroReduced, "ext-sHz");
    let red = sys(CaseId::FiniteSigmaH0zeroReduced);
    assert!(verify_conservation_law(&ext, &red).unwrap().is_zero());
    let mut off = ext.clone();
    off.conditions = vec![bind_sigma(c.p("2*rho"))];
    assert_eq!(verify_conservation_law(&off, &red).unwrap(), c.p("1/2*Hz_s"));

    let bare = law(CaseId::FiniteSigmaH0nz, "momentum-x").with_pair(c.p("u"), Expr::zero());
    assert_eq!(verify_conservation_law(&bare, &fin).unwrap(), c.p("-(p_s + Hy*Hy_s + Hz*Hz_s)"));
}

#[test]
fn missing_aux_is_an_error() {
    let l = law(CaseId::InfiniteSigmaH0nz, "angular");
    let r = verify_conservation_law(&l, &sys(CaseId::FiniteSigmaH0nz));
    assert!(matches!(r, Err(NoetherError::Corpus(CorpusError::MissingAux { .. }))));
}

#[test]
fn physicalize_rules() {
    let c = ctx();
    let m = law(CaseId::FiniteSigmaH0nz, "mass");
    let same = physicalize(&m).unwrap();
    assert_eq!((same.tt, same.ts), (m.tt.clone(), m.ts.clone()));

    let mut bad = law(CaseId::VariationalH0zero, "s-translation");
    bad.tt = c.p("psi_t");
    assert!(matches!(physicalize(&bad), Err(NoetherError::NoPhysicalMap(..))));
}

#[test]
fn physical_profile_laws_match_direct_laws() {
    for (case, short) in [(CaseId::VariationalH0zero, "s-translation"), (CaseId::VariationalH0zero, "power-scaling"), (CaseId::VariationalGamma2, "scaling")] {
        let phys = physicalize(&law(case, short)).unwrap();
        let target = phys.case;
        assert!(verify_conservation_law(&phys, &sys(target)).unwrap().is_zero(), "{case} {short}");
    }
    let a = physicalize(&law(CaseId::VariationalH0zero, "s-translation")).unwrap();
    let d = law(CaseId::InfiniteSigmaH0zeroReduced, "s-translation");
    assert!(equivalent_laws(&a, &d, &Expr::one(), &sys(CaseId::InfiniteSigmaH0zeroReduced)).unwrap());
}

#[test]
fn eulerian_examples() {
    let c = ctx();
    let e = eulerian_form(&law(CaseId::FiniteSigmaH0nz, "mass"));
    assert_eq!((e.density, e.flux), (Expr::one(), Expr::zero()));
    let e = eulerian_form(&law(CaseId::FiniteSigmaH0nz, "momentum-x"));
    assert_eq!(e.density, c.p("rho*u"));
    assert_eq!(e.flux, c.p("rho*u^2 + p + (Hy^2 + Hz^2)/2"));
}

#[test]
fn eulerian_identity_holds_for_every_physical_law() {
    for case in [CaseId::FiniteSigmaH0nz, CaseId::FiniteSigmaH0zeroReduced, CaseId::InfiniteSigmaH0nz] {
        let s = sys(case);
        for l in builtin_conservation_laws(case) {
            assert!(eulerian_identity_residual(&l, &s).unwrap().is_zero(), "{}", l.id);
        }
    }
}

#[test]
fn builtin_noether_laws_are_conserved() {
    for case in [CaseId::VariationalH0nz, CaseId::VariationalH0zero, CaseId::VariationalGamma2] {
        for r in noether_builtin(case).unwrap() {
            if r.generator == "gen.kernel1.X4" {
                assert_eq!(r.kind, SymmetryKind::None);
                continue;
            }
            assert!(r.conserved, "{}: {:?}", r.generator, r.residual);
        }
    }
}

#[test]
fn table_noether_laws_are_conserved() {
    let mut n = 0;
    for t in [TableId::T4, TableId::T6, TableId::T8] {
        for r in noether_table(t).unwrap() {
            assert_eq!(r.kind, SymmetryKind::Variational, "{}", r.generator);
            assert!(r.conserved, "{}", r.generator);
            n += 1;
        }
    }
    assert_eq!(n, 9);
    assert!(matches!(noether_table(TableId::T1), Err(NoetherError::NotVariationalTable(TableId::T1))));
}

#[test]
fn kernel_laws_agree_with_direct_laws() {
    let out = direct_correspondence().unwrap();
    assert_eq!(out.len(), 8);
    for c in out {
        assert!(c.equivalent, "{} vs {}", c.generator, c.law);
    }
}

#[test]
fn wrong_factor_is_not_equivalent() {
    let s = sys(CaseId::InfiniteSigmaH0nz);
    let e = law(CaseId::InfiniteSigmaH0nz, "energy");
    let m = law(CaseId::InfiniteSigmaH0nz, "momentum-x");
    assert!(equivalent_laws(&e, &e, &Expr::one(), &s).unwrap());
    assert!(!equivalent_laws(&e, &m, &Expr::one(), &s).unwrap());
    let shifted = m.with_pair(m.tt.add(&ctx().p("rho_s/rho^2")), m.ts.add(&ctx().p("u_s")));
    assert!(verify_conservation_law(&shifted, &s).unwrap().is_zero());
    assert!(equivalent_laws(&shifted, &m, &Expr::one(), &s).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn noether_map_is_linear(k in proptest::collection::vec(-3i64..4, 4)) {
        let case = CaseId::VariationalH0nz;
        let l = builtin_lagrangian(case).unwrap();
        let ids = ["X1", "X2", "X3", "X8"];
        let entries: Vec<_> = ids.iter().map(|i| gen(case, i)).collect();
        let parts: Vec<(Expr, &Generator)> = k.iter().zip(&entries).map(|(c, e)| (Expr::int(*c), &e.generator)).collect();
        let g = Generator::combine("G", &parts);
        let cl = conservation_from_symmetry(&g, &l, &DivergencePair::zero(), case).unwrap();
        let mut tt = Expr::zero();
        for (c, e) in k.iter().zip(&entries) {
            let one = conservation_from_symmetry(&e.generator, &l, &DivergencePair::zero(), case).unwrap();
            tt = tt.add(&one.tt.scale_int(*c));
        }
        prop_assert_eq!(&cl.tt, &tt);
        prop_assert!(verify_conservation_law(&cl, &sys(case)).unwrap().is_zero());
    }
}
