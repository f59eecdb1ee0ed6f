use super::*;
use proptest::prelude::*;

fn ctx() -> Context {
    Context::new()
        .constants(&["gamma", "H0", "alpha", "beta", "C", "q"])
        .dependents(&["rho", "u", "p", "Hy", "Hz", "x", "phi"])
        .function("sigma", &["rho", "p"])
        .function("S", &["s"])
        .function("F", &["p"])
}

fn p(s: &str) -> Expr {
    ctx().p(s)
}

#[test]
fn parses_jets_and_products() {
    let e = p("rho_t + u*rho_s");
    let expect = Expr::jet("rho", 1, 0).add(&Expr::var("u").mul(&Expr::jet("rho", 0, 1)));
    assert_eq!(e, expect);
}

#[test]
fn parses_function_application() {
    let e = p("sigma(rho,p)");
    assert_eq!(e, Expr::func("sigma", vec![Expr::var("rho"), Expr::var("p")]));
    assert_eq!(p("sigma"), e);
}

#[test]
fn parses_symbolic_power() {
    let e = p("p/rho^gamma");
    let mut m = BTreeMap::new();
    m.insert(Atom::jet("p", 0, 0), Coeff::one());
    m.insert(Atom::jet("rho", 0, 0), Coeff::sym(&Sym::from("gamma")).neg());
    assert_eq!(e, Expr::from_mono(Mono(m)));
    assert_eq!(e.to_string(), "p/rho^gamma");
}

#[test]
fn commutativity_cancels() {
    assert!(p("u*rho - rho*u").is_zero());
    assert!(p("sigma_rho*rho - rho*sigma_rho").is_zero());
    assert!(!p("sigma - sigma_rho").is_zero());
    assert!(p("0").is_zero());
}

#[test]
fn exponent_addition() {
    assert_eq!(p("rho^gamma*rho^(1-gamma)"), p("rho"));
}

#[test]
fn constant_cancellation() {
    assert_eq!(p("(gamma-1)*p/(gamma-1)"), p("p"));
}

#[test]
fn rational_function_exponents_combine() {
    let e = p("rho^((2*beta-1)/(2*(beta-1))) * rho^(-1/(2*(beta-1)))");
    assert_eq!(e, p("rho"));
}

#[test]
fn partial_product_and_chain_rule() {
    let e = p("sigma*rho^2");
    let d = e.partial(&Wrt::jet("rho", 0, 0));
    assert_eq!(d, p("sigma_rho*rho^2 + 2*sigma*rho"));
}

#[test]
fn partial_of_independent_atom_is_zero() {
    assert!(p("rho^gamma").partial(&Wrt::jet("p", 0, 0)).is_zero());
}

#[test]
fn partial_with_respect_to_first_order_jet() {
    let e = p("-gamma*rho*p*u_s");
    assert_eq!(e.partial(&Wrt::jet("u", 0, 1)), p("-gamma*rho*p"));
}

#[test]
fn partial_with_respect_to_function_atom() {
    let e = p("sigma^2*rho");
    let f = p("sigma").as_atom().cloned().unwrap();
    assert_eq!(e.partial(&Wrt::Atom(f)), p("2*sigma*rho"));
}

#[test]
fn partial_with_respect_to_constant_in_exponent() {
    let e = p("exp(q*s)");
    assert_eq!(e.partial(&Wrt::Const(Sym::from("q"))), p("s*exp(q*s)"));
    let r = p("rho^gamma").partial(&Wrt::Const(Sym::from("gamma")));
    assert_eq!(r, p("rho^gamma*log(rho)"));
}

#[test]
fn substitute_density_potential() {
    let b = Bindings::new().jet("rho", 0, 0, p("1/phi_s"));
    assert_eq!(p("1/rho").substitute(&b).unwrap(), p("phi_s"));
}

#[test]
fn substitute_empty_is_identity() {
    let e = p("u*rho_s + sigma_p");
    assert_eq!(e.substitute(&Bindings::new()).unwrap(), e);
}

#[test]
fn substitute_function_template() {
    let c = ctx();
    let body = c.p("rho^alpha*F(p)");
    let b = Bindings::new().func("sigma", vec![Atom::jet("rho", 0, 0), Atom::jet("p", 0, 0)], body.clone());
    assert_eq!(c.p("sigma").substitute(&b).unwrap(), body);
    assert_eq!(c.p("sigma_rho").substitute(&b).unwrap(), c.p("alpha*rho^(alpha-1)*F(p)"));
    assert_eq!(c.p("sigma_p").substitute(&b).unwrap(), c.p("rho^alpha*F'(p)"));
}

#[test]
fn substitute_constant_into_exponent() {
    let b = Bindings::new().constant("gamma", Expr::int(2));
    assert_eq!(p("p/rho^gamma").substitute(&b).unwrap(), p("p/rho^2"));
}

#[test]
fn parse_errors() {
    let c = ctx();
    assert!(matches!(c.parse("rho +"), Err(ExprError::Syntax { pos: 5, .. })));
    assert!(matches!(c.parse("zeta"), Err(ExprError::Undeclared(_))));
    assert!(matches!(c.parse("rho_q"), Err(ExprError::MalformedSuffix(_))));
    assert!(matches!(c.parse("sigma_u"), Err(ExprError::MalformedSuffix(_))));
    assert!(matches!(c.parse("rho^u"), Err(ExprError::ExponentOutsideFragment(_))));
    assert!(matches!(c.parse("(rho"), Err(ExprError::Syntax { .. })));
}

#[test]
fn function_partials_syntax() {
    let c = ctx();
    assert_eq!(c.p("S''"), c.p("S''(s)"));
    assert_eq!(c.p("sigma_rho_p").to_string(), "sigma_rho_p(rho, p)");
    assert_eq!(c.p("sigma_2"), c.p("sigma_p"));
}

#[test]
fn exp_is_split_over_terms() {
    let e = p("exp(q*s + 2)");
    assert_eq!(e, p("exp(q*s)*exp(2)"));
    assert_eq!(p("exp(q*s)*exp(-q*s)"), Expr::one());
    assert_eq!(p("log(exp(q*s))"), p("q*s"));
}

#[test]
fn opaque_denominators_render_and_reparse() {
    let e = p("u/(rho + p)");
    let back = p(&e.to_string());
    assert_eq!(back, e);
    assert!(p("(rho+p)^(1/2)*(rho+p)^(1/2) - rho - p").is_zero());
}

#[test]
fn corpus_samples_round_trip() {
    for s in [
        "-rho^2*u_s",
        "-p_s - Hy*Hy_s - Hz*Hz_s",
        "-gamma*rho*p*u_s + (gamma-1)*sigma*(Hy_s^2+Hz_s^2)*rho^2/sigma^2",
        "1/2*u^2 + p/((gamma-1)*rho) + (Hy^2+Hz^2)/(2*rho)",
        "S/(gamma-1)*phi_s^(1-gamma)",
        "C*rho^((2*beta-1)/(2*(beta-1)))*p^((alpha-2*beta+1)/(2*(beta-1)))",
        "H0^2*S'(s)*exp(q*s)/rho_s",
    ] {
        let e = p(s);
        let r = e.to_string();
        assert_eq!(p(&r), e, "{} -> {}", s, r);
        assert_eq!(p(&r).to_string(), r);
    }
}

fn atom_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["rho", "u", "p", "u_s", "rho_t", "sigma", "sigma_rho", "gamma", "S(s)", "t", "s", "H0"])
}

fn small_expr() -> impl Strategy<Value = String> {
    let leaf = (atom_strategy(), -3i64..4, 0u32..3).prop_map(|(a, c, e)| format!("({})*{}^{}", c, a, e));
    prop::collection::vec(leaf, 1..4).prop_map(|v| v.join(" + "))
}

fn pos_expr() -> impl Strategy<Value = String> {
    let leaf = (prop::sample::select(vec!["rho", "p", "u_s", "sigma"]), 1i64..4, -2i64..3)
        .prop_map(|(a, c, e)| format!("{}*{}^({})", c, a, e));
    prop::collection::vec(leaf, 1..3).prop_map(|v| v.join("*"))
}

proptest! {
    #[test]
    fn ring_laws(a in small_expr(), b in small_expr(), c in small_expr()) {
        let (a, b, c) = (p(&a), p(&b), p(&c));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn render_parse_fixed_point(a in small_expr(), d in pos_expr()) {
        let e = p(&a).div(&p(&d)).unwrap();
        let r = e.to_string();
        let back = p(&r);
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_string(), r);
    }

    #[test]
    fn mixed_partials_commute(a in small_expr(), d in pos_expr()) {
        let e = p(&a).div(&p(&d)).unwrap();
        let x = Wrt::jet("rho", 0, 0);
        let y = Wrt::jet("u", 0, 1);
        prop_assert_eq!(e.partial(&x).partial(&y), e.partial(&y).partial(&x));
        let g = Wrt::Const(Sym::from("gamma"));
        prop_assert_eq!(e.partial(&x).partial(&g), e.partial(&g).partial(&x));
    }

    #[test]
    fn leibniz(a in small_expr(), b in pos_expr()) {
        let (a, b) = (p(&a), p(&b));
        let x = Wrt::jet("rho", 0, 0);
        let lhs = a.mul(&b).partial(&x);
        let rhs = a.partial(&x).mul(&b).add(&a.mul(&b.partial(&x)));
        prop_assert_eq!(lhs, rhs);
    }
}
