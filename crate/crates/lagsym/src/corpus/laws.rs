use super::{bind_fn_of_s, bind_sigma, corpus_context, CaseId};
use crate::expr::{Bindings, Context, Expr};

/// Density/flux pair `(Tt, Ts)` with `D_t Tt + D_s Ts = 0` on solutions.
#[derive(Debug, Clone)]
pub struct ConservationLaw {
    pub id: String,
    pub case: CaseId,
    pub label: String,
    pub tt: Expr,
    pub ts: Expr,
    pub requires_aux: Vec<String>,
    /// Bindings applied in order before verification (e.g. sigma = rho).
    pub conditions: Vec<Bindings>,
    /// The pair as printed when it differs from `(tt, ts)`.
    pub printed: Option<(Expr, Expr)>,
    pub note: Option<String>,
}

impl ConservationLaw {
    pub fn short_id(&self) -> &str {
        self.id.rsplit('.').next().unwrap_or(&self.id)
    }

    pub fn with_pair(&self, tt: Expr, ts: Expr) -> ConservationLaw {
        ConservationLaw { tt, ts, printed: None, ..self.clone() }
    }
}

struct Builder {
    case: CaseId,
    ctx: Context,
    out: Vec<ConservationLaw>,
}

impl Builder {
    fn new(case: CaseId) -> Self {
        Builder { case, ctx: corpus_context(), out: Vec::new() }
    }

    fn law(&mut self, short: &str, label: &str, tt: &str, ts: &str) -> &mut Self {
        self.out.push(ConservationLaw {
            id: format!("claw.{}.{}", self.case.id(), short),
            case: self.case,
            label: label.to_string(),
            tt: self.ctx.p(tt),
            ts: self.ctx.p(ts),
            requires_aux: Vec::new(),
            conditions: Vec::new(),
            printed: None,
            note: None,
        });
        self
    }

    fn aux(&mut self, tags: &[&str]) -> &mut Self {
        self.out.last_mut().unwrap().requires_aux = tags.iter().map(|t| t.to_string()).collect();
        self
    }

    fn cond(&mut self, b: Bindings) -> &mut Self {
        self.out.last_mut().unwrap().conditions.push(b);
        self
    }

    fn printed(&mut self, tt: &str, ts: &str, note: &str) -> &mut Self {
        let (a, b) = (self.ctx.p(tt), self.ctx.p(ts));
        let l = self.out.last_mut().unwrap();
        l.printed = Some((a, b));
        l.note = Some(note.to_string());
        self
    }

    fn s_fn(&self, name: &str, body: &str) -> Bindings {
        bind_fn_of_s(name, self.ctx.p(body))
    }
}

const MAG_P: &str = "p + (Hy^2 + Hz^2)/2";

/// Conservation laws listed for each case.
pub fn builtin_conservation_laws(case: CaseId) -> Vec<ConservationLaw> {
    let mut b = Builder::new(case);
    match case {
        CaseId::FiniteSigmaH0nz => {
            b.law("mass", "mass", "1/rho", "-u");
            b.law("momentum-x", "momentum (x)", "u", MAG_P);
            b.law("momentum-y", "momentum (y)", "v", "-H0*Hy");
            b.law("momentum-z", "momentum (z)", "w", "-H0*Hz");
            b.law("center-x", "center of mass (x)", "t*u - x", &format!("t*({})", MAG_P));
            b.law("center-y", "center of mass (y)", "t*v - y", "-t*H0*Hy");
            b.law("center-z", "center of mass (z)", "t*w - z", "-t*H0*Hz");
            b.law("flux-y", "magnetic flux (y)", "Hy/rho", "-(Ez + H0*v)");
            b.law("flux-z", "magnetic flux (z)", "Hz/rho", "Ey - H0*w");
            b.law(
                "energy",
                "energy",
                "1/2*(u^2 + v^2 + w^2) + p/((gamma-1)*rho) + (Hy^2 + Hz^2)/(2*rho)",
                "u*(p + (Hy^2 + Hz^2)/2) + Ey*Hz - Ez*Hy - H0*(v*Hy + w*Hz)",
            );
        }
        CaseId::FiniteSigmaH0zeroReduced => {
            b.law("mass", "mass", "1/rho", "-u");
            b.law("momentum-x", "momentum", "u", MAG_P);
            b.law("center-x", "center of mass", "t*u - x", &format!("t*({})", MAG_P));
            b.law("flux-y", "magnetic flux (y)", "Hy/rho", "-Ez");
            b.law("flux-z", "magnetic flux (z)", "Hz/rho", "Ey");
            b.law(
                "energy",
                "energy",
                "1/2*u^2 + p/((gamma-1)*rho) + (Hy^2 + Hz^2)/(2*rho)",
                "u*(p + (Hy^2 + Hz^2)/2) + Ey*Hz - Ez*Hy",
            );
            let rho = b.ctx.p("rho");
            b.law("ext-sHz", "extension law (s Hz)", "s*Hz/rho", "s*Ey + Hz")
                .cond(bind_sigma(rho.clone()))
                .printed("s*Hz/rho", "-(s*Ey + Hz)", "flux printed with the opposite sign");
            b.law("ext-sHy", "extension law (s Hy)", "s*Hy/rho", "Hy - s*Ez")
                .cond(bind_sigma(rho))
                .printed("s*Hy/rho", "s*Ez - Hy", "flux printed with the opposite sign");
        }
        CaseId::FiniteSigmaH0zeroResidual => {
            b.ctx = b.ctx.clone().function("T", &["v", "w", "y - t*v", "z - t*w"]);
            b.law("family", "arbitrary-function family", "T", "0");
            b.law("momentum-y", "momentum (y)", "v", "0");
            b.law("momentum-z", "momentum (z)", "w", "0");
            b.law("center-y", "center of mass (y)", "y - t*v", "0");
            b.law("center-z", "center of mass (z)", "z - t*w", "0").printed("z - t*v", "0", "printed with v in place of w");
            b.law("angular", "angular momentum", "z*v - y*w", "0");
        }
        CaseId::InfiniteSigmaH0nz => {
            b.law("mass", "mass", "1/rho", "-u");
            b.law("momentum-x", "momentum (x)", "u", MAG_P);
            b.law("momentum-y", "momentum (y)", "v", "-H0*Hy");
            b.law("momentum-z", "momentum (z)", "w", "-H0*Hz");
            b.law("center-x", "center of mass (x)", "t*u - x", &format!("t*({})", MAG_P));
            b.law("center-y", "center of mass (y)", "t*v - y", "-t*H0*Hy");
            b.law("center-z", "center of mass (z)", "t*w - z", "-t*H0*Hz");
            b.law("flux-y", "magnetic flux (y)", "Hy/rho", "-H0*v");
            b.law("flux-z", "magnetic flux (z)", "Hz/rho", "-H0*w");
            b.law(
                "energy",
                "energy",
                "1/2*(u^2 + v^2 + w^2) + p/((gamma-1)*rho) + (Hy^2 + Hz^2)/(2*rho)",
                "u*(p + (Hy^2 + Hz^2)/2) - H0*(v*Hy + w*Hz)",
            );
            b.law("entropy", "entropy", "p/rho^gamma", "0");
            b.law("angular", "angular momentum", "z*v - y*w", "H0*(y*Hz - z*Hy)").aux(&["yszs"]);
            let s0 = b.s_fn("S", "S0");
            b.law(
                "s-translation",
                "s-translation law, S = S0",
                "u/rho + (v*Hy + w*Hz)/(H0*rho)",
                "-1/2*(u^2 + v^2 + w^2) + gamma*S/(gamma-1)*rho^(gamma-1)",
            )
            .aux(&["entropy-profile"])
            .cond(s0);
            let sq = b.s_fn("S", "S0*s^(-4*gamma/3)");
            b.law(
                "scaling",
                "scaling law, S = S0 s^(-4 gamma/3)",
                "t*(1/2*(u^2 + v^2 + w^2) + S/(gamma-1)*rho^(gamma-1) + (Hy^2 + Hz^2)/(2*rho)) \
                 + 3*s*(u/rho + (v*Hy + w*Hz)/(H0*rho)) + x*u + y*v + z*w",
                "(t*u + x)*(S*rho^gamma + (Hy^2 + Hz^2)/2) - (t*v + y)*H0*Hy - (t*w + z)*H0*Hz \
                 + 3*s*(-1/2*(u^2 + v^2 + w^2) + gamma*S/(gamma-1)*rho^(gamma-1))",
            )
            .aux(&["x", "yszs", "entropy-profile"])
            .cond(sq);
        }
        CaseId::InfiniteSigmaH0zeroReduced => {
            b.law("mass", "mass", "1/rho", "-u");
            b.law("momentum-x", "momentum", "u", MAG_P);
            b.law("center-x", "center of mass", "t*u - x", &format!("t*({})", MAG_P));
            b.law("flux-y", "magnetic flux (y)", "Hy/rho", "0");
            b.law("flux-z", "magnetic flux (z)", "Hz/rho", "0");
            b.law(
                "energy",
                "energy",
                "1/2*u^2 + p/((gamma-1)*rho) + (Hy^2 + Hz^2)/(2*rho)",
                "u*(p + (Hy^2 + Hz^2)/2)",
            );
            b.law("entropy", "entropy", "p/rho^gamma", "0");
            let profiles = ["x", "entropy-profile", "field-profile"];
            let fz = |b: &Builder, a: &str| b.s_fn("Fz", &format!("(2*({}) - Fy^2)^(1/2)", a));
            let (c1, c2) = (b.s_fn("S", "S0"), fz(&b, "A0"));
            b.law(
                "s-translation",
                "s-translation law, (S, A) = (S0, A0)",
                "u/rho",
                "-u^2/2 + gamma*S/(gamma-1)*rho^(gamma-1) + (Hy^2 + Hz^2)/rho",
            )
            .aux(&profiles[1..])
            .cond(c1)
            .cond(c2);
            let (c1, c2) = (b.s_fn("S", "S0*s^(-4*(gamma-2) - beta*(gamma-3))"), fz(&b, "A0*s^beta"));
            b.law(
                "power-scaling",
                "scaling law, (S, A) = (S0 s^alpha, A0 s^beta)",
                "(2*beta+5)*t*(u^2/2 + S/(gamma-1)*rho^(gamma-1) + (Hy^2 + Hz^2)/(2*rho)) - s*u/rho - (beta+3)*x*u",
                "((2*beta+5)*t*u - (beta+3)*x)*(S*rho^gamma + (Hy^2 + Hz^2)/2) \
                 + s*(u^2/2 - gamma*S/(gamma-1)*rho^(gamma-1) - (Hy^2 + Hz^2)/rho)",
            )
            .aux(&profiles)
            .cond(c1)
            .cond(c2);
            let (c1, c2) = (b.s_fn("S", "S0*exp(-q*(gamma-3)*s)"), fz(&b, "A0*exp(q*s)"));
            b.law(
                "exp-scaling",
                "scaling law, (S, A) = (S0 e^(kS s), A0 e^(q s))",
                "2*q*t*(u^2/2 + S/(gamma-1)*rho^(gamma-1) + (Hy^2 + Hz^2)/(2*rho)) - u/rho - q*x*u",
                "q*(2*t*u - x)*(S*rho^gamma + (Hy^2 + Hz^2)/2) \
                 + u^2/2 - gamma*S/(gamma-1)*rho^(gamma-1) - (Hy^2 + Hz^2)/rho",
            )
            .aux(&profiles)
            .cond(c1)
            .cond(c2);
            let g2 = Bindings::new().constant("gamma", Expr::int(2));
            let sb = b.s_fn("S", "B0 - (Fy^2 + Fz^2)/2");
            b.law(
                "gamma2-scaling",
                "scaling law, gamma = 2, B = B0",
                "5*t*(u^2/2 + S/(gamma-1)*rho^(gamma-1) + (Hy^2 + Hz^2)/(2*rho)) - s*u/rho - 3*x*u",
                "(5*t*u - 3*x)*(S*rho^gamma + (Hy^2 + Hz^2)/2) \
                 + s*(u^2/2 - gamma*S/(gamma-1)*rho^(gamma-1) - (Hy^2 + Hz^2)/rho)",
            )
            .aux(&profiles)
            .cond(g2)
            .cond(sb);
        }
        CaseId::VariationalH0nz => {
            b.law(
                "angular",
                "angular momentum (potentials)",
                "chi*psi_t - psi*chi_t",
                "-H0^2*(chi*psi_s - psi*chi_s)/phi_s",
            );
            let s0 = b.s_fn("S", "S0");
            b.law(
                "s-translation",
                "s-translation law, S = S0",
                "phi_s*phi_t + psi_s*psi_t + chi_s*chi_t",
                "-1/2*(phi_t^2 + psi_t^2 + chi_t^2) + gamma*S/(gamma-1)*phi_s^(1-gamma)",
            )
            .cond(s0);
            let sq = b.s_fn("S", "S0*s^(-4*gamma/3)");
            b.law(
                "scaling",
                "scaling law, S = S0 s^(-4 gamma/3)",
                "t*(1/2*(phi_t^2 + psi_t^2 + chi_t^2) + S/(gamma-1)*phi_s^(1-gamma) + H0^2*(psi_s^2 + chi_s^2)/(2*phi_s)) \
                 + 3*s*(phi_s*phi_t + psi_s*psi_t + chi_s*chi_t) + phi*phi_t + psi*psi_t + chi*chi_t",
                "(t*phi_t + phi)*(S*phi_s^(-gamma) + H0^2*(psi_s^2 + chi_s^2)/(2*phi_s^2)) \
                 - (t*psi_t + psi)*H0^2*psi_s/phi_s - (t*chi_t + chi)*H0^2*chi_s/phi_s \
                 + 3*s*(-1/2*(phi_t^2 + psi_t^2 + chi_t^2) + gamma*S/(gamma-1)*phi_s^(1-gamma))",
            )
            .cond(sq);
        }
        CaseId::VariationalH0zero => {
            let (c1, c2) = (b.s_fn("S", "S0"), b.s_fn("A", "A0"));
            b.law(
                "s-translation",
                "s-translation law, (S, A) = (S0, A0)",
                "phi_s*phi_t",
                "-phi_t^2/2 + gamma*S/(gamma-1)*phi_s^(1-gamma) + 2*A/phi_s",
            )
            .cond(c1)
            .cond(c2);
            let (c1, c2) = (b.s_fn("S", "S0*s^(-4*(gamma-2) - beta*(gamma-3))"), b.s_fn("A", "A0*s^beta"));
            b.law(
                "power-scaling",
                "scaling law, (S, A) = (S0 s^alpha, A0 s^beta)",
                "(2*beta+5)*t*(1/2*phi_t^2 + S/(gamma-1)*phi_s^(1-gamma) + A/phi_s) - s*phi_s*phi_t - (beta+3)*phi*phi_t",
                "((2*beta+5)*t*phi_t - (beta+3)*phi)*(S*phi_s^(-gamma) + A/phi_s^2) \
                 + s*(phi_t^2/2 - gamma*S/(gamma-1)*phi_s^(1-gamma) - 2*A/phi_s)",
            )
            .cond(c1)
            .cond(c2);
            let (c1, c2) = (b.s_fn("S", "S0*exp(-q*(gamma-3)*s)"), b.s_fn("A", "A0*exp(q*s)"));
            b.law(
                "exp-scaling",
                "scaling law, (S, A) = (S0 e^(kS s), A0 e^(q s))",
                "2*q*t*(1/2*phi_t^2 + S/(gamma-1)*phi_s^(1-gamma) + A/phi_s) - phi_s*phi_t - q*phi*phi_t",
                "q*(2*t*phi_t - phi)*(S*phi_s^(-gamma) + A/phi_s^2) \
                 + phi_t^2/2 - gamma*S/(gamma-1)*phi_s^(1-gamma) - 2*A/phi_s",
            )
            .cond(c1)
            .cond(c2);
        }
        CaseId::VariationalGamma2 => {
            let b0 = b.s_fn("B", "B0");
            b.law("s-translation", "s-translation law, B = B0", "phi_s*phi_t", "-phi_t^2/2 + 2*B/phi_s").cond(b0.clone());
            b.law(
                "scaling",
                "scaling law, B = B0",
                "5*t*(1/2*phi_t^2 + B/phi_s) - s*phi_s*phi_t - 3*phi*phi_t",
                "(5*t*phi_t - 3*phi)*B/phi_s^2 + s*(phi_t^2/2 - 2*B/phi_s)",
            )
            .cond(b0);
        }
    }
    b.out
}

/// Energy law in the vector form `|u|^2, |H|^2, u.H` with `H = (H0, Hy, Hz)`.
pub fn energy_vector_form() -> (Expr, Expr) {
    let c = corpus_context();
    (
        c.p("1/2*(u^2 + v^2 + w^2) + p/((gamma-1)*rho) + (H0^2 + Hy^2 + Hz^2)/(2*rho)"),
        c.p("u*(p + (H0^2 + Hy^2 + Hz^2)/2) + Ey*Hz - Ez*Hy - H0*(u*H0 + v*Hy + w*Hz)"),
    )
}
