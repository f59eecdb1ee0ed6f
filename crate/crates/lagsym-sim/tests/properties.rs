use lagsym::corpus::{lagr_flat_ops8, CaseId};
use lagsym_sim::transport::residual;
use lagsym_sim::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn uniform_states_do_not_evolve(rho in 0.2f64..5.0, u in -1.0f64..1.0, p in 0.1f64..3.0, hy in -1.0f64..1.0, hz in -1.0f64..1.0) {
        let mut cfg = SimConfig::new(CaseId::FiniteSigmaH0zeroReduced, 8, 0.1);
        cfg.scheme.sigma = "rho*p + 1".into();
        cfg.initial.rho = rho.to_string();
        cfg.initial.u = u.to_string();
        cfg.initial.p = p.to_string();
        cfg.initial.hy = hy.to_string();
        cfg.initial.hz = hz.to_string();
        let model = Model::new(&cfg.scheme, &cfg).unwrap();
        let st = init_state(&cfg).unwrap();
        let d = model.rhs(&st);
        for f in [&d.tau, &d.p, &d.by, &d.bz, &d.u, &d.v, &d.w] {
            prop_assert!(f.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn scaling_transform_is_invertible(a in -1.0f64..1.0, k in 5usize..7) {
        let w = ScalingWeights::from_generator(&lagr_flat_ops8()[k]).unwrap();
        let st = StateGrid::uniform(6, 1.0, 1.5, 0.3, 2.0);
        let back = w.transform(&w.transform(&st, a), -a);
        for (x, y) in back.tau.iter().chain(&back.u).chain(&back.p).zip(st.tau.iter().chain(&st.u).chain(&st.p)) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
        prop_assert!((back.ds - st.ds).abs() < 1e-15);
    }

    #[test]
    fn residual_is_translation_free(shift in 0.0f64..1.0) {
        let cfg = SimConfig::new(CaseId::FiniteSigmaH0zeroReduced, 8, 0.1);
        let model = Model::new(&cfg.scheme, &cfg).unwrap();
        let mut a = StateGrid::uniform(8, 1.0, 1.0, 0.0, 1.0);
        a.t = shift;
        let mut b = a.clone();
        b.t += 0.1;
        let mut c = b.clone();
        c.t += 0.1;
        prop_assert_eq!(residual(&model, [&a, &b, &c]).max, 0.0);
    }
}
