//! Finite scaling transformations applied to computed solutions, and a
//! discrete residual of the evolution equations for comparing a solution
//! with its transform.

use crate::potential::integrate_direct;
use crate::scheme::Model;
use crate::state::StateGrid;
use crate::{Result, SimConfig, SimError};
use lagsym::expr::{Expr, NumEnv};
use lagsym::jet::Generator;
use serde::Serialize;
use std::collections::BTreeMap;

/// Exponent rates of a diagonal scaling: a coordinate `q` becomes
/// `exp(a * rate) * q` under the finite transformation with parameter `a`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ScalingWeights {
    pub t: f64,
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub rho: f64,
    pub p: f64,
    pub hy: f64,
    pub hz: f64,
}

struct Empty;
impl NumEnv for Empty {}

fn rate(label: &str, name: &str, component: &Expr, coord: &Expr) -> Result<f64> {
    if component.is_zero() {
        return Ok(0.0);
    }
    let not_scaling = || SimError::NotScaling { generator: label.to_string(), component: name.to_string() };
    let ratio = component.div(coord).map_err(|_| not_scaling())?;
    ratio.eval_f64(&Empty).filter(|v| v.is_finite()).ok_or_else(not_scaling)
}

impl ScalingWeights {
    /// Read the rates off a generator whose every coefficient is a numeric
    /// multiple of its own coordinate. Electric-field components are ignored;
    /// the scheme derives them from the magnetic field.
    pub fn from_generator(g: &Generator) -> Result<ScalingWeights> {
        let l = g.label.as_str();
        let dep = |name: &str| rate(l, name, &g.eta(name), &Expr::var(name));
        let known = ["x", "y", "z", "u", "v", "w", "rho", "p", "Hy", "Hz", "Ey", "Ez"];
        if let Some(other) = g.etas.keys().map(|k| k.to_string()).find(|k| !known.contains(&k.as_str())) {
            return Err(SimError::NotScaling { generator: l.to_string(), component: other });
        }
        Ok(ScalingWeights {
            t: rate(l, "t", &g.xi_t, &Expr::t())?,
            s: rate(l, "s", &g.xi_s, &Expr::s())?,
            x: dep("x")?,
            y: dep("y")?,
            z: dep("z")?,
            u: dep("u")?,
            v: dep("v")?,
            w: dep("w")?,
            rho: dep("rho")?,
            p: dep("p")?,
            hy: dep("Hy")?,
            hz: dep("Hz")?,
        })
    }

    /// Image of a grid state under the finite transformation.
    pub fn transform(&self, st: &StateGrid, a: f64) -> StateGrid {
        let k = |r: f64| (a * r).exp();
        let sc = |f: &[f64], r: f64| f.iter().map(|v| v * k(r)).collect::<Vec<f64>>();
        StateGrid {
            ds: st.ds * k(self.s),
            t: st.t * k(self.t),
            tau: sc(&st.tau, -self.rho),
            p: sc(&st.p, self.p),
            by: sc(&st.by, self.hy - self.rho),
            bz: sc(&st.bz, self.hz - self.rho),
            v: sc(&st.v, self.v),
            w: sc(&st.w, self.w),
            u: sc(&st.u, self.u),
            x: sc(&st.x, self.x),
            y: st.y.as_ref().map(|f| sc(f, self.y)),
            z: st.z.as_ref().map(|f| sc(f, self.z)),
        }
    }
}

/// Relative residual per evolved field: the centred time difference of three
/// snapshots minus the spatial operator at the middle one, over the size of
/// that operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub fields: BTreeMap<String, f64>,
    pub max: f64,
}

pub fn residual(model: &Model, snaps: [&StateGrid; 3]) -> Residual {
    let [a, b, c] = snaps;
    let h = 0.5 * (c.t - a.t);
    let rhs = model.rhs(b);
    let pairs: [(&str, &[f64], &[f64], &[f64]); 7] = [
        ("tau", &a.tau, &c.tau, &rhs.tau),
        ("u", &a.u, &c.u, &rhs.u),
        ("p", &a.p, &c.p, &rhs.p),
        ("Hy/rho", &a.by, &c.by, &rhs.by),
        ("Hz/rho", &a.bz, &c.bz, &rhs.bz),
        ("v", &a.v, &c.v, &rhs.v),
        ("w", &a.w, &c.w, &rhs.w),
    ];
    let mut fields = BTreeMap::new();
    for (name, lo, hi, f) in pairs {
        let scale = f.iter().fold(0.0, |m: f64, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let err = (0..f.len()).fold(0.0, |m: f64, i| m.max(((hi[i] - lo[i]) / (2.0 * h) - f[i]).abs()));
        fields.insert(name.to_string(), err / scale);
    }
    let max = fields.values().fold(0.0, |m: f64, v| m.max(*v));
    Residual { fields, max }
}

fn advance(model: &Model, st: &StateGrid, target: f64) -> Result<StateGrid> {
    let mut cur = st.clone();
    while cur.t < target - 1e-15 * target.abs().max(1.0) {
        let dt = model.stable_dt(&cur).min(target - cur.t);
        cur = model.step(&cur, dt)?.0;
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    pub generator: String,
    pub parameter: f64,
    pub weights: ScalingWeights,
    pub base: Residual,
    pub transformed: Residual,
    /// `transformed.max / base.max`.
    pub ratio: f64,
}

/// Integrate `cfg` to `t_final`, take snapshots `delta` apart, and compare
/// the residual of the computed solution with that of its image under the
/// finite transformation of `g` with parameter `a`.
pub fn transport_check(cfg: &SimConfig, g: &Generator, a: f64, delta: f64) -> Result<TransportReport> {
    let weights = ScalingWeights::from_generator(g)?;
    let model = Model::new(&cfg.scheme, cfg)?;
    let (s0, _) = integrate_direct(cfg)?;
    let s1 = advance(&model, &s0, s0.t + delta)?;
    let s2 = advance(&model, &s1, s0.t + 2.0 * delta)?;
    let base = residual(&model, [&s0, &s1, &s2]);
    let images: Vec<StateGrid> = [&s0, &s1, &s2].iter().map(|s| weights.transform(s, a)).collect();
    let transformed = residual(&model, [&images[0], &images[1], &images[2]]);
    Ok(TransportReport {
        generator: g.label.clone(),
        parameter: a,
        weights,
        ratio: transformed.max / base.max,
        base,
        transformed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use lagsym::corpus::lagr_flat_ops8;

    #[test]
    fn weights_of_flat_scalings() {
        let ops = lagr_flat_ops8();
        let w6 = ScalingWeights::from_generator(&ops[5]).unwrap();
        assert_eq!((w6.t, w6.s, w6.u, w6.rho, w6.p), (1.0, 2.0, -1.0, 2.0, 0.0));
        let w7 = ScalingWeights::from_generator(&ops[6]).unwrap();
        assert_eq!((w7.t, w7.s, w7.x, w7.rho), (0.0, -1.0, 1.0, -2.0));
    }

    #[test]
    fn rotation_is_not_a_scaling() {
        let ops = lagr_flat_ops8();
        assert!(matches!(ScalingWeights::from_generator(&ops[4]), Err(SimError::NotScaling { .. })));
        assert!(matches!(ScalingWeights::from_generator(&ops[0]), Err(SimError::NotScaling { .. })));
    }

    #[test]
    fn transform_keeps_mass_coordinate_consistent() {
        let st = StateGrid::uniform(8, 1.0, 2.0, 0.1, 1.0);
        let w = ScalingWeights::from_generator(&lagr_flat_ops8()[6]).unwrap();
        let img = w.transform(&st, 0.3);
        for i in 1..8 {
            let dx = (img.x[i] - img.x[i - 1]) / img.ds;
            assert!((dx - img.tau[i]).abs() < 1e-12);
        }
    }
}
