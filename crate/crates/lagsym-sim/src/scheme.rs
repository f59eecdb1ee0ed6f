//! Semi-discrete operator and time stepping.

use crate::numeric::Compiled;
use crate::state::{parameter_constants, StateGrid};
use crate::{Result, SchemeParams, SimConfig, SimError};

/// Numerical model built from the scheme parameters.
#[derive(Debug, Clone)]
pub struct Model {
    pub gamma: f64,
    pub h0: f64,
    /// `None` for infinite conductivity.
    pub sigma: Option<Compiled>,
    pub cfl: f64,
    pub time_order: u8,
    pub viscosity: f64,
}

impl Model {
    pub fn new(params: &SchemeParams, cfg: &SimConfig) -> Result<Model> {
        let sigma = if params.infinite_sigma() {
            None
        } else {
            Some(Compiled::parse(&params.sigma, &["rho", "p"], &parameter_constants(cfg))?)
        };
        Ok(Model {
            gamma: params.gamma,
            h0: params.h0,
            sigma,
            cfl: params.cfl,
            time_order: params.time_order,
            viscosity: params.artificial_viscosity,
        })
    }

    fn sigma_at(&self, s: f64, rho: f64, p: f64) -> f64 {
        self.sigma.as_ref().map_or(f64::INFINITY, |c| c.eval(s, &[rho, p]))
    }

    /// Electric field `(Ey, Ez)` at faces from centred differences of the
    /// magnetic field; zero for infinite conductivity.
    pub fn electric_field(&self, st: &StateGrid) -> (Vec<f64>, Vec<f64>) {
        let n = st.n();
        if self.sigma.is_none() {
            return (vec![0.0; n], vec![0.0; n]);
        }
        let mut ey = vec![0.0; n];
        let mut ez = vec![0.0; n];
        for i in 0..n {
            let j = (i + 1) % n;
            let rho_f = 0.5 * (st.rho(i) + st.rho(j));
            let p_f = 0.5 * (st.p[i] + st.p[j]);
            let k = rho_f / (self.sigma_at(st.s_face(i), rho_f, p_f) * st.ds);
            ey[i] = -k * (st.hz(j) - st.hz(i));
            ez[i] = k * (st.hy(j) - st.hy(i));
        }
        (ey, ez)
    }

    /// Time derivative of every evolved field (`t` component is 1).
    pub fn rhs(&self, st: &StateGrid) -> StateGrid {
        let n = st.n();
        let ds = st.ds;
        let prev = |i: usize| (i + n - 1) % n;
        let next = |i: usize| (i + 1) % n;
        let (ey, ez) = self.electric_field(st);
        let hy: Vec<f64> = (0..n).map(|i| st.hy(i)).collect();
        let hz: Vec<f64> = (0..n).map(|i| st.hz(i)).collect();
        let q: Vec<f64> = (0..n)
            .map(|i| {
                let du = st.u[i] - st.u[prev(i)];
                if self.viscosity > 0.0 && du < 0.0 {
                    self.viscosity * st.rho(i) * du * du
                } else {
                    0.0
                }
            })
            .collect();
        let total_p: Vec<f64> = (0..n).map(|i| st.p[i] + 0.5 * (hy[i] * hy[i] + hz[i] * hz[i]) + q[i]).collect();
        let mut d = StateGrid {
            ds,
            t: 1.0,
            tau: vec![0.0; n],
            p: vec![0.0; n],
            by: vec![0.0; n],
            bz: vec![0.0; n],
            v: vec![0.0; n],
            w: vec![0.0; n],
            u: vec![0.0; n],
            x: st.u.clone(),
            y: st.y.as_ref().map(|_| st.v.clone()),
            z: st.z.as_ref().map(|_| st.w.clone()),
        };
        let g = self.gamma;
        for i in 0..n {
            let (l, r) = (prev(i), next(i));
            let div_u = (st.u[i] - st.u[l]) / ds;
            d.tau[i] = div_u;
            d.u[i] = -(total_p[r] - total_p[i]) / ds;
            d.v[i] = self.h0 * (hy[r] - hy[l]) / (2.0 * ds);
            d.w[i] = self.h0 * (hz[r] - hz[l]) / (2.0 * ds);
            d.by[i] = (ez[i] - ez[l]) / ds + self.h0 * (st.v[r] - st.v[l]) / (2.0 * ds);
            d.bz[i] = -(ey[i] - ey[l]) / ds + self.h0 * (st.w[r] - st.w[l]) / (2.0 * ds);
            let rho = st.rho(i);
            let mut dp = -(g * st.p[i] + (g - 1.0) * q[i]) * rho * div_u;
            if self.sigma.is_some() {
                let e2 = 0.5 * (ey[l] * ey[l] + ey[i] * ey[i] + ez[l] * ez[l] + ez[i] * ez[i]);
                dp += (g - 1.0) * self.sigma_at(st.s_center(i), rho, st.p[i]) * e2;
            }
            d.p[i] = dp;
        }
        d
    }

    /// Largest stable step: fast-wave CFL in the mass coordinate and, for
    /// finite conductivity, the resistive diffusion limit.
    pub fn stable_dt(&self, st: &StateGrid) -> f64 {
        let n = st.n();
        let mut speed: f64 = 0.0;
        for i in 0..n {
            let rho = st.rho(i);
            let (hy, hz) = (st.hy(i), st.hz(i));
            let c2 = (self.gamma * st.p[i] + self.h0 * self.h0 + hy * hy + hz * hz) / rho;
            speed = speed.max(rho * c2.sqrt());
        }
        let mut dt = if speed > 0.0 { self.cfl * st.ds / speed } else { f64::INFINITY };
        if self.sigma.is_some() {
            for i in 0..n {
                let j = (i + 1) % n;
                let rho_f = 0.5 * (st.rho(i) + st.rho(j));
                let p_f = 0.5 * (st.p[i] + st.p[j]);
                let sig = self.sigma_at(st.s_face(i), rho_f, p_f);
                dt = dt.min(self.cfl * sig * st.ds * st.ds / (2.0 * rho_f * rho_f));
            }
        }
        dt
    }

    /// One step of size `dt`. Returns the new state and the state at which
    /// the final update was evaluated (the midpoint for second order).
    pub fn step(&self, st: &StateGrid, dt: f64) -> Result<(StateGrid, StateGrid)> {
        let (next, stage) = if self.time_order == 1 {
            (st.axpy(dt, &self.rhs(st)), st.clone())
        } else {
            let mid = st.axpy(0.5 * dt, &self.rhs(st));
            (st.axpy(dt, &self.rhs(&mid)), mid)
        };
        if let Some((field, index, value)) = next.invalid() {
            return Err(SimError::BlowUp { t: next.t, field: field.into(), index, value });
        }
        Ok((next, stage))
    }
}

/// Single step with the CFL-chosen `dt` (capped by `limit`).
pub fn step(state: &StateGrid, model: &Model, limit: f64) -> Result<(StateGrid, f64)> {
    let dt = model.stable_dt(state).min(limit);
    if !(dt > 0.0) {
        return Err(SimError::BlowUp { t: state.t, field: "dt".into(), index: 0, value: dt });
    }
    Ok((model.step(state, dt)?.0, dt))
}
