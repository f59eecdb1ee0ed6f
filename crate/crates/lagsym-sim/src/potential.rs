//! Integrator for the potential form of the infinite-conductivity systems,
//! where positions `x = phi`, `y = psi`, `z = chi` are the unknowns and the
//! equations are the Euler-Lagrange equations of the action. Used as an
//! independent check of the direct scheme from matched initial data.
//!
//! All potentials and their velocities live at faces; `phi_s` and `psi_s`
//! at centres are face differences. Over one period `phi` grows by the
//! physical length and `psi`, `chi` by the magnetic fluxes over `H0`.

use crate::numeric::Compiled;
use crate::scheme::Model;
use crate::state::{init_state, parameter_constants, StateGrid};
use crate::{Result, SimConfig, SimError};
use lagsym::corpus::CaseId;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    pub ds: f64,
    pub t: f64,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub chi: Vec<f64>,
    pub phi_t: Vec<f64>,
    pub psi_t: Vec<f64>,
    pub chi_t: Vec<f64>,
    /// Growth of `phi`, `psi`, `chi` over one period.
    pub jumps: [f64; 3],
}

/// Frozen profiles of the potential form.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialModel {
    pub gamma: f64,
    pub h0: f64,
    pub cfl: f64,
    /// `p / rho^gamma` per cell.
    pub entropy: Vec<f64>,
    /// `H/rho` per cell; frozen when `h0 == 0`.
    pub fy: Vec<f64>,
    pub fz: Vec<f64>,
}

fn backward_diff(f: &[f64], jump: f64, ds: f64) -> Vec<f64> {
    let n = f.len();
    (0..n).map(|i| if i == 0 { f[0] - (f[n - 1] - jump) } else { f[i] - f[i - 1] } / ds).collect()
}

impl PotentialModel {
    fn field(&self, i: usize) -> f64 {
        0.5 * (self.fy[i] * self.fy[i] + self.fz[i] * self.fz[i])
    }

    /// Total pressure and transverse fields at centres.
    fn centre_fields(&self, g: &PotentialGrid) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let tau = backward_diff(&g.phi, g.jumps[0], g.ds);
        let n = tau.len();
        let (hy, hz) = if self.h0 != 0.0 {
            let py = backward_diff(&g.psi, g.jumps[1], g.ds);
            let pz = backward_diff(&g.chi, g.jumps[2], g.ds);
            ((0..n).map(|i| self.h0 * py[i] / tau[i]).collect(), (0..n).map(|i| self.h0 * pz[i] / tau[i]).collect())
        } else {
            (vec![0.0; n], vec![0.0; n])
        };
        let total: Vec<f64> = (0..n)
            .map(|i| {
                let p = self.entropy[i] * tau[i].powf(-self.gamma);
                let mag = if self.h0 != 0.0 { 0.5 * (hy[i] * hy[i] + hz[i] * hz[i]) } else { self.field(i) / (tau[i] * tau[i]) };
                p + mag
            })
            .collect();
        (tau, total, hy, hz)
    }

    /// Accelerations of `phi`, `psi`, `chi` at faces.
    pub fn accelerations(&self, g: &PotentialGrid) -> [Vec<f64>; 3] {
        let (_, total, hy, hz) = self.centre_fields(g);
        let n = total.len();
        let r = |i: usize| (i + 1) % n;
        let ax = (0..n).map(|i| -(total[r(i)] - total[i]) / g.ds).collect();
        let ay = (0..n).map(|i| self.h0 * (hy[r(i)] - hy[i]) / g.ds).collect();
        let az = (0..n).map(|i| self.h0 * (hz[r(i)] - hz[i]) / g.ds).collect();
        [ax, ay, az]
    }

    pub fn stable_dt(&self, g: &PotentialGrid) -> f64 {
        let (tau, _, hy, hz) = self.centre_fields(g);
        let mut speed: f64 = 0.0;
        for i in 0..tau.len() {
            let rho = 1.0 / tau[i];
            let p = self.entropy[i] * rho.powf(self.gamma);
            let mag = if self.h0 != 0.0 { hy[i] * hy[i] + hz[i] * hz[i] } else { 2.0 * self.field(i) * rho * rho };
            let c2 = (self.gamma * p + self.h0 * self.h0 + mag) / rho;
            speed = speed.max(rho * c2.sqrt());
        }
        if speed > 0.0 {
            self.cfl * g.ds / speed
        } else {
            f64::INFINITY
        }
    }

    /// Kick-drift-kick step of size `dt`.
    pub fn step(&self, g: &PotentialGrid, dt: f64) -> Result<PotentialGrid> {
        let kick = |g: &mut PotentialGrid, a: &[Vec<f64>; 3], h: f64| {
            for (v, a) in [&mut g.phi_t, &mut g.psi_t, &mut g.chi_t].into_iter().zip(a) {
                v.iter_mut().zip(a).for_each(|(v, a)| *v += h * a);
            }
        };
        let mut next = g.clone();
        kick(&mut next, &self.accelerations(g), 0.5 * dt);
        for (q, v) in [(&mut next.phi, &next.phi_t), (&mut next.psi, &next.psi_t), (&mut next.chi, &next.chi_t)] {
            q.iter_mut().zip(v).for_each(|(q, v)| *q += dt * v);
        }
        let a = self.accelerations(&next);
        kick(&mut next, &a, 0.5 * dt);
        next.t = g.t + dt;
        if let Some(i) = backward_diff(&next.phi, next.jumps[0], next.ds).iter().position(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(SimError::BlowUp { t: next.t, field: "phi_s".into(), index: i, value: next.phi[i] });
        }
        Ok(next)
    }

    /// Direct-scheme fields reconstructed from potentials; velocities are
    /// averaged to centres.
    pub fn to_state(&self, g: &PotentialGrid) -> StateGrid {
        let (tau, _, hy, hz) = self.centre_fields(g);
        let n = tau.len();
        let l = |i: usize| (i + n - 1) % n;
        let centre = |f: &[f64]| (0..n).map(|i| 0.5 * (f[l(i)] + f[i])).collect::<Vec<f64>>();
        let (by, bz) = if self.h0 != 0.0 {
            ((0..n).map(|i| hy[i] * tau[i]).collect(), (0..n).map(|i| hz[i] * tau[i]).collect())
        } else {
            (self.fy.clone(), self.fz.clone())
        };
        StateGrid {
            ds: g.ds,
            t: g.t,
            p: (0..n).map(|i| self.entropy[i] * tau[i].powf(-self.gamma)).collect(),
            tau,
            by,
            bz,
            v: centre(&g.psi_t),
            w: centre(&g.chi_t),
            u: g.phi_t.clone(),
            x: g.phi.clone(),
            y: None,
            z: None,
        }
    }
}

fn cumulative(f: &[f64], scale: f64) -> Vec<f64> {
    f.iter()
        .scan(0.0, |acc, v| {
            *acc += v * scale;
            Some(*acc)
        })
        .collect()
}

/// Potential-form initial data matching [`init_state`] for an
/// infinite-conductivity configuration.
pub fn init_potential(cfg: &SimConfig) -> Result<(PotentialModel, PotentialGrid)> {
    let case = cfg.case_id()?;
    if !matches!(case, CaseId::InfiniteSigmaH0nz | CaseId::InfiniteSigmaH0zeroReduced) {
        return Err(SimError::Config(format!("case `{}` has no potential form", cfg.case)));
    }
    let st = init_state(cfg)?;
    let n = st.n();
    let g = cfg.scheme.gamma;
    let h0 = cfg.scheme.h0;
    let consts = parameter_constants(cfg);
    let at_faces = |text: &str| -> Result<Vec<f64>> {
        let c = Compiled::parse(text, &[], &consts)?;
        Ok((0..n).map(|i| c.eval(st.s_face(i), &[])).collect())
    };
    let model = PotentialModel {
        gamma: g,
        h0,
        cfl: cfg.scheme.cfl,
        entropy: st.p.iter().zip(&st.tau).map(|(p, t)| p * t.powf(g)).collect(),
        fy: st.by.clone(),
        fz: st.bz.clone(),
    };
    let (psi, chi, jy, jz) = if h0 != 0.0 {
        let k = st.ds / h0;
        (cumulative(&st.by, k), cumulative(&st.bz, k), st.by.iter().sum::<f64>() * k, st.bz.iter().sum::<f64>() * k)
    } else {
        (vec![0.0; n], vec![0.0; n], 0.0, 0.0)
    };
    let grid = PotentialGrid {
        ds: st.ds,
        t: 0.0,
        phi: st.x.clone(),
        psi,
        chi,
        phi_t: st.u.clone(),
        psi_t: at_faces(&cfg.initial.v)?,
        chi_t: at_faces(&cfg.initial.w)?,
        jumps: [st.length(), jy, jz],
    };
    Ok((model, grid))
}

/// Integrate the potential form to `cfg.t_final`; returns the final grid and
/// the number of steps.
pub fn integrate_potential(cfg: &SimConfig) -> Result<(PotentialModel, PotentialGrid, usize)> {
    let (model, mut g) = init_potential(cfg)?;
    let eps = 1e-12 * cfg.t_final.max(1e-300);
    let mut steps = 0;
    while g.t < cfg.t_final - eps {
        if steps >= cfg.max_steps {
            return Err(SimError::Config(format!("max_steps = {} reached at t = {}", cfg.max_steps, g.t)));
        }
        let dt = model.stable_dt(&g).min(cfg.t_final - g.t);
        g = model.step(&g, dt)?;
        steps += 1;
    }
    Ok((model, g, steps))
}

/// Direct scheme without monitors.
pub fn integrate_direct(cfg: &SimConfig) -> Result<(StateGrid, usize)> {
    let model = Model::new(&cfg.scheme, cfg)?;
    let mut st = init_state(cfg)?;
    let eps = 1e-12 * cfg.t_final.max(1e-300);
    let mut steps = 0;
    while st.t < cfg.t_final - eps {
        if steps >= cfg.max_steps {
            return Err(SimError::Config(format!("max_steps = {} reached at t = {}", cfg.max_steps, st.t)));
        }
        let dt = model.stable_dt(&st).min(cfg.t_final - st.t);
        st = model.step(&st, dt)?.0;
        steps += 1;
    }
    Ok((st, steps))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossSchemeReport {
    pub cells: usize,
    pub steps_direct: usize,
    pub steps_potential: usize,
    /// Max difference per field at `t_final`.
    pub differences: BTreeMap<String, f64>,
    pub max_difference: f64,
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Run both schemes from the same data and compare the final fields.
pub fn cross_scheme(cfg: &SimConfig) -> Result<CrossSchemeReport> {
    let (direct, pot) = std::thread::scope(|sc| {
        let h = sc.spawn(|| integrate_potential(cfg));
        (integrate_direct(cfg), h.join().expect("potential run panicked"))
    });
    let (direct, sd) = direct?;
    let (model, g, sp) = pot?;
    let other = model.to_state(&g);
    let n = direct.n();
    let rho = |s: &StateGrid| (0..n).map(|i| s.rho(i)).collect::<Vec<f64>>();
    let hy = |s: &StateGrid| (0..n).map(|i| s.hy(i)).collect::<Vec<f64>>();
    let hz = |s: &StateGrid| (0..n).map(|i| s.hz(i)).collect::<Vec<f64>>();
    let mut differences = BTreeMap::new();
    differences.insert("rho".to_string(), max_diff(&rho(&direct), &rho(&other)));
    differences.insert("p".to_string(), max_diff(&direct.p, &other.p));
    differences.insert("u".to_string(), max_diff(&direct.u, &other.u));
    differences.insert("x".to_string(), max_diff(&direct.x, &other.x));
    differences.insert("Hy".to_string(), max_diff(&hy(&direct), &hy(&other)));
    differences.insert("Hz".to_string(), max_diff(&hz(&direct), &hz(&other)));
    if model.h0 != 0.0 {
        differences.insert("v".to_string(), max_diff(&direct.v, &other.v));
        differences.insert("w".to_string(), max_diff(&direct.w, &other.w));
    }
    let max_difference = differences.values().fold(0.0, |m: f64, v| m.max(*v));
    Ok(CrossSchemeReport { cells: cfg.cells, steps_direct: sd, steps_potential: sp, differences, max_difference })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth(n: usize) -> SimConfig {
        let mut c = SimConfig::new(CaseId::InfiniteSigmaH0nz, n, 0.05);
        c.scheme.sigma = "infinite".into();
        c.scheme.h0 = 0.5;
        c.initial.rho = "1 + 0.1*sin(2*pi*s)".into();
        c.initial.hy = "0.2 + 0.1*cos(2*pi*s)".into();
        c.initial.v = "0.05*cos(2*pi*s)".into();
        c
    }

    #[test]
    fn initial_data_round_trips() {
        let cfg = smooth(16);
        let (m, g) = init_potential(&cfg).unwrap();
        let back = m.to_state(&g);
        let st = init_state(&cfg).unwrap();
        assert!(max_diff(&back.tau, &st.tau) < 1e-14);
        assert!(max_diff(&back.p, &st.p) < 1e-14);
        assert!(max_diff(&back.by, &st.by) < 1e-14);
    }

    #[test]
    fn uniform_state_is_at_rest() {
        let mut cfg = smooth(8);
        cfg.initial = Default::default();
        cfg.initial.hy = "0.3".into();
        let (m, g) = init_potential(&cfg).unwrap();
        for a in m.accelerations(&g) {
            assert!(a.iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn finite_conductivity_is_rejected() {
        let cfg = SimConfig::new(CaseId::FiniteSigmaH0zeroReduced, 8, 0.1);
        assert!(matches!(init_potential(&cfg), Err(SimError::Config(_))));
    }
}
