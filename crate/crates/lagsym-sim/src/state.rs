//! Periodic staggered grid in the mass coordinate.
//!
//! Cell `i` has centre `s = (i + 1/2) ds` and right face `s = (i + 1) ds`.
//! Thermodynamic and magnetic quantities live at centres, velocity `u` and
//! position `x` at faces. The evolved magnetic variables are `Hy/rho` and
//! `Hz/rho`, the densities of the flux laws.

use crate::numeric::Compiled;
use crate::{Result, SimConfig, SimError};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct StateGrid {
    pub ds: f64,
    pub t: f64,
    /// Specific volume `1/rho` at centres.
    pub tau: Vec<f64>,
    pub p: Vec<f64>,
    /// `Hy/rho` at centres.
    pub by: Vec<f64>,
    /// `Hz/rho` at centres.
    pub bz: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    /// Velocity at faces.
    pub u: Vec<f64>,
    /// Position at faces; grows by the physical length over one period.
    pub x: Vec<f64>,
    pub y: Option<Vec<f64>>,
    pub z: Option<Vec<f64>>,
}

impl StateGrid {
    pub fn n(&self) -> usize {
        self.tau.len()
    }

    pub fn s_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.ds
    }

    pub fn s_face(&self, i: usize) -> f64 {
        (i as f64 + 1.0) * self.ds
    }

    pub fn rho(&self, i: usize) -> f64 {
        1.0 / self.tau[i]
    }

    pub fn hy(&self, i: usize) -> f64 {
        self.by[i] / self.tau[i]
    }

    pub fn hz(&self, i: usize) -> f64 {
        self.bz[i] / self.tau[i]
    }

    /// Physical length of one period, `sum ds / rho`.
    pub fn length(&self) -> f64 {
        self.tau.iter().sum::<f64>() * self.ds
    }

    /// Uniform state with the given values.
    pub fn uniform(n: usize, mass: f64, rho: f64, u: f64, p: f64) -> StateGrid {
        let ds = mass / n as f64;
        StateGrid {
            ds,
            t: 0.0,
            tau: vec![1.0 / rho; n],
            p: vec![p; n],
            by: vec![0.0; n],
            bz: vec![0.0; n],
            v: vec![0.0; n],
            w: vec![0.0; n],
            u: vec![u; n],
            x: (0..n).map(|i| (i + 1) as f64 * ds / rho).collect(),
            y: None,
            z: None,
        }
    }

    /// `self + k * d`, field by field.
    pub(crate) fn axpy(&self, k: f64, d: &StateGrid) -> StateGrid {
        let f = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + k * y).collect::<Vec<_>>();
        let g = |a: &Option<Vec<f64>>, b: &Option<Vec<f64>>| match (a, b) {
            (Some(a), Some(b)) => Some(f(a, b)),
            (a, _) => a.clone(),
        };
        StateGrid {
            ds: self.ds,
            t: self.t + k * d.t,
            tau: f(&self.tau, &d.tau),
            p: f(&self.p, &d.p),
            by: f(&self.by, &d.by),
            bz: f(&self.bz, &d.bz),
            v: f(&self.v, &d.v),
            w: f(&self.w, &d.w),
            u: f(&self.u, &d.u),
            x: f(&self.x, &d.x),
            y: g(&self.y, &d.y),
            z: g(&self.z, &d.z),
        }
    }

    /// First nonpositive density or pressure, or non-finite value.
    pub fn invalid(&self) -> Option<(&'static str, usize, f64)> {
        for (name, field) in [("rho", &self.tau), ("p", &self.p)] {
            if let Some(i) = field.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
                let val = if name == "rho" { 1.0 / field[i] } else { field[i] };
                return Some((name, i, val));
            }
        }
        for (name, field) in [("u", &self.u), ("Hy/rho", &self.by), ("Hz/rho", &self.bz), ("v", &self.v), ("w", &self.w)] {
            if let Some(i) = field.iter().position(|v| !v.is_finite()) {
                return Some((name, i, field[i]));
            }
        }
        None
    }

    pub fn summary(&self, steps: usize) -> StateSummary {
        let n = self.n();
        let fold = |f: &dyn Fn(usize) -> f64| {
            (0..n).map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
        };
        let (rho_min, rho_max) = fold(&|i| self.rho(i));
        let (p_min, p_max) = fold(&|i| self.p[i]);
        StateSummary {
            t: self.t,
            steps,
            rho_min,
            rho_max,
            p_min,
            p_max,
            u_max_abs: self.u.iter().fold(0.0, |m, v| m.max(v.abs())),
            length: self.length(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSummary {
    pub t: f64,
    pub steps: usize,
    pub rho_min: f64,
    pub rho_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub u_max_abs: f64,
    pub length: f64,
}

const PERIODIC_TOL: f64 = 1e-9;

fn sample(name: &str, text: &str, pts: &[f64], mass: f64, consts: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
    let c = Compiled::parse(text, &[], consts)?;
    let (a, b) = (c.eval(0.0, &[]), c.eval(mass, &[]));
    if (a - b).abs() > PERIODIC_TOL * a.abs().max(b.abs()).max(1.0) {
        return Err(SimError::NonPeriodic(name.to_string()));
    }
    Ok(pts.iter().map(|s| c.eval(*s, &[])).collect())
}

pub(crate) fn parameter_constants(cfg: &SimConfig) -> BTreeMap<String, f64> {
    [("gamma".to_string(), cfg.scheme.gamma), ("H0".to_string(), cfg.scheme.h0)].into_iter().collect()
}

/// Sample the initial profiles; `x` is integrated from `x_s = 1/rho` with
/// `x(0) = 0`, and `y`, `z` (when tracked) from `y_s = Hy/(H0 rho)`.
pub fn init_state(cfg: &SimConfig) -> Result<StateGrid> {
    cfg.validate()?;
    let n = cfg.cells;
    let ds = cfg.mass / n as f64;
    let consts = parameter_constants(cfg);
    let centers: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * ds).collect();
    let faces: Vec<f64> = (0..n).map(|i| (i as f64 + 1.0) * ds).collect();
    let ic = &cfg.initial;
    let rho = sample("rho", &ic.rho, &centers, cfg.mass, &consts)?;
    let p = sample("p", &ic.p, &centers, cfg.mass, &consts)?;
    for (name, f) in [("rho", &rho), ("p", &p)] {
        if let Some(i) = f.iter().position(|v| !(*v > 0.0)) {
            return Err(SimError::NonPositive { field: name.into(), index: i, value: f[i] });
        }
    }
    let tau: Vec<f64> = rho.iter().map(|r| 1.0 / r).collect();
    let hy = sample("Hy", &ic.hy, &centers, cfg.mass, &consts)?;
    let hz = sample("Hz", &ic.hz, &centers, cfg.mass, &consts)?;
    let by: Vec<f64> = hy.iter().zip(&tau).map(|(h, t)| h * t).collect();
    let bz: Vec<f64> = hz.iter().zip(&tau).map(|(h, t)| h * t).collect();
    let mut x = Vec::with_capacity(n);
    let mut acc = 0.0;
    for t in &tau {
        acc += t * ds;
        x.push(acc);
    }
    let (y, z) = if cfg.track_yz {
        let integrate = |b: &[f64]| {
            if cfg.scheme.h0 == 0.0 {
                return vec![0.0; n];
            }
            let mut out = Vec::with_capacity(n);
            let mut acc = 0.0;
            for bi in b {
                out.push(acc + 0.5 * bi * ds / cfg.scheme.h0);
                acc += bi * ds / cfg.scheme.h0;
            }
            out
        };
        (Some(integrate(&by)), Some(integrate(&bz)))
    } else {
        (None, None)
    };
    Ok(StateGrid {
        ds,
        t: 0.0,
        tau,
        p,
        by,
        bz,
        v: sample("v", &ic.v, &centers, cfg.mass, &consts)?,
        w: sample("w", &ic.w, &centers, cfg.mass, &consts)?,
        u: sample("u", &ic.u, &faces, cfg.mass, &consts)?,
        x,
        y,
        z,
    })
}
