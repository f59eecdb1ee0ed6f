//! Grid totals of conservation-law densities.

use crate::scheme::Model;
use crate::state::StateGrid;
use crate::{Result, SimError};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Laws that can be monitored; ids match the corpus short ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LawId {
    Mass,
    MomentumX,
    MomentumY,
    MomentumZ,
    FluxY,
    FluxZ,
    Energy,
    Entropy,
    CenterX,
    CenterY,
    CenterZ,
    Angular,
    ExtSHz,
    ExtSHy,
}

impl LawId {
    pub const ALL: [LawId; 14] = [
        LawId::Mass,
        LawId::MomentumX,
        LawId::MomentumY,
        LawId::MomentumZ,
        LawId::FluxY,
        LawId::FluxZ,
        LawId::Energy,
        LawId::Entropy,
        LawId::CenterX,
        LawId::CenterY,
        LawId::CenterZ,
        LawId::Angular,
        LawId::ExtSHz,
        LawId::ExtSHy,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LawId::Mass => "mass",
            LawId::MomentumX => "momentum-x",
            LawId::MomentumY => "momentum-y",
            LawId::MomentumZ => "momentum-z",
            LawId::FluxY => "flux-y",
            LawId::FluxZ => "flux-z",
            LawId::Energy => "energy",
            LawId::Entropy => "entropy",
            LawId::CenterX => "center-x",
            LawId::CenterY => "center-y",
            LawId::CenterZ => "center-z",
            LawId::Angular => "angular",
            LawId::ExtSHz => "ext-sHz",
            LawId::ExtSHy => "ext-sHy",
        }
    }

    /// Laws whose discrete update telescopes, so totals are exact up to
    /// round-off.
    pub fn is_flux_form(self) -> bool {
        matches!(
            self,
            LawId::Mass | LawId::MomentumX | LawId::MomentumY | LawId::MomentumZ | LawId::FluxY | LawId::FluxZ
        )
    }

    /// Extension laws are monitored as a balance over the first half of the
    /// period, with the flux through its ends integrated in time.
    pub fn is_windowed(self) -> bool {
        matches!(self, LawId::ExtSHz | LawId::ExtSHy)
    }

    pub fn check_available(self, st: &StateGrid, model: &Model) -> Result<()> {
        let missing = |field: &str| Err(SimError::UntrackedField { law: self.id().into(), field: field.into() });
        match self {
            LawId::CenterY | LawId::CenterZ | LawId::Angular if st.y.is_none() => missing("y, z"),
            LawId::ExtSHz | LawId::ExtSHy if model.sigma.is_none() => missing("E"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LawId {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        LawId::ALL.iter().copied().find(|l| l.id() == s).ok_or_else(|| SimError::UnknownLaw(s.to_string()))
    }
}

fn sum(n: usize, f: impl Fn(usize) -> f64) -> f64 {
    (0..n).map(f).sum()
}

/// Midpoint-rule total `sum Tt ds` (over the half-period window for the
/// extension laws).
pub fn density_total(law: LawId, st: &StateGrid, model: &Model) -> f64 {
    let n = st.n();
    let g = model.gamma;
    let t = st.t;
    let opt = |f: &Option<Vec<f64>>, i: usize| f.as_ref().map_or(0.0, |v| v[i]);
    let total = match law {
        LawId::Mass => sum(n, |i| st.tau[i]),
        LawId::MomentumX => sum(n, |i| st.u[i]),
        LawId::MomentumY => sum(n, |i| st.v[i]),
        LawId::MomentumZ => sum(n, |i| st.w[i]),
        LawId::FluxY => sum(n, |i| st.by[i]),
        LawId::FluxZ => sum(n, |i| st.bz[i]),
        LawId::Energy => sum(n, |i| {
            let l = (i + n - 1) % n;
            let u2 = 0.5 * (st.u[l] * st.u[l] + st.u[i] * st.u[i]);
            let (hy, hz) = (st.hy(i), st.hz(i));
            0.5 * (u2 + st.v[i] * st.v[i] + st.w[i] * st.w[i])
                + st.p[i] * st.tau[i] / (g - 1.0)
                + 0.5 * (hy * hy + hz * hz) * st.tau[i]
        }),
        LawId::Entropy => sum(n, |i| st.p[i] * st.tau[i].powf(g)),
        LawId::CenterX => sum(n, |i| t * st.u[i] - st.x[i]),
        LawId::CenterY => sum(n, |i| t * st.v[i] - opt(&st.y, i)),
        LawId::CenterZ => sum(n, |i| t * st.w[i] - opt(&st.z, i)),
        LawId::Angular => sum(n, |i| opt(&st.z, i) * st.v[i] - opt(&st.y, i) * st.w[i]),
        LawId::ExtSHz => sum(n / 2, |i| st.s_center(i) * st.bz[i]),
        LawId::ExtSHy => sum(n / 2, |i| st.s_center(i) * st.by[i]),
    };
    total * st.ds
}

/// Net flux `Ts(right) - Ts(left)` out of the half-period window, for the
/// windowed laws; zero otherwise.
pub fn window_outflow(law: LawId, st: &StateGrid, model: &Model) -> f64 {
    if !law.is_windowed() {
        return 0.0;
    }
    let n = st.n();
    let (ey, ez) = model.electric_field(st);
    let flux = |face: usize, s: f64| {
        let j = (face + 1) % n;
        match law {
            LawId::ExtSHz => s * ey[face] + 0.5 * (st.hz(face) + st.hz(j)),
            _ => 0.5 * (st.hy(face) + st.hy(j)) - s * ez[face],
        }
    };
    flux(n / 2 - 1, st.s_face(n / 2 - 1)) - flux(n - 1, 0.0)
}

/// Totals for a selection of laws.
pub fn monitor_totals(st: &StateGrid, model: &Model, laws: &[LawId]) -> Result<Vec<(LawId, f64)>> {
    laws.iter()
        .map(|l| {
            l.check_available(st, model)?;
            Ok((*l, density_total(*l, st, model)))
        })
        .collect()
}

/// Time series of one monitored total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorSeries {
    pub law: String,
    #[serde(skip)]
    pub totals: Vec<(f64, f64)>,
    pub samples: usize,
    pub initial: f64,
    #[serde(rename = "final")]
    pub last: f64,
    /// `max |total - total_0| / max(|total_0|, 1)`.
    pub drift: f64,
}

impl MonitorSeries {
    pub fn new(law: LawId) -> Self {
        MonitorSeries { law: law.id().into(), totals: Vec::new(), samples: 0, initial: 0.0, last: 0.0, drift: 0.0 }
    }

    pub fn push(&mut self, t: f64, total: f64) {
        if self.totals.is_empty() {
            self.initial = total;
        }
        self.totals.push((t, total));
        self.samples = self.totals.len();
        self.last = total;
        self.drift = self.drift.max((total - self.initial).abs() / self.initial.abs().max(1.0));
    }
}
