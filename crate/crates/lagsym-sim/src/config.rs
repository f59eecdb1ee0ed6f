use crate::{Result, SimError};
use lagsym::corpus::CaseId;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Conductivity model: `"infinite"` or an expression in `rho` and `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeParams {
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_order")]
    pub time_order: u8,
    #[serde(default = "default_sigma")]
    pub sigma: String,
    #[serde(default)]
    pub h0: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub artificial_viscosity: f64,
}

fn default_cfl() -> f64 {
    0.4
}
fn default_order() -> u8 {
    2
}
fn default_sigma() -> String {
    "rho".into()
}
fn default_gamma() -> f64 {
    1.4
}

impl Default for SchemeParams {
    fn default() -> Self {
        SchemeParams {
            cfl: default_cfl(),
            time_order: default_order(),
            sigma: default_sigma(),
            h0: 0.0,
            gamma: default_gamma(),
            artificial_viscosity: 0.0,
        }
    }
}

impl SchemeParams {
    pub fn infinite_sigma(&self) -> bool {
        self.sigma.trim() == "infinite"
    }
}

/// Initial profiles as expressions in `s` (with `sin`, `cos`, `exp`, `pi`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    #[serde(default = "one")]
    pub rho: String,
    #[serde(default = "zero")]
    pub u: String,
    #[serde(default = "one")]
    pub p: String,
    #[serde(default = "zero")]
    pub hy: String,
    #[serde(default = "zero")]
    pub hz: String,
    #[serde(default = "zero")]
    pub v: String,
    #[serde(default = "zero")]
    pub w: String,
}

fn one() -> String {
    "1".into()
}
fn zero() -> String {
    "0".into()
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData { rho: one(), u: zero(), p: one(), hy: zero(), hz: zero(), v: zero(), w: zero() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub monitors_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub case: String,
    pub cells: usize,
    /// Length of the periodic mass interval.
    #[serde(default = "mass_one")]
    pub mass: f64,
    pub t_final: f64,
    #[serde(default)]
    pub scheme: SchemeParams,
    #[serde(default)]
    pub initial: InitialData,
    #[serde(default)]
    pub monitors: Vec<String>,
    #[serde(default)]
    pub track_yz: bool,
    /// Sample monitors every `stride` steps (and always at the end).
    #[serde(default = "stride_one")]
    pub stride: usize,
    #[serde(default = "max_steps")]
    pub max_steps: usize,
    /// Also run at twice the resolution and report drift ratios.
    #[serde(default)]
    pub convergence: bool,
    #[serde(default)]
    pub output: OutputPaths,
}

fn mass_one() -> f64 {
    1.0
}
fn stride_one() -> usize {
    1
}
fn max_steps() -> usize {
    10_000_000
}

impl SimConfig {
    pub fn new(case: CaseId, cells: usize, t_final: f64) -> Self {
        SimConfig {
            case: case.id().to_string(),
            cells,
            mass: 1.0,
            t_final,
            scheme: SchemeParams::default(),
            initial: InitialData::default(),
            monitors: Vec::new(),
            track_yz: false,
            stride: 1,
            max_steps: max_steps(),
            convergence: false,
            output: OutputPaths::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: SimConfig = serde_json::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn case_id(&self) -> Result<CaseId> {
        let c: CaseId = self.case.parse().map_err(|_| SimError::Config(format!("unknown case `{}`", self.case)))?;
        if c.is_variational() || c == CaseId::FiniteSigmaH0zeroResidual {
            return Err(SimError::Config(format!("case `{}` has no direct integrator", self.case)));
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let case = self.case_id()?;
        let bad = |m: &str| Err(SimError::Config(m.to_string()));
        if self.cells < 4 || !self.cells.is_multiple_of(2) {
            return bad("cells must be an even number >= 4");
        }
        if !(self.mass > 0.0 && self.t_final >= 0.0) {
            return bad("mass must be positive and t_final non-negative");
        }
        let s = &self.scheme;
        if !(s.cfl > 0.0 && s.cfl < 1.0) {
            return bad("cfl must lie in (0, 1)");
        }
        if !matches!(s.time_order, 1 | 2) {
            return bad("time_order must be 1 or 2");
        }
        if s.gamma <= 1.0 {
            return bad("gamma must exceed 1");
        }
        if s.artificial_viscosity < 0.0 {
            return bad("artificial_viscosity must be non-negative");
        }
        if self.stride == 0 {
            return bad("stride must be positive");
        }
        let infinite = matches!(case, CaseId::InfiniteSigmaH0nz | CaseId::InfiniteSigmaH0zeroReduced);
        if infinite != s.infinite_sigma() {
            return bad("sigma must be \"infinite\" exactly for the infinite-conductivity cases");
        }
        if case.h0_nonzero() == (s.h0 == 0.0) {
            return bad("h0 must be nonzero exactly for the H0 != 0 cases");
        }
        Ok(())
    }
}
