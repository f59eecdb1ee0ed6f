//! Explicit integrator for plane 1D MHD in the mass Lagrangian coordinate on
//! a periodic staggered grid, with grid totals of the conservation laws.

mod config;
pub mod monitor;
pub mod numeric;
pub mod potential;
mod run;
pub mod scheme;
pub mod state;
pub mod transport;

pub use config::{InitialData, OutputPaths, SchemeParams, SimConfig};
pub use monitor::{monitor_totals, LawId, MonitorSeries};
pub use run::{integrate, run, write_monitors_csv, ConvergenceReport, SimReport, Trajectory};
pub use scheme::{step, Model};
pub use potential::{cross_scheme, CrossSchemeReport};
pub use state::{init_state, StateGrid, StateSummary};
pub use transport::{transport_check, ScalingWeights, TransportReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot use expression `{0}`: {1}")]
    Expr(String, String),
    #[error("initial {field} is not positive at cell {index} ({value})")]
    NonPositive { field: String, index: usize, value: f64 },
    #[error("initial profile for {0} is not periodic on the mass interval")]
    NonPeriodic(String),
    #[error("blow-up at t = {t}: {field} = {value} at index {index}")]
    BlowUp { t: f64, field: String, index: usize, value: f64 },
    #[error("law `{law}` needs {field}, which is not tracked")]
    UntrackedField { law: String, field: String },
    #[error("generator {generator} is not a diagonal scaling in {component}")]
    NotScaling { generator: String, component: String },
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("{0}: {1}")]
    Io(String, String),
}

pub type Result<T> = std::result::Result<T, SimError>;
