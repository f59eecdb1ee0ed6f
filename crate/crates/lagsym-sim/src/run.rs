use crate::monitor::{density_total, window_outflow, LawId, MonitorSeries};
use crate::scheme::Model;
use crate::state::{init_state, StateGrid, StateSummary};
use crate::{Result, SimConfig, SimError};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub cells_fine: usize,
    pub drift_fine: BTreeMap<String, f64>,
    /// `drift(N) / drift(2N)` per monitored law.
    pub ratios: BTreeMap<String, f64>,
    pub entropy_deviation_fine: f64,
    pub entropy_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub case: String,
    pub cells: usize,
    pub t_final: f64,
    pub final_state: StateSummary,
    pub monitors: Vec<MonitorSeries>,
    /// `max |p/rho^gamma - initial|` over cells and samples.
    pub entropy_deviation: f64,
    pub convergence: Option<ConvergenceReport>,
    pub monitors_csv: Option<String>,
}

impl SimReport {
    pub fn monitor(&self, law: LawId) -> Option<&MonitorSeries> {
        self.monitors.iter().find(|m| m.law == law.id())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Integration result at one resolution.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub state: StateGrid,
    pub steps: usize,
    pub monitors: Vec<MonitorSeries>,
    pub entropy_deviation: f64,
}

fn entropy_deviation(st: &StateGrid, s0: &[f64], gamma: f64) -> f64 {
    st.p.iter().zip(&st.tau).zip(s0).fold(0.0, |m, ((p, t), s)| m.max((p * t.powf(gamma) - s).abs()))
}

pub fn parse_laws(cfg: &SimConfig) -> Result<Vec<LawId>> {
    cfg.monitors.iter().map(|m| m.parse()).collect()
}

/// Integrate `cfg` at `cells` resolution to `t_final`.
pub fn integrate(cfg: &SimConfig, cells: usize) -> Result<Trajectory> {
    let cfg = SimConfig { cells, ..cfg.clone() };
    let model = Model::new(&cfg.scheme, &cfg)?;
    let laws = parse_laws(&cfg)?;
    let mut st = init_state(&cfg)?;
    for l in &laws {
        l.check_available(&st, &model)?;
    }
    let g = model.gamma;
    let s0: Vec<f64> = st.p.iter().zip(&st.tau).map(|(p, t)| p * t.powf(g)).collect();
    let mut monitors: Vec<MonitorSeries> = laws.iter().map(|l| MonitorSeries::new(*l)).collect();
    let mut outflow = vec![0.0; laws.len()];
    let sample = |st: &StateGrid, outflow: &[f64], monitors: &mut [MonitorSeries]| {
        for ((l, m), acc) in laws.iter().zip(monitors.iter_mut()).zip(outflow) {
            m.push(st.t, density_total(*l, st, &model) + acc);
        }
    };
    sample(&st, &outflow, &mut monitors);
    let mut dev = 0.0;
    let mut steps = 0;
    let eps = 1e-12 * cfg.t_final.max(1e-300);
    while st.t < cfg.t_final - eps {
        if steps >= cfg.max_steps {
            return Err(SimError::Config(format!("max_steps = {} reached at t = {}", cfg.max_steps, st.t)));
        }
        let dt = model.stable_dt(&st).min(cfg.t_final - st.t);
        let (next, stage) = model.step(&st, dt)?;
        for (l, acc) in laws.iter().zip(outflow.iter_mut()) {
            *acc += dt * window_outflow(*l, &stage, &model);
        }
        st = next;
        steps += 1;
        let last = st.t >= cfg.t_final - eps;
        if steps % cfg.stride == 0 || last {
            sample(&st, &outflow, &mut monitors);
            dev = f64::max(dev, entropy_deviation(&st, &s0, g));
        }
    }
    Ok(Trajectory { state: st, steps, monitors, entropy_deviation: dev })
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

/// Run a configuration, optionally with a concurrent run at `2N`, and write
/// the configured outputs.
pub fn run(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    let (coarse, fine) = if cfg.convergence {
        let (a, b) = std::thread::scope(|sc| {
            let h = sc.spawn(|| integrate(cfg, 2 * cfg.cells));
            let a = integrate(cfg, cfg.cells);
            (a, h.join().expect("fine run panicked"))
        });
        (a?, Some(b?))
    } else {
        (integrate(cfg, cfg.cells)?, None)
    };
    let convergence = fine.map(|f| ConvergenceReport {
        cells_fine: 2 * cfg.cells,
        drift_fine: f.monitors.iter().map(|m| (m.law.clone(), m.drift)).collect(),
        ratios: coarse.monitors.iter().zip(&f.monitors).map(|(c, m)| (c.law.clone(), ratio(c.drift, m.drift))).collect(),
        entropy_deviation_fine: f.entropy_deviation,
        entropy_ratio: ratio(coarse.entropy_deviation, f.entropy_deviation),
    });
    let report = SimReport {
        case: cfg.case.clone(),
        cells: cfg.cells,
        t_final: cfg.t_final,
        final_state: coarse.state.summary(coarse.steps),
        monitors: coarse.monitors,
        entropy_deviation: coarse.entropy_deviation,
        convergence,
        monitors_csv: cfg.output.monitors_csv.as_ref().map(|p| p.display().to_string()),
    };
    if let Some(p) = &cfg.output.monitors_csv {
        write_monitors_csv(&report.monitors, p)?;
    }
    if let Some(p) = &cfg.output.report {
        std::fs::write(p, report.to_json() + "\n").map_err(|e| SimError::Io(p.display().to_string(), e.to_string()))?;
    }
    Ok(report)
}

/// CSV with columns `t, law_id, total, drift` (running drift).
pub fn write_monitors_csv(monitors: &[MonitorSeries], path: &Path) -> Result<()> {
    let io = |e: csv::Error| SimError::Io(path.display().to_string(), e.to_string());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["t", "law_id", "total", "drift"]).map_err(io)?;
    for m in monitors {
        let mut running: f64 = 0.0;
        for (t, v) in &m.totals {
            running = running.max((v - m.initial).abs() / m.initial.abs().max(1.0));
            w.write_record([t.to_string(), m.law.clone(), v.to_string(), running.to_string()]).map_err(io)?;
        }
    }
    w.flush().map_err(|e| SimError::Io(path.display().to_string(), e.to_string()))
}
