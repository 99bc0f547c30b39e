use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{RunRecord, StepperConfig, Verdict};
use crate::error::{Error, Result};
use crate::params::PhysParams;

/// Fixed leading columns of the run CSV; observer columns follow.
pub const CSV_COLUMNS: [&str; 15] = [
    "t",
    "dt",
    "mass",
    "energy",
    "hs_sq",
    "hsc",
    "potential",
    "lpc",
    "me_ratio",
    "grad_ratio",
    "membership",
    "tail_fraction",
    "strichartz",
    "soliton_dev",
    "sample",
];

pub fn write_csv(rec: &RunRecord, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(rec.extra.iter().map(|(n, _)| n.clone()));
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..rec.len() {
        let mut row = vec![
            fmt(rec.times[i]),
            fmt(rec.dt_series[i]),
            fmt(rec.mass_series[i]),
            fmt(rec.energy_series[i]),
            fmt(rec.hs_series[i]),
            fmt(rec.hsc_series[i]),
            fmt(rec.v_series[i]),
            fmt(rec.lpc_series[i]),
            fmt(rec.me_ratio_series[i]),
            fmt(rec.grad_ratio_series[i]),
            rec.membership_series[i].to_string(),
            fmt(rec.tail_series[i]),
            fmt(rec.strichartz_series[i]),
            fmt(rec.soliton_dev_series[i]),
            i.to_string(),
        ];
        row.extend(rec.extra.iter().map(|(_, col)| col.get(i).map_or_else(String::new, |v| fmt(*v))));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub verdict: Verdict,
    pub params: PhysParams,
    pub stepper: StepperConfig,
    pub steps: usize,
    pub final_time: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub v_ratio: f64,
    pub hs_ratio: f64,
    pub strichartz_accum: f64,
}

impl RunSummary {
    pub fn new(rec: &RunRecord, params: &PhysParams, stepper: &StepperConfig) -> Self {
        let last = rec.len() - 1;
        Self {
            verdict: rec.verdict(),
            params: *params,
            stepper: *stepper,
            steps: rec.steps,
            final_time: rec.times[last],
            mass_drift: rec.mass_drift(),
            energy_drift: rec.energy_drift(),
            v_ratio: rec.v_series[last] / rec.v_series[0],
            hs_ratio: rec.hs_series[last] / rec.hs_series[0],
            strichartz_accum: rec.strichartz_accum,
        }
    }
}

/// Writes any serializable summary as pretty JSON.
pub fn write_summary<T: Serialize>(summary: &T, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(summary)?)?;
    Ok(())
}
