use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::RunRecord;

/// Finite-time decay indicators. None of these certifies scattering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringProxies {
    /// `V(u(t_end)) / V(u0)`.
    pub v_ratio: f64,
    /// `‖u(t_end)‖_{p_c} / ‖u0‖_{p_c}`.
    pub lpc_ratio: f64,
    /// Growth of `∫ ‖u‖_{r_c}^{q_c} dt` per unit time over the first quarter.
    pub strichartz_rate_first: f64,
    /// Same over the final quarter.
    pub strichartz_rate_final: f64,
}

impl ScatteringProxies {
    pub fn rate_decaying(&self) -> bool {
        self.strichartz_rate_final < self.strichartz_rate_first
    }
}

pub fn scattering_proxies(rec: &RunRecord, q_c: f64) -> Result<ScatteringProxies> {
    if rec.len() < 2 {
        return Err(Error::InvalidArgument("scattering proxies need at least two samples".into()));
    }
    let last = rec.len() - 1;
    let (t0, t1) = (rec.times[0], rec.times[last]);
    let accum: Vec<f64> = rec.strichartz_series.iter().map(|v| v.powf(q_c)).collect();
    let at = |t: f64| rec.times.iter().position(|x| *x >= t).unwrap_or(last);
    let rate = |a: usize, b: usize| {
        let dt = rec.times[b] - rec.times[a];
        if dt > 0.0 { (accum[b] - accum[a]) / dt } else { 0.0 }
    };
    let span = t1 - t0;
    let first_end = at(t0 + 0.25 * span).max(1);
    let final_start = at(t0 + 0.75 * span).min(last - 1);
    Ok(ScatteringProxies {
        v_ratio: rec.v_series[last] / rec.v_series[0],
        lpc_ratio: rec.lpc_series[last] / rec.lpc_series[0],
        strichartz_rate_first: rate(0, first_end),
        strichartz_rate_final: rate(final_start, last),
    })
}
