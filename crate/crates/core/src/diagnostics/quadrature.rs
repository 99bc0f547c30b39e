use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::composite;

/// Nodes and weights for `∫₀^∞ m^s f(m) dm`: Gauss–Legendre in `y = ln m`
/// on `[ln m_min, ln m_max]`, optionally with closed-form end corrections.
///
/// The stored weights carry the Jacobian `dm = m dy` but not `m^s`, so one
/// rule serves every `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    m_min: f64,
    m_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    tail_closure: bool,
}

impl Default for QuadratureRule {
    /// 200 nodes on `[1e-6, 1e6]` with end corrections.
    fn default() -> Self {
        Self::new(200, 1e-6, 1e6, true).expect("default rule is valid")
    }
}

impl QuadratureRule {
    /// `count` nodes: panels of ten when `count` is a multiple of ten,
    /// otherwise a single panel.
    pub fn new(count: usize, m_min: f64, m_max: f64, tail_closure: bool) -> Result<Self> {
        if count == 0 || !(m_min > 0.0 && m_max > m_min && m_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad quadrature: {count} nodes on [{m_min}, {m_max}]")));
        }
        let (panels, order) = if count % 10 == 0 { (count / 10, 10) } else { (1, count) };
        let (y, w) = composite(m_min.ln(), m_max.ln(), panels, order);
        let nodes: Vec<f64> = y.iter().map(|y| y.exp()).collect();
        let weights = nodes.iter().zip(&w).map(|(m, w)| w * m).collect();
        Ok(Self { m_min, m_max, nodes, weights, tail_closure })
    }

    /// Same range and closure with `count` nodes.
    pub fn with_nodes(&self, count: usize) -> Result<Self> {
        Self::new(count, self.m_min, self.m_max, self.tail_closure)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `dm`; multiply by `m^s` at use.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `w_k m_k^s`.
    pub fn weights_for(&self, s: f64) -> Vec<f64> {
        self.nodes.iter().zip(&self.weights).map(|(m, w)| w * m.powf(s)).collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.m_min, self.m_max)
    }

    pub fn tail_closure(&self) -> bool {
        self.tail_closure
    }

    /// `∫_{m_max}^∞ m^{s−2} dm`, the weight of an integrand `≈ c/m²`.
    pub fn upper_tail(&self, s: f64) -> f64 {
        if self.tail_closure {
            self.m_max.powf(s - 1.0) / (1.0 - s)
        } else {
            0.0
        }
    }

    /// `∫_{m_max}^∞ m^s/(k+m)² dm` to third order in `k/m_max`.
    pub fn upper_tail_series(&self, k: f64, s: f64) -> f64 {
        if !self.tail_closure {
            return 0.0;
        }
        let mx = self.m_max;
        mx.powf(s - 1.0) / (1.0 - s) - 2.0 * k * mx.powf(s - 2.0) / (2.0 - s) + 3.0 * k * k * mx.powf(s - 3.0) / (3.0 - s)
    }

    /// `∫₀^{m_min} m^{s−1} dm`, the weight of an integrand `≈ c/m`.
    pub fn lower_tail(&self, s: f64) -> f64 {
        if self.tail_closure {
            self.m_min.powf(s) / s
        } else {
            0.0
        }
    }

    /// `∫₀^∞ m^s k/(k+m)² dm` for one squared wavenumber `k`.
    pub fn resolvent_moment(&self, k: f64, s: f64) -> f64 {
        if k == 0.0 {
            return 0.0;
        }
        let body: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(m, w)| w * m.powf(s) * k / ((k + m) * (k + m)))
            .sum();
        if !self.tail_closure {
            return body;
        }
        let mn = self.m_min;
        let upper = k * self.upper_tail_series(k, s);
        let lower = mn.powf(s + 1.0) / ((s + 1.0) * k) - 2.0 * mn.powf(s + 2.0) / ((s + 2.0) * k * k);
        body + upper + lower
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weights_positive_and_counted() {
        let q = QuadratureRule::default();
        assert_eq!(q.len(), 200);
        assert!(q.weights_for(0.7).iter().all(|w| *w > 0.0));
        assert!(QuadratureRule::new(0, 1e-6, 1e6, true).is_err());
        assert!(QuadratureRule::new(10, 1.0, 0.5, true).is_err());
        assert_eq!(q.with_nodes(400).unwrap().len(), 400);
    }

    #[test]
    fn resolvent_moment_closed_form() {
        // ∫₀^∞ m^s k/(k+m)² dm = k^s πs / sin(πs)
        let q = QuadratureRule::default();
        for s in [0.3, 0.7, 0.9] {
            for k in [1e-3_f64, 0.5, 3.0, 300.0] {
                let exact = k.powf(s) * PI * s / (PI * s).sin();
                let got = q.resolvent_moment(k, s);
                assert!((got - exact).abs() < 1e-9 * exact, "s = {s}, k = {k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn truncation_without_closure_is_visible() {
        let q = QuadratureRule::new(200, 1e-6, 1e6, false).unwrap();
        let exact = 0.7 * PI / (0.7 * PI).sin();
        assert!((q.resolvent_moment(1.0, 0.7) - exact).abs() > 1e-3 * exact);
    }
}
