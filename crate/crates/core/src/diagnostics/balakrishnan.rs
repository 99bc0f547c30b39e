use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::QuadratureRule;
use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::spectral::{fft, parseval_weight, SpectralField, Space};

/// `c_s² = sin(πs)/π`.
pub fn resolvent_constant_sq(s: f64) -> f64 {
    (std::f64::consts::PI * s).sin() / std::f64::consts::PI
}

/// `u_m = c_s (−Δ + m)^{-1} u`.
pub fn auxiliary_field(u: &SpectralField, m: f64, p: &PhysParams) -> Result<SpectralField> {
    if !(m > 0.0) {
        return Err(Error::InvalidArgument(format!("resolvent parameter m = {m} must be positive")));
    }
    u.require_physical("auxiliary_field")?;
    let g = u.grid();
    let cs = resolvent_constant_sq(p.s()).sqrt();
    let mut buf = u.values().to_vec();
    fft::forward(&mut buf, g.dim(), g.n());
    for (z, k2) in buf.iter_mut().zip(g.k2_table()) {
        *z *= cs / (k2 + m);
    }
    fft::inverse_normalized(&mut buf, g.dim(), g.n());
    SpectralField::from_values(g, buf, Space::Physical)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalakrishnanCheck {
    /// `∫ m^s ‖∇u_m‖₂² dm` by quadrature.
    pub lhs: f64,
    /// `s ‖u‖²_{Ḣ^s}`.
    pub rhs: f64,
    pub rel_err: f64,
}

/// Compares the `m`-integral of `‖∇u_m‖₂²` with `s‖u‖²_{Ḣ^s}`.
///
/// `‖∇u_m‖₂²` is evaluated per node through Parseval, so no transform is
/// needed beyond the first.
pub fn balakrishnan_check(u: &SpectralField, p: &PhysParams, quad: &QuadratureRule) -> BalakrishnanCheck {
    let s = p.s();
    let g = u.grid();
    let uh = u.to_fourier();
    let k2 = g.k2_table();
    let weight = parseval_weight(g);
    let spectrum: Vec<(f64, f64)> = k2
        .iter()
        .zip(uh.values())
        .filter(|(k, _)| **k > 0.0)
        .map(|(k, z)| (*k, k * z.norm_sqr()))
        .collect();
    let cs2 = resolvent_constant_sq(s);
    let grad_norm = |m: f64| cs2 * weight * spectrum.iter().map(|(k, e)| e / ((k + m) * (k + m))).sum::<f64>();
    let per_node: Vec<f64> = quad.nodes().par_iter().map(|&m| grad_norm(m)).collect();
    let mut lhs: f64 = per_node.iter().zip(quad.weights_for(s)).map(|(f, w)| f * w).sum();
    if quad.tail_closure() {
        lhs += cs2 * weight * spectrum.iter().map(|(k, e)| e * quad.upper_tail_series(*k, s)).sum::<f64>();
        let (mn, _) = quad.range();
        lhs += grad_norm(mn) * mn.powf(s + 1.0) / (s + 1.0);
    }
    let rhs = s * crate::spectral::sobolev_norm_sq(u, s);
    let rel_err = if rhs == 0.0 { if lhs == 0.0 { 0.0 } else { f64::INFINITY } } else { (lhs - rhs).abs() / rhs };
    BalakrishnanCheck { lhs, rhs, rel_err }
}

/// Raw DFT coefficients `c_s û/(|ξ|²+m)` with the zero mode split off.
///
/// Returns the oscillating part in FFT order and the zero-mode amplitude
/// as a physical constant.
pub(crate) fn auxiliary_parts(uh_raw: &[Complex64], k2: &[f64], m: f64, cs: f64) -> (Vec<Complex64>, Complex64) {
    let mut out: Vec<Complex64> = uh_raw.iter().zip(k2).map(|(z, k)| z * (cs / (k + m))).collect();
    let zero = out[0] / out.len() as f64;
    out[0] = Complex64::new(0.0, 0.0);
    (out, zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::mass;
    use crate::spectral::make_grid;

    #[test]
    fn constant_field_maps_to_constant() {
        let g = make_grid(2, 16, 8.0).unwrap();
        let p = PhysParams::canonical();
        let u = SpectralField::from_fn(&g, |_| Complex64::new(2.0, 0.0));
        let um = auxiliary_field(&u, 0.5, &p).unwrap();
        let want = resolvent_constant_sq(p.s()).sqrt() * 2.0 / 0.5;
        assert!(um.values().iter().all(|z| (z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12));
    }

    #[test]
    fn plane_wave_is_diagonal() {
        let g = make_grid(2, 16, 8.0).unwrap();
        let p = PhysParams::canonical();
        let k = 2.0 * std::f64::consts::PI / 8.0 * 3.0;
        let u = SpectralField::from_fn(&g, |x| Complex64::from_polar(1.0, k * x[0]));
        let um = auxiliary_field(&u, 2.0, &p).unwrap();
        let factor = resolvent_constant_sq(p.s()).sqrt() / (k * k + 2.0);
        for (a, b) in um.values().iter().zip(u.values()) {
            assert!((a - b * factor).norm() < 1e-12);
        }
    }

    #[test]
    fn large_m_limit() {
        let g = make_grid(2, 64, 16.0).unwrap();
        let p = PhysParams::canonical();
        let u = SpectralField::gaussian(&g, 1.0, 1.0);
        let m = 1e6;
        let um = auxiliary_field(&u, m, &p).unwrap();
        let ratio = mass(&um).sqrt() * m / resolvent_constant_sq(p.s()).sqrt() / mass(&u).sqrt();
        assert!((ratio - 1.0).abs() < 1e-3);
        assert!(auxiliary_field(&u, 0.0, &p).is_err());
    }

    #[test]
    fn gaussian_identity() {
        let g = make_grid(2, 64, 16.0).unwrap();
        let p = PhysParams::canonical();
        let u = SpectralField::gaussian(&g, 1.0, 1.2);
        let check = balakrishnan_check(&u, &p, &QuadratureRule::default());
        assert!(check.rel_err < 1e-10, "{check:?}");
        let zero = balakrishnan_check(&SpectralField::zeros(&g), &p, &QuadratureRule::default());
        assert_eq!((zero.lhs, zero.rhs, zero.rel_err), (0.0, 0.0, 0.0));
    }
}
