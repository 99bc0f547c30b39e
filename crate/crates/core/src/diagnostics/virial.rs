use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::balakrishnan::{auxiliary_parts, resolvent_constant_sq};
use super::{CutoffPhi, QuadratureRule};
use crate::error::{Error, Result};
use crate::evolution::{strang_step, RunRecord};
use crate::functionals::Membership;
use crate::ground_state::GroundState;
use crate::params::PhysParams;
use crate::spectral::{fft, gradient_component, hartree_potential_values, sobolev_norm_sq, MultiplierSet, SpectralField};

/// `M_R = 2 Im ∫ ū R∇φ(x/R)·∇u dx`.
pub fn localized_virial(u: &SpectralField, phi: &CutoffPhi) -> Result<f64> {
    u.require_same_grid(phi.grid(), "localized_virial")?;
    let g = u.grid();
    let mut acc = 0.0;
    for axis in 0..g.dim() {
        let du = gradient_component(u, axis)?;
        acc += u
            .values()
            .iter()
            .zip(du.values())
            .zip(phi.grad(axis))
            .map(|((a, b), w)| w * (a.conj() * b).im)
            .sum::<f64>();
    }
    Ok(2.0 * acc * g.cell_volume())
}

/// The computable pieces of `M_R'`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct VirialRhs {
    /// `ball + annulus + bilap`.
    pub main: f64,
    /// `8 ∫m^s ∫_{|x|≤R} |∇u_m|²`.
    pub ball: f64,
    /// `4 ∫m^s ∫_{|x|>R} ∂̄_k u_m ∂_kl φ ∂_l u_m`.
    pub annulus: f64,
    /// `−R^{-2} ∫m^s ∫ Δ²φ |u_m|²`.
    pub bilap: f64,
    /// `I = 2∫ R∇φ(x/R)·(∇W ∗ |u|²)|u|²`.
    pub interaction: f64,
    /// The remainder magnitude with unit constant.
    pub a_r: f64,
}

impl VirialRhs {
    pub fn total(&self) -> f64 {
        self.main + self.interaction
    }
}

/// Evaluates `main`, `I` and the remainder magnitude at one state.
pub fn virial_rhs(
    u: &SpectralField,
    phi: &CutoffPhi,
    p: &PhysParams,
    mult: &MultiplierSet,
    quad: &QuadratureRule,
) -> Result<VirialRhs> {
    u.require_physical("virial_rhs")?;
    u.require_same_grid(phi.grid(), "virial_rhs")?;
    u.require_same_grid(mult.grid(), "virial_rhs")?;
    let g = u.grid();
    let (dim, n) = (g.dim(), g.n());
    let s = p.s();
    let radius = phi.radius();
    let h_n = g.cell_volume();
    let cs = resolvent_constant_sq(s).sqrt();
    let k2 = mult.k2();
    let axes: Vec<Vec<f64>> = (0..dim).map(|a| g.wavevector_component(a)).collect();
    let r = g.radius_table();
    let mut uh = u.values().to_vec();
    fft::forward(&mut uh, dim, n);

    let pieces = |m: f64| -> [f64; 3] {
        let (osc, zero) = auxiliary_parts(&uh, k2, m, cs);
        integrate_pieces(phi, &axes, &r, osc, zero)
    };

    let per_node: Vec<[f64; 3]> = quad.nodes().par_iter().map(|&m| pieces(m)).collect();
    let mut acc = [0.0; 3];
    for (f, w) in per_node.iter().zip(quad.weights_for(s)) {
        for j in 0..3 {
            acc[j] += w * f[j];
        }
    }
    if quad.tail_closure() {
        // u_m ≈ c_s u/m above m_max
        let far = integrate_pieces(phi, &axes, &r, uh.clone(), Complex64::new(0.0, 0.0));
        for j in 0..3 {
            acc[j] += cs * cs * far[j] * quad.upper_tail(s);
        }
        // the cross term with the zero mode grows like 1/m below m_min
        let (mn, _) = quad.range();
        let near = pieces(mn);
        acc[2] += near[2] * mn * quad.lower_tail(s);
        for j in 0..2 {
            acc[j] += near[j] * mn.powf(s + 1.0) / (s + 1.0);
        }
    }
    let [ball, annulus, bilap] = acc;

    let rho = u.density();
    let mut rho_hat: Vec<Complex64> = rho.iter().map(|&d| Complex64::new(d, 0.0)).collect();
    fft::forward(&mut rho_hat, dim, n);
    let mut interaction = 0.0;
    for axis in 0..dim {
        let sym = mult.grad_kernel_hat(axis);
        let mut b: Vec<Complex64> = rho_hat.iter().zip(&sym).map(|(z, k)| z * Complex64::new(0.0, *k)).collect();
        fft::inverse_normalized(&mut b, dim, n);
        interaction += b.iter().zip(&rho).zip(phi.grad(axis)).map(|((dv, d), w)| w * dv.re * d).sum::<f64>();
    }
    interaction *= 2.0 * h_n;

    let pot = hartree_potential_values(&rho, mult);
    let ds: Vec<f64> = k2.iter().map(|k| k.powf(s / 2.0)).collect();
    let mut du: Vec<Complex64> = uh.iter().zip(&ds).map(|(z, m)| z * m).collect();
    fft::inverse_normalized(&mut du, dim, n);
    let mut a_r = 0.0;
    for i in 0..g.total_points() {
        if r[i] > radius {
            a_r += du[i].norm_sqr() + rho[i] / (radius * radius) + pot[i] * rho[i];
        }
    }
    a_r *= h_n;

    Ok(VirialRhs { main: ball + annulus + bilap, ball, annulus, bilap, interaction, a_r })
}

/// `[ball, annulus, bilap]` for the field with coefficients `osc` plus the
/// constant `zero`. The constant's square drops from the bilaplacian term
/// because `∫Δ²φ = 0`.
fn integrate_pieces(phi: &CutoffPhi, axes: &[Vec<f64>], r: &[f64], osc: Vec<Complex64>, zero: Complex64) -> [f64; 3] {
    let g = phi.grid();
    let (dim, n) = (g.dim(), g.n());
    let radius = phi.radius();
    let grads: Vec<Vec<Complex64>> = axes
        .iter()
        .map(|xi| {
            let mut b: Vec<Complex64> = osc.iter().zip(xi).map(|(z, k)| z * Complex64::new(0.0, *k)).collect();
            fft::inverse_normalized(&mut b, dim, n);
            b
        })
        .collect();
    let mut v = osc;
    fft::inverse_normalized(&mut v, dim, n);
    let (mut ball, mut annulus, mut bilap) = (0.0, 0.0, 0.0);
    for i in 0..g.total_points() {
        if r[i] < radius {
            ball += grads.iter().map(|d| d[i].norm_sqr()).sum::<f64>();
        } else if r[i] < 2.0 * radius {
            for k in 0..dim {
                for l in 0..dim {
                    annulus += phi.hessian(i, k, l) * (grads[k][i].conj() * grads[l][i]).re;
                }
            }
            bilap += phi.bilap()[i] * (v[i].norm_sqr() + 2.0 * (zero.conj() * v[i]).re);
        }
    }
    let h_n = g.cell_volume();
    [8.0 * ball * h_n, 4.0 * annulus * h_n, -bilap * h_n / (radius * radius)]
}

/// Central difference `(M_R(Φ_δ u) − M_R(Φ_{−δ} u)) / 2δ` with one Strang
/// step each way.
pub fn virial_rate_fd(u: &SpectralField, mult: &MultiplierSet, phi: &CutoffPhi, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("difference step {delta} must be positive")));
    }
    let fwd = localized_virial(&strang_step(u, mult, delta)?, phi)?;
    let bwd = localized_virial(&strang_step(u, mult, -delta)?, phi)?;
    Ok((fwd - bwd) / (2.0 * delta))
}

/// Sign audit of `main + I` along a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirialAudit {
    pub initial: Membership,
    pub min_total: f64,
    pub max_abs_total: f64,
    /// `min(main + I) / ‖D^s u0‖²`.
    pub c_delta: f64,
    /// `max |main + I| / ‖D^s Q‖²`, small along the soliton orbit.
    pub relative_to_q: f64,
    /// Every sample has `main + I > 0`.
    pub positive: bool,
    /// Positivity is only demanded of runs starting in `K1`.
    pub passed: bool,
}

pub fn virial_lower_bound_audit(rec: &RunRecord, gs: &GroundState, values: &[VirialRhs]) -> Result<VirialAudit> {
    if rec.is_empty() || values.len() != rec.len() {
        return Err(Error::Mismatch(format!("{} virial values for {} samples", values.len(), rec.len())));
    }
    let initial = rec.membership_series[0];
    let totals: Vec<f64> = values.iter().map(VirialRhs::total).collect();
    let min_total = totals.iter().copied().fold(f64::INFINITY, f64::min);
    let max_abs_total = totals.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let positive = min_total > 0.0;
    if initial == Membership::K1 && !positive {
        log::warn!("main + I reached {min_total:.3e} on a run starting in K1");
    }
    Ok(VirialAudit {
        initial,
        min_total,
        max_abs_total,
        relative_to_q: max_abs_total / gs.report.hs.powi(2),
        c_delta: min_total / rec.hs_series[0],
        positive,
        passed: initial != Membership::K1 || positive,
    })
}

/// Extra record columns written by [`virial_observer`].
pub const VIRIAL_COLUMNS: [&str; 6] = ["virial_main", "virial_interaction", "virial_a_r", "m_r", "virial_ball", "virial_bilap"];

/// Observer recording `M_R` and the pieces of `M_R'` at every sample.
pub fn virial_observer<'a>(
    phi: &'a CutoffPhi,
    mult: &'a MultiplierSet,
    quad: &'a QuadratureRule,
) -> impl FnMut(f64, &SpectralField) -> Vec<(String, f64)> + 'a {
    move |_, u| {
        let p = *mult.params();
        let (rhs, m_r) = match (virial_rhs(u, phi, &p, mult, quad), localized_virial(u, phi)) {
            (Ok(v), Ok(m)) => (v, m),
            _ => (VirialRhs { main: f64::NAN, ..Default::default() }, f64::NAN),
        };
        let values = [rhs.main, rhs.interaction, rhs.a_r, m_r, rhs.ball, rhs.bilap];
        VIRIAL_COLUMNS.iter().zip(values).map(|(n, v)| (n.to_string(), v)).collect()
    }
}

/// Reads the columns written by [`virial_observer`] back into values.
pub fn virial_series(rec: &RunRecord) -> Result<Vec<VirialRhs>> {
    let col = |name: &str| {
        rec.extra_column(name).ok_or_else(|| Error::InvalidArgument(format!("run record has no `{name}` column")))
    };
    let (main, inter, a_r, ball, bilap) =
        (col("virial_main")?, col("virial_interaction")?, col("virial_a_r")?, col("virial_ball")?, col("virial_bilap")?);
    Ok((0..main.len())
        .map(|i| VirialRhs {
            main: main[i],
            ball: ball[i],
            annulus: main[i] - ball[i] - bilap[i],
            bilap: bilap[i],
            interaction: inter[i],
            a_r: a_r[i],
        })
        .collect())
}

/// `Σ_j ‖x_j u‖²_{Ḣ^{1−s}}`, nonnegative by construction.
///
/// The weight `x` is not periodic, so mass near the box edge makes the value
/// meaningless; a warning is logged when more than `1e-6` of the mass lies
/// beyond `0.4 L`.
pub fn weighted_virial(u: &SpectralField, p: &PhysParams) -> Result<f64> {
    u.require_physical("weighted_virial")?;
    let g = u.grid();
    let r = g.radius_table();
    let total: f64 = u.values().iter().map(|z| z.norm_sqr()).sum();
    let outside: f64 = u.values().iter().zip(&r).filter(|(_, r)| **r > 0.4 * g.len()).map(|(z, _)| z.norm_sqr()).sum();
    if total > 0.0 && outside > 1e-6 * total {
        log::warn!("weighted virial: {:.2e} of the mass lies beyond 0.4 L", outside / total);
    }
    let mut acc = 0.0;
    for axis in 0..g.dim() {
        let x = g.position_component(axis);
        let values = u.values().iter().zip(&x).map(|(z, x)| z * x).collect();
        let w = SpectralField::from_values(g, values, crate::spectral::Space::Physical)?;
        acc += sobolev_norm_sq(&w, 1.0 - p.s());
    }
    Ok(acc)
}

/// Least-squares `y ≈ c0 + c1 t + c2 t²`; returns `[c0, c1, c2]`.
pub fn quadratic_fit(t: &[f64], y: &[f64]) -> Result<[f64; 3]> {
    if t.len() != y.len() || t.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 matching samples, got {} and {}", t.len(), y.len())));
    }
    let tm = t.iter().sum::<f64>() / t.len() as f64;
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (&ti, &yi) in t.iter().zip(y) {
        let tau = ti - tm;
        let pw = [1.0, tau, tau * tau];
        for i in 0..3 {
            b[i] += pw[i] * yi;
            for j in 0..3 {
                a[i][j] += pw[i] * pw[j];
            }
        }
    }
    let (d0, d1, d2) = crate::spectral::zeta::solve3(a, b);
    let (c0, c1, c2) = (d0 - d1 * tm + d2 * tm * tm, d1 - 2.0 * d2 * tm, d2);
    Ok([c0, c1, c2])
}
