use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::{fft, hartree_potential_values, MultiplierSet, SpectralField, Space};

/// Strang splitting that keeps the state in Fourier space between steps.
///
/// One step costs four transforms: back to physical space after the first
/// half linear flow, the two transforms of the Hartree convolution, and the
/// return to Fourier space.
pub struct Propagator<'a> {
    mult: &'a MultiplierSet,
    // raw (unnormalized, uncentered) DFT of the physical values
    uh: Vec<Complex64>,
    work: Vec<Complex64>,
    phases: HashMap<u64, Vec<Complex64>>,
    nonlinear: bool,
    keep: Option<Vec<bool>>,
    tail: Vec<bool>,
    time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// `max |u|²` at the nonlinear kick.
    pub peak_sq: f64,
    /// `∫|u|^r` at the kick, when an exponent was requested.
    pub lr_integral: f64,
}

impl<'a> Propagator<'a> {
    pub fn new(u: &SpectralField, mult: &'a MultiplierSet, nonlinear: bool, dealias: bool) -> Result<Self> {
        u.require_same_grid(mult.grid(), "propagator")?;
        let g = mult.grid();
        let phys = u.to_physical();
        let mut uh = phys.into_values();
        fft::forward(&mut uh, g.dim(), g.n());
        let keep = dealias.then(|| (0..g.total_points()).map(|i| g.passes_two_thirds(i)).collect::<Vec<_>>());
        let tail = (0..g.total_points()).map(|i| g.is_tail_mode(i)).collect();
        let work = vec![Complex64::new(0.0, 0.0); uh.len()];
        let mut p = Self { mult, uh, work, phases: HashMap::new(), nonlinear, keep, tail, time: 0.0 };
        p.apply_mask();
        Ok(p)
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    fn apply_mask(&mut self) {
        if let Some(keep) = &self.keep {
            for (z, k) in self.uh.iter_mut().zip(keep) {
                if !k {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    fn half_linear(&mut self, dt: f64) {
        let key = dt.to_bits();
        if !self.phases.contains_key(&key) {
            if self.phases.len() > 64 {
                self.phases.clear();
            }
            let table = self.mult.frac_lap_s().iter().map(|w| Complex64::from_polar(1.0, -0.5 * dt * w)).collect();
            self.phases.insert(key, table);
        }
        let table = &self.phases[&key];
        for (z, e) in self.uh.iter_mut().zip(table) {
            *z *= e;
        }
    }

    /// Advances by `dt`; `r` requests `∫|u|^r` at the kick.
    pub fn step(&mut self, dt: f64, r: Option<f64>) -> StepInfo {
        let g = self.mult.grid();
        let (dim, n) = (g.dim(), g.n());
        self.half_linear(dt);
        self.work.copy_from_slice(&self.uh);
        fft::inverse_normalized(&mut self.work, dim, n);
        let density: Vec<f64> = self.work.iter().map(|z| z.norm_sqr()).collect();
        let peak_sq = density.iter().copied().fold(0.0, f64::max);
        let lr_integral = match r {
            Some(r) => density.iter().map(|d| d.powf(0.5 * r)).sum::<f64>() * g.cell_volume(),
            None => 0.0,
        };
        if self.nonlinear {
            let pot = hartree_potential_values(&density, self.mult);
            for (z, v) in self.work.iter_mut().zip(&pot) {
                *z *= Complex64::from_polar(1.0, dt * v);
            }
        }
        fft::forward(&mut self.work, dim, n);
        std::mem::swap(&mut self.uh, &mut self.work);
        self.apply_mask();
        self.half_linear(dt);
        self.time += dt;
        StepInfo { peak_sq, lr_integral }
    }

    /// Current field in physical space.
    pub fn field(&self) -> SpectralField {
        let g = self.mult.grid();
        let mut v = self.uh.clone();
        fft::inverse_normalized(&mut v, g.dim(), g.n());
        SpectralField::from_values(g, v, Space::Physical).expect("state matches its grid")
    }

    fn fourier_weight(&self) -> f64 {
        let g = self.mult.grid();
        g.cell_volume() / g.total_points() as f64
    }

    pub fn mass(&self) -> f64 {
        self.uh.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.fourier_weight()
    }

    /// `‖u‖²_{Ḣ^s}`.
    pub fn hs_sq(&self) -> f64 {
        self.uh.iter().zip(self.mult.frac_lap_s()).map(|(z, w)| w * z.norm_sqr()).sum::<f64>() * self.fourier_weight()
    }

    /// `‖u‖²_{Ḣ^α}` for any order.
    pub fn sobolev_sq(&self, alpha: f64) -> f64 {
        self.uh
            .iter()
            .zip(self.mult.k2())
            .map(|(z, k)| if *k == 0.0 { 0.0 } else { k.powf(alpha) * z.norm_sqr() })
            .sum::<f64>()
            * self.fourier_weight()
    }

    /// Share of `Σ|û|²` in the outer half of the spectrum along some axis.
    pub fn tail_fraction(&self) -> f64 {
        let mut tail = 0.0;
        let mut total = 0.0;
        for (z, &outer) in self.uh.iter().zip(&self.tail) {
            let e = z.norm_sqr();
            total += e;
            if outer {
                tail += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }
}

/// One Strang step `e^{-i(dt/2)(−Δ)^s} ∘ e^{i dt (W∗|u|²)} ∘ e^{-i(dt/2)(−Δ)^s}`.
pub fn strang_step(u: &SpectralField, mult: &MultiplierSet, dt: f64) -> Result<SpectralField> {
    u.require_physical("strang_step")?;
    let half = crate::spectral::linear_propagator(u, mult, 0.5 * dt)?;
    let pot = hartree_potential_values(&half.density(), mult);
    let mut values = half.into_values();
    for (z, v) in values.iter_mut().zip(&pot) {
        *z *= Complex64::from_polar(1.0, dt * v);
    }
    let kicked = SpectralField::from_values(mult.grid(), values, Space::Physical)?;
    crate::spectral::linear_propagator(&kicked, mult, 0.5 * dt)
}
