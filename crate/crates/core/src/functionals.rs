//! Conserved quantities, scale-invariant thresholds and the
//! Gagliardo–Nirenberg functional.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground_state::GroundState;
use crate::params::PhysParams;
use crate::spectral::{hartree_potential_values, sobolev_norm_sq, MultiplierSet, SpectralField, Space};

/// Tolerance on `|grad_ratio − 1|` below which a state counts as the boundary.
pub const BOUNDARY_TOL: f64 = 1e-3;

/// `M[u] = ∫|u|²`.
pub fn mass(u: &SpectralField) -> f64 {
    u.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * u.grid().cell_volume()
}

/// `V(u) = ∫ (W ∗ |u|²)|u|²`.
pub fn hartree_energy(u: &SpectralField, mult: &MultiplierSet) -> f64 {
    let rho = u.density();
    let pot = hartree_potential_values(&rho, mult);
    rho.iter().zip(&pot).map(|(r, p)| r * p).sum::<f64>() * u.grid().cell_volume()
}

/// `‖u‖²_{Ḣ^s}` with the `s` of the multiplier set.
pub fn hs_seminorm_sq(u: &SpectralField, mult: &MultiplierSet) -> f64 {
    sobolev_norm_sq(u, mult.params().s())
}

/// `E[u] = ½‖u‖²_{Ḣ^s} − ¼V(u)`.
pub fn energy(u: &SpectralField, mult: &MultiplierSet) -> f64 {
    0.5 * hs_seminorm_sq(u, mult) - 0.25 * hartree_energy(u, mult)
}

/// Mass-weighted energy and gradient, both invariant under the scaling symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantPair {
    pub me: f64,
    pub grad: f64,
}

pub fn invariant_pair(u: &SpectralField, p: &PhysParams, mult: &MultiplierSet) -> Result<InvariantPair> {
    let m = mass(u);
    if m == 0.0 {
        return Err(Error::ZeroField("invariant pair needs positive mass"));
    }
    let w = m.powf(p.mass_exponent());
    let a = hs_seminorm_sq(u, mult);
    let v = hartree_energy(u, mult);
    Ok(InvariantPair { me: w * (0.5 * a - 0.25 * v), grad: w * a })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Membership {
    K1,
    K2,
    Boundary,
    Neither,
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Membership::K1 => "K1",
            Membership::K2 => "K2",
            Membership::Boundary => "Boundary",
            Membership::Neither => "Neither",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetMembership {
    pub verdict: Membership,
    pub me_ratio: f64,
    pub grad_ratio: f64,
}

pub fn classify_membership(pair: &InvariantPair, gs: &GroundState) -> SetMembership {
    classify_against(pair, gs.me_q(), gs.grad_q())
}

/// Same as [`classify_membership`] with explicit thresholds.
pub fn classify_against(pair: &InvariantPair, me_q: f64, grad_q: f64) -> SetMembership {
    let me_ratio = pair.me / me_q;
    let grad_ratio = pair.grad / grad_q;
    let verdict = if (grad_ratio - 1.0).abs() < BOUNDARY_TOL && me_ratio < 1.0 + BOUNDARY_TOL {
        Membership::Boundary
    } else if me_ratio >= 1.0 {
        Membership::Neither
    } else if grad_ratio < 1.0 {
        Membership::K1
    } else {
        Membership::K2
    };
    SetMembership { verdict, me_ratio, grad_ratio }
}

/// `V(v) / (C_GN ‖v‖₂^{(4s−γ)/s} ‖v‖_{Ḣ^s}^{γ/s})`, at most one for every `v`.
pub fn gn_ratio(v: &SpectralField, mult: &MultiplierSet, cgn: f64) -> Result<f64> {
    let p = mult.params();
    let (s, g) = (p.s(), p.gamma());
    let l2 = mass(v).sqrt();
    let hs = hs_seminorm_sq(v, mult).sqrt();
    if l2 == 0.0 || hs == 0.0 {
        return Err(Error::ZeroField("Gagliardo–Nirenberg ratio needs a nonconstant field"));
    }
    let denom = cgn * l2.powf((4.0 * s - g) / s) * hs.powf(g / s);
    Ok(hartree_energy(v, mult) / denom)
}

/// `λ^{(N−γ+2s)/2} u(λx)` by band-limited interpolation; zero where `λx`
/// leaves the box.
pub fn scale_solution(u: &SpectralField, lambda: f64, p: &PhysParams) -> Result<SpectralField> {
    if !(0.25..=4.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("scale {lambda} outside [1/4, 4]")));
    }
    u.require_physical("scale_solution")?;
    let g = u.grid();
    let (dim, n) = (g.dim(), g.n());
    let half = g.len() / 2.0;
    let uh = u.to_fourier();
    let inv_len = 1.0 / g.len();
    // per-axis evaluation matrix: row j = target point λx_j, column k = mode
    let matrix: Vec<Complex64> = (0..n)
        .flat_map(|j| {
            let x = lambda * g.coords()[j];
            let inside = x >= -half && x < half;
            (0..n).map(move |k| (x, k, inside))
        })
        .map(|(x, k, inside)| {
            if !inside {
                return Complex64::new(0.0, 0.0);
            }
            let xi = g.wavenumbers()[k];
            if k == n / 2 {
                Complex64::new((xi * x).cos() * inv_len, 0.0)
            } else {
                Complex64::from_polar(inv_len, xi * x)
            }
        })
        .collect();
    let mut data = uh.into_values();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                for (j, out) in line.iter_mut().enumerate() {
                    let row = &matrix[j * n..(j + 1) * n];
                    *out = (0..n).map(|k| row[k] * data[start + offset + k * stride]).sum();
                }
                for (j, v) in line.iter().enumerate() {
                    data[start + offset + j * stride] = *v;
                }
            }
        }
    }
    // the per-axis factors carry L^{-1} each, which is the full inverse weight
    let amp = lambda.powf(p.scaling_exponent());
    data.iter_mut().for_each(|z| *z *= amp);
    let out = SpectralField::from_values(g, data, Space::Physical)?;
    let edge = 0.8 * half;
    let outer: f64 = out
        .values()
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let x = g.position(*i);
            x[..dim].iter().map(|c| c * c).sum::<f64>().sqrt() > edge
        })
        .map(|(_, z)| z.norm_sqr())
        .sum::<f64>()
        * g.cell_volume();
    let total = mass(&out);
    if total > 0.0 && outer > 1e-8 * total {
        log::warn!("scaled field has {:.2e} of its mass beyond 80% of the box radius", outer / total);
    }
    Ok(out)
}

/// Margins of the two-sided energy/gradient comparison and the coercivity gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityReport {
    pub hs_sq: f64,
    pub energy: f64,
    pub potential: f64,
    /// `E − ((γ−2s)/(2γ))‖D^s u‖²`
    pub lower_margin: f64,
    /// `½‖D^s u‖² − E`
    pub upper_margin: f64,
    /// `‖D^s u‖² − (γ/4s)V`
    pub coercivity_gap: f64,
    pub holds: bool,
}

impl ComparabilityReport {
    /// `gap / ‖D^s u‖²`.
    pub fn gap_ratio(&self) -> f64 {
        self.coercivity_gap / self.hs_sq
    }
}

pub fn comparability_check(u: &SpectralField, p: &PhysParams, mult: &MultiplierSet) -> ComparabilityReport {
    let (s, g) = (p.s(), p.gamma());
    let a = hs_seminorm_sq(u, mult);
    let v = hartree_energy(u, mult);
    comparability_from_parts(a, v, s, g)
}

pub(crate) fn comparability_from_parts(a: f64, v: f64, s: f64, g: f64) -> ComparabilityReport {
    let e = 0.5 * a - 0.25 * v;
    let lower_margin = e - (g - 2.0 * s) / (2.0 * g) * a;
    let upper_margin = 0.5 * a - e;
    let coercivity_gap = a - g / (4.0 * s) * v;
    let holds = lower_margin >= 0.0 && upper_margin >= 0.0;
    if !holds {
        log::warn!("comparability violated: lower margin {lower_margin:.3e}, upper margin {upper_margin:.3e}");
    }
    ComparabilityReport { hs_sq: a, energy: e, potential: v, lower_margin, upper_margin, coercivity_gap, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    fn setup(n: usize, len: f64) -> (crate::spectral::GridSpec, PhysParams, MultiplierSet) {
        let g = make_grid(2, n, len).unwrap();
        let p = PhysParams::canonical();
        let m = MultiplierSet::new(&g, &p).unwrap();
        (g, p, m)
    }

    #[test]
    fn zero_field_quantities() {
        let (g, p, m) = setup(16, 8.0);
        let u = SpectralField::zeros(&g);
        assert_eq!(mass(&u), 0.0);
        assert_eq!(hartree_energy(&u, &m), 0.0);
        assert_eq!(energy(&u, &m), 0.0);
        assert!(invariant_pair(&u, &p, &m).is_err());
        assert!(gn_ratio(&u, &m, 1.0).is_err());
    }

    #[test]
    fn constant_mass() {
        let g = make_grid(2, 16, 3.0).unwrap();
        let u = SpectralField::from_fn(&g, |_| Complex64::new(0.5, 0.5));
        assert!((mass(&u) - 0.5 * 9.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_mass() {
        let g = make_grid(2, 128, 16.0).unwrap();
        let u = SpectralField::gaussian(&g, 1.0, 1.0);
        assert!((mass(&u) - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn phase_invariance_of_potential_energy() {
        let (g, _, m) = setup(32, 8.0);
        let u = SpectralField::gaussian(&g, 1.3, 1.1);
        let v = u.scaled(Complex64::from_polar(1.0, 0.9));
        let (a, b) = (hartree_energy(&u, &m), hartree_energy(&v, &m));
        assert!((a - b).abs() < 1e-13 * a);
    }

    #[test]
    fn membership_rules() {
        let c = |me, grad| classify_against(&InvariantPair { me, grad }, 1.0, 1.0).verdict;
        assert_eq!(c(0.5, 0.5), Membership::K1);
        assert_eq!(c(0.5, 1.5), Membership::K2);
        assert_eq!(c(1.0, 1.0), Membership::Boundary);
        assert_eq!(c(1.2, 0.5), Membership::Neither);
        assert_eq!(c(-3.0, 4.0), Membership::K2);
    }

    #[test]
    fn unit_scale_is_identity() {
        let (g, p, _) = setup(32, 10.0);
        let u = SpectralField::gaussian(&g, 1.0, 1.2);
        let v = scale_solution(&u, 1.0, &p).unwrap();
        assert!(v.distance(&u) < 1e-12);
        assert!(scale_solution(&u, 5.0, &p).is_err());
    }

    #[test]
    fn comparability_upper_bound_always_holds() {
        let r = comparability_from_parts(2.0, 3.0, 0.7, 1.6);
        assert!(r.upper_margin >= 0.0);
    }
}
