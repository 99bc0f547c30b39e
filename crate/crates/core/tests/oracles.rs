mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;

use common::*;
use fhartree::diagnostics::{localized_virial, psi_derivatives, resolvent_constant_sq, CutoffPhi, QuadratureRule};
use fhartree::functionals::hartree_energy;
use fhartree::spectral::{
    fractional_laplacian, hartree_potential, kernel_samples, make_grid, sobolev_norm, KernelCorrection,
    MultiplierSet, SpectralField,
};
use fhartree::PhysParams;

#[test]
fn cell_average_origin_matches_independent_quadrature() {
    let g = make_grid(2, 32, 8.0).unwrap();
    let lib = kernel_samples(&g, 1.6, KernelCorrection::CellAverage).unwrap();
    let oracle = oracle_kernel(&g, 1.6, KernelCorrection::CellAverage);
    assert!(max_rel(&lib, &oracle) < 1e-12, "{}", max_rel(&lib, &oracle));
}

#[test]
fn hartree_potential_matches_direct_double_sum() {
    let g = make_grid(2, 32, 8.0).unwrap();
    let p = PhysParams::canonical();
    let u = lumpy_field(&g);
    let density = u.density();
    for correction in [KernelCorrection::CellAverage, KernelCorrection::LatticeCorrected] {
        let mult = MultiplierSet::with_correction(&g, &p, correction).unwrap();
        let kernel = oracle_kernel(&g, p.gamma(), correction);
        let direct = direct_convolution(&g, &kernel, &density);
        let fast: Vec<f64> = hartree_potential(&u, &mult).unwrap().values().iter().map(|z| z.re).collect();
        let err = max_rel(&fast, &direct);
        assert!(err < 1e-9, "{correction:?}: potential error {err:.3e}");

        let v_direct: f64 = direct.iter().zip(&density).map(|(a, b)| a * b).sum::<f64>() * g.cell_volume();
        let v_fast = hartree_energy(&u, &mult);
        assert!((v_fast - v_direct).abs() / v_direct < 1e-9, "{correction:?}: V {v_fast} vs {v_direct}");
    }
}

#[test]
fn fractional_laplacian_of_gaussian_matches_hankel_integral() {
    let w = 0.5;
    let g = make_grid(2, 1024, 128.0).unwrap();
    let u = SpectralField::gaussian(&g, 1.0, w);
    let n = g.n();
    for alpha in [0.35, 0.7, 1.3] {
        let lap = fractional_laplacian(&u, alpha).unwrap();
        let peak = gaussian_frac_lap(w, alpha, 0.0);
        for steps in [0usize, 1, 3, 6] {
            let r = steps as f64 * g.spacing();
            let idx = (n / 2 + steps) * n + n / 2;
            let exact = gaussian_frac_lap(w, alpha, r);
            let got = lap.values()[idx].re;
            let err = (got - exact).abs() / peak.abs();
            assert!(err < 1e-6, "alpha {alpha}, r {r}: {got} vs {exact} ({err:.2e})");
        }
    }
}

#[test]
fn sobolev_norms_of_gaussian_match_radial_quadrature() {
    let w = 0.5;
    // the box error scales as (2πw/L)^{2+2α}, so small orders need the larger box
    for (n, len, orders) in [(1024, 128.0, &[0.0, 0.5, 0.7, 1.0, 1.5][..]), (2048, 256.0, &[0.3][..])] {
        let g = make_grid(2, n, len).unwrap();
        let u = SpectralField::gaussian(&g, 1.0, w);
        for &alpha in orders {
            let exact = gaussian_sobolev_sq(w, alpha);
            let got = sobolev_norm(&u, alpha).powi(2);
            let err = (got - exact).abs() / exact;
            assert!(err < 1e-6, "alpha {alpha}, L {len}: {got} vs {exact} ({err:.2e})");
        }
    }
}

#[test]
fn resolvent_moment_matches_log_variable_quadrature() {
    let quad = QuadratureRule::default();
    for s in [0.3, 0.55, 0.7, 0.9] {
        for k in [1e-3, 0.04, 1.0, 17.0, 900.0] {
            let f = |y: f64| {
                let m = y.exp();
                m.powf(s + 1.0) * k / ((k + m) * (k + m))
            };
            // beyond m = e^80 the integrand is k m^{s-2} to working precision
            let tail = k * (80.0 * (s - 1.0)).exp() / (1.0 - s);
            let oracle = simpson(&f, -80.0, 80.0, 1e-13 * k.powf(s)) + tail;
            let got = quad.resolvent_moment(k, s);
            assert!((got - oracle).abs() / oracle < 1e-9, "s {s}, k {k}: {got} vs {oracle}");
            // c_s² times the moment is s k^s
            assert_relative_eq!(resolvent_constant_sq(s) * oracle, s * k.powf(s), max_relative = 1e-9);
        }
    }
}

#[test]
fn localized_virial_inside_ball_matches_closed_form() {
    let g = make_grid(2, 128, 32.0).unwrap();
    let phi = CutoffPhi::new(&g, 8.0).unwrap();
    let (amp, kx, x0) = (1.5, 0.8, 0.5);
    let u = SpectralField::from_fn(&g, |x| {
        Complex64::from_polar(amp * (-((x[0] - x0).powi(2) + x[1] * x[1])).exp(), kx * x[0])
    });
    // 2 Im ∫ ū 2x·∇u = 4 k·x0 ∫a² with ∫a² = A²π/2
    let exact = 4.0 * kx * x0 * amp * amp * PI / 2.0;
    let got = localized_virial(&u, &phi).unwrap();
    assert!((got - exact).abs() / exact < 1e-8, "{got} vs {exact}");
}

#[test]
fn localized_virial_across_annulus_matches_polar_quadrature() {
    let g = make_grid(2, 512, 32.0).unwrap();
    let radius = 3.0;
    let phi = CutoffPhi::new(&g, radius).unwrap();
    let (kx, ky, x0) = (0.8, -0.3, 0.9);
    let amp = |x: f64, y: f64| (-((x - x0).powi(2) + y * y) / 4.0).exp();
    let u = SpectralField::from_fn(&g, |x| Complex64::from_polar(amp(x[0], x[1]), kx * x[0] + ky * x[1]));
    // Im(ū∇u) = a² k, so M_R = 2 ∫ a² R ψ'(r/R) k·x̂ dx
    let ring = |r: f64| {
        let m = 512;
        let dpsi = radius * psi_derivatives(r / radius)[1];
        let sum: f64 = (0..m)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / m as f64;
                let (c, s) = (t.cos(), t.sin());
                amp(r * c, r * s).powi(2) * (kx * c + ky * s)
            })
            .sum();
        2.0 * dpsi * sum * 2.0 * PI / m as f64 * r
    };
    let exact = simpson(&ring, 0.0, radius, 1e-12) + simpson(&ring, radius, 2.0 * radius, 1e-12);
    let got = localized_virial(&u, &phi).unwrap();
    assert!((got - exact).abs() / exact.abs() < 1e-8, "{got} vs {exact}");
}
