use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::spectral::{GridSpec, SpectralField};

/// Sum of three to five Gaussian bumps with random complex amplitudes,
/// centers within `L/8`, widths in `[0.7, 2]` and small boosts.
///
/// Every bump stays far from the box edge, so the field is smooth and
/// compactly concentrated.
pub fn random_smooth_field<R: Rng + ?Sized>(grid: &GridSpec, rng: &mut R) -> SpectralField {
    let dim = grid.dim();
    let reach = grid.len() / 8.0;
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let bumps: Vec<(Complex64, Vec<f64>, f64, Vec<f64>)> = (0..rng.random_range(3..=5))
        .map(|_| {
            let amp = Complex64::new(normal.sample(rng), normal.sample(rng));
            let center = (0..dim).map(|_| rng.random_range(-reach..reach)).collect();
            let width = rng.random_range(0.7..2.0);
            let boost = (0..dim).map(|_| 0.5 * normal.sample(rng)).collect();
            (amp, center, width, boost)
        })
        .collect();
    SpectralField::from_fn(grid, |x| {
        bumps
            .iter()
            .map(|(a, c, w, k)| {
                let r2: f64 = (0..dim).map(|i| (x[i] - c[i]).powi(2)).sum();
                let phase: f64 = (0..dim).map(|i| k[i] * x[i]).sum();
                a * Complex64::from_polar((-r2 / (w * w)).exp(), phase)
            })
            .sum()
    })
}

/// `u · e^{i k·x}`.
pub fn boosted(u: &SpectralField, k: &[f64]) -> SpectralField {
    let g = u.grid();
    let mut out = u.clone();
    for (i, z) in out.values_mut().iter_mut().enumerate() {
        let x = g.position(i);
        let phase: f64 = k.iter().zip(x).map(|(k, x)| k * x).sum();
        *z *= Complex64::from_polar(1.0, phase);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use rand::SeedableRng;

    #[test]
    fn fields_are_seeded_and_localized() {
        let g = make_grid(2, 64, 32.0).unwrap();
        let a = random_smooth_field(&g, &mut rand_chacha::ChaCha8Rng::seed_from_u64(3));
        let b = random_smooth_field(&g, &mut rand_chacha::ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        let r = g.radius_table();
        let total: f64 = a.values().iter().map(|z| z.norm_sqr()).sum();
        let far: f64 = a.values().iter().zip(&r).filter(|(_, r)| **r > 0.4 * 32.0).map(|(z, _)| z.norm_sqr()).sum();
        assert!(far < 1e-10 * total);
    }
}
