use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft;
use super::grid::GridSpec;
use super::zeta::lattice_moments;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// How the singular sample at the origin is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelCorrection {
    /// Origin sample replaced by the mean of `|x|^{-γ}` over the central cell.
    CellAverage,
    /// Origin and the nearest shells reweighted so the lattice sum
    /// integrates `|x|^{-γ} g(x)` with error `O(h^{N-γ+8})` for smooth `g`.
    #[default]
    LatticeCorrected,
}

const ORBITS_2D: [[i64; 3]; 6] = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [2, 0, 0], [2, 1, 0], [3, 0, 0]];
const ORBITS_3D: [[i64; 3]; 7] =
    [[0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1], [2, 0, 0], [2, 1, 0], [3, 0, 0]];
const MOMENTS_2D: [[u32; 3]; 6] = [[0, 0, 0], [2, 0, 0], [4, 0, 0], [2, 2, 0], [6, 0, 0], [4, 2, 0]];
const MOMENTS_3D: [[u32; 3]; 7] =
    [[0, 0, 0], [2, 0, 0], [4, 0, 0], [2, 2, 0], [6, 0, 0], [4, 2, 0], [2, 2, 2]];

/// Lattice points obtained from `rep` by coordinate permutations and sign flips.
fn orbit_points(rep: [i64; 3], dim: usize) -> Vec<[i64; 3]> {
    let perms: &[[usize; 3]] = if dim == 2 {
        &[[0, 1, 2], [1, 0, 2]]
    } else {
        &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
    };
    let mut out: Vec<[i64; 3]> = Vec::new();
    for perm in perms {
        for signs in 0..(1 << dim) {
            let mut p = [0i64; 3];
            for axis in 0..dim {
                let v = rep[perm[axis]];
                p[axis] = if signs & (1 << axis) != 0 { -v } else { v };
            }
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Sorted absolute coordinates, largest first.
fn orbit_key(j: [i64; 3]) -> [i64; 3] {
    let mut k = [j[0].abs(), j[1].abs(), j[2].abs()];
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

/// Per-point weights, in units of `h^{-γ}`, on the origin and the nearest
/// lattice shells. Returned as `(orbit representative, weight)`.
///
/// The weights solve `Σ_j w_j j^α = −Σ'_j j^α |j|^{-γ}` for every even
/// moment up to degree six.
pub fn stencil_weights(dim: usize, gamma: f64) -> Vec<([i64; 3], f64)> {
    let (orbits, moments): (&[[i64; 3]], &[[u32; 3]]) =
        if dim == 2 { (&ORBITS_2D, &MOMENTS_2D) } else { (&ORBITS_3D, &MOMENTS_3D) };
    let lattice = lattice_moments(dim, gamma);
    let matrix: Vec<Vec<f64>> = moments
        .iter()
        .map(|alpha| {
            orbits
                .iter()
                .map(|&rep| {
                    orbit_points(rep, dim)
                        .iter()
                        .map(|p| (0..3).map(|a| (p[a] as f64).powi(alpha[a] as i32)).product::<f64>())
                        .sum()
                })
                .collect()
        })
        .collect();
    let rhs: Vec<f64> = moments.iter().map(|&alpha| -lattice.get(alpha)).collect();
    let w = solve_dense(matrix, rhs);
    orbits.iter().copied().zip(w).collect()
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x
}

/// Mean of `|y|^{-γ}` over the unit cube centered at the origin.
pub fn unit_cell_average(dim: usize, gamma: f64) -> f64 {
    // divergence theorem: ∫_C |y|^{-γ} = N/(N-γ) ∫_{face} (1/4 + |y'|²)^{-γ/2}
    let (x, w) = gauss_legendre(48);
    let face = if dim == 2 {
        x.iter().zip(&w).map(|(a, wa)| 0.5 * wa * (0.25 + 0.25 * a * a).powf(-gamma / 2.0)).sum::<f64>()
    } else {
        let mut acc = 0.0;
        for (a, wa) in x.iter().zip(&w) {
            for (b, wb) in x.iter().zip(&w) {
                acc += 0.25 * wa * wb * (0.25 + 0.25 * (a * a + b * b)).powf(-gamma / 2.0);
            }
        }
        acc
    };
    dim as f64 / (dim as f64 - gamma) * face
}

fn signed(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Real-space kernel samples in FFT order (index 0 is the origin), using the
/// minimum-image distance.
pub fn kernel_samples(grid: &GridSpec, gamma: f64, correction: KernelCorrection) -> Result<Vec<f64>> {
    let dim = grid.dim();
    if !(gamma > 0.0 && gamma < dim as f64) {
        return Err(Error::InvalidParams(format!("kernel exponent {gamma} outside (0, {dim})")));
    }
    let n = grid.n();
    let h = grid.spacing();
    let scale = h.powf(-gamma);
    let weights = match correction {
        KernelCorrection::LatticeCorrected => Some(stencil_weights(dim, gamma)),
        KernelCorrection::CellAverage => None,
    };
    let mut out = vec![0.0; grid.total_points()];
    for (i, k) in out.iter_mut().enumerate() {
        let idx = grid.unflatten(i);
        let mut j = [0i64; 3];
        for axis in 0..dim {
            j[axis] = signed(idx[axis], n);
        }
        let j2: i64 = j.iter().map(|c| c * c).sum();
        *k = if j2 == 0 {
            match correction {
                KernelCorrection::LatticeCorrected => 0.0,
                KernelCorrection::CellAverage => unit_cell_average(dim, gamma) * scale,
            }
        } else {
            (j2 as f64).powf(-gamma / 2.0) * scale
        };
        if let Some(w) = &weights {
            let key = orbit_key(j);
            if let Some((_, wk)) = w.iter().find(|(rep, _)| *rep == key) {
                *k += wk * scale;
            }
        }
    }
    Ok(out)
}

/// Transform `Ŵ = h^N FFT(K)` of the sampled kernel, FFT order, real.
pub fn build_hartree_kernel_with(grid: &GridSpec, gamma: f64, correction: KernelCorrection) -> Result<Vec<f64>> {
    let samples = kernel_samples(grid, gamma, correction)?;
    let mut buf: Vec<Complex64> = samples.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    fft::forward(&mut buf, grid.dim(), grid.n());
    let h_n = grid.cell_volume();
    Ok(buf.into_iter().map(|z| z.re * h_n).collect())
}

pub fn build_hartree_kernel(grid: &GridSpec, gamma: f64) -> Result<Vec<f64>> {
    build_hartree_kernel_with(grid, gamma, KernelCorrection::default())
}
