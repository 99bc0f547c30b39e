//! Lattice sums `Σ'_{j∈Z^N} P(j) |j|^{-σ}` continued analytically in `σ`.
//!
//! These are the moments that the punctured trapezoid rule misses for a
//! kernel with an `|x|^{-γ}` singularity at a lattice point.

use statrs::function::gamma::{gamma, gamma_ur};

const SHELL: i64 = 6;

/// Upper incomplete gamma `Γ(a, x)` for `x >= 1`.
pub(crate) fn upper_gamma(a: f64, x: f64) -> f64 {
    if a > 0.0 {
        return gamma_ur(a, x) * gamma(a);
    }
    // modified Lentz on the Legendre continued fraction
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln()).exp() * h
}

fn lattice_points(dim: usize) -> impl Iterator<Item = [i64; 3]> {
    let range = -SHELL..=SHELL;
    let zs: Vec<i64> = if dim == 3 { range.clone().collect() } else { vec![0] };
    range
        .clone()
        .flat_map(move |a| range.clone().map(move |b| (a, b)))
        .flat_map(move |(a, b)| zs.clone().into_iter().map(move |c| [a, b, c]))
        .filter(|j| j != &[0, 0, 0])
}

/// Epstein zeta `Z(σ) = Σ'_{j} |j|^{-σ}` for `σ ∉ {0, N}`.
pub fn epstein_zeta(dim: usize, sigma: f64) -> f64 {
    harmonic_zeta(dim, sigma, 0, |_| 1.0)
}

/// `Σ'_j P(j)|j|^{-σ}` for a harmonic homogeneous polynomial `P` of degree `d`
/// (`d = 0` means `P ≡ 1`, which carries the two pole terms).
pub(crate) fn harmonic_zeta(dim: usize, sigma: f64, degree: u32, p: impl Fn(&[i64; 3]) -> f64) -> f64 {
    if sigma == 0.0 && degree == 0 {
        return -1.0;
    }
    let n = dim as f64;
    let a1 = sigma / 2.0;
    let a2 = (n + 2.0 * degree as f64 - sigma) / 2.0;
    let pi = std::f64::consts::PI;
    // Fourier transform of P(x)e^{-π|x|²} is (-i)^d P(ξ)e^{-π|ξ|²}
    let dual_sign = if degree % 4 == 2 { -1.0 } else { 1.0 };
    let mut sum = 0.0;
    for j in lattice_points(dim) {
        let r2 = (j[0] * j[0] + j[1] * j[1] + j[2] * j[2]) as f64;
        let x = pi * r2;
        let term = upper_gamma(a1, x) * x.powf(-a1) + dual_sign * upper_gamma(a2, x) * x.powf(-a2);
        sum += p(&j) * term;
    }
    if degree == 0 {
        sum -= 2.0 / sigma + 2.0 / (n - sigma);
    }
    // Γ(σ/2) has poles at non-positive even σ, where the sum vanishes
    let half = sigma / 2.0;
    if half <= 0.0 && half.fract() == 0.0 {
        return 0.0;
    }
    sum * pi.powf(half) / gamma(half)
}

/// Even moments `Σ'_j j^α |j|^{-γ}` up to degree six, indexed by the
/// exponents of the first coordinates (`m42` is `Σ' j_1⁴ j_2² |j|^{-γ}`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeMoments {
    pub m0: f64,
    pub m2: f64,
    pub m4: f64,
    pub m22: f64,
    pub m6: f64,
    pub m42: f64,
    /// Zero in two dimensions.
    pub m222: f64,
}

impl LatticeMoments {
    /// Moment for a sorted exponent triple such as `[4, 2, 0]`.
    pub fn get(&self, alpha: [u32; 3]) -> f64 {
        match alpha {
            [0, 0, 0] => self.m0,
            [2, 0, 0] => self.m2,
            [4, 0, 0] => self.m4,
            [2, 2, 0] => self.m22,
            [6, 0, 0] => self.m6,
            [4, 2, 0] => self.m42,
            [2, 2, 2] => self.m222,
            _ => panic!("moment {alpha:?} not tabulated"),
        }
    }
}

fn p4(dim: usize) -> impl Fn(&[i64; 3]) -> f64 {
    move |j: &[i64; 3]| {
        let (x, y, z) = (j[0] as f64, j[1] as f64, j[2] as f64);
        if dim == 2 {
            x.powi(4) - 6.0 * x * x * y * y + y.powi(4)
        } else {
            x.powi(4) + y.powi(4) + z.powi(4) - 3.0 * (x * x * y * y + y * y * z * z + z * z * x * x)
        }
    }
}

fn p6_cubic(j: &[i64; 3]) -> f64 {
    let (x, y, z) = (j[0] as f64, j[1] as f64, j[2] as f64);
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let s6 = x2 * x2 * x2 + y2 * y2 * y2 + z2 * z2 * z2;
    let s42 = x2 * x2 * (y2 + z2) + y2 * y2 * (x2 + z2) + z2 * z2 * (x2 + y2);
    2.0 * s6 - 15.0 * s42 + 180.0 * x2 * y2 * z2
}

pub fn lattice_moments(dim: usize, gamma_exp: f64) -> LatticeMoments {
    let n = dim as f64;
    let m0 = epstein_zeta(dim, gamma_exp);
    let m2 = epstein_zeta(dim, gamma_exp - 2.0) / n;
    let quartic = epstein_zeta(dim, gamma_exp - 4.0);
    let sextic = epstein_zeta(dim, gamma_exp - 6.0);
    let h4 = harmonic_zeta(dim, gamma_exp, 4, p4(dim));
    let h4r2 = harmonic_zeta(dim, gamma_exp - 2.0, 4, p4(dim));
    if dim == 2 {
        // |j|⁴ = 2 m4 + 2 m22, P4 = 2 m4 − 6 m22
        let m22 = (quartic - h4) / 8.0;
        let m4 = quartic / 2.0 - m22;
        // |j|⁶ = 2 m6 + 6 m42, P4|j|² = 2 m6 − 10 m42
        let m42 = (sextic - h4r2) / 16.0;
        let m6 = (sextic - 6.0 * m42) / 2.0;
        LatticeMoments { m0, m2, m4, m22, m6, m42, m222: 0.0 }
    } else {
        let m22 = (quartic - h4) / 15.0;
        let m4 = (quartic - 6.0 * m22) / 3.0;
        // |j|⁶ = 3 m6 + 18 m42 + 6 m222
        // P4|j|² = 3 m6 − 12 m42 − 9 m222
        // P6 = 6 m6 − 90 m42 + 180 m222
        let h6 = harmonic_zeta(3, gamma_exp, 6, p6_cubic);
        let (m6, m42, m222) = solve3(
            [[3.0, 18.0, 6.0], [3.0, -12.0, -9.0], [6.0, -90.0, 180.0]],
            [sextic, h4r2, h6],
        );
        LatticeMoments { m0, m2, m4, m22, m6, m42, m222 }
    }
}

pub(crate) fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> (f64, f64, f64) {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    let col = |k: usize| {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        det(m) / d
    };
    (col(0), col(1), col(2))
}
