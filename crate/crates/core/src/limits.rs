//! Reference distributions for the limiting process and the finite-n
//! integrals they come from, plus the spherical chart on k-frames used to
//! change variables from directions to pairwise angles.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::error::{LabError, Result};
use crate::pairs::PairMatrix;
use crate::quadrature::integrate_split;
use crate::special::{erf, ln_gamma};

/// `ln` of the surface area `omega_n` of the unit sphere in `R^n`.
pub fn ln_sphere_surface(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    LN_2 + h * PI.ln() - ln_gamma(h)
}

/// `omega_n = 2 pi^(n/2) / Gamma(n/2)`.
pub fn sphere_surface(n: usize) -> f64 {
    assert!(n >= 1, "sphere_surface needs n >= 1");
    ln_sphere_surface(n).exp()
}

/// `omega_{n-1} / omega_n`: the normalizing constant of the density
/// `sin^{n-2}` of the angle between two uniform directions.
pub fn sphere_ratio(n: usize) -> f64 {
    (ln_sphere_surface(n - 1) - ln_sphere_surface(n)).exp()
}

/// `P(V_N <= v)` in the limit: `1 - e^{-v/2} sum_{k<N} (v/2)^k / k!`.
pub fn poisson_gap_cdf(count: usize, v: f64) -> f64 {
    assert!(count >= 1, "count must be at least 1");
    if v <= 0.0 {
        return 0.0;
    }
    let x = v / 2.0;
    // sum the tail terms in the log domain so large v does not overflow
    let mut term = -x;
    let mut acc = term.exp();
    for k in 1..count {
        term += x.ln() - (k as f64).ln();
        acc += term.exp();
    }
    (1.0 - acc).clamp(0.0, 1.0)
}

/// CDF of `|Z|` for standard normal `Z`.
pub fn half_normal_cdf(c: f64) -> f64 {
    if c <= 0.0 {
        0.0
    } else {
        erf(c / std::f64::consts::SQRT_2)
    }
}

/// Large-n mass of the angle between two uniform directions in
/// `[pi/2 - C/sqrt(n), pi/2]`: `erf(C/sqrt 2) / 2`.
pub fn concentration_limit(c: f64) -> f64 {
    0.5 * half_normal_cdf(c)
}

fn sin_power_integral(n: usize, phi1: f64, phi2: f64) -> f64 {
    let p = (n - 2) as i32;
    let f = move |t: f64| t.sin().max(0.0).powi(p);
    let w = 10.0 / (n as f64).sqrt();
    let splits = [FRAC_PI_2 - w, FRAC_PI_2, FRAC_PI_2 + w];
    let tol = 1e-12 / sphere_ratio(n).max(1.0);
    integrate_split(&f, phi1, phi2, &splits, tol)
}

/// Probability that the angle between two independent uniform directions in
/// `R^n` lies in `[phi1, phi2]`.
pub fn finite_n_angle_mass(n: usize, phi1: f64, phi2: f64) -> Result<f64> {
    if n < 2 {
        return Err(LabError::InvalidArgument(format!("dimension {n} < 2")));
    }
    if !(0.0 <= phi1 && phi1 < phi2 && phi2 <= PI) {
        return Err(LabError::InvalidArgument(format!("bad angle interval [{phi1}, {phi2}]")));
    }
    Ok(sphere_ratio(n) * sin_power_integral(n, phi1, phi2))
}

/// Leading term of the mean number of pairs `{±v, ±w}` of lattice vectors with
/// ball volumes at most `v` and symmetrized angle in `[phi1, phi2]`:
/// `(v^2/4) (omega_{n-1}/omega_n) int sin^{n-2}`. The exponentially small
/// correction is not included.
pub fn rogers_pair_expectation(n: usize, v: f64, phi1: f64, phi2: f64) -> Result<f64> {
    if n < 3 {
        return Err(LabError::InvalidArgument(format!("dimension {n} < 3")));
    }
    if !(0.0 <= phi1 && phi1 < phi2 && phi2 <= FRAC_PI_2) {
        return Err(LabError::InvalidArgument(format!("bad angle interval [{phi1}, {phi2}]")));
    }
    Ok(v * v / 4.0 * finite_n_angle_mass(n, phi1, phi2)?)
}

/// Expected number of ordered k-tuples of distinct points of a Poisson
/// process of intensity 1/2 on `[0, inf)` that land in the box.
pub fn campbell_box_expectation(intervals: &[(f64, f64)]) -> Result<f64> {
    if intervals.len() < 2 {
        return Err(LabError::InvalidArgument("need at least two intervals".into()));
    }
    let mut acc = 1.0;
    for &(a, b) in intervals {
        if !(0.0 <= a && a <= b) {
            return Err(LabError::InvalidArgument(format!("bad interval [{a}, {b}]")));
        }
        acc *= 0.5 * (b - a);
    }
    Ok(acc)
}

/// Chart coordinates `phi_ij` for `k` unit vectors in `R^k` and what they map to.
///
/// `u_1 = e_1`; for `j >= 2`, coordinate `m < j` of `u_j` is
/// `sin phi_1j ... sin phi_{m-1,j} cos phi_mj` and coordinate `j` is
/// `sin phi_1j ... sin phi_{j-1,j}`. `alphas` holds the pairwise angles
/// `arccos(u_i . u_j)`; `alpha_1j = phi_1j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleChart {
    pub k: usize,
    pub phis: PairMatrix,
    pub alphas: PairMatrix,
    pub frame: Vec<Vec<f64>>,
}

pub fn chart_frame(phis: &PairMatrix) -> Vec<Vec<f64>> {
    let k = phis.size();
    (0..k)
        .map(|j| {
            let mut u = vec![0.0; k];
            let mut sin_prod = 1.0;
            for m in 0..j {
                let phi = phis.get(m, j);
                u[m] = sin_prod * phi.cos();
                sin_prod *= phi.sin();
            }
            u[j] = sin_prod;
            u
        })
        .collect()
}

pub fn chart_to_angles(phis: &PairMatrix) -> Result<AngleChart> {
    if let Some((_, bad)) = phis.iter().find(|&(_, p)| !(p > 0.0 && p < PI)) {
        return Err(LabError::InvalidArgument(format!("chart angle {bad} not in (0, pi)")));
    }
    let frame = chart_frame(phis);
    let alphas = PairMatrix::from_fn(phis.size(), |i, j| {
        let d: f64 = frame[i].iter().zip(&frame[j]).map(|(a, b)| a * b).sum();
        d.clamp(-1.0, 1.0).acos()
    });
    Ok(AngleChart { k: phis.size(), phis: phis.clone(), alphas, frame })
}

/// `prod_{i<j} (sin phi_ij)^{k-i} / sin alpha_ij` (1-based `i`), the Jacobian
/// determinant of the map `phi -> alpha`.
pub fn chart_jacobian_det(chart: &AngleChart) -> Result<f64> {
    let k = chart.k;
    let mut acc = 1.0;
    for ((i, j), phi) in chart.phis.iter() {
        let s_alpha = chart.alphas.get(i, j).sin();
        if !(s_alpha > 1e-300) {
            return Err(LabError::ChartDegenerate);
        }
        acc *= phi.sin().powi((k - i - 1) as i32) / s_alpha;
    }
    Ok(acc)
}
