//! Unit-covolume lattices stored as `scale * (integer lattice)`, and the
//! exact observables attached to lattice vectors.
//!
//! Keeping the rows integral makes determinants, norms, inner products and
//! length ties exact; only the final scaling and trigonometry happen in
//! floating point.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{LabError, Result};
use crate::intmat::{self, ln_abs, ratio_to_f64};
use crate::special::ln_gamma;

/// A rank-`n` lattice `scale * span_Z(rows)` with integer rows in `Z^d`, `d >= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    rows: Vec<Vec<BigInt>>,
    scale: f64,
    /// det(rows * rows^T), the squared unscaled covolume.
    volume_sq: BigInt,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<BigInt>>, scale: f64) -> Result<Self> {
        let n = rows.len();
        if n == 0 || !(scale > 0.0 && scale.is_finite()) {
            return Err(LabError::InvalidArgument("basis needs rows and a positive scale".into()));
        }
        let d = rows[0].len();
        if d < n || rows.iter().any(|r| r.len() != d) {
            return Err(LabError::InvalidArgument(format!(
                "basis rows must all have length >= {n}"
            )));
        }
        let volume_sq = if d == n {
            let det = intmat::bareiss_det(&rows);
            &det * &det
        } else {
            intmat::bareiss_det(&intmat::gram(&rows))
        };
        if volume_sq.is_zero() {
            return Err(LabError::DegenerateBasis);
        }
        Ok(Self { rows, scale, volume_sq })
    }

    /// Builds the basis and picks the scale that makes the covolume one.
    pub fn with_unit_covolume(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let mut b = Self::new(rows, 1.0)?;
        b.scale = (-0.5 * ln_abs(&b.volume_sq) / b.dim() as f64).exp();
        Ok(b)
    }

    pub fn from_i64(rows: &[Vec<i64>], scale: f64) -> Result<Self> {
        Self::new(intmat::to_big(rows), scale)
    }

    /// Caller guarantees `rows` spans a lattice with the given squared covolume
    /// (e.g. after a unimodular transformation of a checked basis).
    pub(crate) fn from_parts(rows: Vec<Vec<BigInt>>, scale: f64, volume_sq: BigInt) -> Self {
        debug_assert!(!volume_sq.is_zero());
        Self { rows, scale, volume_sq }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn ln_scale(&self) -> f64 {
        self.scale.ln()
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        Self { scale, ..self.clone() }
    }

    /// `det(rows rows^T)`; for square bases this is `det(rows)^2`.
    pub fn volume_sq(&self) -> &BigInt {
        &self.volume_sq
    }

    /// Exact signed determinant of a square basis.
    pub fn determinant(&self) -> Option<BigInt> {
        (self.dim() == self.ambient_dim()).then(|| intmat::bareiss_det(&self.rows))
    }
}

/// `|det(rows)| * scale^n`, with the integer part exact and only the final
/// scaling done in floating point.
pub fn covolume(basis: &LatticeBasis) -> Result<f64> {
    if basis.volume_sq.is_zero() {
        return Err(LabError::DegenerateBasis);
    }
    Ok((0.5 * ln_abs(&basis.volume_sq) + basis.dim() as f64 * basis.ln_scale()).exp())
}

/// A nonzero lattice vector in the ambient unscaled coordinates, normalized to
/// the representative of `±v` whose first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
    norm_sq: BigInt,
}

impl LatticeVector {
    pub fn new(mut coords: Vec<BigInt>) -> Result<Self> {
        let Some(first) = coords.iter().find(|x| !x.is_zero()) else {
            return Err(LabError::ZeroVector);
        };
        if first.is_negative() {
            for c in coords.iter_mut() {
                *c = -&*c;
            }
        }
        let norm_sq = coords.iter().map(|c| c * c).sum();
        Ok(Self { coords, norm_sq })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn norm_sq(&self) -> &BigInt {
        &self.norm_sq
    }

    /// Euclidean length after multiplying by `scale`.
    pub fn length(&self, scale: f64) -> f64 {
        scale * (0.5 * ln_abs(&self.norm_sq)).exp()
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        intmat::dot(&self.coords, &other.coords)
    }
}

impl Ord for LatticeVector {
    /// Shortest first; equal lengths ordered lexicographically on coordinates.
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm_sq.cmp(&other.norm_sq).then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for LatticeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `cos^2` of the angle between `v` and `w` as an exact fraction `(num, den)`.
pub fn cos_sq_exact(v: &LatticeVector, w: &LatticeVector) -> (BigInt, BigInt) {
    let d = v.dot(w);
    (&d * &d, v.norm_sq() * w.norm_sq())
}

/// Angle between two vectors folded into `[0, pi/2]`, i.e. the smaller of the
/// angle and its supplement. Sign-invariant in both arguments.
pub fn symmetrized_angle(v: &LatticeVector, w: &LatticeVector) -> Result<f64> {
    if v.norm_sq.is_zero() || w.norm_sq.is_zero() {
        return Err(LabError::ZeroVector);
    }
    let (num, den) = cos_sq_exact(v, w);
    let c2 = ratio_to_f64(&num, &den).clamp(0.0, 1.0);
    Ok(c2.sqrt().acos())
}

/// `sqrt(n) * (pi/2 - phi)` for a symmetrized angle `phi`.
pub fn scaled_angle(n: usize, phi: f64) -> f64 {
    debug_assert!((-1e-12..=FRAC_PI_2 + 1e-12).contains(&phi));
    (n as f64).sqrt() * (FRAC_PI_2 - phi)
}

/// `ln` of the volume of the unit ball in `R^n`.
pub fn ln_unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    h * PI.ln() - ln_gamma(h + 1.0)
}

/// Volume of the n-ball of radius `ell`, evaluated in the log domain.
pub fn ball_volume(n: usize, ell: f64) -> f64 {
    (ln_unit_ball_volume(n) + n as f64 * ell.ln()).exp()
}

/// Ball volume for a vector of unscaled squared norm `norm_sq` under `scale`,
/// never forming `ell^n` explicitly.
pub fn ball_volume_of(n: usize, scale: f64, norm_sq: &BigInt) -> f64 {
    let nf = n as f64;
    (ln_unit_ball_volume(n) + nf * scale.ln() + 0.5 * nf * ln_abs(norm_sq)).exp()
}
