//! LLL reduction with exact integer row operations and floating-point
//! Gram-Schmidt data recomputed from an exactly maintained Gram matrix.
//!
//! The reduction runs on `i128` when the basis fits and transparently restarts
//! on `BigInt` if any intermediate value would overflow.

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, ToPrimitive, Zero};

use crate::error::{LabError, Result};
use crate::intmat;
use crate::lattice::LatticeBasis;

pub const DEFAULT_DELTA: f64 = 0.99;

/// Size-reduction threshold on `|mu|`; a hair above 1/2 so values that are
/// exactly 1/2 in exact arithmetic are not bounced back and forth.
const ETA: f64 = 0.5 + 1e-10;
const MAX_STAGES: u64 = 50_000_000;

/// Gram-Schmidt coefficients of an (unscaled) basis: `mu[i][j]` for `j < i`
/// and the squared norms `|b*_i|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSchmidtData {
    pub mu: Vec<Vec<f64>>,
    pub bstar_norm_sq: Vec<f64>,
}

impl GramSchmidtData {
    /// From a Gram matrix given in floating point.
    pub fn from_gram(gram: &[Vec<f64>]) -> Self {
        let n = gram.len();
        let mut mu = vec![vec![0.0; n]; n];
        let mut r = vec![vec![0.0; n]; n];
        let mut bstar = vec![0.0; n];
        for k in 0..n {
            gs_row(k, |i, j| gram[i][j], &mut mu, &mut r, &mut bstar);
        }
        Self { mu, bstar_norm_sq: bstar }
    }
}

pub fn gram_schmidt(basis: &LatticeBasis) -> GramSchmidtData {
    let g = intmat::gram(basis.rows());
    let gf: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    GramSchmidtData::from_gram(&gf)
}

fn gs_row(
    k: usize,
    gram: impl Fn(usize, usize) -> f64,
    mu: &mut [Vec<f64>],
    r: &mut [Vec<f64>],
    bstar: &mut [f64],
) {
    for j in 0..=k {
        let mut acc = gram(k, j);
        for i in 0..j {
            acc -= mu[j][i] * r[k][i];
        }
        r[k][j] = acc;
        if j < k {
            mu[k][j] = acc / r[j][j];
        }
    }
    mu[k][k] = 1.0;
    bstar[k] = r[k][k];
}

#[derive(Debug)]
struct Overflow;

trait ExactInt:
    Clone + Zero + CheckedAdd + CheckedSub + CheckedMul + FromPrimitive + ToPrimitive
{
}
impl<T: Clone + Zero + CheckedAdd + CheckedSub + CheckedMul + FromPrimitive + ToPrimitive> ExactInt for T {}

struct Lll<T> {
    rows: Vec<Vec<T>>,
    gram: Vec<Vec<T>>,
    mu: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
    bstar: Vec<f64>,
}

fn mul<T: ExactInt>(a: &T, b: &T) -> std::result::Result<T, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

fn sub<T: ExactInt>(a: &T, b: &T) -> std::result::Result<T, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}

impl<T: ExactInt> Lll<T> {
    fn new(rows: Vec<Vec<T>>) -> std::result::Result<Self, Overflow> {
        let n = rows.len();
        let mut gram = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut acc = T::zero();
                for (x, y) in rows[i].iter().zip(&rows[j]) {
                    acc = acc.checked_add(&mul(x, y)?).ok_or(Overflow)?;
                }
                gram[i][j] = acc.clone();
                gram[j][i] = acc;
            }
        }
        Ok(Self { rows, gram, mu: vec![vec![0.0; n]; n], r: vec![vec![0.0; n]; n], bstar: vec![0.0; n] })
    }

    fn gs_row(&mut self, k: usize) {
        let gram = &self.gram;
        gs_row(k, |i, j| gram[i][j].to_f64().unwrap_or(f64::INFINITY), &mut self.mu, &mut self.r, &mut self.bstar);
    }

    /// b_k -= q b_j, keeping the Gram matrix and row k of mu consistent.
    fn reduce(&mut self, k: usize, j: usize, q: f64) -> std::result::Result<(), Overflow> {
        let qi = T::from_f64(q).ok_or(Overflow)?;
        let n = self.rows.len();
        let (row_k, row_j) = if j < k {
            let (lo, hi) = self.rows.split_at_mut(k);
            (&mut hi[0], &lo[j])
        } else {
            unreachable!("size reduction only uses earlier rows")
        };
        for (x, y) in row_k.iter_mut().zip(row_j.iter()) {
            *x = sub(x, &mul(&qi, y)?)?;
        }
        // G'kk = Gkk - 2q Gkj + q^2 Gjj, using the old Gkj
        let two_q_gkj = mul(&mul(&qi, &self.gram[k][j])?, &T::from_u8(2).unwrap())?;
        let q2_gjj = mul(&mul(&qi, &qi)?, &self.gram[j][j])?;
        let gkk = sub(&self.gram[k][k], &two_q_gkj)?.checked_add(&q2_gjj).ok_or(Overflow)?;
        for i in 0..n {
            if i == k {
                continue;
            }
            let v = sub(&self.gram[k][i], &mul(&qi, &self.gram[j][i])?)?;
            self.gram[i][k] = v.clone();
            self.gram[k][i] = v;
        }
        self.gram[k][k] = gkk;
        for i in 0..j {
            self.mu[k][i] -= q * self.mu[j][i];
        }
        self.mu[k][j] -= q;
        Ok(())
    }

    fn size_reduce(&mut self, k: usize) -> std::result::Result<(), Overflow> {
        for _ in 0..1000 {
            self.gs_row(k);
            let mut changed = false;
            for j in (0..k).rev() {
                if self.mu[k][j].abs() > ETA {
                    let q = self.mu[k][j].round();
                    self.reduce(k, j, q)?;
                    changed = true;
                }
            }
            if !changed {
                return Ok(());
            }
        }
        // float GS is not converging; the exact path will not help either
        Err(Overflow)
    }

    fn swap(&mut self, k: usize) {
        self.rows.swap(k - 1, k);
        self.gram.swap(k - 1, k);
        for row in self.gram.iter_mut() {
            row.swap(k - 1, k);
        }
    }

    fn run(&mut self, delta: f64) -> std::result::Result<(), Overflow> {
        let n = self.rows.len();
        if n == 0 {
            return Ok(());
        }
        self.gs_row(0);
        let mut k = 1;
        let mut stages = 0u64;
        while k < n {
            stages += 1;
            if stages > MAX_STAGES {
                return Err(Overflow);
            }
            self.size_reduce(k)?;
            let m = self.mu[k][k - 1];
            if self.bstar[k] >= (delta - m * m) * self.bstar[k - 1] {
                k += 1;
            } else {
                self.swap(k);
                if k == 1 {
                    self.gs_row(0);
                }
                k = (k - 1).max(1);
            }
        }
        Ok(())
    }
}

fn to_i128_rows(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_i128().filter(|v| v.unsigned_abs() < 1u128 << 62)).collect())
        .collect()
}

/// LLL-reduces `basis` with Lovász parameter `delta` in `(1/4, 1)`.
///
/// The output spans the same lattice (only unimodular integer row operations
/// are applied), is size-reduced (`|mu_ij| <= 1/2` up to 1e-9), and satisfies
/// the Lovász condition with `delta`.
pub fn lll_reduce(basis: &LatticeBasis, delta: f64) -> Result<LatticeBasis> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(LabError::InvalidArgument(format!("delta {delta} not in (1/4, 1)")));
    }
    let reduced_rows = match to_i128_rows(basis.rows()).map(|rows| {
        let mut lll = Lll::new(rows)?;
        lll.run(delta)?;
        Ok::<_, Overflow>(lll.rows)
    }) {
        Some(Ok(rows)) => rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
        _ => {
            let mut lll = Lll::new(basis.rows().to_vec()).expect("BigInt never overflows");
            lll.run(delta).map_err(|_| {
                LabError::InvalidArgument("LLL failed to converge in floating point".into())
            })?;
            lll.rows
        }
    };
    Ok(LatticeBasis::from_parts(reduced_rows, basis.scale(), basis.volume_sq().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::{hermite_normal_form, to_big};

    #[test]
    fn identity_unchanged() {
        let b = LatticeBasis::from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 1.0).unwrap();
        assert_eq!(lll_reduce(&b, DEFAULT_DELTA).unwrap().rows(), b.rows());
    }

    #[test]
    fn shear_reduces_to_unit_vectors() {
        let b = LatticeBasis::from_i64(&[vec![1, 0], vec![3, 1]], 1.0).unwrap();
        let r = lll_reduce(&b, DEFAULT_DELTA).unwrap();
        for row in r.rows() {
            assert_eq!(intmat::dot(row, row), BigInt::from(1));
        }
        assert_eq!(hermite_normal_form(r.rows()), hermite_normal_form(b.rows()));
    }

    #[test]
    fn bigint_fallback_on_huge_entries() {
        let big = BigInt::from(10).pow(30);
        let rows = vec![
            vec![BigInt::from(1), big.clone() + 7],
            vec![BigInt::from(0), big.clone()],
        ];
        let b = LatticeBasis::new(rows.clone(), 1.0).unwrap();
        let r = lll_reduce(&b, DEFAULT_DELTA).unwrap();
        assert_eq!(hermite_normal_form(r.rows()), hermite_normal_form(&rows));
        assert_eq!(r.determinant().unwrap().magnitude(), big.magnitude());
        // (1, 7) is in the lattice, so the first reduced row is at most that long
        assert!(intmat::dot(&r.rows()[0], &r.rows()[0]) <= BigInt::from(50));
    }

    #[test]
    fn bad_delta() {
        let b = LatticeBasis::from_i64(&[vec![1, 0], vec![0, 1]], 1.0).unwrap();
        assert!(lll_reduce(&b, 0.2).is_err());
        assert!(lll_reduce(&b, 1.0).is_err());
    }

    #[test]
    fn gram_schmidt_reconstructs_norms() {
        let rows = to_big(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]);
        let b = LatticeBasis::new(rows.clone(), 1.0).unwrap();
        let gs = gram_schmidt(&b);
        for i in 0..3 {
            let exact = intmat::dot(&rows[i], &rows[i]).to_f64().unwrap();
            let rebuilt: f64 = gs.bstar_norm_sq[i]
                + (0..i).map(|j| gs.mu[i][j] * gs.mu[i][j] * gs.bstar_norm_sq[j]).sum::<f64>();
            assert!((rebuilt - exact).abs() <= 1e-9 * exact);
            assert!(gs.bstar_norm_sq[i] > 0.0);
        }
    }
}
