#![allow(dead_code)]

use std::collections::BinaryHeap;

use lattice_lab::intmat::RankTracker;
use lattice_lab::lattice::{LatticeBasis, LatticeVector};
use lattice_lab::limits::chart_to_angles;
use lattice_lab::pairs::PairMatrix;
use num_traits::ToPrimitive;

/// The `keep` shortest ±pairs among all coefficient vectors in `[-r, r]^n`,
/// computed with plain i64 arithmetic, sign-deduplicated and sorted.
pub fn brute_force_shortest(basis: &LatticeBasis, r: i64, keep: usize) -> Vec<LatticeVector> {
    let rows: Vec<Vec<i64>> =
        basis.rows().iter().map(|row| row.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    let n = rows.len();
    let d = rows[0].len();
    let mut x = vec![-r; n];
    let mut heap: BinaryHeap<(i64, Vec<i64>)> = BinaryHeap::new();
    let mut v = vec![0i64; d];
    loop {
        v.iter_mut().for_each(|c| *c = 0);
        for (xi, row) in x.iter().zip(&rows) {
            for (acc, b) in v.iter_mut().zip(row) {
                *acc += xi * b;
            }
        }
        let first = v.iter().find(|c| **c != 0).copied().unwrap_or(0);
        if first > 0 {
            let norm: i64 = v.iter().map(|c| c * c).sum();
            if heap.len() < keep || (norm, &v) < (heap.peek().unwrap().0, &heap.peek().unwrap().1) {
                heap.push((norm, v.clone()));
                if heap.len() > keep {
                    heap.pop();
                }
            }
        }
        let mut k = 0;
        while k < n && x[k] == r {
            x[k] = -r;
            k += 1;
        }
        if k == n {
            break;
        }
        x[k] += 1;
    }
    heap.into_sorted_vec().into_iter().map(|(_, v)| LatticeVector::from_i64(&v).unwrap()).collect()
}

/// Greedy successive minima over an explicitly listed, sorted vector set;
/// `None` if the set spans fewer than `count` dimensions.
pub fn brute_force_minima(basis: &LatticeBasis, sorted: &[LatticeVector], count: usize) -> Option<(Vec<f64>, bool)> {
    let mut tracker = RankTracker::new();
    let mut minima = Vec::new();
    let mut coincide = true;
    for (i, v) in sorted.iter().enumerate() {
        if tracker.insert(v.coords()) {
            minima.push(v.length(basis.scale()));
            if minima.len() == count {
                break;
            }
        } else if i < count {
            coincide = false;
        }
    }
    (minima.len() == count).then_some((minima, coincide))
}

/// Largest coefficient any vector of squared norm at most `norm_sq` can have
/// in the (square) basis: `|x_i| <= |v| * |column i of B^{-1}|`.
pub fn coefficient_bound(basis: &LatticeBasis, norm_sq: f64) -> f64 {
    let n = basis.dim();
    assert_eq!(n, basis.ambient_dim(), "square bases only");
    // Gauss-Jordan on [B | I] in f64; entries are small enough for n <= 4
    let mut m: Vec<Vec<f64>> = basis
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<f64> = row.iter().map(|x| x.to_f64().unwrap()).collect();
            r.extend((0..n).map(|j| (i == j) as u8 as f64));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(piv, col);
        let p = m[col][col];
        m[col].iter_mut().for_each(|x| *x /= p);
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                for c in 0..2 * n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    // row i of the inverse part is (B^{-1})_{i,*}; x = v B^{-1} so x_i uses column i
    (0..n)
        .map(|i| (0..n).map(|r| m[r][n + i].powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
        * norm_sq.sqrt()
}

/// Determinant of the numerical Jacobian of `phis -> alphas`, central
/// differences with step `h`.
pub fn finite_difference_det(phis: &PairMatrix, h: f64) -> f64 {
    let m = phis.values().len();
    let mut jac = vec![vec![0.0; m]; m];
    for (c, ((i, j), v)) in phis.iter().enumerate() {
        let mut plus = phis.clone();
        let mut minus = phis.clone();
        plus.set(i, j, v + h);
        minus.set(i, j, v - h);
        let ap = chart_to_angles(&plus).unwrap().alphas;
        let am = chart_to_angles(&minus).unwrap().alphas;
        for r in 0..m {
            jac[r][c] = (ap.values()[r] - am.values()[r]) / (2.0 * h);
        }
    }
    let mut det = 1.0;
    for col in 0..m {
        let piv = (col..m).max_by(|&a, &b| jac[a][col].abs().total_cmp(&jac[b][col].abs())).unwrap();
        if piv != col {
            jac.swap(piv, col);
            det = -det;
        }
        det *= jac[col][col];
        for r in col + 1..m {
            let f = jac[r][col] / jac[col][col];
            for c in col..m {
                jac[r][c] -= f * jac[col][c];
            }
        }
    }
    det
}

/// Unscaled squared radius the oracle must cover to decide the six shortest
/// vectors and the minima up to `last_minimum`.
pub fn certified_reach(basis: &LatticeBasis, sixth: &LatticeVector, last_minimum: f64) -> f64 {
    let lambda_sq = (last_minimum / basis.scale()).powi(2) * (1.0 + 1e-9);
    sixth.norm_sq().to_f64().unwrap().max(lambda_sq)
}

/// Shortest vectors and successive minima from a coefficient box that is
/// grown until it provably contains every vector the answer depends on.
pub fn certified_oracle(basis: &LatticeBasis, reduced: &LatticeBasis) -> (Vec<LatticeVector>, (Vec<f64>, bool)) {
    let n = basis.dim();
    let (mut r, mut keep) = (8, 64);
    loop {
        let oracle = brute_force_shortest(reduced, r, keep);
        let Some(minima) = brute_force_minima(basis, &oracle, n) else {
            keep *= 4;
            r *= 2;
            continue;
        };
        let reach = certified_reach(basis, &oracle[5], minima.0[n - 1]);
        let need = coefficient_bound(reduced, reach);
        if need < r as f64 {
            return (oracle, minima);
        }
        r = need.ceil() as i64 + 1;
    }
}
