//! Exact integer linear algebra: determinants, Gram matrices, Hermite normal
//! form and incremental rank tests. Everything here works over `BigInt` and
//! never rounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gram(rows: &[Vec<BigInt>]) -> IntMatrix {
    let n = rows.len();
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let d = dot(&rows[i], &rows[j]);
            g[j][i] = d.clone();
            g[i][j] = d;
        }
    }
    g
}

/// Determinant of a square integer matrix by Bareiss fraction-free elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "bareiss_det needs a square matrix");
    let mut a: IntMatrix = m.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is upper triangular (pivot columns strictly increasing), pivots
/// positive, and every entry above a pivot reduced into `[0, pivot)`. Zero rows
/// are dropped, so the output has exactly `rank` rows. Two generating sets
/// span the same lattice iff their normal forms are equal.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let m = a.len();
    if m == 0 {
        return a;
    }
    let cols = a[0].len();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == m {
            break;
        }
        // Euclid on the column: repeatedly move the smallest nonzero entry up
        // and reduce the others by it.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m {
                if !a[r][col].is_zero() && best.map_or(true, |b| a[r][col].abs() < a[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..m {
                if a[r][col].is_zero() {
                    continue;
                }
                let q = a[r][col].div_floor(&a[pivot_row][col]);
                sub_scaled_row(&mut a, r, pivot_row, &q);
                if !a[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col].is_zero() {
            continue;
        }
        if a[pivot_row][col].is_negative() {
            for x in a[pivot_row].iter_mut() {
                *x = -&*x;
            }
        }
        for r in 0..pivot_row {
            let q = a[r][col].div_floor(&a[pivot_row][col]);
            if !q.is_zero() {
                sub_scaled_row(&mut a, r, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    a.truncate(pivot_row);
    a
}

fn sub_scaled_row(a: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = a.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Incremental exact rank test. Vectors are kept in fraction-free echelon
/// form; `insert` reports whether the new vector was independent of the
/// vectors accepted so far.
#[derive(Debug, Clone, Default)]
pub struct RankTracker {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl RankTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            if w[*pc].is_zero() {
                continue;
            }
            let g = row[*pc].gcd(&w[*pc]);
            let fr = &w[*pc] / &g;
            let fw = &row[*pc] / &g;
            for (x, y) in w.iter_mut().zip(row) {
                *x = &*x * &fw - y * &fr;
            }
            let c = content(&w);
            if !c.is_zero() && !c.is_one() {
                for x in w.iter_mut() {
                    *x = &*x / &c;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(pc) => {
                self.rows.push((pc, w));
                true
            }
            None => false,
        }
    }
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Natural logarithm of `|x|` for arbitrarily large integers.
pub fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Ratio `num / den` of two big integers as a float, accurate to a few ulps
/// even when both exceed the `f64` range.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as u64;
    let n = (num >> shift).to_f64().unwrap();
    let d = (den >> shift).to_f64().unwrap();
    if d != 0.0 && n.is_finite() && d.is_finite() {
        return n / d;
    }
    (ln_abs(num) - ln_abs(den)).exp() * if num.sign() == den.sign() { 1.0 } else { -1.0 }
}

pub fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}
