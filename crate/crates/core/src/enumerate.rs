//! Exact enumeration of short lattice vectors.
//!
//! Depth-first Fincke-Pohst search over basis coefficients of an LLL-reduced
//! basis. Pruning uses floating-point Gram-Schmidt data with a relative slack;
//! every candidate is re-checked with exact integer norms before it is kept.

use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{LabError, Result};
use crate::intmat::{self, RankTracker};
use crate::lattice::{
    ball_volume_of, ln_unit_ball_volume, scaled_angle, symmetrized_angle, LatticeBasis,
    LatticeVector,
};
use crate::pairs::PairMatrix;
use crate::reduce::{gram_schmidt, lll_reduce, GramSchmidtData, DEFAULT_DELTA};

/// Nodes visited on a single tree level before a search is abandoned.
pub const NODE_CAP: u64 = 1 << 20;

const SLACK: f64 = 1e-6;

enum Bound {
    /// Keep everything up to this exact squared norm.
    Fixed(BigInt),
    /// Keep the `k` smallest seen so far, shrinking the bound as they arrive.
    Best { k: usize, limit: BigInt },
}

struct Search<'a> {
    rows: &'a [Vec<BigInt>],
    gs: &'a GramSchmidtData,
    bound: Bound,
    radius: f64,
    x: Vec<i64>,
    nodes: Vec<u64>,
    found: BinaryHeap<LatticeVector>,
    // sigma[l * (n + 1) + j] = -sum_{k >= j} x_k mu_kl, valid for j > stale[l]
    sigma: Vec<f64>,
    stale: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(rows: &'a [Vec<BigInt>], gs: &'a GramSchmidtData, bound: Bound) -> Self {
        let n = rows.len();
        let limit = match &bound {
            Bound::Fixed(b) => b,
            Bound::Best { limit, .. } => limit,
        };
        let radius = slack_radius(limit);
        Self {
            rows,
            gs,
            bound,
            radius,
            x: vec![0; n],
            nodes: vec![0; n],
            found: BinaryHeap::new(),
            sigma: vec![0.0; n * (n + 1)],
            stale: vec![n - 1; n],
        }
    }

    fn exact_limit(&self) -> &BigInt {
        match &self.bound {
            Bound::Fixed(b) => b,
            Bound::Best { limit, .. } => limit,
        }
    }

    fn run(mut self) -> Result<Vec<LatticeVector>> {
        let n = self.rows.len();
        self.level(n - 1, 0.0, true)?;
        Ok(self.found.into_sorted_vec())
    }

    /// Center of level `l` given the coefficients above it, updating only the
    /// partial sums invalidated since the last visit.
    fn center(&mut self, l: usize) -> f64 {
        let n = self.x.len();
        let row = l * (n + 1);
        for j in (l + 1..=self.stale[l]).rev() {
            self.sigma[row + j] = self.sigma[row + j + 1] - self.x[j] as f64 * self.gs.mu[j][l];
        }
        if l > 0 {
            self.stale[l - 1] = self.stale[l - 1].max(self.stale[l]);
        }
        self.stale[l] = l;
        self.sigma[row + l + 1]
    }

    fn level(&mut self, i: usize, partial: f64, top_zero: bool) -> Result<()> {
        let b = self.gs.bstar_norm_sq[i];
        let c = self.center(i);
        let fits = |x: i64, radius: f64| {
            let d = x as f64 - c;
            partial + d * d * b <= radius
        };
        // Zigzag outward from the nearest integer; with all higher coefficients
        // zero only x_i >= 0 is visited so each ±pair is seen once.
        let start = if top_zero { 0 } else { c.round() as i64 };
        let (mut up, mut down) = (start, start - 1);
        let (mut up_open, mut down_open) = (true, !top_zero);
        while up_open || down_open {
            let take_up = up_open && (!down_open || (up as f64 - c).abs() <= (c - down as f64).abs());
            let xi = if take_up { up } else { down };
            if !fits(xi, self.radius) {
                if take_up {
                    up_open = false;
                } else {
                    down_open = false;
                }
                continue;
            }
            if take_up {
                up += 1;
            } else {
                down -= 1;
            }
            self.nodes[i] += 1;
            if self.nodes[i] > NODE_CAP {
                return Err(LabError::RadiusCapExceeded {
                    level: i,
                    nodes: self.nodes[i],
                    radius_sq: self.exact_limit().to_string(),
                });
            }
            self.x[i] = xi;
            if i > 0 {
                self.stale[i - 1] = self.stale[i - 1].max(i);
            }
            let d = xi as f64 - c;
            let next = partial + d * d * b;
            if i == 0 {
                if !(top_zero && xi == 0) {
                    self.leaf();
                }
            } else {
                self.level(i - 1, next, top_zero && xi == 0)?;
            }
        }
        self.x[i] = 0;
        if i > 0 {
            self.stale[i - 1] = self.stale[i - 1].max(i);
        }
        Ok(())
    }

    fn leaf(&mut self) {
        let d = self.rows[0].len();
        let mut v = vec![BigInt::zero(); d];
        for (xi, row) in self.x.iter().zip(self.rows) {
            if *xi != 0 {
                let xi = BigInt::from(*xi);
                for (acc, r) in v.iter_mut().zip(row) {
                    *acc += &xi * r;
                }
            }
        }
        let Ok(vec) = LatticeVector::new(v) else { return };
        if vec.norm_sq() > self.exact_limit() {
            return;
        }
        self.found.push(vec);
        if let Bound::Best { k, limit } = &mut self.bound {
            if self.found.len() > *k {
                self.found.pop();
            }
            if self.found.len() == *k {
                let worst = self.found.peek().expect("nonempty").norm_sq().clone();
                if worst < *limit {
                    self.radius = slack_radius(&worst);
                    *limit = worst;
                }
            }
        }
    }
}

fn slack_radius(limit: &BigInt) -> f64 {
    limit.to_f64().unwrap_or(f64::INFINITY) * (1.0 + SLACK) + SLACK
}

fn prepare(basis: &LatticeBasis) -> Result<(LatticeBasis, GramSchmidtData)> {
    let reduced = lll_reduce(basis, DEFAULT_DELTA)?;
    let gs = gram_schmidt(&reduced);
    Ok((reduced, gs))
}

/// The `count` shortest nonzero ±pairs, canonical sign, sorted by exact squared
/// norm and then lexicographically on coordinates.
pub fn enumerate_shortest(basis: &LatticeBasis, count: usize) -> Result<Vec<LatticeVector>> {
    if count == 0 {
        return Err(LabError::InvalidArgument("count must be at least 1".into()));
    }
    let (reduced, gs) = prepare(basis)?;
    let rows = reduced.rows();
    let mut row_norms: Vec<BigInt> = rows.iter().map(|r| intmat::dot(r, r)).collect();
    row_norms.sort();
    let mut limit = row_norms[(count - 1).min(row_norms.len() - 1)].clone();
    let best = loop {
        let found = Search::new(rows, &gs, Bound::Best { k: count, limit: limit.clone() }).run()?;
        if found.len() >= count {
            break found;
        }
        limit *= 2;
    };
    // Confirmation pass: everything up to the final bound, no shrinking.
    let bound = best.last().expect("count >= 1").norm_sq().clone();
    let mut all = Search::new(rows, &gs, Bound::Fixed(bound)).run()?;
    all.truncate(count);
    debug_assert_eq!(all, best);
    Ok(all)
}

/// Every ±pair whose ball volume `V_n (s |v|)^n` is at most `volume`, sorted.
pub fn enumerate_ball(basis: &LatticeBasis, volume: f64) -> Result<Vec<LatticeVector>> {
    if !(volume > 0.0) {
        return Ok(Vec::new());
    }
    let n = basis.dim() as f64;
    // (s r)^n V_n = volume  =>  r^2 = exp(2 (ln volume - ln V_n) / n - 2 ln s)
    let ln_r2 = 2.0 * (volume.ln() - ln_unit_ball_volume(basis.dim())) / n - 2.0 * basis.ln_scale();
    let (reduced, gs) = prepare(basis)?;
    let r2 = ln_r2.exp() * (1.0 + 1e-9);
    let limit = BigInt::from(r2.floor() as u128);
    let found = Search::new(reduced.rows(), &gs, Bound::Fixed(limit)).run()?;
    Ok(found
        .into_iter()
        .filter(|v| ball_volume_of(basis.dim(), basis.scale(), v.norm_sq()) <= volume)
        .collect())
}

/// `lambda_1..lambda_count` and whether the `count` shortest pairs are already
/// linearly independent (in which case `lambda_i = |v_i|`).
pub fn successive_minima(basis: &LatticeBasis, count: usize) -> Result<(Vec<f64>, bool)> {
    if count == 0 || count > basis.dim() {
        return Err(LabError::InvalidArgument(format!(
            "successive minima count {count} not in 1..={}",
            basis.dim()
        )));
    }
    let mut k = count;
    loop {
        let vs = enumerate_shortest(basis, k)?;
        if let Some(result) = minima_from(&vs, count, basis.scale()) {
            return Ok(result);
        }
        k *= 2;
    }
}

fn minima_from(vs: &[LatticeVector], count: usize, scale: f64) -> Option<(Vec<f64>, bool)> {
    let mut tracker = RankTracker::new();
    let mut minima = Vec::with_capacity(count);
    let mut coincide = true;
    for (idx, v) in vs.iter().enumerate() {
        if tracker.insert(v.coords()) {
            minima.push(v.length(scale));
            if minima.len() == count {
                return Some((minima, coincide));
            }
        } else if idx < count {
            coincide = false;
        }
    }
    None
}

/// Everything measured on the `count` shortest pairs of one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub dim: usize,
    pub vectors: Vec<LatticeVector>,
    pub lengths: Vec<f64>,
    pub volumes: Vec<f64>,
    pub raw_angles: PairMatrix,
    pub scaled_angles: PairMatrix,
    /// `lambda_1..lambda_m` with `m = min(count, dim)`.
    pub successive_minima: Vec<f64>,
    pub minima_coincide: bool,
    /// Some `|v_j| = |v_{j+1}|` for `j <= count`, i.e. the ordering of the
    /// reported vectors (or the choice of the last one) is not unique.
    pub has_ties: bool,
}

pub fn spectrum(basis: &LatticeBasis, count: usize) -> Result<SpectrumResult> {
    let n = basis.dim();
    if count == 0 || count > 2 * n * n {
        return Err(LabError::InvalidArgument(format!("count {count} not in 1..={}", 2 * n * n)));
    }
    let mut vectors = enumerate_shortest(basis, count + 1)?;
    let has_ties = vectors.windows(2).any(|w| w[0].norm_sq() == w[1].norm_sq());
    vectors.truncate(count);
    let scale = basis.scale();
    let lengths = vectors.iter().map(|v| v.length(scale)).collect();
    let volumes = vectors.iter().map(|v| ball_volume_of(n, scale, v.norm_sq())).collect();
    let mut raw = PairMatrix::zeros(count);
    for j in 1..count {
        for i in 0..j {
            raw.set(i, j, symmetrized_angle(&vectors[i], &vectors[j])?);
        }
    }
    let scaled = PairMatrix::from_fn(count, |i, j| scaled_angle(n, raw.get(i, j)));
    let m = count.min(n);
    let (successive_minima, minima_coincide) = match minima_from(&vectors, m, scale) {
        Some(r) => r,
        None => successive_minima(basis, m)?,
    };
    Ok(SpectrumResult {
        dim: n,
        vectors,
        lengths,
        volumes,
        raw_angles: raw,
        scaled_angles: scaled,
        successive_minima,
        minima_coincide,
        has_ties,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::to_big;
    use crate::sampler::{sample_lattice, SamplerConfig};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn z2() -> LatticeBasis {
        LatticeBasis::from_i64(&[vec![1, 0], vec![0, 1]], 1.0).unwrap()
    }

    fn hexagonal() -> LatticeBasis {
        LatticeBasis::with_unit_covolume(to_big(&[vec![1, -1, 0], vec![0, 1, -1]])).unwrap()
    }

    #[test]
    fn z2_three_shortest() {
        let vs = enumerate_shortest(&z2(), 3).unwrap();
        let coords: Vec<Vec<BigInt>> = vs.iter().map(|v| v.coords().to_vec()).collect();
        assert_eq!(coords, to_big(&[vec![0, 1], vec![1, 0], vec![1, -1]]));
        let norms: Vec<BigInt> = vs.iter().map(|v| v.norm_sq().clone()).collect();
        assert_eq!(norms, to_big(&[vec![1, 1, 2]])[0]);
    }

    #[test]
    fn hexagonal_shortest_and_minima() {
        let hex = hexagonal();
        let l1 = enumerate_shortest(&hex, 1).unwrap()[0].length(hex.scale());
        assert!((l1 - (4.0f64 / 3.0).powf(0.25)).abs() < 1e-12);
        let (m, coincide) = successive_minima(&hex, 2).unwrap();
        assert!(coincide);
        assert!((m[0] - l1).abs() < 1e-15 && (m[1] - l1).abs() < 1e-15);
    }

    #[test]
    fn minima_of_zn_and_sheared_z2() {
        let z4 = LatticeBasis::from_i64(
            &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
            1.0,
        )
        .unwrap();
        let (m, coincide) = successive_minima(&z4, 4).unwrap();
        assert!(coincide && m.iter().all(|&x| x == 1.0));
        let sheared = LatticeBasis::from_i64(&[vec![1, 0], vec![10, 1]], 1.0).unwrap();
        assert_eq!(successive_minima(&sheared, 2).unwrap(), successive_minima(&z2(), 2).unwrap());
    }

    #[test]
    fn z2_spectrum() {
        let s = spectrum(&z2(), 2).unwrap();
        assert!((s.volumes[0] - PI).abs() < 1e-12 && (s.volumes[1] - PI).abs() < 1e-12);
        assert!((s.raw_angles.get(0, 1) - FRAC_PI_2).abs() < 1e-15);
        assert!(s.scaled_angles.get(0, 1).abs() < 1e-15);
        assert!(s.has_ties);
    }

    #[test]
    fn scale_equivariance() {
        let cfg = SamplerConfig::new(4, 5).with_prime(1009);
        let b = sample_lattice(&cfg).unwrap();
        let c = 1.5;
        let s1 = spectrum(&b, 5).unwrap();
        let s2 = spectrum(&b.with_scale(b.scale() * c), 5).unwrap();
        assert_eq!(s1.vectors, s2.vectors);
        assert_eq!(s1.raw_angles, s2.raw_angles);
        for (a, b) in s1.lengths.iter().zip(&s2.lengths) {
            assert!((b - c * a).abs() <= 1e-12 * b);
        }
        for (a, b) in s1.successive_minima.iter().zip(&s2.successive_minima) {
            assert!((b - c * a).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn ball_enumeration_counts() {
        // Z^2: |v| <= 1.5 gives (0,1),(1,0),(1,1),(1,-1)
        let vs = enumerate_ball(&z2(), PI * 2.25).unwrap();
        assert_eq!(vs.len(), 4);
        assert!(enumerate_ball(&z2(), 3.0).unwrap().is_empty());
    }

    #[test]
    fn radius_cap_reports() {
        let b = LatticeBasis::from_i64(&[vec![1, 0], vec![0, 1]], 1.0).unwrap();
        let e = enumerate_ball(&b, 1e15).unwrap_err();
        assert!(matches!(e, LabError::RadiusCapExceeded { .. }));
    }
}
