//! Random lattices, random directions and draws from the limiting process.
//!
//! Lattices come from the Hecke-point family: for a prime `p` and a nonzero
//! `a` in `(Z/pZ)^n`, `L_a = Za + pZ^n` is a sublattice of `Z^n` of index
//! `p^(n-1)`. Rescaling by `p^(-(n-1)/n)` gives covolume one, and as `p`
//! grows the rescaled `L_a` for uniform `a` equidistribute toward the Haar
//! probability measure on unit-covolume lattices.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

use crate::error::{LabError, Result};
use crate::intmat;
use crate::lattice::LatticeBasis;
use crate::pairs::PairMatrix;
use crate::rng::{substream, Purpose};

/// Smallest prime above 10^6.
pub const DEFAULT_PRIME: u64 = 1_000_003;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub dim: usize,
    pub prime: u64,
    pub seed: u64,
    pub trial_index: u64,
}

impl SamplerConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self { dim, prime: DEFAULT_PRIME, seed, trial_index: 0 }
    }

    pub fn with_prime(self, prime: u64) -> Self {
        Self { prime, ..self }
    }

    pub fn trial(self, trial_index: u64) -> Self {
        Self { trial_index, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(LabError::InvalidArgument(format!("dimension {} < 2", self.dim)));
        }
        if !is_prime(self.prime) {
            return Err(LabError::NotPrime(self.prime));
        }
        Ok(())
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(from: u64) -> u64 {
    let mut c = from.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// `Za + pZ^n` in Hermite normal form, scaled to covolume one.
pub fn index_lattice_basis(prime: u64, a: &[u64]) -> Result<LatticeBasis> {
    let n = a.len();
    if n < 2 {
        return Err(LabError::InvalidArgument("dimension < 2".into()));
    }
    if !is_prime(prime) {
        return Err(LabError::NotPrime(prime));
    }
    if a.iter().all(|&x| x % prime == 0) {
        return Err(LabError::InvalidArgument("a must be nonzero mod p".into()));
    }
    let p = BigInt::from(prime);
    let mut generators: Vec<Vec<BigInt>> = (0..n)
        .map(|k| {
            let mut row = vec![BigInt::zero(); n];
            row[k] = p.clone();
            row
        })
        .collect();
    generators.push(a.iter().map(|&x| BigInt::from(x % prime)).collect());
    let rows = intmat::hermite_normal_form(&generators);
    debug_assert_eq!(rows.len(), n);
    let index = p.pow((n - 1) as u32);
    let scale = (-((n - 1) as f64) / n as f64 * (prime as f64).ln()).exp();
    Ok(LatticeBasis::from_parts(rows, scale, &index * &index))
}

/// Uniform nonzero point of `(Z/pZ)^n` from the lattice substream of `cfg`.
pub fn sample_point(cfg: &SamplerConfig) -> Vec<u64> {
    let mut rng = substream(cfg.seed, cfg.trial_index, Purpose::Lattice);
    loop {
        let a: Vec<u64> = (0..cfg.dim).map(|_| rng.random_range(0..cfg.prime)).collect();
        if a.iter().any(|&x| x != 0) {
            return a;
        }
    }
}

/// A random unit-covolume lattice: `L_a` for a uniform nonzero `a`.
pub fn sample_lattice(cfg: &SamplerConfig) -> Result<LatticeBasis> {
    cfg.validate()?;
    index_lattice_basis(cfg.prime, &sample_point(cfg))
}

/// `count` independent uniform directions on `S^{n-1}`.
pub fn sample_sphere_directions(n: usize, count: usize, cfg: &SamplerConfig) -> Vec<Vec<f64>> {
    let mut rng = substream(cfg.seed, cfg.trial_index, Purpose::Sphere);
    (0..count)
        .map(|_| loop {
            let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-150 {
                break g.into_iter().map(|x| x / norm).collect();
            }
        })
        .collect()
}

/// First points of a Poisson process of intensity 1/2 on the positive line,
/// together with an independent positive Gaussian for every pair of them.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitLawSample {
    pub points: Vec<f64>,
    pub angles: PairMatrix,
}

fn limit_law_from<R: Rng>(rng: &mut R, mut more: impl FnMut(&[f64]) -> bool) -> LimitLawSample {
    let gap = Exp::new(0.5).expect("rate 1/2 is valid");
    let mut points = Vec::new();
    let mut t = 0.0;
    while more(&points) {
        t += gap.sample(rng);
        points.push(t);
    }
    let angles = PairMatrix::from_fn(points.len(), |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        x.abs()
    });
    LimitLawSample { points, angles }
}

/// The first `count` points `T_1 < ... < T_count` and the pair angles `Phi_ij`.
pub fn sample_limit_law(count: usize, cfg: &SamplerConfig) -> LimitLawSample {
    let mut rng = substream(cfg.seed, cfg.trial_index, Purpose::LimitLaw);
    limit_law_from(&mut rng, |pts| pts.len() < count)
}

/// All points up to `bound` plus the first point beyond it.
pub fn sample_limit_law_covering(bound: f64, cfg: &SamplerConfig) -> LimitLawSample {
    let mut rng = substream(cfg.seed, cfg.trial_index, Purpose::LimitLaw);
    limit_law_from(&mut rng, |pts| pts.last().map_or(true, |&t| t <= bound))
}
