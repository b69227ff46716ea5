//! Draws from the limiting process: Poisson points of intensity 1/2 and an
//! independent positive Gaussian for each pair, next to the closed-form CDFs.
//!
//! cargo run --release --example limit_law

use lattice_lab::limits::{half_normal_cdf, poisson_gap_cdf};
use lattice_lab::sampler::{sample_limit_law, SamplerConfig};
use lattice_lab::stats::ks_statistic;

fn main() -> lattice_lab::Result<()> {
    let m = 20_000;
    let draws: Vec<_> = (0..m).map(|t| sample_limit_law(3, &SamplerConfig::new(2, 11).trial(t))).collect();

    let first = draws[0].clone();
    println!("one draw: T = {:.4?}, Phi = {:.4?}", first.points, first.angles.values());

    for j in 0..3 {
        let tj: Vec<f64> = draws.iter().map(|d| d.points[j]).collect();
        let (d, p) = ks_statistic(&tj, |v| poisson_gap_cdf(j + 1, v))?;
        println!("T{} vs Poisson gap law: D = {d:.4}, p = {p:.3}", j + 1);
    }
    let phi: Vec<f64> = draws.iter().map(|d| d.angles.get(0, 1)).collect();
    let (d, p) = ks_statistic(&phi, half_normal_cdf)?;
    println!("Phi12 vs half-normal: D = {d:.4}, p = {p:.3}");

    for v in [0.5, 1.0, 2.0, 4.0, 8.0] {
        println!("P(V_1 <= {v}) = {:.6}   P(V_3 <= {v}) = {:.6}", poisson_gap_cdf(1, v), poisson_gap_cdf(3, v));
    }
    Ok(())
}
