//! Successive minima of a few lattices, and whether the shortest vectors
//! already realize them.
//!
//! cargo run --release --example successive_minima -- [n] [N]

use lattice_lab::enumerate::{enumerate_shortest, successive_minima};
use lattice_lab::lattice::LatticeBasis;
use lattice_lab::sampler::{sample_lattice, SamplerConfig};

fn main() -> lattice_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(12, |s| s.parse().expect("n"));
    let count: usize = args.next().map_or(3, |s| s.parse().expect("N"));

    // the hexagonal lattice, written inside Z^3 and scaled to covolume one
    let hex = LatticeBasis::with_unit_covolume(lattice_lab::intmat::to_big(&[vec![1, -1, 0], vec![0, 1, -1]]))?;
    let (minima, coincide) = successive_minima(&hex, 2)?;
    println!("hexagonal: lambda = {minima:.6?}, coincide = {coincide}");

    for t in 0..5 {
        let basis = sample_lattice(&SamplerConfig::new(n, 3).trial(t))?;
        let (minima, coincide) = successive_minima(&basis, count)?;
        let lengths: Vec<f64> =
            enumerate_shortest(&basis, count)?.iter().map(|v| v.length(basis.scale())).collect();
        println!("trial {t}: lambda = {minima:.6?}, |v| = {lengths:.6?}, coincide = {coincide}");
    }
    Ok(())
}
