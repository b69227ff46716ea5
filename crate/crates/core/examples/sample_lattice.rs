//! Draw a random unit-covolume lattice and check it is what it claims to be.
//!
//! cargo run --release --example sample_lattice -- [n] [seed]

use lattice_lab::lattice::covolume;
use lattice_lab::sampler::{sample_lattice, sample_point, SamplerConfig};

fn main() -> lattice_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(6, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let cfg = SamplerConfig::new(n, seed);
    let basis = sample_lattice(&cfg)?;
    println!("a = {:?} mod {}", sample_point(&cfg), cfg.prime);
    println!("Hermite normal form of Za + pZ^n:");
    for row in basis.rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>8}")).collect();
        println!("  {}", cells.join(""));
    }
    println!("det = {}", basis.determinant().expect("square"));
    println!("scale = {:.6e}, covolume = {:.15}", basis.scale(), covolume(&basis)?);
    Ok(())
}
