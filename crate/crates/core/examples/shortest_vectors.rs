//! LLL-reduce a sampled lattice and list its shortest vectors exactly.
//!
//! cargo run --release --example shortest_vectors -- [n] [N]

use lattice_lab::enumerate::enumerate_shortest;
use lattice_lab::lattice::ball_volume_of;
use lattice_lab::reduce::{lll_reduce, DEFAULT_DELTA};
use lattice_lab::sampler::{sample_lattice, SamplerConfig};

fn main() -> lattice_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(20, |s| s.parse().expect("n"));
    let count: usize = args.next().map_or(5, |s| s.parse().expect("N"));

    let basis = sample_lattice(&SamplerConfig::new(n, 7))?;
    let reduced = lll_reduce(&basis, DEFAULT_DELTA)?;
    let first = &reduced.rows()[0];
    println!("first reduced row: {:?}", first.iter().map(|x| x.to_string()).collect::<Vec<_>>());

    for (j, v) in enumerate_shortest(&basis, count)?.iter().enumerate() {
        println!(
            "v{:<2} |v|^2 = {:>14}  length {:.6}  volume {:.6}",
            j + 1,
            v.norm_sq(),
            v.length(basis.scale()),
            ball_volume_of(n, basis.scale(), v.norm_sq())
        );
    }
    Ok(())
}
