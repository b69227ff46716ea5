//! Sensitivity of the statistics to the sampler prime: rerun with p replaced
//! by the next prime above 2p and compare.
//!
//! cargo run --release --example doubling_test -- [n] [trials]

use lattice_lab::experiment::{doubling_test, Experiment, ExperimentConfig};

fn main() -> lattice_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(16, |s| s.parse().expect("n"));
    let trials: usize = args.next().map_or(1_000, |s| s.parse().expect("trials"));

    let mut cfg = ExperimentConfig::new(Experiment::SuccessiveMinima, n, 2, trials);
    cfg.prime = 10_007;
    let (_, _, reports) = doubling_test(&cfg)?;
    for r in reports {
        println!("{:?}  {:<48} |diff| {:.5} (threshold {:.4})  {}", r.verdict, r.name, r.statistic, r.threshold, r.notes);
    }
    Ok(())
}
