//! Volumes and scaled angles of the shortest vectors of many random lattices
//! against the Poisson x half-normal limit. Writes the per-lattice table to
//! joint_law.csv.
//!
//! cargo run --release --example joint_law -- [n] [N] [trials]

use std::fs::File;
use std::io::BufWriter;

use lattice_lab::experiment::{run_with_sink, Experiment, ExperimentConfig};

fn main() -> lattice_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(30, |s| s.parse().expect("n"));
    let count: usize = args.next().map_or(3, |s| s.parse().expect("N"));
    let trials: usize = args.next().map_or(1_000, |s| s.parse().expect("trials"));

    let cfg = ExperimentConfig::new(Experiment::JointLaw, n, count, trials);
    let mut csv = BufWriter::new(File::create("joint_law.csv")?);
    let outcome = run_with_sink(&cfg, &mut csv)?;
    for r in &outcome.reports {
        println!("{:?}  {:<28} stat {:+.5} (threshold {:.4})", r.verdict, r.name, r.statistic, r.threshold);
    }
    println!("{trials} lattices in {:.1}s, table in joint_law.csv", outcome.runtime_seconds);
    Ok(())
}
