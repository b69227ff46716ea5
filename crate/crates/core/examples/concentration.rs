//! How often some pair among the shortest vectors is far from orthogonal.
//!
//! cargo run --release --example concentration -- [n] [N] [trials]

use lattice_lab::experiment::{run_with_sink, Experiment, ExperimentConfig};

fn main() -> lattice_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(30, |s| s.parse().expect("n"));
    let count: usize = args.next().map_or(3, |s| s.parse().expect("N"));
    let trials: usize = args.next().map_or(1_000, |s| s.parse().expect("trials"));

    for c in [1.0, 2.0, 4.0, 6.0] {
        let mut cfg = ExperimentConfig::new(Experiment::Concentration, n, count, trials);
        cfg.c = c;
        let r = run_with_sink(&cfg, &mut std::io::sink())?.reports.remove(0);
        println!("C = {c}: estimate {:.4} +- {:.4}  {:?}", r.statistic, r.std_err.unwrap(), r.verdict);
    }
    Ok(())
}
