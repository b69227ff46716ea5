//! Average number of pairs of short vectors in a ball with angle in a given
//! range, against the mean-value main term.
//!
//! cargo run --release --example rogers_expectation -- [n] [V] [trials]

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use lattice_lab::experiment::{run_with_sink, Experiment, ExperimentConfig};
use lattice_lab::limits::rogers_pair_expectation;

fn main() -> lattice_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(12, |s| s.parse().expect("n"));
    let v: f64 = args.next().map_or(2.0, |s| s.parse().expect("V"));
    let trials: usize = args.next().map_or(5_000, |s| s.parse().expect("trials"));

    for (phi1, phi2) in [(0.0, FRAC_PI_2), (0.0, FRAC_PI_4), (1.3, FRAC_PI_2)] {
        let mut cfg = ExperimentConfig::new(Experiment::RogersExpectation, n, 1, trials);
        cfg.v = v;
        cfg.phi1 = phi1;
        cfg.phi2 = phi2;
        let outcome = run_with_sink(&cfg, &mut std::io::sink())?;
        let r = &outcome.reports[0];
        println!(
            "angle in [{phi1:.3}, {phi2:.3}]: mean {:.4} +- {:.4}, main term {:.4}  {:?}",
            r.mean.unwrap(),
            r.std_err.unwrap(),
            rogers_pair_expectation(n, v, phi1, phi2)?,
            r.verdict
        );
    }
    Ok(())
}
