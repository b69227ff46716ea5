//! Angles between independent uniform directions in high dimension are
//! nearly orthogonal, with Gaussian fluctuations of order 1/sqrt(n).
//!
//! cargo run --release --example sphere_angles -- [n] [trials]

use std::f64::consts::FRAC_PI_2;

use lattice_lab::experiment::{run_with_sink, Experiment, ExperimentConfig};
use lattice_lab::limits::{concentration_limit, finite_n_angle_mass};

fn main() -> lattice_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(100, |s| s.parse().expect("n"));
    let trials: usize = args.next().map_or(10_000, |s| s.parse().expect("trials"));

    for c in [0.5, 1.0, 2.0] {
        let w = c / (n as f64).sqrt();
        println!(
            "mass of [pi/2 - {c}/sqrt(n), pi/2]: exact {:.6}, limit {:.6}",
            finite_n_angle_mass(n, FRAC_PI_2 - w, FRAC_PI_2)?,
            concentration_limit(c)
        );
    }

    let cfg = ExperimentConfig::new(Experiment::SphereAngles, n, 3, trials);
    let outcome = run_with_sink(&cfg, &mut std::io::sink())?;
    for r in &outcome.reports {
        println!("{:?}  {:<36} stat {:+.5} (threshold {:.4})", r.verdict, r.name, r.statistic, r.threshold);
    }
    Ok(())
}
