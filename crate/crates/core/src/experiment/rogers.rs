use std::io::Write;

use super::{run_trials, ExperimentConfig};
use crate::enumerate::enumerate_ball;
use crate::error::{LabError, Result};
use crate::lattice::symmetrized_angle;
use crate::limits::rogers_pair_expectation;
use crate::sampler::sample_lattice;
use crate::stats::StatReport;

/// Number of unordered pairs of distinct ±pairs with ball volume at most `V`
/// and symmetrized angle in `[phi1, phi2]`, averaged over lattices and
/// compared with its mean-value main term.
///
/// CSV columns: `trial,points,pairs` where `points` counts ±pairs in the ball.
pub fn run_rogers_expectation(cfg: &ExperimentConfig, sink: &mut dyn Write) -> Result<Vec<StatReport>> {
    let header = ["trial", "points", "pairs"].map(String::from);
    let counts = run_trials(
        cfg,
        &header,
        |t| {
            let basis = sample_lattice(&cfg.sampler(t))?;
            let vs = enumerate_ball(&basis, cfg.v).map_err(|e| match e {
                LabError::RadiusCapExceeded { .. } => LabError::InvalidArgument(format!(
                    "{e}; the ball of volume {} holds too many points, lower --V",
                    cfg.v
                )),
                other => other,
            })?;
            let mut pairs = 0u64;
            for j in 1..vs.len() {
                for i in 0..j {
                    let phi = symmetrized_angle(&vs[i], &vs[j])?;
                    if cfg.phi1 <= phi && phi <= cfg.phi2 {
                        pairs += 1;
                    }
                }
            }
            Ok((vs.len() as u64, pairs))
        },
        |t, &(points, pairs)| vec![t.to_string(), points.to_string(), pairs.to_string()],
        sink,
    )?;
    let analytic = rogers_pair_expectation(cfg.n, cfg.v, cfg.phi1, cfg.phi2)?;
    let pairs: Vec<f64> = counts.iter().map(|&(_, p)| p as f64).collect();
    let points: Vec<f64> = counts.iter().map(|&(p, _)| p as f64).collect();
    Ok(vec![
        StatReport::mean_against(
            format!("mean pairs, V={} angle in [{:.4}, {:.4}]", cfg.v, cfg.phi1, cfg.phi2),
            &pairs,
            analytic,
            3.0,
            0.1,
        )?,
        StatReport::mean_against(format!("mean points, V={}", cfg.v), &points, cfg.v / 2.0, 3.0, 0.1)?,
    ])
}
