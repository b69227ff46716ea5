use std::io::Write;

use super::{fmt_f64, run_trials, ExperimentConfig};
use crate::enumerate::spectrum;
use crate::error::Result;
use crate::limits::half_normal_cdf;
use crate::sampler::sample_lattice;
use crate::stats::{mean_ci, StatReport, Verdict};

/// Fraction of lattices in which some pair among the `N` shortest vectors
/// deviates from orthogonality by more than `C / sqrt(n)`, i.e. whose largest
/// scaled angle exceeds `C`.
///
/// CSV columns: `trial,max_phi,exceeds`.
pub fn run_concentration(cfg: &ExperimentConfig, sink: &mut dyn Write) -> Result<Vec<StatReport>> {
    let header = ["trial", "max_phi", "exceeds"].map(String::from);
    let c = cfg.c;
    let maxima = run_trials(
        cfg,
        &header,
        |t| {
            let s = spectrum(&sample_lattice(&cfg.sampler(t))?, cfg.count)?;
            Ok(s.scaled_angles.values().iter().copied().fold(0.0, f64::max))
        },
        |t, &mx| vec![t.to_string(), fmt_f64(mx), ((mx > c) as u8).to_string()],
        sink,
    )?;
    let hits: Vec<f64> = maxima.iter().map(|&mx| (mx > c) as u8 as f64).collect();
    let (estimate, se) = mean_ci(&hits)?;
    let pairs = (cfg.count * (cfg.count - 1) / 2) as i32;
    // the limiting scaled angles are independent half-normals
    let limit = 1.0 - half_normal_cdf(c).powi(pairs);
    let threshold = (3.0 * se).max(cfg.tolerances.allowance);
    let diff = (estimate - limit).abs();
    Ok(vec![StatReport {
        name: format!("P(max phi~ > {c})"),
        sample_size: hits.len(),
        statistic: estimate,
        p_value: None,
        mean: Some(estimate),
        std_err: Some(se),
        threshold,
        verdict: Verdict::from_bool(diff <= threshold),
        notes: format!(
            "estimate {estimate:.5} +- {:.5} (3 SE); limit 1 - erf(C/sqrt2)^{pairs} = {limit:.3e}; \
             expected pairs with volumes <= V and scaled angle <= C tends to (V^2/8) erf(C/sqrt2) = {:.5} V^2",
            3.0 * se,
            half_normal_cdf(c) / 8.0
        ),
    }])
}
