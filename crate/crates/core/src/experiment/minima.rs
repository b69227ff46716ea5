use std::io::Write;

use super::{fmt_f64, run_trials, ExperimentConfig};
use crate::enumerate::successive_minima;
use crate::error::Result;
use crate::lattice::ball_volume;
use crate::limits::poisson_gap_cdf;
use crate::sampler::sample_lattice;
use crate::stats::StatReport;

/// How often the `N` shortest vectors realize the successive minima, and the
/// law of `V_n lambda_i^n`.
///
/// CSV columns: `trial,Vlambda1,...,VlambdaN,coincide`.
pub fn run_successive_minima(cfg: &ExperimentConfig, sink: &mut dyn Write) -> Result<Vec<StatReport>> {
    let (n, k) = (cfg.n, cfg.count);
    let mut header = vec!["trial".to_string()];
    header.extend((1..=k).map(|i| format!("Vlambda{i}")));
    header.push("coincide".into());
    let results = run_trials(
        cfg,
        &header,
        |t| {
            let (lambdas, coincide) = successive_minima(&sample_lattice(&cfg.sampler(t))?, k)?;
            Ok((lambdas.iter().map(|&l| ball_volume(n, l)).collect::<Vec<f64>>(), coincide))
        },
        |t, (vols, coincide)| {
            let mut row = vec![t.to_string()];
            row.extend(vols.iter().map(|&v| fmt_f64(v)));
            row.push((*coincide as u8).to_string());
            row
        },
        sink,
    )?;
    let m = results.len();
    let fraction = results.iter().filter(|(_, c)| *c).count() as f64 / m as f64;
    let mut reports = vec![StatReport::bound("coincidence fraction", m, fraction, cfg.min_coincidence, true)];
    for i in 0..k {
        let sample: Vec<f64> = results.iter().map(|(v, _)| v[i]).collect();
        reports.push(StatReport::ks(
            format!("V_n lambda{}^n vs Poisson gap law", i + 1),
            &sample,
            |v| poisson_gap_cdf(i + 1, v),
            &cfg.tolerances,
        )?);
    }
    Ok(reports)
}
