use std::io::Write;

use super::{fmt_f64, pair_labels, run_trials, ExperimentConfig};
use crate::enumerate::{spectrum, SpectrumResult};
use crate::error::Result;
use crate::limits::{half_normal_cdf, poisson_gap_cdf};
use crate::sampler::sample_lattice;
use crate::stats::StatReport;

pub(crate) fn spectra(
    cfg: &ExperimentConfig,
    count: usize,
    sink: &mut dyn Write,
) -> Result<Vec<SpectrumResult>> {
    let mut header = vec!["trial".to_string()];
    header.extend((1..=count).map(|j| format!("V{j}")));
    header.extend(pair_labels("phi", count));
    header.push("ties".into());
    run_trials(
        cfg,
        &header,
        |t| spectrum(&sample_lattice(&cfg.sampler(t))?, count),
        |t, s| {
            let mut row = vec![t.to_string()];
            row.extend(s.volumes.iter().map(|&v| fmt_f64(v)));
            row.extend(s.scaled_angles.values().iter().map(|&a| fmt_f64(a)));
            row.push((s.has_ties as u8).to_string());
            row
        },
        sink,
    )
}

/// Volumes and scaled angles of the `N` shortest vectors against the
/// Poisson(1/2) x half-normal limit.
///
/// CSV columns: `trial,V1,...,VN,phi12,phi13,phi23,...,ties`, the `phi`
/// columns holding the scaled angles `sqrt(n) (pi/2 - phi_ij)`.
pub fn run_joint_law(cfg: &ExperimentConfig, sink: &mut dyn Write) -> Result<Vec<StatReport>> {
    let n_vec = cfg.count;
    let results = spectra(cfg, n_vec, sink)?;
    let tol = &cfg.tolerances;
    let m = results.len();
    let mut reports = Vec::new();

    let volume = |j: usize| -> Vec<f64> { results.iter().map(|s| s.volumes[j]).collect() };
    for j in 0..n_vec {
        reports.push(StatReport::ks(format!("V{} vs Poisson gap law", j + 1), &volume(j), |v| poisson_gap_cdf(j + 1, v), tol)?);
    }
    let exp2 = |x: f64| if x <= 0.0 { 0.0 } else { 1.0 - (-x / 2.0).exp() };
    for j in 1..n_vec {
        let gaps: Vec<f64> = results.iter().map(|s| s.volumes[j] - s.volumes[j - 1]).collect();
        reports.push(StatReport::ks(format!("V{}-V{} vs Exp(mean 2)", j + 1, j), &gaps, exp2, tol)?);
    }
    reports.push(StatReport::mean_against("mean V1", &volume(0), 2.0, 3.0, 0.0)?);

    // Angle statistics use only trials whose vector ordering is unambiguous.
    let clean: Vec<&SpectrumResult> = results.iter().filter(|s| !s.has_ties).collect();
    let ties = m - clean.len();
    let tie_note = format!("{ties} of {m} trials with tied lengths excluded");
    let labels = pair_labels("phi~", n_vec);
    let angle = |p: usize| -> Vec<f64> { clean.iter().map(|s| s.scaled_angles.values()[p]).collect() };
    let clean_volume = |j: usize| -> Vec<f64> { clean.iter().map(|s| s.volumes[j]).collect() };
    for (p, label) in labels.iter().enumerate() {
        reports.push(StatReport::ks(format!("{label} vs half-normal"), &angle(p), half_normal_cdf, tol)?.with_notes(&tie_note));
    }
    for (p, label) in labels.iter().enumerate() {
        for j in 0..n_vec {
            let r = StatReport::correlation(format!("corr(V{}, {label})", j + 1), &clean_volume(j), &angle(p), tol)?;
            reports.push(r.with_notes(&tie_note));
        }
    }
    for q in 1..labels.len() {
        for p in 0..q {
            let r = StatReport::correlation(format!("corr({}, {})", labels[p], labels[q]), &angle(p), &angle(q), tol)?;
            reports.push(r.with_notes(&tie_note));
        }
    }
    Ok(reports)
}
