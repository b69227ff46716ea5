use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::io::Write;

use super::{fmt_f64, pair_labels, run_trials, ExperimentConfig};
use crate::error::Result;
use crate::limits::{finite_n_angle_mass, half_normal_cdf};
use crate::pairs::PairMatrix;
use crate::sampler::sample_sphere_directions;
use crate::special::erfc;
use crate::stats::{ks_sorted, StatReport};

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Exact CDF of the angle between two uniform directions evaluated at every
/// point of `sorted`, by summing the masses of consecutive gaps.
fn exact_angle_cdf(n: usize, sorted: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(sorted.len());
    let (mut prev, mut acc) = (0.0, 0.0);
    for &x in sorted {
        if x > prev {
            acc += finite_n_angle_mass(n, prev, x)?;
            prev = x;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Pairwise angles of `N` independent uniform directions in `R^n`.
///
/// CSV columns: `trial,alpha12,...` holding `sqrt(n) (alpha_ij - pi/2)`.
pub fn run_sphere_angles(cfg: &ExperimentConfig, sink: &mut dyn Write) -> Result<Vec<StatReport>> {
    let (n, k) = (cfg.n, cfg.count);
    let sqrt_n = (n as f64).sqrt();
    let mut header = vec!["trial".to_string()];
    header.extend(pair_labels("alpha", k));
    let results = run_trials(
        cfg,
        &header,
        |t| {
            let u = sample_sphere_directions(n, k, &cfg.sampler(t));
            Ok(PairMatrix::from_fn(k, |i, j| {
                let d: f64 = u[i].iter().zip(&u[j]).map(|(a, b)| a * b).sum();
                d.clamp(-1.0, 1.0).acos()
            }))
        },
        |t, a| {
            let mut row = vec![t.to_string()];
            row.extend(a.values().iter().map(|&x| fmt_f64(sqrt_n * (x - FRAC_PI_2))));
            row
        },
        sink,
    )?;
    let tol = &cfg.tolerances;
    let labels = pair_labels("alpha~", k);
    let scaled = |p: usize| -> Vec<f64> { results.iter().map(|a| sqrt_n * (a.values()[p] - FRAC_PI_2)).collect() };
    let mut reports = Vec::new();
    for (p, label) in labels.iter().enumerate() {
        reports.push(StatReport::ks(format!("{label} vs N(0,1)"), &scaled(p), normal_cdf, tol)?);
    }
    for q in 1..labels.len() {
        for p in 0..q {
            reports.push(StatReport::correlation(format!("corr({}, {})", labels[p], labels[q]), &scaled(p), &scaled(q), tol)?);
        }
    }
    let folded: Vec<f64> = scaled(0).iter().map(|x| x.abs()).collect();
    reports.push(StatReport::ks("|alpha~12| vs half-normal", &folded, half_normal_cdf, tol)?);

    let mut raw: Vec<f64> = results.iter().map(|a| a.values()[0]).collect();
    raw.sort_by(f64::total_cmp);
    let (d, p) = ks_sorted(&exact_angle_cdf(n, &raw)?)?;
    reports.push(StatReport::ks_from("alpha12 vs exact finite-n law", &raw, d, p, tol));
    Ok(reports)
}
