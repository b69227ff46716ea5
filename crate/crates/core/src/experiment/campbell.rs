use std::io::Write;

use super::{fmt_f64, run_trials, CampbellSide, ExperimentConfig};
use crate::enumerate::enumerate_ball;
use crate::error::Result;
use crate::lattice::{ball_volume_of, scaled_angle, symmetrized_angle};
use crate::limits::{campbell_box_expectation, half_normal_cdf};
use crate::pairs::PairMatrix;
use crate::sampler::{sample_lattice, sample_limit_law_covering};
use crate::stats::StatReport;

/// Number of ordered tuples of distinct indices `(i_1, ..., i_k)` with
/// `points[i_l]` in `boxes[l]` and, if `angle_box` is given, every pairwise
/// `angles(i_l, i_m)` in it.
pub fn count_tuples(
    points: &[f64],
    angles: &PairMatrix,
    boxes: &[(f64, f64)],
    angle_box: Option<(f64, f64)>,
) -> u64 {
    fn go(
        depth: usize,
        chosen: &mut Vec<usize>,
        points: &[f64],
        angles: &PairMatrix,
        boxes: &[(f64, f64)],
        angle_box: Option<(f64, f64)>,
    ) -> u64 {
        if depth == boxes.len() {
            return 1;
        }
        let (a, b) = boxes[depth];
        let mut total = 0;
        for (idx, &x) in points.iter().enumerate() {
            if x < a || x > b || chosen.contains(&idx) {
                continue;
            }
            if let Some((lo, hi)) = angle_box {
                if chosen.iter().any(|&c| !(lo..=hi).contains(&angles.get(c, idx))) {
                    continue;
                }
            }
            chosen.push(idx);
            total += go(depth + 1, chosen, points, angles, boxes, angle_box);
            chosen.pop();
        }
        total
    }
    go(0, &mut Vec::new(), points, angles, boxes, angle_box)
}

/// Sum of a box indicator over ordered k-tuples of distinct points, from the
/// limiting process or from lattice volumes and scaled angles, against the
/// closed form `2^{-k} prod |box_l| * P(|Z| in angle box)^{k(k-1)/2}`.
///
/// CSV columns: `trial,points,tuples`.
pub fn run_campbell(cfg: &ExperimentConfig, sink: &mut dyn Write) -> Result<Vec<StatReport>> {
    let k = cfg.boxes.len();
    let reach = cfg.boxes.iter().map(|&(_, b)| b).fold(0.0, f64::max);
    let header = ["trial", "points", "tuples"].map(String::from);
    let counts = run_trials(
        cfg,
        &header,
        |t| {
            let (points, angles) = match cfg.side {
                CampbellSide::Limit => {
                    let s = sample_limit_law_covering(reach, &cfg.sampler(t));
                    (s.points, s.angles)
                }
                CampbellSide::Lattice => {
                    let basis = sample_lattice(&cfg.sampler(t))?;
                    let vs = enumerate_ball(&basis, reach)?;
                    let vols: Vec<f64> =
                        vs.iter().map(|v| ball_volume_of(cfg.n, basis.scale(), v.norm_sq())).collect();
                    let mut angles = PairMatrix::zeros(vs.len());
                    for j in 1..vs.len() {
                        for i in 0..j {
                            angles.set(i, j, scaled_angle(cfg.n, symmetrized_angle(&vs[i], &vs[j])?));
                        }
                    }
                    (vols, angles)
                }
            };
            let tuples = count_tuples(&points, &angles, &cfg.boxes, cfg.angle_box);
            Ok((points.iter().filter(|&&x| x <= reach).count(), tuples))
        },
        |t, &(points, tuples)| vec![t.to_string(), points.to_string(), tuples.to_string()],
        sink,
    )?;
    let mut expected = campbell_box_expectation(&cfg.boxes)?;
    if let Some((lo, hi)) = cfg.angle_box {
        let mass = half_normal_cdf(hi) - half_normal_cdf(lo);
        expected *= mass.powi((k * (k - 1) / 2) as i32);
    }
    let sample: Vec<f64> = counts.iter().map(|&(_, c)| c as f64).collect();
    let rel = match cfg.side {
        CampbellSide::Limit => 0.0,
        CampbellSide::Lattice => 0.1,
    };
    let side = match cfg.side {
        CampbellSide::Limit => "limit",
        CampbellSide::Lattice => "lattice",
    };
    let report = StatReport::mean_against(format!("{side}-side tuple sum, k={k}"), &sample, expected, 3.0, rel)?;
    Ok(vec![report.with_notes(format!("closed form {}", fmt_f64(expected)))])
}
