//! Monte Carlo experiments over many sampled lattices (or draws from the
//! limiting process), aggregated into [`StatReport`]s.
//!
//! Trials run in parallel but each draws from its own random substream and
//! results are consumed in trial order, so output is identical for any
//! worker count.

mod campbell;
mod concentration;
mod joint;
mod minima;
mod rogers;
mod sphere;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::sampler::{next_prime, SamplerConfig, DEFAULT_PRIME};
use crate::stats::{StatReport, Tolerances, Verdict};

pub use campbell::{count_tuples, run_campbell};
pub use concentration::run_concentration;
pub use joint::run_joint_law;
pub use minima::run_successive_minima;
pub use rogers::run_rogers_expectation;
pub use sphere::run_sphere_angles;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    JointLaw,
    SphereAngles,
    Concentration,
    RogersExpectation,
    Campbell,
    SuccessiveMinima,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::JointLaw,
        Experiment::SphereAngles,
        Experiment::Concentration,
        Experiment::RogersExpectation,
        Experiment::Campbell,
        Experiment::SuccessiveMinima,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::JointLaw => "joint-law",
            Experiment::SphereAngles => "sphere-angles",
            Experiment::Concentration => "concentration",
            Experiment::RogersExpectation => "rogers-expectation",
            Experiment::Campbell => "campbell",
            Experiment::SuccessiveMinima => "successive-minima",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| LabError::InvalidArgument(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(LabError::InvalidArgument(format!("unknown format {s:?}"))),
        }
    }
}

/// Where the Campbell experiment draws its point configurations from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CampbellSide {
    /// Poisson points of intensity 1/2 with independent half-normal angles.
    #[default]
    Limit,
    /// Volumes and scaled angles of sampled lattices.
    Lattice,
}

impl FromStr for CampbellSide {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "limit" => Ok(CampbellSide::Limit),
            "lattice" => Ok(CampbellSide::Lattice),
            _ => Err(LabError::InvalidArgument(format!("unknown side {s:?}"))),
        }
    }
}

/// Parses `a:b` into an interval.
pub fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let bad = || LabError::InvalidArgument(format!("interval {s:?} is not of the form a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}

/// Parses `a:b,c:d,...` into a box.
pub fn parse_box(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',').map(parse_interval).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: usize,
    #[serde(rename = "N")]
    pub count: usize,
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub phi1: f64,
    pub phi2: f64,
    #[serde(rename = "box")]
    pub boxes: Vec<(f64, f64)>,
    pub angle_box: Option<(f64, f64)>,
    pub side: CampbellSide,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Worker threads; 0 picks the number of available cores.
    pub parallelism: usize,
    pub tolerances: Tolerances,
    /// Required fraction of trials whose shortest vectors realize the
    /// successive minima.
    pub min_coincidence: f64,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, n: usize, count: usize, trials: usize) -> Self {
        Self {
            experiment,
            n,
            count,
            trials,
            prime: DEFAULT_PRIME,
            seed: 1,
            c: 2.0,
            v: 2.0,
            phi1: 0.0,
            phi2: std::f64::consts::FRAC_PI_2,
            boxes: vec![(0.0, 1.0), (0.0, 1.0)],
            angle_box: None,
            side: CampbellSide::Limit,
            out: None,
            format: OutputFormat::Csv,
            parallelism: 0,
            tolerances: Tolerances::default(),
            min_coincidence: 0.95,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(LabError::InvalidArgument(msg));
        if self.trials < 2 {
            return bad(format!("trials must be at least 2, got {}", self.trials));
        }
        if self.count == 0 {
            return bad("N must be positive".into());
        }
        if !(self.tolerances.allowance >= 0.0 && self.tolerances.corr_allowance >= 0.0) {
            return bad("allowances must be nonnegative".into());
        }
        let needs_lattice = !(matches!(self.experiment, Experiment::SphereAngles)
            || matches!(self.experiment, Experiment::Campbell) && self.side == CampbellSide::Limit);
        if needs_lattice {
            SamplerConfig::new(self.n, self.seed).with_prime(self.prime).validate()?;
        }
        match self.experiment {
            Experiment::JointLaw => {
                let min = 8.max(self.count + 2);
                if self.n < min {
                    return bad(format!("joint-law needs n >= {min}, got {}", self.n));
                }
            }
            Experiment::SphereAngles => {
                if self.n < 2 || self.count < 2 {
                    return bad("sphere-angles needs n >= 2 and N >= 2".into());
                }
            }
            Experiment::Concentration => {
                if self.count < 2 || !(self.c >= 0.0) {
                    return bad("concentration needs N >= 2 and C >= 0".into());
                }
                if self.count > 2 * self.n * self.n {
                    return bad(format!("N must be at most 2n^2 = {}", 2 * self.n * self.n));
                }
            }
            Experiment::RogersExpectation => {
                if self.n < 3 {
                    return bad("rogers-expectation needs n >= 3".into());
                }
                if !(self.v > 0.0) {
                    return bad("V must be positive".into());
                }
                if !(0.0 <= self.phi1 && self.phi1 < self.phi2 && self.phi2 <= std::f64::consts::FRAC_PI_2) {
                    return bad(format!("need 0 <= phi1 < phi2 <= pi/2, got [{}, {}]", self.phi1, self.phi2));
                }
            }
            Experiment::Campbell => {
                let k = self.boxes.len();
                if !(2..=4).contains(&k) {
                    return bad(format!("campbell needs 2 to 4 intervals, got {k}"));
                }
                if self.boxes.iter().any(|&(a, b)| !(0.0 <= a && a <= b && b.is_finite())) {
                    return bad("box intervals must satisfy 0 <= a <= b < inf".into());
                }
                if let Some((a, b)) = self.angle_box {
                    if !(0.0 <= a && a <= b) {
                        return bad(format!("bad angle box [{a}, {b}]"));
                    }
                }
            }
            Experiment::SuccessiveMinima => {
                if self.count > self.n {
                    return bad(format!("successive-minima needs N <= n, got N={} n={}", self.count, self.n));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn sampler(&self, trial: u64) -> SamplerConfig {
        SamplerConfig::new(self.n, self.seed).with_prime(self.prime).trial(trial)
    }
}

/// Reports of one experiment run plus the configuration that produced them.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Outcome {
    pub config: ExperimentConfig,
    pub reports: Vec<StatReport>,
    pub runtime_seconds: f64,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(StatReport::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }
}

/// Formats a float with 17 significant digits.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pair labels `12, 13, 23, 14, ...` in [`crate::pairs::PairMatrix`] order.
pub(crate) fn pair_labels(prefix: &str, size: usize) -> Vec<String> {
    (1..size).flat_map(|j| (0..j).map(move |i| format!("{prefix}{}{}", i + 1, j + 1))).collect()
}

const CHUNK: usize = 256;

/// Runs `trial` for every index in parallel, streaming one CSV row per trial
/// to `sink` in index order. On failure the rows of all trials before the
/// failing one are written and flushed before the error is returned.
pub(crate) fn run_trials<T, F, R>(
    cfg: &ExperimentConfig,
    header: &[String],
    trial: F,
    row: R,
    sink: &mut dyn Write,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
    R: Fn(u64, &T) -> Vec<String>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| LabError::InvalidArgument(format!("thread pool: {e}")))?;
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    let csv_err = |e: csv::Error| LabError::Io(e.to_string());
    writer.write_record(header).map_err(csv_err)?;
    let mut results = Vec::with_capacity(cfg.trials);
    for start in (0..cfg.trials).step_by(CHUNK) {
        let end = (start + CHUNK).min(cfg.trials);
        let chunk: Vec<Result<T>> =
            pool.install(|| (start..end).into_par_iter().map(|t| trial(t as u64)).collect());
        for (offset, r) in chunk.into_iter().enumerate() {
            let t = (start + offset) as u64;
            match r {
                Ok(value) => {
                    writer.write_record(row(t, &value)).map_err(csv_err)?;
                    results.push(value);
                }
                Err(e) => {
                    writer.flush()?;
                    return Err(e);
                }
            }
        }
        writer.flush()?;
    }
    Ok(results)
}

/// Runs the configured experiment, writing per-trial rows to `sink`.
pub fn run_with_sink(cfg: &ExperimentConfig, sink: &mut dyn Write) -> Result<Outcome> {
    cfg.validate()?;
    let start = Instant::now();
    let reports = match cfg.experiment {
        Experiment::JointLaw => run_joint_law(cfg, sink)?,
        Experiment::SphereAngles => run_sphere_angles(cfg, sink)?,
        Experiment::Concentration => run_concentration(cfg, sink)?,
        Experiment::RogersExpectation => run_rogers_expectation(cfg, sink)?,
        Experiment::Campbell => run_campbell(cfg, sink)?,
        Experiment::SuccessiveMinima => run_successive_minima(cfg, sink)?,
    };
    Ok(Outcome { config: cfg.clone(), reports, runtime_seconds: start.elapsed().as_secs_f64() })
}

/// Runs the experiment and writes `cfg.out` if set: the per-trial CSV for
/// `csv`, the report document for `json`.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    match (&cfg.out, cfg.format) {
        (Some(path), OutputFormat::Csv) => {
            let mut file = BufWriter::new(File::create(path)?);
            let outcome = run_with_sink(cfg, &mut file);
            file.flush()?;
            outcome
        }
        (Some(path), OutputFormat::Json) => {
            let outcome = run_with_sink(cfg, &mut io::sink())?;
            std::fs::write(path, outcome.to_json() + "\n")?;
            Ok(outcome)
        }
        (None, _) => run_with_sink(cfg, &mut io::sink()),
    }
}

/// Runs the experiment at `p` and at the next prime above `2p` with the same
/// seed, and reports whether every statistic moved by at most its own
/// threshold. Large moves mean the sampler has not yet equidistributed well
/// enough at `p` for the quantity in question.
pub fn doubling_test(cfg: &ExperimentConfig) -> Result<(Outcome, Outcome, Vec<StatReport>)> {
    let base = run_with_sink(cfg, &mut io::sink())?;
    let doubled_cfg = ExperimentConfig { prime: next_prime(2 * cfg.prime + 1), ..cfg.clone() };
    let doubled = run_with_sink(&doubled_cfg, &mut io::sink())?;
    let reports = base
        .reports
        .iter()
        .zip(&doubled.reports)
        .map(|(a, b)| {
            let diff = (a.statistic - b.statistic).abs();
            StatReport {
                name: format!("doubling {}", a.name),
                sample_size: a.sample_size.min(b.sample_size),
                statistic: diff,
                p_value: None,
                mean: None,
                std_err: None,
                threshold: a.threshold.max(b.threshold),
                verdict: Verdict::from_bool(diff <= a.threshold.max(b.threshold)),
                notes: format!("p={} gives {:.6}, p={} gives {:.6}", cfg.prime, a.statistic, doubled_cfg.prime, b.statistic),
            }
        })
        .collect();
    Ok((base, doubled, reports))
}
