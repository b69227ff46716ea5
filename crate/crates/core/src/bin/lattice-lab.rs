use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::json;

use lattice_lab::experiment::{
    self, parse_box, parse_interval, CampbellSide, Experiment, ExperimentConfig, OutputFormat,
};
use lattice_lab::limits::{concentration_limit, finite_n_angle_mass, half_normal_cdf, poisson_gap_cdf};
use lattice_lab::sampler::{sample_lattice, sample_point, SamplerConfig, DEFAULT_PRIME};
use lattice_lab::stats::Tolerances;
use lattice_lab::LabError;

#[derive(Parser)]
#[command(name = "lattice-lab", version, about = "Shortest vectors of random lattices against their limit laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volumes and scaled angles of the N shortest vectors
    JointLaw(Common),
    /// Pairwise angles of N uniform directions
    SphereAngles(Common),
    /// Probability that some pair is far from orthogonal
    Concentration(Common),
    /// Mean number of vector pairs in a ball with angle in a range
    RogersExpectation(Common),
    /// Tuple sums of a box indicator over points and angles
    Campbell(Common),
    /// Coincidence of successive minima with shortest vectors
    SuccessiveMinima(Common),
    /// Tabulate a closed-form law to CSV
    LimitCdf(LimitCdf),
    /// Print one sampled basis
    SampleLattice(SampleLattice),
}

#[derive(Args)]
struct Common {
    #[arg(long = "n", default_value_t = 30)]
    n: usize,
    #[arg(long = "N", default_value_t = 3)]
    count: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "C", default_value_t = 2.0)]
    c: f64,
    #[arg(long = "V", default_value_t = 2.0)]
    v: f64,
    #[arg(long, default_value_t = 0.0)]
    phi1: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    phi2: f64,
    /// Volume box as a:b,a:b,... (2 to 4 intervals)
    #[arg(long = "box", default_value = "0:1,0:1")]
    boxes: String,
    /// Scaled-angle interval a:b applied to every pair of a tuple
    #[arg(long)]
    angle_box: Option<String>,
    #[arg(long, value_enum, default_value_t = Side::Limit)]
    side: Side,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    parallelism: usize,
    /// Floor on KS thresholds
    #[arg(long, default_value_t = 0.05)]
    allowance: f64,
    /// Floor on correlation thresholds
    #[arg(long, default_value_t = 0.05)]
    corr_allowance: f64,
    /// Also rerun at the next prime above 2p and compare
    #[arg(long)]
    doubling: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Limit,
    Lattice,
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    /// P(V_N <= x)
    PoissonGap,
    /// P(|Z| <= x)
    HalfNormal,
    /// erf(x / sqrt 2) / 2
    Concentration,
    /// P(angle between uniform directions in R^n <= x)
    AngleMass,
}

#[derive(Args)]
struct LimitCdf {
    #[arg(long, value_enum)]
    law: Law,
    #[arg(long = "N", default_value_t = 1)]
    count: usize,
    #[arg(long = "n", default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 10.0)]
    to: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleLattice {
    #[arg(long = "n", default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(LabError),
    Runtime(LabError),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        Failure::Runtime(e)
    }
}

fn config(experiment: Experiment, a: Common) -> Result<(ExperimentConfig, bool), LabError> {
    let mut cfg = ExperimentConfig::new(experiment, a.n, a.count, a.trials);
    cfg.prime = a.prime;
    cfg.seed = a.seed;
    cfg.c = a.c;
    cfg.v = a.v;
    cfg.phi1 = a.phi1;
    cfg.phi2 = a.phi2;
    cfg.boxes = parse_box(&a.boxes)?;
    cfg.angle_box = a.angle_box.as_deref().map(parse_interval).transpose()?;
    cfg.side = match a.side {
        Side::Limit => CampbellSide::Limit,
        Side::Lattice => CampbellSide::Lattice,
    };
    cfg.out = a.out;
    cfg.format = match a.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    cfg.parallelism = a.parallelism;
    cfg.tolerances = Tolerances { allowance: a.allowance, corr_allowance: a.corr_allowance };
    cfg.validate()?;
    Ok((cfg, a.doubling))
}

fn print_reports(reports: &[lattice_lab::stats::StatReport]) {
    for r in reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{verdict}  {:<44} m={:<6} stat={:.5} threshold={:.5}",
            r.name, r.sample_size, r.statistic, r.threshold
        );
        if let (Some(mean), Some(se)) = (r.mean, r.std_err) {
            line += &format!(" mean={mean:.5} se={se:.5}");
        }
        if !r.notes.is_empty() {
            line += &format!("  [{}]", r.notes);
        }
        println!("{line}");
    }
}

fn run_experiment(experiment: Experiment, args: Common) -> Result<bool, Failure> {
    let (cfg, doubling) = config(experiment, args).map_err(Failure::Usage)?;
    let outcome = experiment::run(&cfg)?;
    if cfg.format == OutputFormat::Json && cfg.out.is_none() {
        println!("{}", outcome.to_json());
    } else {
        print_reports(&outcome.reports);
    }
    let mut passed = outcome.passed();
    if doubling {
        let (_, _, reports) = experiment::doubling_test(&cfg)?;
        print_reports(&reports);
        passed &= reports.iter().all(|r| r.passed());
    }
    eprintln!("{} trials in {:.1}s", cfg.trials, outcome.runtime_seconds);
    Ok(passed)
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), LabError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn limit_cdf(a: LimitCdf) -> Result<bool, Failure> {
    let usage = |m: String| Failure::Usage(LabError::InvalidArgument(m));
    if a.points < 2 || !(a.from < a.to) {
        return Err(usage("need --points >= 2 and --from < --to".into()));
    }
    if a.count == 0 {
        return Err(usage("--N must be positive".into()));
    }
    if matches!(a.law, Law::AngleMass) && (a.n < 2 || a.from < 0.0 || a.to > std::f64::consts::PI) {
        return Err(usage("angle-mass needs n >= 2 and 0 <= from < to <= pi".into()));
    }
    let mut text = String::from("x,cdf\n");
    for i in 0..a.points {
        let x = a.from + (a.to - a.from) * i as f64 / (a.points - 1) as f64;
        let y = match a.law {
            Law::PoissonGap => poisson_gap_cdf(a.count, x),
            Law::HalfNormal => half_normal_cdf(x),
            Law::Concentration => concentration_limit(x.max(0.0)),
            Law::AngleMass if x > 0.0 => finite_n_angle_mass(a.n, 0.0, x)?,
            Law::AngleMass => 0.0,
        };
        text += &format!("{x:.16e},{y:.16e}\n");
    }
    write_out(&a.out, &text)?;
    Ok(true)
}

fn sample(a: SampleLattice) -> Result<bool, Failure> {
    let cfg = SamplerConfig::new(a.n, a.seed).with_prime(a.prime).trial(a.trial);
    cfg.validate().map_err(Failure::Usage)?;
    let basis = sample_lattice(&cfg)?;
    let rows: Vec<Vec<i64>> =
        basis.rows().iter().map(|r| r.iter().map(|x| x.to_i64().expect("entries are below p")).collect()).collect();
    let text = match a.format {
        Format::Json => {
            let doc = json!({
                "n": a.n,
                "prime": a.prime,
                "seed": a.seed,
                "trial": a.trial,
                "point": sample_point(&cfg),
                "scale": basis.scale(),
                "rows": rows,
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Format::Csv => {
            let mut text = (1..=a.n).map(|k| format!("c{k}")).collect::<Vec<_>>().join(",") + "\n";
            for r in &rows {
                text += &(r.iter().map(i64::to_string).collect::<Vec<_>>().join(",") + "\n");
            }
            text
        }
    };
    write_out(&a.out, &text)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::JointLaw(a) => run_experiment(Experiment::JointLaw, a),
        Command::SphereAngles(a) => run_experiment(Experiment::SphereAngles, a),
        Command::Concentration(a) => run_experiment(Experiment::Concentration, a),
        Command::RogersExpectation(a) => run_experiment(Experiment::RogersExpectation, a),
        Command::Campbell(a) => run_experiment(Experiment::Campbell, a),
        Command::SuccessiveMinima(a) => run_experiment(Experiment::SuccessiveMinima, a),
        Command::LimitCdf(a) => limit_cdf(a),
        Command::SampleLattice(a) => sample(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
