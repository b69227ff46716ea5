//! Tuple sums over distinct points: the limiting process and lattices of
//! moderate dimension against the closed form.
//!
//! cargo run --release --example campbell

use lattice_lab::experiment::{run_with_sink, CampbellSide, Experiment, ExperimentConfig};

fn run(side: CampbellSide, n: usize, trials: usize, boxes: Vec<(f64, f64)>, angle_box: Option<(f64, f64)>) -> lattice_lab::Result<()> {
    let mut cfg = ExperimentConfig::new(Experiment::Campbell, n, 1, trials);
    cfg.side = side;
    cfg.boxes = boxes.clone();
    cfg.angle_box = angle_box;
    let outcome = run_with_sink(&cfg, &mut std::io::sink())?;
    let r = &outcome.reports[0];
    println!(
        "{side:?} box {boxes:?} angles {angle_box:?}: {:.4} +- {:.4}  [{}] {:?}",
        r.mean.unwrap(),
        r.std_err.unwrap(),
        r.notes,
        r.verdict
    );
    Ok(())
}

fn main() -> lattice_lab::Result<()> {
    run(CampbellSide::Limit, 2, 100_000, vec![(0.0, 1.0); 2], None)?;
    run(CampbellSide::Limit, 2, 100_000, vec![(0.0, 2.0); 2], Some((0.0, 1.0)))?;
    run(CampbellSide::Limit, 2, 100_000, vec![(0.0, 2.0); 3], None)?;
    run(CampbellSide::Lattice, 24, 2_000, vec![(0.0, 2.0); 2], Some((0.0, 1.0)))?;
    Ok(())
}
