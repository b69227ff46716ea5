//! The chart from spherical coordinates of a k-frame to its pairwise angles,
//! and the closed-form Jacobian determinant of that change of variables.
//!
//! cargo run --release --example jacobian

use std::f64::consts::PI;

use lattice_lab::limits::{chart_jacobian_det, chart_to_angles};
use lattice_lab::pairs::PairMatrix;

fn main() -> lattice_lab::Result<()> {
    let phis = PairMatrix::from_fn(4, |i, j| PI / 3.0 + 0.1 * (i + 2 * j) as f64);
    let chart = chart_to_angles(&phis)?;
    for (k, u) in chart.frame.iter().enumerate() {
        println!("u{} = {:+.5?}", k + 1, u);
    }
    for ((i, j), phi) in chart.phis.iter() {
        println!("phi{}{} = {phi:.5}  alpha{}{} = {:.5}", i + 1, j + 1, i + 1, j + 1, chart.alphas.get(i, j));
    }
    println!("Jacobian determinant = {:.10}", chart_jacobian_det(&chart)?);
    Ok(())
}
