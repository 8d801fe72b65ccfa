//! Split-operator propagation of a coherent Gaussian in a harmonic trap:
//! the packet center follows the classical trajectory x0 cos(t) and the
//! quadrature norm is preserved to rounding.
//!
//! Run with: cargo run --release --example wave_packet

use mublab::numerics::grid::{ComplexGridVector, GridSpec, PhysicalUnits};
use mublab::trotter::{split_operator_step, PotentialSpec};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

fn main() {
    let grid = GridSpec::new(512, -10.0, 10.0).unwrap();
    let u = PhysicalUnits::natural();
    let v = PotentialSpec::harmonic(1.0).unwrap();
    let x0 = 1.0;

    let mut psi =
        ComplexGridVector::from_fn(grid, |x| C64::new((-(x - x0) * (x - x0) / 2.0).exp(), 0.0))
            .normalized();

    let ds = 1e-3;
    let steps_per_report = (PI / 4.0 / ds).round() as usize;
    let h = grid.spacing();
    let center = |psi: &ComplexGridVector| -> f64 {
        grid.nodes()
            .zip(psi.values().iter())
            .map(|(x, z)| x * z.norm_sqr() * h)
            .sum()
    };

    println!("harmonic trap omega=1, packet released at x0 = {x0}, ds = {ds}");
    println!(
        "{:>8}  {:>12}  {:>12}  {:>10}",
        "t", "<x>", "x0 cos(t)", "norm-1"
    );
    let mut t = 0.0f64;
    for _ in 0..=8 {
        println!(
            "{t:>8.4}  {:>12.6}  {:>12.6}  {:>10.2e}",
            center(&psi),
            x0 * t.cos(),
            psi.norm() - 1.0
        );
        for _ in 0..steps_per_report {
            psi = split_operator_step(&psi, ds, &v, &u).unwrap();
        }
        t += steps_per_report as f64 * ds;
    }
}
