//! The Riemann continuous product: prod f(t)^dt = exp(int ln f dt).
//!
//! Run with: cargo run --release --example continuous_product

use mublab::numerics::quadrature::{continuous_product, trapezoid, SampledFunction};

fn main() {
    // identity cases pin the normalization
    let one = SampledFunction::from_fn(0.0, 1.0, 257, |_| 1.0).unwrap();
    let two = SampledFunction::from_fn(0.0, 1.0, 257, |_| 2.0).unwrap();
    println!(
        "prod 1^dt over [0,1]  = {:.12}",
        continuous_product(&one, 256).unwrap()
    );
    println!(
        "prod 2^dt over [0,1]  = {:.12}",
        continuous_product(&two, 256).unwrap()
    );

    // prod (e^g)^dt = exp(int g dt): the identity that turns the
    // exponentiated action into a product of local phases
    println!("\npartitions   prod (e^t)^dt      exp(1/2)           |difference|");
    for partitions in [16usize, 64, 256, 1024, 4096] {
        let f = SampledFunction::from_fn(0.0, 1.0, partitions + 1, |t| t.exp()).unwrap();
        let got = continuous_product(&f, partitions).unwrap();
        let exact = 0.5f64.exp();
        println!(
            "{partitions:>10}   {got:.14}   {exact:.14}   {:.3e}",
            (got - exact).abs()
        );
    }

    // same refinement story for g(t) = sin t, with the trapezoid integral of
    // g as the independent reference
    let partitions = 1024;
    let f = SampledFunction::from_fn(0.0, 1.0, partitions + 1, |t| t.sin().exp()).unwrap();
    let got = continuous_product(&f, partitions).unwrap();
    let reference = trapezoid(|t| t.sin(), 0.0, 1.0, partitions).exp();
    println!("\ng = sin t, {partitions} partitions:");
    println!("  continuous product = {got:.15}");
    println!("  exp(int sin t dt)  = {reference:.15}");
    println!("  difference         = {:.3e}", (got - reference).abs());
}
