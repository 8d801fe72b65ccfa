//! How unbiased are the position bases x(0) and x(t)? Windowed flatness
//! deficits of the evolution kernel for several potentials, swept in t.
//!
//! Geometry matters: the grid band must cover the window chirp
//! (kappa_max t >= window span) while periodic images stay out of band
//! (kappa_max t <= length - span). Inside that validity window the free and
//! harmonic kernels are flat (mutually unbiased bases), anharmonic kernels
//! are far from flat, and their deficit falls as t -> 0.
//!
//! Run with: cargo run --release --example deficit_sweep

use mublab::kernels::translation_permutation_matrix;
use mublab::numerics::grid::{GridSpec, PhysicalUnits};
use mublab::trotter::{kinetic_factor_matrix, KernelMatrix, PotentialSpec};
use mublab::unbiasedness::{asymptotic_mub_sweep, kernel_flatness_deficit};

fn main() {
    let grid = GridSpec::new(512, -16.0, 16.0).unwrap();
    let window = 0.25;
    let u = PhysicalUnits::natural();
    let ts = [0.40, 0.36, 0.32, 0.28];

    println!(
        "grid [-16,16] n=512, window fraction {window} (span [-4,4]); validity window t in ~[0.16, 0.48]"
    );

    // free: via the exact spectral circulant (no eigendecomposition needed)
    print!("{:>22}", "free");
    for &t in &ts {
        let k = KernelMatrix::new(grid, t, kinetic_factor_matrix(&grid, t, &u)).unwrap();
        print!("  {:>8.4}", kernel_flatness_deficit(&k, window).unwrap());
    }
    println!();

    for (label, v) in [
        ("harmonic(1)", PotentialSpec::harmonic(1.0).unwrap()),
        (
            "cubic x^3",
            PotentialSpec::polynomial(vec![0.0, 0.0, 0.0, 1.0]).unwrap(),
        ),
        (
            "quartic x^4",
            PotentialSpec::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap(),
        ),
    ] {
        let curve = asymptotic_mub_sweep(&v, &grid, &ts, window, &u).unwrap();
        print!("{label:>22}");
        for (_, d) in &curve.points {
            print!("  {d:>8.4}");
        }
        println!();
    }

    // negative control: the translation group never loses position
    // information, so its deficit is pinned at the maximum
    print!("{:>22}", "translation (control)");
    for &t in &ts {
        let k = KernelMatrix::new(grid, t, translation_permutation_matrix(&grid, t)).unwrap();
        print!("  {:>8.1}", kernel_flatness_deficit(&k, window).unwrap());
    }
    println!();

    print!("{:>22}", "t =");
    for &t in &ts {
        print!("  {t:>8}");
    }
    println!();
    println!("\nfree/harmonic are flat through the window (unbiased position bases);");
    println!("anharmonic kernels are far from flat; the translation control is pinned");
    println!("at the maximal deficit.");

    // the t -> 0 trend for the quartic needs a finer grid whose validity
    // window reaches small t
    let grid = GridSpec::new(1024, -16.0, 16.0).unwrap();
    let ts = [0.15, 0.12, 0.10];
    let quartic = PotentialSpec::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let curve = asymptotic_mub_sweep(&quartic, &grid, &ts, window, &u).unwrap();
    println!("\nquartic excess deficit as t -> 0 (n=1024, same box and window):");
    println!(
        "{:>8}  {:>12}  {:>12}  {:>10}",
        "t", "quartic", "free floor", "ratio"
    );
    for &(t, d) in &curve.points {
        let free = kernel_flatness_deficit(
            &KernelMatrix::new(grid, t, kinetic_factor_matrix(&grid, t, &u)).unwrap(),
            window,
        )
        .unwrap();
        println!("{t:>8}  {d:>12.4}  {free:>12.4}  {:>10.1}", d / free);
    }
    println!("\nthe quartic deficit falls toward the discretization floor as t -> 0:");
    println!("the position bases x(0) and x(t) become asymptotically mutually unbiased.");
}
