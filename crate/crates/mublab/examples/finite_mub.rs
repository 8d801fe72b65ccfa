//! Finite-dimensional mutually unbiased bases: deficits, Hadamard structure
//! of the overlap matrix, phase extraction, and the basis-insertion identity.
//!
//! Run with: cargo run --release --example finite_mub

use mublab::mub::{
    fourier_basis, insertion_identity, is_hadamard, mub_deficit, overlap_matrix, phase_lagrangian,
    random_basis, Basis,
};
use ndarray::Array1;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    println!("unbiasedness deficit max|M |<e_a|f_b>|^2 - 1| (0 = exactly unbiased):");
    println!(
        "{:>4}  {:>22}  {:>22}",
        "M", "identity vs fourier", "two random bases"
    );
    for m in [2usize, 4, 8, 16, 32, 64] {
        let exact = mub_deficit(&Basis::identity(m), &fourier_basis(m)).unwrap();
        let generic = mub_deficit(&random_basis(m, 1), &random_basis(m, 2)).unwrap();
        println!("{m:>4}  {exact:>22.3e}  {generic:>22.3}");
    }

    // the overlap matrix of an unbiased pair is a normalized complex
    // Hadamard matrix; a generic pair's overlap is not
    let m = 8;
    let fourier_overlap = overlap_matrix(&Basis::identity(m), &fourier_basis(m)).unwrap();
    let generic_overlap = overlap_matrix(&random_basis(m, 1), &random_basis(m, 2)).unwrap();
    println!("\nis_hadamard(overlap, 1e-8):");
    println!(
        "  identity vs fourier: {}",
        is_hadamard(&fourier_overlap, 1e-8)
    );
    println!(
        "  two random bases:    {}",
        is_hadamard(&generic_overlap, 1e-8)
    );

    // extract the phases ("the lagrangian of the pair") and rebuild
    let phases = phase_lagrangian(&Basis::identity(m), &fourier_basis(m), 1e-10).unwrap();
    let rebuilt = phases.reconstruct();
    let dev = rebuilt
        .iter()
        .zip(fourier_overlap.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    println!("\nphase extraction round trip (M={m}): reconstruction deviation {dev:.3e}");
    println!(
        "  L(1,b) row: {:?}",
        (0..m)
            .map(|b| format!("{:+.3}", phases.phases()[[1, b]]))
            .collect::<Vec<_>>()
    );

    // inserting complete bases between <Phi| and |Psi> changes nothing
    let dim = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phi = Array1::from_shape_fn(dim, |_| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let psi = Array1::from_shape_fn(dim, |_| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let direct = phi.mapv(|z| z.conj()).dot(&psi);
    println!("\ninsertion identity, M={dim}:");
    println!("  direct <Phi|Psi>         = {direct:.12}");
    for n in [1usize, 3, 5, 9] {
        let bases: Vec<Basis> = (0..n).map(|k| random_basis(dim, 100 + k as u64)).collect();
        let chained = insertion_identity(&phi, &psi, &bases).unwrap();
        println!(
            "  through {n} random bases  = {chained:.12}  (|dev| {:.2e})",
            (chained - direct).norm()
        );
    }
}
