//! Closed-form propagators: constant moduli (the mutual-unbiasedness
//! signature), semigroup composition under oscillatory quadrature, and the
//! Wick-rotated heat kernel for contrast.
//!
//! Run with: cargo run --release --example closed_form_kernels

use mublab::kernels::{free_kernel, harmonic_kernel, heat_kernel};
use mublab::numerics::grid::PhysicalUnits;
use mublab::numerics::oscillatory::{integrate_quadratic_phase, suggested_panels};
use num_complex::Complex64 as C64;

fn main() {
    let u = PhysicalUnits::natural();

    println!("free kernel |K(x,y,t=1)| at scattered points (expect (2 pi)^-1/2 = 0.398942...):");
    for (x, y) in [(0.0, 0.0), (3.7, -1.2), (18.0, 5.0), (-40.0, 40.0)] {
        let k = free_kernel(x, y, 1.0, &u).unwrap();
        println!("  x={x:>6}, y={y:>6}: |K| = {:.12}", k.norm());
    }

    println!("\nharmonic kernel |K| depends on t only (omega=1, t=0.77):");
    for (x, y) in [(0.0, 0.0), (2.0, -3.0), (9.9, 1.1)] {
        let k = harmonic_kernel(x, y, 0.77, 1.0, &u).unwrap();
        println!("  x={x:>5}, y={y:>5}: |K| = {:.12}", k.norm());
    }

    // the heat kernel behaves in the opposite way: it remembers the source
    println!("\nheat kernel K(x, 0, t=0.5) decays with |x| (no unbiasedness here):");
    for x in [0.0, 0.5, 1.0, 2.0] {
        println!(
            "  x={x:>4}: K = {:.6}",
            heat_kernel(x, 0.0, 0.5, &u).unwrap()
        );
    }

    // composition: int K(x,z,t1) K(z,y,t2) dz = K(x,y,t1+t2); the integrand
    // is a pure chirp, so the quadrature needs the analytic Fresnel tails
    let (x, y, t1, t2) = (0.3, -0.2, 0.5, 0.5);
    let a = 0.5 * (1.0 / t1 + 1.0 / t2);
    let b = -(x / t1 + y / t2);
    let f = |z: f64| free_kernel(x, z, t1, &u).unwrap() * free_kernel(z, y, t2, &u).unwrap();
    let w = 60.0;
    let got: C64 = integrate_quadratic_phase(f, a, b, w, suggested_panels(a, b, w));
    let expect = free_kernel(x, y, t1 + t2, &u).unwrap();
    println!("\nfree semigroup check at (x,y)=({x},{y}), t1=t2={t1}:");
    println!("  quadrature  = {got:.10}");
    println!("  closed form = {expect:.10}");
    println!("  |difference| = {:.3e}", (got - expect).norm());

    let omega = 1.0f64;
    let (t1, t2) = (0.4f64, 0.4f64);
    let (s1, s2) = ((omega * t1).sin(), (omega * t2).sin());
    let a = omega / 2.0 * ((omega * t1).cos() / s1 + (omega * t2).cos() / s2);
    let b = -omega * (x / s1 + y / s2);
    let f = |z: f64| {
        harmonic_kernel(x, z, t1, omega, &u).unwrap()
            * harmonic_kernel(z, y, t2, omega, &u).unwrap()
    };
    let got: C64 = integrate_quadratic_phase(f, a, b, w, suggested_panels(a, b, w));
    let expect = harmonic_kernel(x, y, t1 + t2, omega, &u).unwrap();
    println!("\nharmonic semigroup check (omega=1, t1=t2=0.4):");
    println!("  quadrature  = {got:.10}");
    println!("  closed form = {expect:.10}");
    println!("  |difference| = {:.3e}", (got - expect).norm());

    // the harmonic kernel reduces to the free one as omega t -> 0
    println!("\nharmonic -> free as omega -> 0 (x=0.9, y=0.4, t=0.6):");
    for omega in [1.0, 0.3, 0.1, 0.03, 0.01] {
        let kh = harmonic_kernel(0.9, 0.4, 0.6, omega, &u).unwrap();
        let kf = free_kernel(0.9, 0.4, 0.6, &u).unwrap();
        println!(
            "  omega={omega:>5}: relative deviation {:.3e}",
            (kh - kf).norm() / kf.norm()
        );
    }
}
