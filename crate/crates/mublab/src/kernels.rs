//! Closed-form propagators used as ground truth: free particle, harmonic
//! oscillator, heat kernel (Wick rotation), and the translation group as a
//! negative control.
//!
//! Square-root branch: for t > 0 the Fresnel prefactor (2 pi i hbar t / m)^(-1/2)
//! is written e^{-i pi/4} (2 pi hbar t / m)^(-1/2); the oscillator prefactor
//! additionally picks up e^{-i pi/2} per caustic crossed (Feynman-Soriau
//! index floor(omega t / pi)). Composition checks are sensitive to this
//! choice, so it is fixed here once.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::grid::{ComplexGridVector, GridSpec, PhysicalUnits};

/// Guard on |sin(omega t)| below which oscillator kernels are treated as
/// singular (shared with the lattice field module).
pub const CAUSTIC_TOL: f64 = 1e-8;

/// A single kernel evaluation <x,t|y,0>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub value: C64,
}

impl KernelPoint {
    pub fn free(x: f64, y: f64, t: f64, units: &PhysicalUnits) -> Result<Self> {
        Ok(Self {
            x,
            y,
            t,
            value: free_kernel(x, y, t, units)?,
        })
    }

    pub fn harmonic(x: f64, y: f64, t: f64, omega: f64, units: &PhysicalUnits) -> Result<Self> {
        Ok(Self {
            x,
            y,
            t,
            value: harmonic_kernel(x, y, t, omega, units)?,
        })
    }
}

fn require_positive_time(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTime { t })
    }
}

/// Free-particle propagator (2 pi i hbar t/m)^(-1/2) exp(i m (x-y)^2 / (2 hbar t)).
pub fn free_kernel(x: f64, y: f64, t: f64, units: &PhysicalUnits) -> Result<C64> {
    require_positive_time(t)?;
    let modulus = (units.mass / (2.0 * PI * units.hbar * t)).sqrt();
    let phase = units.mass * (x - y) * (x - y) / (2.0 * units.hbar * t) - PI / 4.0;
    Ok(C64::from_polar(modulus, phase))
}

/// Harmonic-oscillator propagator
/// sqrt(m omega / (2 pi i hbar sin(omega t)))
///   * exp{ i m omega / (2 hbar sin(omega t)) ((x^2+y^2) cos(omega t) - 2 x y) }.
pub fn harmonic_kernel(x: f64, y: f64, t: f64, omega: f64, units: &PhysicalUnits) -> Result<C64> {
    require_positive_time(t)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter {
            what: format!("omega must be positive, got {omega}"),
        });
    }
    let theta = omega * t;
    let s = theta.sin();
    if s.abs() <= CAUSTIC_TOL {
        return Err(Error::CausticSingularity {
            omega_t: theta,
            sin_abs: s.abs(),
        });
    }
    let modulus = (units.mass * omega / (2.0 * PI * units.hbar * s.abs())).sqrt();
    let caustics_crossed = (theta / PI).floor();
    let action =
        units.mass * omega / (2.0 * units.hbar * s) * ((x * x + y * y) * theta.cos() - 2.0 * x * y);
    Ok(C64::from_polar(
        modulus,
        action - PI / 4.0 * (1.0 + 2.0 * caustics_crossed),
    ))
}

/// Heat kernel, the Wick rotation t -> -i t of the free propagator:
/// (2 pi hbar t/m)^(-1/2) exp(-m (x-y)^2 / (2 hbar t)). Strictly positive.
pub fn heat_kernel(x: f64, y: f64, t: f64, units: &PhysicalUnits) -> Result<f64> {
    require_positive_time(t)?;
    let modulus = (units.mass / (2.0 * PI * units.hbar * t)).sqrt();
    Ok(modulus * (-units.mass * (x - y) * (x - y) / (2.0 * units.hbar * t)).exp())
}

/// Number of grid sites the translation by `t` rounds to.
fn shift_sites(grid: &GridSpec, t: f64) -> i64 {
    (t / grid.spacing()).round() as i64
}

/// Translation-group action: shift `v` by t, rounded to the nearest whole
/// number of grid sites (periodic). A delta at site j lands at site j + k.
pub fn translation_kernel_apply(v: &ComplexGridVector, t: f64) -> ComplexGridVector {
    let grid = *v.grid();
    let n = grid.n_points() as i64;
    let k = shift_sites(&grid, t);
    let values = ndarray::Array1::from_shape_fn(grid.n_points(), |i| {
        let src = (i as i64 - k).rem_euclid(n) as usize;
        v.values()[src]
    });
    ComplexGridVector::new(grid, values).expect("permutation of finite values")
}

/// Dense permutation matrix of the translation, for the flatness-deficit
/// diagnostic only; the kernel itself is distributional (delta(x - y + t)).
pub fn translation_permutation_matrix(grid: &GridSpec, t: f64) -> ndarray::Array2<C64> {
    let n = grid.n_points();
    let k = shift_sites(grid, t);
    ndarray::Array2::from_shape_fn((n, n), |(i, j)| {
        if (i as i64 - k).rem_euclid(n as i64) as usize == j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}
