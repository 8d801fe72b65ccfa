//! Momentum-space operator application on periodic grids.
//!
//! Spectral (exact Fourier) momenta: mode k of an n-point grid of length L
//! carries integer index n_k in the symmetric range {-n/2, ..., n/2 - 1} and
//! momentum p_k = hbar * 2*pi*n_k / L.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::numerics::grid::{ComplexGridVector, GridSpec, PhysicalUnits};

type PlanCache = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

thread_local! {
    static FFT_CACHE: RefCell<PlanCache> = RefCell::new(HashMap::new());
}

pub(crate) fn fft_plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    FFT_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry((n, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

/// Signed integer mode index of FFT bin k (standard wrap-around layout).
pub fn mode_integer(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Spectral momentum of FFT bin k on `grid`.
pub fn spectral_momentum(k: usize, grid: &GridSpec, units: &PhysicalUnits) -> f64 {
    units.hbar * 2.0 * PI * mode_integer(k, grid.n_points()) as f64 / grid.length()
}

/// Multiply the discrete Fourier modes of `v` by g(p_k) and transform back.
///
/// g = 1 returns v exactly (up to rounding); unimodular g preserves the
/// quadrature norm.
pub fn apply_momentum_function(
    v: &ComplexGridVector,
    g: impl Fn(f64) -> C64,
    units: &PhysicalUnits,
) -> Result<ComplexGridVector> {
    let grid = *v.grid();
    let n = grid.n_points();
    let mut buf: Vec<C64> = v.values().to_vec();
    fft_plan(n, false).process(&mut buf);
    for (k, b) in buf.iter_mut().enumerate() {
        *b *= g(spectral_momentum(k, &grid, units));
    }
    fft_plan(n, true).process(&mut buf);
    let inv_n = 1.0 / n as f64;
    let values = buf.into_iter().map(|z| z * inv_n).collect();
    ComplexGridVector::new(grid, values).map_err(|_| Error::InvalidParameter {
        what: "momentum function produced non-finite amplitudes".into(),
    })
}
