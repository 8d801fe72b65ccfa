//! Mutual-unbiasedness diagnostics for position bases at times 0 and t:
//! windowed flatness deficits, t-sweeps, the kernel rescaling identity,
//! quadratic phase fits, and the R/S/P Riccati system characterizing
//! potentials whose position bases stay unbiased for all t.
//!
//! Discretization caveat: entrywise kernel statements hold on a periodic
//! grid only inside a validity window. The grid band must cover the window
//! chirp (kappa_max * t >= m * window_span / hbar) while periodic images stay
//! out of band (kappa_max * t <= m * (length - window_span) / hbar). Outside
//! that regime band truncation and wrap-around images dominate the deficit,
//! regardless of the potential.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::grid::{GridSpec, PhysicalUnits};
use crate::trotter::{KernelMatrix, PotentialSpec, SpectralOracle};

/// Unitarity gate for the flatness deficit.
pub const KERNEL_UNITARITY_TOL: f64 = 1e-6;

/// Padding factor applied to the rescaled oracle grid in [`scaling_check`].
/// An exactly rescaled grid would make the two oracle runs the same matrix
/// by construction; the padding keeps them independent discretizations.
pub const SCALED_GRID_PAD: f64 = 1.2;

/// Overflow guard on |R| in [`riccati_solve`].
pub const RICCATI_BLOWUP_GUARD: f64 = 1e12;

/// Flatness deficit of a raw block: with the block renormalized so its mean
/// squared modulus is 1/M_w, the max of |M_w |entry|^2 - 1|. Equivalently
/// max | |entry|^2 / mean - 1 |.
fn block_flatness_deficit(entries: &Array2<C64>, lo: usize, hi: usize) -> f64 {
    let m_w = (hi - lo) as f64;
    let mut mean = 0.0;
    for i in lo..hi {
        for j in lo..hi {
            mean += entries[[i, j]].norm_sqr();
        }
    }
    mean /= m_w * m_w;
    if mean == 0.0 {
        // no amplitude reaches the window at all (e.g. a translation past it)
        return f64::INFINITY;
    }
    let mut deficit: f64 = 0.0;
    for i in lo..hi {
        for j in lo..hi {
            deficit = deficit.max((entries[[i, j]].norm_sqr() / mean - 1.0).abs());
        }
    }
    deficit
}

/// Flatness deficit of the central window x window sub-block of a unitary
/// kernel. Zero iff the moduli are exactly flat there (the two position
/// bases look exactly mutually unbiased through the window).
pub fn kernel_flatness_deficit(kernel: &KernelMatrix, window: f64) -> Result<f64> {
    let deviation = kernel.unitarity_deviation();
    if deviation > KERNEL_UNITARITY_TOL {
        return Err(Error::NonUnitaryKernel { deviation });
    }
    let (lo, hi) = kernel.grid().window_bounds(window)?;
    Ok(block_flatness_deficit(kernel.entries(), lo, hi))
}

/// Sweep of the windowed deficit against time for one potential.
#[derive(Debug, Clone)]
pub struct DeficitCurve {
    pub potential: PotentialSpec,
    /// (t, deficit) pairs, in the order swept.
    pub points: Vec<(f64, f64)>,
    pub window: f64,
}

impl DeficitCurve {
    /// CSV with columns t,deficit,window,potential.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,deficit,window,potential\n");
        for &(t, d) in &self.points {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{}\n",
                t, d, self.window, self.potential
            ));
        }
        out
    }
}

/// For each t (sorted descending), build the oracle kernel and record the
/// windowed flatness deficit. One eigendecomposition serves the whole sweep.
pub fn asymptotic_mub_sweep(
    v: &PotentialSpec,
    grid: &GridSpec,
    t_list: &[f64],
    window: f64,
    units: &PhysicalUnits,
) -> Result<DeficitCurve> {
    if t_list.is_empty() {
        return Err(Error::InvalidParameter {
            what: "t_list must be non-empty".into(),
        });
    }
    for &t in t_list {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTime { t });
        }
    }
    if t_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter {
            what: "t_list must be sorted strictly descending".into(),
        });
    }
    let oracle = SpectralOracle::new(grid, v, units)?;
    let mut points = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let kernel = oracle.kernel(t);
        points.push((t, kernel_flatness_deficit(&kernel, window)?));
    }
    Ok(DeficitCurve {
        potential: v.clone(),
        points,
        window,
    })
}

/// Both sides of the kernel rescaling identity
/// K_V(x, y, t) = t^(-1/2) K_{V_t}(x/sqrt(t), y/sqrt(t), 1), V_t(x) = t V(sqrt(t) x),
/// evaluated by two independent oracle runs.
#[derive(Debug, Clone, Copy)]
pub struct ScalingCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub rel_error: f64,
}

/// Evaluate the rescaling identity: lhs from an oracle on `grid` at time t,
/// rhs from an oracle for the rescaled potential on the scaled-and-padded
/// grid at time 1. Off-node values by bicubic interpolation.
pub fn scaling_check(
    v: &PotentialSpec,
    x: f64,
    y: f64,
    t: f64,
    units: &PhysicalUnits,
    grid: &GridSpec,
) -> Result<ScalingCheck> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime { t });
    }
    let scaled_potential = v.scaled(t)?;
    let lhs = SpectralOracle::new(grid, v, units)?.kernel_value_at(t, x, y);
    let st = t.sqrt();
    let scaled_grid = GridSpec::new(
        grid.n_points(),
        SCALED_GRID_PAD * grid.x_min() / st,
        SCALED_GRID_PAD * grid.x_max() / st,
    )?;
    let rhs_oracle = SpectralOracle::new(&scaled_grid, &scaled_potential, units)?;
    let rhs = rhs_oracle.kernel_value_at(1.0, x / st, y / st) / st;
    let rel_error = (lhs - rhs).norm() / lhs.norm();
    Ok(ScalingCheck {
        lhs,
        rhs,
        rel_error,
    })
}

/// Least-squares fit of a kernel column's unwrapped phase to
/// R x^2 / 2 + S x + P over the central window.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticPhaseFit {
    pub r: f64,
    pub s: f64,
    pub p: f64,
    /// Root-mean-square phase misfit over the window, in radians.
    pub residual: f64,
}

/// Unwrap the phase of column `y_index` along x over the central window and
/// fit the quadratic form. Fails when the column modulus dips toward zero on
/// the window (phase undefined there).
pub fn phase_quadratic_fit(
    kernel: &KernelMatrix,
    y_index: usize,
    window: f64,
) -> Result<QuadraticPhaseFit> {
    let n = kernel.grid().n_points();
    if y_index >= n {
        return Err(Error::DimensionMismatch {
            left: y_index,
            right: n,
        });
    }
    let column: Vec<C64> = kernel.entries().column(y_index).iter().cloned().collect();
    phase_quadratic_fit_column(&column, kernel.grid(), window)
}

/// Column-based variant of [`phase_quadratic_fit`] for kernels produced one
/// column at a time (e.g. [`SpectralOracle::column`]).
pub fn phase_quadratic_fit_column(
    column: &[C64],
    grid: &GridSpec,
    window: f64,
) -> Result<QuadraticPhaseFit> {
    let n = grid.n_points();
    if column.len() != n {
        return Err(Error::DimensionMismatch {
            left: column.len(),
            right: n,
        });
    }
    let (lo, hi) = grid.window_bounds(window)?;
    let window_column = &column[lo..hi];
    let max_modulus = window_column.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let floor = 1e-12 * max_modulus;
    if let Some(offset) = window_column.iter().position(|z| z.norm() <= floor) {
        return Err(Error::PhaseUnwrapFailure { index: lo + offset });
    }
    // cumulative unwrap with jump threshold pi
    let mut phases = Vec::with_capacity(hi - lo);
    let mut acc = window_column[0].arg();
    let mut prev_raw = acc;
    phases.push(acc);
    for z in &window_column[1..] {
        let raw = z.arg();
        let mut step = raw - prev_raw;
        while step > PI {
            step -= 2.0 * PI;
        }
        while step <= -PI {
            step += 2.0 * PI;
        }
        acc += step;
        prev_raw = raw;
        phases.push(acc);
    }
    // normal equations for the basis [x^2/2, x, 1]
    let xs: Vec<f64> = (lo..hi).map(|i| grid.node(i)).collect();
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (x, ph) in xs.iter().zip(&phases) {
        let basis = [0.5 * x * x, *x, 1.0];
        for r in 0..3 {
            for c in 0..3 {
                a[r][c] += basis[r] * basis[c];
            }
            b[r] += basis[r] * ph;
        }
    }
    solve3(&mut a, &mut b)?;
    let (r, s, p) = (b[0], b[1], b[2]);
    let mut sq = 0.0;
    for (x, ph) in xs.iter().zip(&phases) {
        let fit = 0.5 * r * x * x + s * x + p;
        sq += (ph - fit) * (ph - fit);
    }
    let residual = (sq / phases.len() as f64).sqrt();
    Ok(QuadraticPhaseFit { r, s, p, residual })
}

fn solve3(a: &mut [[f64; 3]; 3], b: &mut [f64; 3]) -> Result<()> {
    for p in 0..3 {
        // partial pivot
        let mut best = p;
        for r in p + 1..3 {
            if a[r][p].abs() > a[best][p].abs() {
                best = r;
            }
        }
        if a[best][p].abs() == 0.0 {
            return Err(Error::InvalidParameter {
                what: "singular phase-fit system".into(),
            });
        }
        a.swap(p, best);
        b.swap(p, best);
        let piv = a[p][p];
        for entry in a[p][p..3].iter_mut() {
            *entry /= piv;
        }
        b[p] /= piv;
        let pivot_row = a[p];
        for r in 0..3 {
            if r != p {
                let f = a[r][p];
                for (entry, pivot) in a[r][p..3].iter_mut().zip(&pivot_row[p..3]) {
                    *entry -= f * pivot;
                }
                b[r] -= f * b[p];
            }
        }
    }
    Ok(())
}

/// Trajectories of the quadratic-phase coefficients under
/// R'/2 + R^2 = k1, S' + 2RS = k2, P' + S^2 = k3.
/// The implied potential is V(x) = -k1 x^2 - k2 x - k3.
#[derive(Debug, Clone)]
pub struct RiccatiState {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub times: Vec<f64>,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub p: Vec<f64>,
}

impl RiccatiState {
    /// The potential these coefficient equations describe, in the units where
    /// the Schrodinger equation reads i psi_t = -psi_xx + V psi
    /// (hbar = 1, m = 1/2).
    pub fn implied_potential(&self) -> PotentialSpec {
        PotentialSpec::Polynomial {
            coeffs: vec![-self.k3, -self.k2, -self.k1],
        }
    }
}

/// Integrate the R/S/P system with fixed-step RK4 from t0 (the system is
/// singular at t = 0), anchored to the free-kernel phase at t0 for a source
/// point y: R(t0) = 1/(2 t0), S(t0) = -y/(2 t0), P(t0) = y^2/(4 t0).
pub fn riccati_solve(
    k1: f64,
    k2: f64,
    k3: f64,
    source_point: f64,
    t0: f64,
    t_end: f64,
    steps: usize,
) -> Result<RiccatiState> {
    if !(t0 > 0.0) {
        return Err(Error::NonPositiveTime { t: t0 });
    }
    if !(t_end > t0) {
        return Err(Error::InvalidParameter {
            what: format!("t_end {t_end} must exceed t0 {t0}"),
        });
    }
    if steps == 0 {
        return Err(Error::InvalidParameter {
            what: "steps must be >= 1".into(),
        });
    }
    let h = (t_end - t0) / steps as f64;
    let rhs = |state: [f64; 3]| -> [f64; 3] {
        let [r, s, _p] = state;
        [2.0 * (k1 - r * r), k2 - 2.0 * r * s, k3 - s * s]
    };
    let mut state = [
        1.0 / (2.0 * t0),
        -source_point / (2.0 * t0),
        source_point * source_point / (4.0 * t0),
    ];
    let mut times = vec![t0];
    let mut r = vec![state[0]];
    let mut s = vec![state[1]];
    let mut p = vec![state[2]];
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k_a = rhs(state);
        let k_b = rhs(add_scaled(state, k_a, 0.5 * h));
        let k_c = rhs(add_scaled(state, k_b, 0.5 * h));
        let k_d = rhs(add_scaled(state, k_c, h));
        for j in 0..3 {
            state[j] += h / 6.0 * (k_a[j] + 2.0 * k_b[j] + 2.0 * k_c[j] + k_d[j]);
        }
        if !state[0].is_finite() || state[0].abs() > RICCATI_BLOWUP_GUARD {
            return Err(Error::BlowUp { t: t + h });
        }
        times.push(t + h);
        r.push(state[0]);
        s.push(state[1]);
        p.push(state[2]);
    }
    Ok(RiccatiState {
        k1,
        k2,
        k3,
        times,
        r,
        s,
        p,
    })
}

fn add_scaled(state: [f64; 3], delta: [f64; 3], factor: f64) -> [f64; 3] {
    [
        state[0] + factor * delta[0],
        state[1] + factor * delta[1],
        state[2] + factor * delta[2],
    ]
}
