//! Time-sliced kernels, split-operator propagation, and a dense spectral
//! oracle for ground-truth unitaries.
//!
//! The kinetic discretization is spectral throughout: "p^2/2m" is exact on
//! the grid's momentum band. For composition this matters — the short-time
//! chirp exp(i m (x-y)^2 / (2 hbar ds)) is unresolvable by a fixed grid once
//! ds drops below spacing * length * m / (pi hbar), and quadrature
//! composition of the raw sampled chirp diverges from aliasing. The composed
//! slice therefore applies the same short-time factorization with its kinetic
//! factor realized on the grid band (an exactly unitary circulant), which is
//! also precisely the split-operator step matrix. The raw sampled-chirp
//! slice remains available as [`short_time_kernel_matrix`] for the
//! pure-phase diagnostics and for resolved-regime experiments.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::grid::{ComplexGridVector, GridSpec, PhysicalUnits};
use crate::numerics::linalg::{hermitian_eigen, matrix_power, unitarity_deviation};
use crate::numerics::spectral::{apply_momentum_function, fft_plan, spectral_momentum};

/// Symbolic description of the potential V(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialSpec {
    Free,
    Harmonic {
        omega: f64,
    },
    /// Coefficients in ascending degree: V(x) = sum coeffs[j] * x^j.
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// Values sampled on a grid, periodically extended and linearly
    /// interpolated between nodes.
    Tabulated {
        grid: GridSpec,
        values: Vec<f64>,
    },
}

/// Maximum polynomial degree accepted in v1.
pub const MAX_POLY_DEGREE: usize = 8;

impl PotentialSpec {
    pub fn harmonic(omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::InvalidParameter {
                what: format!("omega must be positive, got {omega}"),
            });
        }
        Ok(Self::Harmonic { omega })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        let spec = Self::Polynomial { coeffs };
        spec.validate()?;
        Ok(spec)
    }

    pub fn tabulated(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        let spec = Self::Tabulated { grid, values };
        spec.validate()?;
        Ok(spec)
    }

    /// Check the type invariants (useful after deserializing).
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Free => Ok(()),
            Self::Harmonic { omega } => {
                if *omega > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter {
                        what: format!("omega must be positive, got {omega}"),
                    })
                }
            }
            Self::Polynomial { coeffs } => {
                if coeffs.len() > MAX_POLY_DEGREE + 1 {
                    return Err(Error::InvalidParameter {
                        what: format!(
                            "polynomial degree {} exceeds {MAX_POLY_DEGREE}",
                            coeffs.len() - 1
                        ),
                    });
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidParameter {
                        what: "polynomial coefficients must be finite".into(),
                    });
                }
                Ok(())
            }
            Self::Tabulated { grid, values } => {
                if values.len() != grid.n_points() {
                    return Err(Error::DimensionMismatch {
                        left: values.len(),
                        right: grid.n_points(),
                    });
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter {
                        what: "tabulated values must be finite".into(),
                    });
                }
                Ok(())
            }
        }
    }

    /// V(x). Tabulated potentials are periodically extended and linearly
    /// interpolated.
    pub fn evaluate(&self, x: f64, units: &PhysicalUnits) -> f64 {
        match self {
            Self::Free => 0.0,
            Self::Harmonic { omega } => 0.5 * units.mass * omega * omega * x * x,
            Self::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
            Self::Tabulated { grid, values } => {
                let n = grid.n_points();
                let f = (x - grid.x_min()) / grid.spacing();
                let j = f.floor() as i64;
                let u = f - j as f64;
                let j0 = j.rem_euclid(n as i64) as usize;
                let j1 = (j + 1).rem_euclid(n as i64) as usize;
                values[j0] * (1.0 - u) + values[j1] * u
            }
        }
    }

    /// Values at the nodes of `grid`. Tabulated potentials must live on the
    /// same grid.
    pub fn evaluate_on_grid(&self, grid: &GridSpec, units: &PhysicalUnits) -> Result<Vec<f64>> {
        if let Self::Tabulated { grid: own, values } = self {
            if own != grid {
                return Err(Error::GridMismatch);
            }
            return Ok(values.clone());
        }
        Ok(grid.nodes().map(|x| self.evaluate(x, units)).collect())
    }

    /// The rescaled potential V_t(x) = t * V(sqrt(t) * x); polynomial
    /// coefficients map analytically (c_j -> t^(1 + j/2) c_j).
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTime { t });
        }
        match self {
            Self::Free => Ok(Self::Free),
            Self::Harmonic { omega } => Ok(Self::Harmonic { omega: omega * t }),
            Self::Polynomial { coeffs } => {
                let st = t.sqrt();
                let scaled = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| t * st.powi(j as i32) * c)
                    .collect();
                Ok(Self::Polynomial { coeffs: scaled })
            }
            Self::Tabulated { .. } => Err(Error::UnsupportedPotential {
                reason: "tabulated potentials cannot be rescaled analytically".into(),
            }),
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Free => write!(f, "free"),
            Self::Harmonic { omega } => write!(f, "harmonic(omega={omega})"),
            Self::Polynomial { coeffs } => {
                write!(f, "poly[")?;
                for (j, c) in coeffs.iter().enumerate() {
                    if j > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
            Self::Tabulated { grid, .. } => write!(f, "tabulated(n={})", grid.n_points()),
        }
    }
}

/// Uniform time slicing of a total evolution time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrotterPlan {
    t_total: f64,
    n_slices: usize,
}

impl TrotterPlan {
    pub fn new(t_total: f64, n_slices: usize) -> Result<Self> {
        if !(t_total > 0.0) {
            return Err(Error::NonPositiveTime { t: t_total });
        }
        if n_slices == 0 {
            return Err(Error::InvalidParameter {
                what: "n_slices must be >= 1".into(),
            });
        }
        Ok(Self { t_total, n_slices })
    }

    pub fn t_total(&self) -> f64 {
        self.t_total
    }

    pub fn n_slices(&self) -> usize {
        self.n_slices
    }

    pub fn delta_s(&self) -> f64 {
        self.t_total / self.n_slices as f64
    }
}

/// Discretized U(t) in the grid basis. The continuum kernel value is
/// entry / spacing.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    grid: GridSpec,
    t: f64,
    entries: Array2<C64>,
}

impl KernelMatrix {
    pub fn new(grid: GridSpec, t: f64, entries: Array2<C64>) -> Result<Self> {
        let n = grid.n_points();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                left: entries.nrows(),
                right: n,
            });
        }
        Ok(Self { grid, t, entries })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    /// Continuum kernel value K(x_i, x_j) = entry / spacing.
    pub fn kernel_value(&self, i: usize, j: usize) -> C64 {
        self.entries[[i, j]] / self.grid.spacing()
    }

    /// max |(U^dagger U - I)_{ij}|.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.entries)
    }

    /// Apply the discrete unitary to a vector on the same grid.
    pub fn apply(&self, v: &ComplexGridVector) -> Result<ComplexGridVector> {
        if v.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let out = self.entries.dot(v.values());
        ComplexGridVector::new(self.grid, out)
    }
}

/// Short-time lagrangian L(x, y) = (m/2) ((x-y)/ds)^2 - V(x); the potential
/// is evaluated at the endpoint x.
pub fn short_time_lagrangian(
    x: f64,
    y: f64,
    delta_s: f64,
    v: &PotentialSpec,
    units: &PhysicalUnits,
) -> Result<f64> {
    if !(delta_s > 0.0) {
        return Err(Error::NonPositiveTime { t: delta_s });
    }
    let velocity = (x - y) / delta_s;
    Ok(0.5 * units.mass * velocity * velocity - v.evaluate(x, units))
}

/// Short-time kernel (2 pi i hbar ds / m)^(-1/2) exp(i L(x,y) ds / hbar);
/// for V = 0 this is the free kernel at time ds.
pub fn short_time_kernel(
    x: f64,
    y: f64,
    delta_s: f64,
    v: &PotentialSpec,
    units: &PhysicalUnits,
) -> Result<C64> {
    let lagrangian = short_time_lagrangian(x, y, delta_s, v, units)?;
    let modulus = (units.mass / (2.0 * PI * units.hbar * delta_s)).sqrt();
    Ok(C64::from_polar(
        modulus,
        lagrangian * delta_s / units.hbar - PI / 4.0,
    ))
}

/// The sampled-chirp slice matrix: entry (i, j) = short_time_kernel(x_i, x_j) * spacing.
///
/// Every column has constant entry modulus (pure phase times prefactor).
/// As a quadrature operator it is only meaningful while the grid resolves the
/// slice chirp, delta_s >~ spacing * length * m / (pi hbar); below that the
/// sampled chirp aliases and compositions of this matrix diverge. Use
/// [`composed_kernel`], whose kinetic factor lives on the grid band, for
/// convergent compositions.
pub fn short_time_kernel_matrix(
    grid: &GridSpec,
    v: &PotentialSpec,
    delta_s: f64,
    units: &PhysicalUnits,
) -> Result<Array2<C64>> {
    if !(delta_s > 0.0) {
        return Err(Error::NonPositiveTime { t: delta_s });
    }
    let n = grid.n_points();
    let h = grid.spacing();
    let vals = v.evaluate_on_grid(grid, units)?;
    let modulus = (units.mass / (2.0 * PI * units.hbar * delta_s)).sqrt() * h;
    let xs: Vec<f64> = grid.nodes().collect();
    Ok(Array2::from_shape_fn((n, n), |(i, j)| {
        let velocity = (xs[i] - xs[j]) / delta_s;
        let lagrangian = 0.5 * units.mass * velocity * velocity - vals[i];
        C64::from_polar(modulus, lagrangian * delta_s / units.hbar - PI / 4.0)
    }))
}

/// Exact kinetic factor exp(-i H0 ds / hbar) on the grid band: a unitary
/// circulant built from the spectral symbol.
pub fn kinetic_factor_matrix(grid: &GridSpec, delta_s: f64, units: &PhysicalUnits) -> Array2<C64> {
    let n = grid.n_points();
    let mut symbol: Vec<C64> = (0..n)
        .map(|k| {
            let p = spectral_momentum(k, grid, units);
            C64::from_polar(1.0, -p * p * delta_s / (2.0 * units.mass * units.hbar))
        })
        .collect();
    fft_plan(n, true).process(&mut symbol);
    let column: Vec<C64> = symbol.into_iter().map(|z| z / n as f64).collect();
    Array2::from_shape_fn((n, n), |(i, j)| column[(i + n - j) % n])
}

/// One split-operator slice as a dense matrix: the exact band-limited kinetic
/// factor followed by the endpoint potential phase. This is the slice
/// composed by [`composed_kernel`].
pub fn split_step_matrix(
    grid: &GridSpec,
    v: &PotentialSpec,
    delta_s: f64,
    units: &PhysicalUnits,
) -> Result<Array2<C64>> {
    if !(delta_s > 0.0) {
        return Err(Error::NonPositiveTime { t: delta_s });
    }
    let vals = v.evaluate_on_grid(grid, units)?;
    let mut m = kinetic_factor_matrix(grid, delta_s, units);
    for (i, &vi) in vals.iter().enumerate() {
        let phase = C64::from_polar(1.0, -vi * delta_s / units.hbar);
        for j in 0..grid.n_points() {
            m[[i, j]] *= phase;
        }
    }
    Ok(m)
}

/// N-fold composition of short-time slices (first-order Trotter). N = 1 is
/// the single slice; as N grows the result converges to
/// [`spectral_oracle_kernel`] at first order in 1/N.
pub fn composed_kernel(
    grid: &GridSpec,
    v: &PotentialSpec,
    plan: &TrotterPlan,
    units: &PhysicalUnits,
) -> Result<KernelMatrix> {
    let slice = split_step_matrix(grid, v, plan.delta_s(), units)?;
    let entries = if plan.n_slices() == 1 {
        slice
    } else {
        matrix_power(&slice, plan.n_slices())
    };
    KernelMatrix::new(*grid, plan.t_total(), entries)
}

/// One split-operator step: exp(-i H0 ds / hbar) applied spectrally, then the
/// potential phase exp(-i V ds / hbar). Exactly norm-preserving.
pub fn split_operator_step(
    psi: &ComplexGridVector,
    delta_s: f64,
    v: &PotentialSpec,
    units: &PhysicalUnits,
) -> Result<ComplexGridVector> {
    let grid = *psi.grid();
    let vals = v.evaluate_on_grid(&grid, units)?;
    let kinetic = apply_momentum_function(
        psi,
        |p| C64::from_polar(1.0, -p * p * delta_s / (2.0 * units.mass * units.hbar)),
        units,
    )?;
    let values = Array1::from_shape_fn(grid.n_points(), |i| {
        kinetic.values()[i] * C64::from_polar(1.0, -vals[i] * delta_s / units.hbar)
    });
    ComplexGridVector::new(grid, values)
}

/// Dense-oracle size guard.
pub const ORACLE_MAX_POINTS: usize = 2048;

/// Ground-truth U(t) = exp(-i H t / hbar) from one dense eigendecomposition
/// of the discretized Hamiltonian (spectral kinetic block plus diagonal
/// potential). Arbitrary t values reuse the factorization, so t-sweeps cost
/// one decomposition.
pub struct SpectralOracle {
    grid: GridSpec,
    units: PhysicalUnits,
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<C64>,
}

impl SpectralOracle {
    pub fn new(grid: &GridSpec, v: &PotentialSpec, units: &PhysicalUnits) -> Result<Self> {
        let n = grid.n_points();
        if n > ORACLE_MAX_POINTS {
            return Err(Error::DimensionTooLarge {
                n,
                max: ORACLE_MAX_POINTS,
            });
        }
        let vals = v.evaluate_on_grid(grid, units)?;
        let forward = fft_plan(n, false);
        let inverse = fft_plan(n, true);
        let mut ham = Array2::<C64>::zeros((n, n));
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            buf.fill(C64::new(0.0, 0.0));
            buf[j] = C64::new(1.0, 0.0);
            forward.process(&mut buf);
            for (k, b) in buf.iter_mut().enumerate() {
                let p = spectral_momentum(k, grid, units);
                *b *= C64::new(p * p / (2.0 * units.mass), 0.0);
            }
            inverse.process(&mut buf);
            let inv_n = 1.0 / n as f64;
            for i in 0..n {
                ham[[i, j]] = buf[i] * inv_n;
            }
            ham[[j, j]] += C64::new(vals[j], 0.0);
        }
        let eig = hermitian_eigen(&ham);
        let dev = unitarity_deviation(&eig.vectors);
        if dev > 1e-10 {
            return Err(Error::NonUnitaryKernel { deviation: dev });
        }
        Ok(Self {
            grid: *grid,
            units: *units,
            eigenvalues: eig.values,
            eigenvectors: eig.vectors,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    /// U(t) as a kernel matrix; unitary to better than 1e-8 (eigenvector
    /// orthonormality is checked at construction to 1e-10).
    pub fn kernel(&self, t: f64) -> KernelMatrix {
        let n = self.grid.n_points();
        let mut phased = self.eigenvectors.clone();
        for (k, &e) in self.eigenvalues.iter().enumerate() {
            let ph = C64::from_polar(1.0, -e * t / self.units.hbar);
            for i in 0..n {
                phased[[i, k]] *= ph;
            }
        }
        let entries = phased.dot(&self.eigenvectors.t().mapv(|z| z.conj()));
        KernelMatrix {
            grid: self.grid,
            t,
            entries,
        }
    }

    /// Column j of U(t) (one matrix-vector product).
    pub fn column(&self, t: f64, j: usize) -> Array1<C64> {
        let n = self.grid.n_points();
        let weights: Vec<C64> = (0..n)
            .map(|k| {
                self.eigenvectors[[j, k]].conj()
                    * C64::from_polar(1.0, -self.eigenvalues[k] * t / self.units.hbar)
            })
            .collect();
        Array1::from_shape_fn(n, |i| {
            let mut acc = C64::new(0.0, 0.0);
            for (k, w) in weights.iter().enumerate() {
                acc += self.eigenvectors[[i, k]] * w;
            }
            acc
        })
    }

    /// Continuum kernel value K(x, y, t) at off-node points by bicubic
    /// (4x4 Lagrange) interpolation of entries / spacing.
    pub fn kernel_value_at(&self, t: f64, x: f64, y: f64) -> C64 {
        let n = self.grid.n_points();
        let h = self.grid.spacing();
        let (wy, j0) = lagrange4_weights((y - self.grid.x_min()) / h);
        let (wx, i0) = lagrange4_weights((x - self.grid.x_min()) / h);
        let mut val = C64::new(0.0, 0.0);
        for (b, wyb) in wy.iter().enumerate() {
            let j = (j0 + b as i64).rem_euclid(n as i64) as usize;
            let col = self.column(t, j);
            for (a, wxa) in wx.iter().enumerate() {
                let i = (i0 + a as i64).rem_euclid(n as i64) as usize;
                val += col[i] * (wxa * wyb);
            }
        }
        val / h
    }
}

fn lagrange4_weights(f: f64) -> ([f64; 4], i64) {
    let j0 = f.floor() as i64;
    let u = f - j0 as f64;
    let w = [
        -u * (u - 1.0) * (u - 2.0) / 6.0,
        (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
        -(u + 1.0) * u * (u - 2.0) / 2.0,
        (u + 1.0) * u * (u - 1.0) / 6.0,
    ];
    (w, j0 - 1)
}

/// Convenience wrapper: build the oracle and return U(t).
pub fn spectral_oracle_kernel(
    grid: &GridSpec,
    v: &PotentialSpec,
    t: f64,
    units: &PhysicalUnits,
) -> Result<KernelMatrix> {
    Ok(SpectralOracle::new(grid, v, units)?.kernel(t))
}

/// Central-window relative L2 (Frobenius) distance between two kernel
/// matrices on the same grid.
pub fn window_relative_l2(a: &KernelMatrix, b: &KernelMatrix, window: f64) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let (lo, hi) = a.grid.window_bounds(window)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in lo..hi {
        for j in lo..hi {
            num += (a.entries[[i, j]] - b.entries[[i, j]]).norm_sqr();
            den += b.entries[[i, j]].norm_sqr();
        }
    }
    Ok((num / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{free_kernel, harmonic_kernel};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn units() -> PhysicalUnits {
        PhysicalUnits::natural()
    }

    #[test]
    fn lagrangian_examples() {
        let u = units();
        assert_abs_diff_eq!(
            short_time_lagrangian(1.0, 0.0, 1.0, &PotentialSpec::Free, &u).unwrap(),
            0.5
        );
        assert_abs_diff_eq!(
            short_time_lagrangian(0.7, 0.7, 0.3, &PotentialSpec::Free, &u).unwrap(),
            0.0
        );
        // x=1, y=0, ds=0.5, m=2, V(x)=x^2: 2*(2)^2/2 - 1 = 3
        let u2 = PhysicalUnits::new(1.0, 2.0).unwrap();
        let v = PotentialSpec::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(short_time_lagrangian(1.0, 0.0, 0.5, &v, &u2).unwrap(), 3.0);
        assert!(short_time_lagrangian(0.0, 0.0, 0.0, &PotentialSpec::Free, &u).is_err());
    }

    #[test]
    fn short_time_kernel_free_case_equals_free_kernel() {
        let u = PhysicalUnits::new(0.8, 1.7).unwrap();
        for &(x, y, ds) in &[(0.3, -0.2, 0.01), (2.0, 1.0, 0.5), (0.0, 0.0, 1.0)] {
            let a = short_time_kernel(x, y, ds, &PotentialSpec::Free, &u).unwrap();
            let b = free_kernel(x, y, ds, &u).unwrap();
            assert!((a - b).norm() <= 1e-14 * b.norm());
        }
    }

    #[test]
    fn short_time_kernel_modulus_is_independent_of_position() {
        let u = units();
        let v = PotentialSpec::polynomial(vec![0.1, -0.3, 0.0, 0.2]).unwrap();
        let expect = (1.0 / (2.0 * PI * 0.01)).sqrt();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = rng.gen_range(-5.0..5.0);
            let y = rng.gen_range(-5.0..5.0);
            let k = short_time_kernel(x, y, 0.01, &v, &u).unwrap();
            assert_abs_diff_eq!(k.norm(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn short_time_kernel_matches_harmonic_closed_form_at_small_ds() {
        let u = units();
        let v = PotentialSpec::harmonic(1.0).unwrap();
        let (x, y, ds) = (0.3, -0.1, 1e-3);
        let a = short_time_kernel(x, y, ds, &v, &u).unwrap();
        let b = harmonic_kernel(x, y, ds, 1.0, &u).unwrap();
        assert!((a - b).norm() / b.norm() <= 1e-4);
    }

    #[test]
    fn sampled_slice_matrix_has_constant_column_modulus() {
        let grid = GridSpec::new(64, -4.0, 4.0).unwrap();
        let v = PotentialSpec::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let m = short_time_kernel_matrix(&grid, &v, 0.05, &units()).unwrap();
        for j in 0..64 {
            let first = m[[0, j]].norm();
            for i in 0..64 {
                assert_abs_diff_eq!(m[[i, j]].norm(), first, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn composed_kernel_single_slice_is_the_slice() {
        let grid = GridSpec::new(32, -4.0, 4.0).unwrap();
        let v = PotentialSpec::harmonic(1.0).unwrap();
        let plan = TrotterPlan::new(0.3, 1).unwrap();
        let k = composed_kernel(&grid, &v, &plan, &units()).unwrap();
        let slice = split_step_matrix(&grid, &v, 0.3, &units()).unwrap();
        assert_eq!(k.entries(), &slice);
    }

    #[test]
    fn composed_kernel_free_case_is_exact_for_any_slicing() {
        // kinetic factors commute, so N slices compose to the exact grid
        // evolution at t for every N
        let grid = GridSpec::new(64, -8.0, 8.0).unwrap();
        let u = units();
        let t = 0.7;
        let exact = kinetic_factor_matrix(&grid, t, &u);
        for n in [1usize, 2, 5, 16] {
            let plan = TrotterPlan::new(t, n).unwrap();
            let k = composed_kernel(&grid, &PotentialSpec::Free, &plan, &u).unwrap();
            let dev = k
                .entries()
                .iter()
                .zip(exact.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(dev < 1e-12, "N={n}: dev {dev:e}");
        }
    }

    #[test]
    fn composed_kernel_is_near_unitary() {
        let grid = GridSpec::new(64, -6.0, 6.0).unwrap();
        let v = PotentialSpec::harmonic(1.0).unwrap();
        let plan = TrotterPlan::new(0.5, 16).unwrap();
        let k = composed_kernel(&grid, &v, &plan, &units()).unwrap();
        assert!(k.unitarity_deviation() < 1e-10);
    }

    #[test]
    fn composed_kernel_error_vs_oracle_decreases_first_order() {
        // harmonic and quartic; window error vs the spectral oracle must
        // decrease monotonically over N in {16,32,64,128,256} at roughly
        // first order
        let grid = GridSpec::new(256, -10.0, 10.0).unwrap();
        let u = units();
        let t = 0.5;
        for (v, min_rate) in [
            (PotentialSpec::harmonic(1.0).unwrap(), 8.0),
            // the quartic's huge commutators keep small N outside the
            // asymptotic regime, so the observed rate over 16->256 is lower
            (
                PotentialSpec::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap(),
                4.0,
            ),
        ] {
            let oracle = SpectralOracle::new(&grid, &v, &u).unwrap().kernel(t);
            let mut errs = Vec::new();
            for n in [16usize, 32, 64, 128, 256] {
                let plan = TrotterPlan::new(t, n).unwrap();
                let k = composed_kernel(&grid, &v, &plan, &u).unwrap();
                errs.push(window_relative_l2(&k, &oracle, 0.5).unwrap());
            }
            for w in errs.windows(2) {
                assert!(w[1] < w[0], "{v}: errors not decreasing: {errs:?}");
            }
            let rate = errs[0] / errs[4];
            assert!(
                rate > min_rate,
                "{v}: expected rate > {min_rate} over 16->256, got {rate}"
            );
        }
    }

    #[test]
    fn split_operator_free_step_is_exact_composition() {
        let grid = GridSpec::new(128, -8.0, 8.0).unwrap();
        let u = units();
        let psi = ComplexGridVector::from_fn(grid, |x| C64::new((-x * x).exp(), 0.0)).normalized();
        let one = split_operator_step(&psi, 0.8, &PotentialSpec::Free, &u).unwrap();
        let mut many = psi.clone();
        for _ in 0..8 {
            many = split_operator_step(&many, 0.1, &PotentialSpec::Free, &u).unwrap();
        }
        let dev = one
            .values()
            .iter()
            .zip(many.values().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-12);
    }

    #[test]
    fn split_operator_preserves_norm_over_many_steps() {
        let grid = GridSpec::new(128, -8.0, 8.0).unwrap();
        let u = units();
        let v = PotentialSpec::harmonic(1.0).unwrap();
        let mut psi = ComplexGridVector::from_fn(grid, |x| {
            C64::new((-(x - 1.0) * (x - 1.0) / 2.0).exp(), 0.0)
        })
        .normalized();
        for _ in 0..10_000 {
            psi = split_operator_step(&psi, 1e-3, &v, &u).unwrap();
        }
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_state_center_follows_the_classical_trajectory() {
        // harmonic omega=1, Gaussian centered at x0=1: <x>(t) = x0 cos(t);
        // after one full period the center returns to x0 within 1e-4
        let grid = GridSpec::new(512, -10.0, 10.0).unwrap();
        let u = units();
        let v = PotentialSpec::harmonic(1.0).unwrap();
        let x0 = 1.0;
        let mut psi =
            ComplexGridVector::from_fn(grid, |x| C64::new((-(x - x0) * (x - x0) / 2.0).exp(), 0.0))
                .normalized();
        let ds = 1e-3;
        let steps = (2.0 * PI / ds).round() as usize;
        for _ in 0..steps {
            psi = split_operator_step(&psi, ds, &v, &u).unwrap();
        }
        let h = grid.spacing();
        let center: f64 = grid
            .nodes()
            .zip(psi.values().iter())
            .map(|(x, z)| x * z.norm_sqr() * h)
            .sum();
        let expect = x0 * (ds * steps as f64).cos();
        assert!(
            (center - expect).abs() < 1e-4,
            "center {center} vs {expect}"
        );
    }

    #[test]
    fn oracle_identity_group_law_and_reversal() {
        let grid = GridSpec::new(64, -6.0, 6.0).unwrap();
        let u = units();
        let v = PotentialSpec::harmonic(1.0).unwrap();
        let oracle = SpectralOracle::new(&grid, &v, &u).unwrap();
        // t = 0 is the identity
        let id = oracle.kernel(0.0);
        for i in 0..64 {
            for j in 0..64 {
                let expect = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                assert!((id.entries()[[i, j]] - expect).norm() < 1e-12);
            }
        }
        // group law
        let u1 = oracle.kernel(0.3);
        let u2 = oracle.kernel(0.45);
        let u12 = oracle.kernel(0.75);
        let prod = u1.entries().dot(u2.entries());
        let dev = prod
            .iter()
            .zip(u12.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-10);
        // U(t)^dagger = U(-t)
        let fwd = oracle.kernel(0.6);
        let bwd = oracle.kernel(-0.6);
        let dev = fwd
            .entries()
            .t()
            .mapv(|z| z.conj())
            .iter()
            .zip(bwd.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-12);
        assert!(fwd.unitarity_deviation() < 1e-10);
    }

    #[test]
    fn oracle_free_kernel_matches_the_spectral_circulant() {
        // two independent routes to the same grid unitary: dense
        // eigendecomposition vs the FFT symbol
        let grid = GridSpec::new(64, -8.0, 8.0).unwrap();
        let u = units();
        let oracle = SpectralOracle::new(&grid, &PotentialSpec::Free, &u).unwrap();
        let a = oracle.kernel(0.4);
        let b = kinetic_factor_matrix(&grid, 0.4, &u);
        let dev = a
            .entries()
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-9, "dev {dev:e}");
    }

    #[test]
    fn oracle_columns_match_full_kernel() {
        let grid = GridSpec::new(48, -5.0, 5.0).unwrap();
        let v = PotentialSpec::polynomial(vec![0.0, 0.5, 0.25]).unwrap();
        let oracle = SpectralOracle::new(&grid, &v, &units()).unwrap();
        let full = oracle.kernel(0.37);
        let col = oracle.column(0.37, 11);
        for i in 0..48 {
            assert!((full.entries()[[i, 11]] - col[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_guards_dense_cost() {
        let grid = GridSpec::new(4096, -10.0, 10.0).unwrap();
        assert!(matches!(
            SpectralOracle::new(&grid, &PotentialSpec::Free, &units()),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn split_operator_agrees_with_composed_kernel_on_states() {
        // both are the same first-order scheme; applied to a vector they
        // agree far within 10x of the slice error vs the oracle
        let grid = GridSpec::new(128, -8.0, 8.0).unwrap();
        let u = units();
        let v = PotentialSpec::harmonic(1.0).unwrap();
        let t = 0.5;
        let n = 64;
        let psi =
            ComplexGridVector::from_fn(grid, |x| C64::new((-(x - 0.5) * (x - 0.5)).exp(), 0.0))
                .normalized();
        let plan = TrotterPlan::new(t, n).unwrap();
        let composed = composed_kernel(&grid, &v, &plan, &u)
            .unwrap()
            .apply(&psi)
            .unwrap();
        let mut split = psi.clone();
        for _ in 0..n {
            split = split_operator_step(&split, t / n as f64, &v, &u).unwrap();
        }
        let oracle = SpectralOracle::new(&grid, &v, &u)
            .unwrap()
            .kernel(t)
            .apply(&psi)
            .unwrap();
        let err_slice: f64 = composed
            .values()
            .iter()
            .zip(oracle.values().iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let err_cross: f64 = composed
            .values()
            .iter()
            .zip(split.values().iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(
            err_cross <= 10.0 * err_slice,
            "cross {err_cross:e} vs slice {err_slice:e}"
        );
    }

    #[test]
    fn potential_scaling_maps_coefficients() {
        let u = units();
        // harmonic: V_t is harmonic with omega*t
        let v = PotentialSpec::harmonic(2.0).unwrap();
        match v.scaled(0.25).unwrap() {
            PotentialSpec::Harmonic { omega } => assert_abs_diff_eq!(omega, 0.5),
            other => panic!("unexpected {other:?}"),
        }
        // polynomial: c_j -> t^(1+j/2) c_j; check by evaluating both forms
        let v = PotentialSpec::polynomial(vec![1.0, -2.0, 0.0, 0.5]).unwrap();
        let t = 0.3;
        let vt = v.scaled(t).unwrap();
        for &x in &[0.0, 0.7, -1.3, 2.1] {
            let direct = t * v.evaluate(t.sqrt() * x, &u);
            assert_abs_diff_eq!(vt.evaluate(x, &u), direct, epsilon = 1e-14);
        }
        assert!(matches!(
            PotentialSpec::tabulated(GridSpec::new(8, 0.0, 1.0).unwrap(), vec![0.0; 8])
                .unwrap()
                .scaled(0.5),
            Err(Error::UnsupportedPotential { .. })
        ));
    }

    #[test]
    fn polynomial_degree_guard() {
        assert!(PotentialSpec::polynomial(vec![0.0; 10]).is_err());
        assert!(PotentialSpec::polynomial(vec![0.0; 9]).is_ok());
    }

    #[test]
    fn tabulated_potential_requires_matching_grid() {
        let g1 = GridSpec::new(16, 0.0, 1.0).unwrap();
        let g2 = GridSpec::new(16, 0.0, 2.0).unwrap();
        let v = PotentialSpec::tabulated(g1, vec![1.0; 16]).unwrap();
        assert!(matches!(
            v.evaluate_on_grid(&g2, &units()),
            Err(Error::GridMismatch)
        ));
        assert!(v.evaluate_on_grid(&g1, &units()).is_ok());
    }
}
