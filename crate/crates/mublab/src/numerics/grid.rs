//! Discretized 1D position space and complex amplitudes on it.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants of the single-particle problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalUnits {
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicalUnits {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0) || !(mass > 0.0) {
            return Err(Error::InvalidParameter {
                what: format!(
                    "units must satisfy hbar > 0 and mass > 0, got hbar={hbar}, mass={mass}"
                ),
            });
        }
        Ok(Self { hbar, mass })
    }

    /// hbar = mass = 1.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

/// Boundary handling of the position grid. Only periodic in v1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    Periodic,
}

/// Uniform periodic position grid on [x_min, x_max).
///
/// Nodes are x_j = x_min + j * spacing for j = 0..n_points, with
/// spacing = (x_max - x_min) / n_points; x_max itself is the periodic image
/// of x_min and carries no node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpecJson", into = "GridSpecJson")]
pub struct GridSpec {
    n_points: usize,
    x_min: f64,
    x_max: f64,
    boundary: Boundary,
}

/// Wire format of a grid; deserialization funnels through [`GridSpec::new`]
/// so the invariants hold for parsed configs too.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpecJson {
    n_points: usize,
    x_min: f64,
    x_max: f64,
}

impl TryFrom<GridSpecJson> for GridSpec {
    type Error = String;

    fn try_from(j: GridSpecJson) -> std::result::Result<Self, String> {
        GridSpec::new(j.n_points, j.x_min, j.x_max).map_err(|e| e.to_string())
    }
}

impl From<GridSpec> for GridSpecJson {
    fn from(g: GridSpec) -> Self {
        Self {
            n_points: g.n_points,
            x_min: g.x_min,
            x_max: g.x_max,
        }
    }
}

impl GridSpec {
    pub fn new(n_points: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_points < 8 {
            return Err(Error::InvalidParameter {
                what: format!("grid needs at least 8 points, got {n_points}"),
            });
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidParameter {
                what: format!("grid interval invalid: [{x_min}, {x_max}]"),
            });
        }
        Ok(Self {
            n_points,
            x_min,
            x_max,
            boundary: Boundary::Periodic,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    /// Period of the grid, x_max - x_min.
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn node(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|j| self.node(j))
    }

    /// Index of the node nearest to x (periodic wrap).
    pub fn nearest_node(&self, x: f64) -> usize {
        let f = (x - self.x_min) / self.spacing();
        let j = f.round() as i64;
        j.rem_euclid(self.n_points as i64) as usize
    }

    /// Index range [lo, hi) of the centered window covering `fraction` of the grid.
    pub fn window_bounds(&self, fraction: f64) -> Result<(usize, usize)> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidParameter {
                what: format!("window fraction must lie in (0, 1], got {fraction}"),
            });
        }
        let m = ((self.n_points as f64 * fraction).round() as usize).clamp(1, self.n_points);
        let lo = (self.n_points - m) / 2;
        Ok((lo, lo + m))
    }
}

/// Complex amplitudes sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGridVector {
    grid: GridSpec,
    values: Array1<C64>,
}

impl ComplexGridVector {
    pub fn new(grid: GridSpec, values: Array1<C64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: grid.n_points(),
            });
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter {
                what: "grid vector has non-finite entries".into(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &Array1<C64> {
        &self.values
    }

    pub fn into_values(self) -> Array1<C64> {
        self.values
    }

    /// Quadrature norm sqrt(<v, v>).
    pub fn norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        (s * self.grid.spacing()).sqrt()
    }

    /// Rescale to unit quadrature norm.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            grid: self.grid,
            values: self.values.mapv(|z| z / n),
        }
    }
}

/// Discretized <v|w>: conjugate-linear in the first argument,
/// sum conj(v) * w * spacing.
pub fn inner_product(v: &ComplexGridVector, w: &ComplexGridVector) -> Result<C64> {
    if v.grid != w.grid {
        return Err(Error::GridMismatch);
    }
    let mut acc = C64::new(0.0, 0.0);
    for (a, b) in v.values.iter().zip(w.values.iter()) {
        acc += a.conj() * b;
    }
    Ok(acc * v.grid.spacing())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(GridSpec::new(4, 0.0, 1.0).is_err());
        assert!(GridSpec::new(64, 1.0, 1.0).is_err());
        assert!(GridSpec::new(64, 2.0, 1.0).is_err());
        assert!(PhysicalUnits::new(0.0, 1.0).is_err());
        assert!(PhysicalUnits::new(1.0, -2.0).is_err());
    }

    #[test]
    fn spacing_and_nodes() {
        let g = GridSpec::new(8, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(g.spacing(), 0.25);
        assert_abs_diff_eq!(g.node(0), -1.0);
        assert_abs_diff_eq!(g.node(7), 0.75);
        assert_eq!(g.nearest_node(0.76), 7);
        // periodic wrap: x_max maps back to node 0
        assert_eq!(g.nearest_node(1.0), 0);
    }

    #[test]
    fn window_bounds_cover_center() {
        let g = GridSpec::new(512, -8.0, 8.0).unwrap();
        let (lo, hi) = g.window_bounds(0.5).unwrap();
        assert_eq!((lo, hi), (128, 384));
        assert!(g.window_bounds(0.0).is_err());
        assert!(g.window_bounds(1.5).is_err());
    }

    #[test]
    fn inner_product_normalization_and_orthogonality() {
        let g = GridSpec::new(256, -10.0, 10.0).unwrap();
        let gauss =
            ComplexGridVector::from_fn(g, |x| C64::new((-x * x / 2.0).exp(), 0.0)).normalized();
        let ip = inner_product(&gauss, &gauss).unwrap();
        assert_abs_diff_eq!(ip.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-14);

        // disjoint support
        let left =
            ComplexGridVector::from_fn(g, |x| C64::new(if x < -1.0 { 1.0 } else { 0.0 }, 0.0));
        let right =
            ComplexGridVector::from_fn(g, |x| C64::new(if x > 1.0 { 1.0 } else { 0.0 }, 0.0));
        let ip = inner_product(&left, &right).unwrap();
        assert_eq!(ip, C64::new(0.0, 0.0));
    }

    #[test]
    fn inner_product_gaussian_overlap_matches_analytic() {
        // normalized unit-width Gaussians centered at 0 and 1: overlap e^{-1/4}
        let g = GridSpec::new(1024, -16.0, 16.0).unwrap();
        let norm = PI.powf(-0.25);
        let a = ComplexGridVector::from_fn(g, |x| C64::new(norm * (-x * x / 2.0).exp(), 0.0));
        let b = ComplexGridVector::from_fn(g, |x| {
            C64::new(norm * (-(x - 1.0) * (x - 1.0) / 2.0).exp(), 0.0)
        });
        let ip = inner_product(&a, &b).unwrap();
        assert_abs_diff_eq!(ip.re, (-0.25f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let g = GridSpec::new(64, 0.0, 1.0).unwrap();
        let v = ComplexGridVector::from_fn(g, |x| C64::new(x, x * x));
        let w = ComplexGridVector::from_fn(g, |x| C64::new(1.0 - x, 0.3));
        let scale = C64::new(0.7, -1.2);
        let sv = ComplexGridVector::new(g, v.values().mapv(|z| z * scale)).unwrap();
        let lhs = inner_product(&sv, &w).unwrap();
        let rhs = scale.conj() * inner_product(&v, &w).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn inner_product_with_itself_is_real_and_nonnegative() {
        use rand::{Rng, SeedableRng};
        let g = GridSpec::new(64, -2.0, 2.0).unwrap();
        for seed in 0..20u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let vals: Array1<C64> = (0..64)
                .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let v = ComplexGridVector::new(g, vals).unwrap();
            let ip = inner_product(&v, &v).unwrap();
            assert!(ip.im.abs() <= 1e-15 * ip.re.abs());
            assert!(ip.re >= 0.0);
        }
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let g1 = GridSpec::new(64, 0.0, 1.0).unwrap();
        let g2 = GridSpec::new(64, 0.0, 2.0).unwrap();
        let v = ComplexGridVector::from_fn(g1, |_| C64::new(1.0, 0.0));
        let w = ComplexGridVector::from_fn(g2, |_| C64::new(1.0, 0.0));
        assert!(matches!(inner_product(&v, &w), Err(Error::GridMismatch)));
    }
}
