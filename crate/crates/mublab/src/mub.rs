//! Finite-dimensional mutually unbiased bases: overlap matrices, the
//! unbiasedness deficit, complex Hadamard verification, phase extraction,
//! and the basis-insertion identity.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::linalg::unitarity_deviation;

/// Orthonormality tolerance enforced on basis columns.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// An orthonormal basis of C^M, stored as the M x M matrix whose columns are
/// the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    columns: Array2<C64>,
}

impl Basis {
    /// Validate ||B^dagger B - I||_max <= 1e-10 and wrap.
    pub fn new(columns: Array2<C64>) -> Result<Self> {
        if columns.nrows() != columns.ncols() {
            return Err(Error::DimensionMismatch {
                left: columns.nrows(),
                right: columns.ncols(),
            });
        }
        let dev = unitarity_deviation(&columns);
        if dev > ORTHONORMALITY_TOL {
            return Err(Error::InvalidParameter {
                what: format!("columns are not orthonormal: deviation {dev:e}"),
            });
        }
        Ok(Self { columns })
    }

    pub fn dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn columns(&self) -> &Array2<C64> {
        &self.columns
    }

    /// The standard (identity) basis.
    pub fn identity(dim: usize) -> Self {
        Self {
            columns: Array2::eye(dim),
        }
    }

    pub fn column(&self, j: usize) -> ndarray::ArrayView1<'_, C64> {
        self.columns.column(j)
    }
}

/// The Fourier basis: column b has entries exp(2 pi i a b / M) / sqrt(M).
pub fn fourier_basis(dim: usize) -> Basis {
    let norm = 1.0 / (dim as f64).sqrt();
    let columns = Array2::from_shape_fn((dim, dim), |(a, b)| {
        // reduce a*b mod M before the trig call; exact in integers
        let phase = 2.0 * PI * ((a * b) % dim) as f64 / dim as f64;
        C64::from_polar(norm, phase)
    });
    Basis { columns }
}

/// A Haar-ish random orthonormal basis: modified Gram-Schmidt (with one
/// reorthogonalization pass) applied to a matrix of seeded standard complex
/// Gaussian entries. The seed is required so derived expectations are
/// reproducible.
pub fn random_basis(dim: usize, seed: u64) -> Basis {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut m = Array2::from_shape_fn((dim, dim), |_| {
        C64::new(normal.sample(&mut rng), normal.sample(&mut rng))
    });
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj = C64::new(0.0, 0.0);
                for i in 0..dim {
                    proj += m[[i, k]].conj() * m[[i, j]];
                }
                for i in 0..dim {
                    let sub = proj * m[[i, k]];
                    m[[i, j]] -= sub;
                }
            }
        }
        let norm: f64 = (0..dim).map(|i| m[[i, j]].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..dim {
            m[[i, j]] /= norm;
        }
    }
    Basis { columns: m }
}

/// Matrix of overlaps <e_a | f_b> = (B1^dagger B2)_{ab}; unitary as a product
/// of unitaries.
pub fn overlap_matrix(b1: &Basis, b2: &Basis) -> Result<Array2<C64>> {
    if b1.dim() != b2.dim() {
        return Err(Error::DimensionMismatch {
            left: b1.dim(),
            right: b2.dim(),
        });
    }
    Ok(b1.columns.t().mapv(|z| z.conj()).dot(&b2.columns))
}

/// Unbiasedness deficit: max over (a,b) of | M |<e_a|f_b>|^2 - 1 |.
/// Zero iff the bases are exactly mutually unbiased.
pub fn mub_deficit(b1: &Basis, b2: &Basis) -> Result<f64> {
    let overlap = overlap_matrix(b1, b2)?;
    let m = b1.dim() as f64;
    Ok(overlap
        .iter()
        .map(|z| (m * z.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max))
}

/// True iff `m` is unitary within `tol` and every entry has modulus
/// 1/sqrt(M) within `tol` (the normalized complex Hadamard property).
pub fn is_hadamard(m: &Array2<C64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return false;
    }
    if unitarity_deviation(m) > tol {
        return false;
    }
    let expect = 1.0 / (m.nrows() as f64).sqrt();
    m.iter().all(|z| (z.norm() - expect).abs() <= tol)
}

/// Real phases L(a,b) in (-pi, pi] extracted from an unbiased pair:
/// <e_a|f_b> = exp(i L(a,b)) / sqrt(M).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix {
    phases: Array2<f64>,
}

impl PhaseMatrix {
    pub fn dim(&self) -> usize {
        self.phases.nrows()
    }

    pub fn phases(&self) -> &Array2<f64> {
        &self.phases
    }

    /// Rebuild exp(i L(a,b)) / sqrt(M); unitary within the extraction
    /// tolerance for an exactly unbiased pair.
    pub fn reconstruct(&self) -> Array2<C64> {
        let norm = 1.0 / (self.dim() as f64).sqrt();
        self.phases.mapv(|l| C64::from_polar(norm, l))
    }
}

/// Extract the phase matrix of an unbiased pair; fails with `NotUnbiased`
/// when the deficit exceeds `tol`.
pub fn phase_lagrangian(b1: &Basis, b2: &Basis, tol: f64) -> Result<PhaseMatrix> {
    let deficit = mub_deficit(b1, b2)?;
    if deficit > tol {
        return Err(Error::NotUnbiased { deficit, tol });
    }
    let overlap = overlap_matrix(b1, b2)?;
    Ok(PhaseMatrix {
        phases: overlap.mapv(|z| z.arg()),
    })
}

/// Evaluate <Phi|Psi> through a chain of inserted complete bases:
/// sum over all intermediate labels of <Phi|x_1><x_1|x_2>...<x_N|Psi>,
/// carried out as a sequence of matrix-vector products. The completeness
/// relation makes the value independent of the bases.
pub fn insertion_identity(phi: &Array1<C64>, psi: &Array1<C64>, bases: &[Basis]) -> Result<C64> {
    let dim = phi.len();
    if psi.len() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: psi.len(),
        });
    }
    for b in bases {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: b.dim(),
            });
        }
    }
    let phi_conj = phi.mapv(|z| z.conj());
    if bases.is_empty() {
        return Ok(phi_conj.dot(psi));
    }
    // v = B_N^dagger psi, then v <- B_k^dagger (B_{k+1} v) down the chain,
    // finally <Phi| B_1 v
    let mut v = bases[bases.len() - 1]
        .columns
        .t()
        .mapv(|z| z.conj())
        .dot(psi);
    for k in (0..bases.len() - 1).rev() {
        let expanded = bases[k + 1].columns.dot(&v);
        v = bases[k].columns.t().mapv(|z| z.conj()).dot(&expanded);
    }
    Ok(phi_conj.dot(&bases[0].columns.dot(&v)))
}

/// JSON wire format for complex matrices: { "dim": M, "re": [[..]], "im": [[..]] }.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Array2<C64>) -> Self {
        let dim = m.nrows();
        let re = (0..dim)
            .map(|i| (0..m.ncols()).map(|j| m[[i, j]].re).collect())
            .collect();
        let im = (0..dim)
            .map(|i| (0..m.ncols()).map(|j| m[[i, j]].im).collect())
            .collect();
        Self { dim, re, im }
    }

    pub fn to_matrix(&self) -> Result<Array2<C64>> {
        let n = self.dim;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::DimensionMismatch {
                left: self.re.len(),
                right: n,
            });
        }
        let mut m = Array2::zeros((n, n));
        for i in 0..n {
            if self.re[i].len() != n || self.im[i].len() != n {
                return Err(Error::DimensionMismatch {
                    left: self.re[i].len(),
                    right: n,
                });
            }
            for j in 0..n {
                m[[i, j]] = C64::new(self.re[i][j], self.im[i][j]);
            }
        }
        Ok(m)
    }
}
