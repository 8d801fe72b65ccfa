//! Dense complex matrix helpers: Hermitian eigendecomposition, unitarity
//! checks, matrix powers.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Eigendecomposition of a Hermitian matrix. `vectors` holds orthonormal
/// eigenvector columns, `values` the real eigenvalues in matching order.
pub struct HermitianEigen {
    pub values: Array1<f64>,
    pub vectors: Array2<C64>,
}

/// Hermitize (m + m^dagger)/2 and diagonalize.
pub fn hermitian_eigen(m: &Array2<C64>) -> HermitianEigen {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let mut dm = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            dm[(i, j)] = 0.5 * (m[[i, j]] + m[[j, i]].conj());
        }
    }
    let eig = SymmetricEigen::new(dm);
    let values = Array1::from_iter(eig.eigenvalues.iter().cloned());
    let vectors = Array2::from_shape_fn((n, n), |(i, j)| eig.eigenvectors[(i, j)]);
    HermitianEigen { values, vectors }
}

/// max |(U^dagger U - I)_{ij}|.
pub fn unitarity_deviation(u: &Array2<C64>) -> f64 {
    let n = u.nrows();
    let prod = u.t().mapv(|z| z.conj()).dot(u);
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            dev = dev.max((prod[[i, j]] - expect).norm());
        }
    }
    dev
}

/// m^p by binary powering (p >= 1); the association of the product is fixed
/// by the exponent bits, so results are bitwise deterministic.
pub fn matrix_power(m: &Array2<C64>, p: usize) -> Array2<C64> {
    assert!(p >= 1);
    let mut base = m.clone();
    let mut acc: Option<Array2<C64>> = None;
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                Some(a) => a.dot(&base),
                None => base.clone(),
            });
        }
        e >>= 1;
        if e > 0 {
            base = base.dot(&base);
        }
    }
    acc.expect("p >= 1")
}
