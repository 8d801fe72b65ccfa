//! Shared numerical substrate: grids, complex amplitudes, quadrature,
//! spectral operator application, oscillatory integrals, dense linear algebra.

pub mod grid;
pub mod linalg;
pub mod oscillatory;
pub mod quadrature;
pub mod spectral;

pub use grid::{inner_product, Boundary, ComplexGridVector, GridSpec, PhysicalUnits};
pub use quadrature::{continuous_product, SampledFunction};
pub use spectral::apply_momentum_function;
