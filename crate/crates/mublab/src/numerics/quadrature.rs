//! Quadrature rules and the continuous (Riemann) product.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Composite trapezoid of `f` over [a, b] with `panels` uniform panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 1, "trapezoid needs at least one panel");
    let h = (b - a) / panels as f64;
    let mut acc = 0.5 * (f(a) + f(b));
    for i in 1..panels {
        acc += f(a + i as f64 * h);
    }
    acc * h
}

/// Trapezoid over sample values at uniform nodes spanning [a, b].
pub fn trapezoid_samples(samples: &[f64], a: f64, b: f64) -> f64 {
    assert!(samples.len() >= 2);
    let h = (b - a) / (samples.len() - 1) as f64;
    let inner: f64 = samples[1..samples.len() - 1].iter().sum();
    (0.5 * (samples[0] + samples[samples.len() - 1]) + inner) * h
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial roots.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = p1;
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature of a complex integrand.
pub fn integrate_gl(f: impl Fn(f64) -> C64, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += f(mid + 0.5 * h * x) * (0.5 * h * w);
        }
    }
    acc
}

/// Real function sampled at uniform nodes over [a, b].
///
/// Values between nodes are linearly interpolated, so quadrature over an
/// arbitrary partition count is defined; it is exact at the nodes when
/// `partitions + 1` equals the sample count.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    a: f64,
    b: f64,
    samples: Vec<f64>,
}

impl SampledFunction {
    pub fn new(a: f64, b: f64, samples: Vec<f64>) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidParameter {
                what: format!("interval invalid: [{a}, {b}]"),
            });
        }
        if samples.len() < 2 {
            return Err(Error::InvalidParameter {
                what: format!("need at least 2 samples, got {}", samples.len()),
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "samples must be finite".into(),
            });
        }
        Ok(Self { a, b, samples })
    }

    pub fn from_fn(a: f64, b: f64, n_samples: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::InvalidParameter {
                what: format!("need at least 2 samples, got {n_samples}"),
            });
        }
        let h = (b - a) / (n_samples - 1) as f64;
        let samples = (0..n_samples).map(|i| f(a + i as f64 * h)).collect();
        Self::new(a, b, samples)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Linear interpolation, clamped to the interval.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.samples.len();
        let h = (self.b - self.a) / (n - 1) as f64;
        let f = ((t - self.a) / h).clamp(0.0, (n - 1) as f64);
        let j = (f.floor() as usize).min(n - 2);
        let u = f - j as f64;
        self.samples[j] * (1.0 - u) + self.samples[j + 1] * u
    }
}

/// Riemann continuous product: the limit of prod f(t_i)^(dt) over refinements,
/// equal to exp(int ln f dt). Evaluated as the exponential of the composite
/// trapezoid of ln f over `partitions` panels.
pub fn continuous_product(f: &SampledFunction, partitions: usize) -> Result<f64> {
    if partitions == 0 {
        return Err(Error::InvalidParameter {
            what: "partitions must be >= 1".into(),
        });
    }
    for (index, &value) in f.samples().iter().enumerate() {
        if value <= 0.0 {
            return Err(Error::NonPositiveSample { index, value });
        }
    }
    let (a, b) = f.interval();
    let integral = trapezoid(|t| f.value_at(t).ln(), a, b, partitions);
    Ok(integral.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn continuous_product_of_constants() {
        let one = SampledFunction::from_fn(0.0, 1.0, 129, |_| 1.0).unwrap();
        assert_abs_diff_eq!(continuous_product(&one, 128).unwrap(), 1.0, epsilon = 1e-14);
        let two = SampledFunction::from_fn(0.0, 1.0, 129, |_| 2.0).unwrap();
        assert_abs_diff_eq!(continuous_product(&two, 128).unwrap(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn continuous_product_exponential_identity() {
        // prod (e^g)^{dt} = exp(int g dt); g(t) = t on [0,1] gives e^{1/2}
        let f = SampledFunction::from_fn(0.0, 1.0, 1025, |t| t.exp()).unwrap();
        let got = continuous_product(&f, 1024).unwrap();
        assert_abs_diff_eq!(got, 0.5f64.exp(), epsilon = 1e-6);
        // against the same quadrature applied to g directly (tighter)
        let oracle = trapezoid(|t| t, 0.0, 1.0, 1024).exp();
        assert_abs_diff_eq!(got, oracle, epsilon = 1e-13);
    }

    #[test]
    fn continuous_product_rejects_non_positive_samples() {
        let f = SampledFunction::new(0.0, 1.0, vec![1.0, 0.0, 2.0]).unwrap();
        assert!(matches!(
            continuous_product(&f, 2),
            Err(Error::NonPositiveSample { index: 1, .. })
        ));
    }

    #[test]
    fn refinement_converges() {
        let f = SampledFunction::from_fn(0.0, 1.0, 4097, |t| (2.0 + t.sin()).exp()).unwrap();
        let exact = integrate_gl(|t| C64::new(2.0 + t.sin(), 0.0), 0.0, 1.0, 64, 16)
            .re
            .exp();
        let coarse = (continuous_product(&f, 64).unwrap() - exact).abs();
        let fine = (continuous_product(&f, 4096).unwrap() - exact).abs();
        assert!(fine < coarse);
        // trapezoid error ~5e-9 on the exponent, amplified by exp(I) ~ 11.7
        assert!(fine < 1e-7);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // order-n GL is exact up to degree 2n-1
        let (nodes, weights) = gauss_legendre(8);
        let int: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(14))
            .sum();
        assert_abs_diff_eq!(int, 2.0 / 15.0, epsilon = 1e-14);
        let sum_w: f64 = weights.iter().sum();
        assert_abs_diff_eq!(sum_w, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn composite_gl_matches_analytic() {
        let got = integrate_gl(|x| C64::new(x.cos(), x.sin()), 0.0, 2.0, 8, 16);
        assert_abs_diff_eq!(got.re, 2.0f64.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(got.im, 1.0 - 2.0f64.cos(), epsilon = 1e-14);
    }

    proptest! {
        // product rule: cp(f*g) = cp(f)*cp(g) within quadrature tolerance
        #[test]
        fn continuous_product_is_multiplicative(c1 in 0.2f64..5.0, c2 in 0.2f64..5.0, k in 1.0f64..4.0) {
            let n = 513;
            let f = SampledFunction::from_fn(0.0, 1.0, n, |t| c1 + (k * t).sin().powi(2)).unwrap();
            let g = SampledFunction::from_fn(0.0, 1.0, n, |t| c2 * (1.0 + 0.5 * (k * t).cos())).unwrap();
            let fg = SampledFunction::from_fn(0.0, 1.0, n, |t| {
                (c1 + (k * t).sin().powi(2)) * (c2 * (1.0 + 0.5 * (k * t).cos()))
            }).unwrap();
            let lhs = continuous_product(&fg, n - 1).unwrap();
            let rhs = continuous_product(&f, n - 1).unwrap() * continuous_product(&g, n - 1).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs());
        }
    }
}
