//! Oscillatory integrals with quadratic phase (Fresnel-type).
//!
//! Kernel composition integrals have the form
//!     I = int A * exp(i (a g^2 + b g + c)) dg
//! over the whole real line. The integrand never decays, so plain
//! quadrature truncated at +-W carries an O(1/(aW)) boundary error; here the
//! interior is integrated with composite Gauss-Legendre panels and the two
//! tails are summed analytically by repeated integration by parts, leaving a
//! residual O(a^2 / phi'(W)^7).

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::numerics::quadrature::gauss_legendre;

/// Closed form of int exp(i (a g^2 + b g)) dg over the real line, a != 0:
/// sqrt(pi/|a|) * exp(i sign(a) pi/4) * exp(-i b^2/(4a)).
pub fn gaussian_fresnel_integral(a: f64, b: f64) -> C64 {
    assert!(a != 0.0, "quadratic coefficient must be nonzero");
    let modulus = (PI / a.abs()).sqrt();
    C64::from_polar(modulus, a.signum() * PI / 4.0 - b * b / (4.0 * a))
}

/// Three-term integration-by-parts tail of int_{W}^{inf} (upper, sign = +1)
/// or int_{-inf}^{-W} (lower, sign = -1), given the integrand value at the
/// boundary and the phase derivative s = phi'(boundary), phi'' = 2a.
fn ibp_tail(f_boundary: C64, s: f64, a: f64, sign: f64) -> C64 {
    let s2 = s * s;
    let series = C64::new(2.0 * a / (s * s2), 1.0 / s - 12.0 * a * a / (s * s2 * s2));
    f_boundary * series * sign
}

/// Integrate f over the real line, where f(g) = A exp(i (a g^2 + b g + c))
/// asymptotically (exactly, for compositions of constant-modulus kernels).
///
/// Interior: composite Gauss-Legendre (order 16) on [-half_width, half_width]
/// with `panels` panels; tails: analytic integration-by-parts corrections.
/// Panels must resolve the fastest oscillation, roughly
/// panel length * |phi'(half_width)| <~ 5; see [`suggested_panels`].
pub fn integrate_quadratic_phase(
    f: impl Fn(f64) -> C64,
    a: f64,
    b: f64,
    half_width: f64,
    panels: usize,
) -> C64 {
    assert!(a != 0.0, "quadratic coefficient must be nonzero");
    assert!(panels >= 1);
    let (nodes, weights) = gauss_legendre(16);
    let w = half_width;
    let h = 2.0 * w / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = -w + (p as f64 + 0.5) * h;
        for (x, wt) in nodes.iter().zip(&weights) {
            acc += f(mid + 0.5 * h * x) * (0.5 * h * wt);
        }
    }
    let s_hi = 2.0 * a * w + b;
    let s_lo = -2.0 * a * w + b;
    acc + ibp_tail(f(w), s_hi, a, 1.0) + ibp_tail(f(-w), s_lo, a, -1.0)
}

/// Panel count so that the phase advances at most ~4 radians per panel.
pub fn suggested_panels(a: f64, b: f64, half_width: f64) -> usize {
    let max_slope = (2.0 * a.abs() * half_width + b.abs()).max(1.0);
    ((2.0 * half_width * max_slope / 4.0).ceil() as usize).max(8)
}
