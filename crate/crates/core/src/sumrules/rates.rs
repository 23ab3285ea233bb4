//! Scalar rate functions entering the coefficient sides.

use num_traits::Float;

use crate::jacobi::kmk_alphas;

/// `G(x) = x - 1 - log x` for `x > 0`, `+inf` otherwise.
pub fn rate_g(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::INFINITY;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    let h = x - 1.0;
    h - h.ln_1p()
}

/// `L0*(x) = x^2 / 2`.
pub fn rate_l0star(x: f64) -> f64 {
    0.5 * x * x
}

/// Rate of the odd Verblunsky coefficients; vanishes at
/// `alpha_odd = -(k1 + k2) / (2 + k1 + k2)`.
pub fn rate_h1(x: f64, kappa1: f64, kappa2: f64) -> f64 {
    if !(x > -1.0 && x < 1.0) {
        return f64::INFINITY;
    }
    let (_, odd) = kmk_alphas(kappa1, kappa2);
    -(1.0 + kappa1 + kappa2) * ((1.0 - x) / (1.0 - odd)).ln() - ((1.0 + x) / (1.0 + odd)).ln()
}

/// Rate of the even Verblunsky coefficients; vanishes at
/// `alpha_even = (k2 - k1) / (2 + k1 + k2)`.
pub fn rate_h2(x: f64, kappa1: f64, kappa2: f64) -> f64 {
    if !(x > -1.0 && x < 1.0) {
        return f64::INFINITY;
    }
    let (even, _) = kmk_alphas(kappa1, kappa2);
    -(1.0 + kappa2) * ((1.0 + x) / (1.0 + even)).ln()
        - (1.0 + kappa1) * ((1.0 - x) / (1.0 - even)).ln()
}
