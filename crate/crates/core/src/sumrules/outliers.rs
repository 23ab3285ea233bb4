//! Outlier rate functions `F+-` of the classical laws.

use num_traits::Float;

use crate::measures::ReferenceLaw;
use crate::quadrature::{adaptive, AdaptiveTolerance};
use crate::Result;

/// `F_H+(x) = (x/2) sqrt(x^2 - 4) - 2 log((x + sqrt(x^2 - 4)) / 2)` for
/// `x >= 2`, `+inf` below.
pub fn f_hermite_plus(x: f64) -> f64 {
    if !(x >= 2.0) {
        return f64::INFINITY;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    let root = (x * x - 4.0).sqrt();
    0.5 * x * root - 2.0 * (0.5 * x).acosh()
}

/// Rate of an outlier at `x` above the support.
pub fn f_plus(law: &ReferenceLaw, x: f64) -> Result<f64> {
    if let ReferenceLaw::SemiCircle = law {
        return Ok(f_hermite_plus(x));
    }
    f_plus_quadrature(law, x)
}

/// Rate of an outlier at `x` below the support.
pub fn f_minus(law: &ReferenceLaw, x: f64) -> Result<f64> {
    if let ReferenceLaw::SemiCircle = law {
        return Ok(f_hermite_plus(-x));
    }
    f_minus_quadrature(law, x)
}

/// `int_{alpha+}^x S(t) sqrt((t - alpha-)(t - alpha+)) dt` by adaptive
/// Gauss-Kronrod after `t = alpha+ + s^2`, with no closed forms involved.
pub fn f_plus_quadrature(law: &ReferenceLaw, x: f64) -> Result<f64> {
    let (lo, hi) = law.support();
    let (_, bhi) = law.domain();
    if x.is_nan() || x < hi || x > bhi {
        return Ok(f64::INFINITY);
    }
    if x == hi {
        return Ok(0.0);
    }
    if x == bhi || x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    edge_integral(law, hi, lo, x, 1.0)
}

/// Mirror image of [`f_plus_quadrature`] below `alpha-`.
pub fn f_minus_quadrature(law: &ReferenceLaw, x: f64) -> Result<f64> {
    let (lo, hi) = law.support();
    let (blo, _) = law.domain();
    if x.is_nan() || x > lo || x < blo {
        return Ok(f64::INFINITY);
    }
    if x == lo {
        return Ok(0.0);
    }
    if x == blo || x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    edge_integral(law, lo, hi, x, -1.0)
}

fn edge_integral(law: &ReferenceLaw, edge: f64, other: f64, x: f64, dir: f64) -> Result<f64> {
    let top = (dir * (x - edge)).sqrt();
    let mut failure = None;
    let integral = adaptive(0.0, top, AdaptiveTolerance::default(), |s| {
        let t = edge + dir * s * s;
        match law.s_factor(t) {
            Ok(sf) => 2.0 * s * s * sf * (dir * (t - other)).sqrt(),
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(if integral.value.is_finite() {
        integral.value
    } else {
        f64::INFINITY
    })
}
