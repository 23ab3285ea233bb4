//! Finiteness conditions on the spectral side ("gems").

use num_traits::Float;

use crate::measures::{MeasureS1, ReferenceLaw};
use crate::quadrature::{CosineQuadrature, CosineRule};
use crate::Result;

/// Outcome of [`gem_diagnostics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GemReport {
    /// Outlier ordering, domain and total mass checks.
    pub membership: bool,
    /// `sum (lambda+ - alpha+)^{3/2} + sum (alpha- - lambda-)^{3/2}`.
    pub outlier_sum: f64,
    /// No outlier sits on or beyond a domain boundary (or next to a hard edge).
    pub hard_edge_guard: bool,
    pub outlier_condition: bool,
    /// `int sqrt((alpha+ - x)(x - alpha-)) / w(x) log f(x) dx`.
    pub szego_integral: f64,
    pub szego_condition: bool,
}

impl GemReport {
    pub fn all_hold(&self) -> bool {
        self.membership && self.outlier_condition && self.szego_condition
    }
}

/// Checks membership, the `3/2`-power outlier condition and the weighted
/// Szego condition of `mu` relative to `law`.
pub fn gem_diagnostics(law: &ReferenceLaw, mu: &MeasureS1) -> Result<GemReport> {
    let (lo, hi) = law.support();
    let (blo, bhi) = law.domain();
    let (hard_lo, hard_hi) = law.hard_edges();
    let membership = mu.membership(law).holds();

    let plus = mu
        .atoms_plus()
        .iter()
        .map(|a| (a.position - hi).max(0.0).powf(1.5));
    let minus = mu
        .atoms_minus()
        .iter()
        .map(|a| (lo - a.position).max(0.0).powf(1.5));
    let outlier_sum: f64 = plus.chain(minus).sum();
    let guard_plus = mu.atoms_plus().iter().all(|a| !hard_hi && a.position < bhi);
    let guard_minus = mu
        .atoms_minus()
        .iter()
        .all(|a| !hard_lo && a.position > blo);
    let hard_edge_guard = guard_plus && guard_minus;

    let weight = |x: f64| match law {
        ReferenceLaw::MarchenkoPastur { .. } => x,
        ReferenceLaw::KestenMcKay { .. } | ReferenceLaw::Arcsine01 => x * (1.0 - x),
        _ => 1.0,
    };
    let rule = CosineRule::new(lo, hi, CosineQuadrature::default());
    let mut szego_integral = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let f = mu.ac_density(x)?;
        if !(f > 0.0) {
            szego_integral = f64::NEG_INFINITY;
            break;
        }
        szego_integral += w * ((hi - x) * (x - lo)).max(0.0).sqrt() / weight(x) * f.ln();
    }
    Ok(GemReport {
        membership,
        outlier_sum,
        hard_edge_guard,
        outlier_condition: hard_edge_guard && outlier_sum.is_finite(),
        szego_integral,
        szego_condition: szego_integral.is_finite(),
    })
}
