//! Both sides of the Hermite, Laguerre and Jacobi sum rules.
//!
//! The coefficient side is a sum of nonnegative terms over recursion
//! data; the spectral side is the reverse Kullback-Leibler divergence of
//! the equilibrium law plus the outlier rates `F+-` summed over the atoms
//! outside its support.

mod gem;
mod hfunctional;
mod outliers;
mod potential;
pub mod rates;
mod verify;

use alloc::vec::Vec;

pub use gem::{gem_diagnostics, GemReport};
pub use hfunctional::{h_functional, h_normalized, h_reference, h_trace_potential};
pub use outliers::{f_hermite_plus, f_minus, f_minus_quadrature, f_plus, f_plus_quadrature};
pub use potential::{effective_potential, rate_from_effective_potential, EffectivePotential, Side};
pub use rates::{rate_g, rate_h1, rate_h2, rate_l0star};
pub use verify::{
    spectral_side, verify_sum_rule, CoefficientSide, SpectralSide, SumRuleReport, Verdict,
    VerifyConfig,
};

use crate::error::invalid;
use crate::jacobi::{
    geronimus_forward, kesten_mckay_verblunsky, JacobiCoefficients, VerblunskySeq, ZChain,
};
use crate::measures::ReferenceLaw;
use crate::Result;

/// The three classical ensembles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ensemble {
    Hermite,
    Laguerre {
        tau: f64,
    },
    /// Sum rule stated on `[0, 1]`; the coefficient side lives on `[-2, 2]`.
    Jacobi {
        kappa1: f64,
        kappa2: f64,
    },
}

impl Ensemble {
    pub fn laguerre(tau: f64) -> Result<Self> {
        ReferenceLaw::marchenko_pastur(tau)?;
        Ok(Self::Laguerre { tau })
    }

    pub fn jacobi(kappa1: f64, kappa2: f64) -> Result<Self> {
        ReferenceLaw::kesten_mckay(kappa1, kappa2)?;
        Ok(Self::Jacobi { kappa1, kappa2 })
    }

    /// The equilibrium law (Kesten-McKay on `[0, 1]` for Jacobi).
    pub fn law(&self) -> ReferenceLaw {
        match *self {
            Self::Hermite => ReferenceLaw::SemiCircle,
            Self::Laguerre { tau } => ReferenceLaw::MarchenkoPastur { tau },
            Self::Jacobi { kappa1, kappa2 } => ReferenceLaw::KestenMcKay { kappa1, kappa2 },
        }
    }

    /// Equilibrium Jacobi matrix of size `n` in the coefficient-side picture
    /// (`[-2, 2]` for Jacobi).
    pub fn reference_matrix(&self, n: usize) -> Result<JacobiCoefficients> {
        match *self {
            Self::Jacobi { kappa1, kappa2 } => {
                if n == 0 {
                    return Err(invalid!("size must be positive"));
                }
                geronimus_forward(&kesten_mckay_verblunsky(kappa1, kappa2, 2 * n - 1)?)
            }
            _ => crate::jacobi::reference_coefficients(&self.law(), n),
        }
    }
}

/// Controls the divergence flag of a coefficient side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailConfig {
    /// Number of trailing terms averaged (capped at half the available terms).
    pub window: usize,
    /// A trailing average above this marks the sum as divergent.
    pub eps_tail: f64,
}

impl Default for TailConfig {
    fn default() -> Self {
        Self {
            window: 10,
            eps_tail: 1e-6,
        }
    }
}

/// A coefficient side evaluated to finite depth.
#[derive(Debug, Clone, PartialEq)]
pub struct SumSide {
    /// The total, or `+inf` when a term is infinite or the tail is flagged.
    pub value: f64,
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub tail_average: f64,
    pub divergent: bool,
}

impl SumSide {
    fn from_terms(terms: Vec<f64>, tail: &TailConfig) -> Self {
        let mut acc = 0.0;
        let partial_sums: Vec<f64> = terms
            .iter()
            .map(|t| {
                acc += t;
                acc
            })
            .collect();
        let m = tail.window.min(terms.len() / 2).max(1).min(terms.len());
        let tail_average = if terms.is_empty() {
            0.0
        } else {
            terms[terms.len() - m..].iter().sum::<f64>() / m as f64
        };
        let divergent = !(tail_average <= tail.eps_tail) || !acc.is_finite();
        Self {
            value: if divergent { f64::INFINITY } else { acc },
            terms,
            partial_sums,
            tail_average,
            divergent,
        }
    }

    /// Sum of the computed terms, regardless of the divergence flag.
    pub fn partial_total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// `sum_k b_k^2 / 2 + G(a_k^2)`.
pub fn sum_side_hermite(j: &JacobiCoefficients) -> SumSide {
    sum_side_hermite_with(j, &TailConfig::default())
}

pub fn sum_side_hermite_with(j: &JacobiCoefficients, tail: &TailConfig) -> SumSide {
    let terms = (0..j.size())
        .map(|k| {
            let a = j.a().get(k).map_or(0.0, |a| rate_g(a * a));
            rate_l0star(j.b()[k]) + a
        })
        .collect();
    SumSide::from_terms(terms, tail)
}

/// `sum_k G(z_{2k-1}) / tau + G(z_{2k} / tau)`.
pub fn sum_side_laguerre(z: &ZChain, tau: f64) -> Result<SumSide> {
    sum_side_laguerre_with(z, tau, &TailConfig::default())
}

pub fn sum_side_laguerre_with(z: &ZChain, tau: f64, tail: &TailConfig) -> Result<SumSide> {
    Ensemble::laguerre(tau)?;
    let n = z.size();
    let terms = (1..=n)
        .map(|k| {
            let even = if k < n {
                rate_g(z.get(2 * k) / tau)
            } else {
                0.0
            };
            rate_g(z.get(2 * k - 1)) / tau + even
        })
        .collect();
    Ok(SumSide::from_terms(terms, tail))
}

/// `sum_k H2(alpha_{2k}) + H1(alpha_{2k+1})`.
pub fn sum_side_jacobi(v: &VerblunskySeq, kappa1: f64, kappa2: f64) -> Result<SumSide> {
    sum_side_jacobi_with(v, kappa1, kappa2, &TailConfig::default())
}

pub fn sum_side_jacobi_with(
    v: &VerblunskySeq,
    kappa1: f64,
    kappa2: f64,
    tail: &TailConfig,
) -> Result<SumSide> {
    Ensemble::jacobi(kappa1, kappa2)?;
    let al = v.values();
    let terms = al
        .chunks(2)
        .map(|pair| {
            let odd = pair.get(1).map_or(0.0, |&x| rate_h1(x, kappa1, kappa2));
            rate_h2(pair[0], kappa1, kappa2) + odd
        })
        .collect();
    Ok(SumSide::from_terms(terms, tail))
}
