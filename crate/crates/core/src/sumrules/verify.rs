use alloc::vec::Vec;

use super::{
    f_minus, f_plus, sum_side_hermite_with, sum_side_jacobi_with, sum_side_laguerre_with, Ensemble,
    SumSide, TailConfig,
};
use crate::jacobi::{
    coeffs_from_measure, geronimus_inverse, szego_pushforward, z_decompose, JacobiCoefficients,
    PushforwardDirection, VerblunskySeq, ZChain,
};
use crate::measures::{kl_reverse, KlConfig, KlEstimate, MeasureS1, Membership, ReferenceLaw};
use crate::quadrature::CosineQuadrature;
use crate::Result;

/// Input to the coefficient side.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSide {
    Hermite(JacobiCoefficients),
    Laguerre(ZChain),
    /// Verblunsky coefficients of the measure pushed to `[-2, 2]`.
    Jacobi(VerblunskySeq),
    /// Recover the coefficients from the measure itself, to the given depth.
    FromMeasure {
        depth: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub kl: KlConfig,
    pub tail: TailConfig,
    /// Largest gap accepted between two finite sides.
    pub tolerance: f64,
    /// Discretization of the a.c. part used by [`CoefficientSide::FromMeasure`].
    pub discretization: CosineQuadrature,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            kl: KlConfig::default(),
            tail: TailConfig::default(),
            tolerance: 1e-6,
            discretization: CosineQuadrature {
                panels: 256,
                order: 16,
            },
        }
    }
}

/// Spectral side with its components.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSide {
    pub value: f64,
    pub kl: KlEstimate,
    /// `(position, F+(position))` per upper outlier.
    pub f_plus: Vec<(f64, f64)>,
    /// `(position, F-(position))` per lower outlier.
    pub f_minus: Vec<(f64, f64)>,
    pub sum_f_plus: f64,
    pub sum_f_minus: f64,
    pub membership: Membership,
}

/// `K(mu_V | mu) + sum F+(lambda+) + sum F-(lambda-)`, or `+inf` when `mu`
/// fails the outlier-class checks.
pub fn spectral_side(law: &ReferenceLaw, mu: &MeasureS1, kl: &KlConfig) -> Result<SpectralSide> {
    let membership = mu.membership(law);
    let kl_est = kl_reverse(law, mu, kl)?;
    let f_plus: Vec<(f64, f64)> = mu
        .atoms_plus()
        .iter()
        .map(|a| Ok((a.position, f_plus(law, a.position)?)))
        .collect::<Result<_>>()?;
    let f_minus: Vec<(f64, f64)> = mu
        .atoms_minus()
        .iter()
        .map(|a| Ok((a.position, f_minus(law, a.position)?)))
        .collect::<Result<_>>()?;
    let sum_f_plus: f64 = f_plus.iter().map(|p| p.1).sum();
    let sum_f_minus: f64 = f_minus.iter().map(|p| p.1).sum();
    let value = if membership.holds() {
        kl_est.value + sum_f_plus + sum_f_minus
    } else {
        f64::INFINITY
    };
    Ok(SpectralSide {
        value,
        kl: kl_est,
        f_plus,
        f_minus,
        sum_f_plus,
        sum_f_minus,
        membership,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Both sides finite and within tolerance.
    Pass,
    /// Both sides infinite.
    PassInfinite,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumRuleReport {
    pub ensemble: Ensemble,
    pub sum_side: SumSide,
    pub spectral_side: SpectralSide,
    /// `|sum - spectral|` when both are finite, `0` when both are infinite, `+inf` otherwise.
    pub abs_gap: f64,
    pub truncation_depth: usize,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Evaluates both sides of the sum rule of `ensemble` and compares them.
pub fn verify_sum_rule(
    ensemble: &Ensemble,
    coefficients: &CoefficientSide,
    mu: &MeasureS1,
    config: &VerifyConfig,
) -> Result<SumRuleReport> {
    let law = ensemble.law();
    let coefficients = match coefficients {
        CoefficientSide::FromMeasure { depth } => recover(ensemble, &law, mu, *depth, config)?,
        other => other.clone(),
    };
    let sum_side = match (&coefficients, *ensemble) {
        (CoefficientSide::Hermite(j), Ensemble::Hermite) => sum_side_hermite_with(j, &config.tail),
        (CoefficientSide::Laguerre(z), Ensemble::Laguerre { tau }) => {
            sum_side_laguerre_with(z, tau, &config.tail)?
        }
        (CoefficientSide::Jacobi(v), Ensemble::Jacobi { kappa1, kappa2 }) => {
            sum_side_jacobi_with(v, kappa1, kappa2, &config.tail)?
        }
        (c, e) => {
            return Err(crate::Error::InvalidInput(alloc::format!(
                "coefficient input {} does not match ensemble {e:?}",
                match c {
                    CoefficientSide::Hermite(_) => "Hermite",
                    CoefficientSide::Laguerre(_) => "Laguerre",
                    CoefficientSide::Jacobi(_) => "Jacobi",
                    CoefficientSide::FromMeasure { .. } => "FromMeasure",
                }
            )))
        }
    };
    let truncation_depth = sum_side.terms.len();
    let spectral = spectral_side(&law, mu, &config.kl)?;
    let (s, p) = (sum_side.value, spectral.value);
    let (abs_gap, verdict) = match (s.is_finite(), p.is_finite()) {
        (true, true) => {
            let gap = (s - p).abs();
            (
                gap,
                if gap < config.tolerance {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                },
            )
        }
        (false, false) => (0.0, Verdict::PassInfinite),
        _ => (f64::INFINITY, Verdict::Fail),
    };
    Ok(SumRuleReport {
        ensemble: *ensemble,
        sum_side,
        spectral_side: spectral,
        abs_gap,
        truncation_depth,
        tolerance: config.tolerance,
        verdict,
    })
}

fn recover(
    ensemble: &Ensemble,
    law: &ReferenceLaw,
    mu: &MeasureS1,
    depth: usize,
    config: &VerifyConfig,
) -> Result<CoefficientSide> {
    let discrete = mu.discretize(law.support(), config.discretization)?;
    let j = coeffs_from_measure(&discrete, depth)?;
    Ok(match ensemble {
        Ensemble::Hermite => CoefficientSide::Hermite(j),
        Ensemble::Laguerre { .. } => CoefficientSide::Laguerre(z_decompose(&j)?),
        Ensemble::Jacobi { .. } => {
            let wide = szego_pushforward(&j, PushforwardDirection::From01);
            CoefficientSide::Jacobi(geronimus_inverse(&wide)?)
        }
    })
}
