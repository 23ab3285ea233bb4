//! Numerical probes of the large deviations: discrete logarithmic energy,
//! Monte Carlo tail rates of the extreme eigenvalues and rate-function tables.

use alloc::vec::Vec;
use num_traits::Float;

use crate::ensembles::{derive_seed, sample_matrix, EnsembleKind, EnsembleSpec};
use crate::error::invalid;
use crate::linalg;
use crate::measures::{DiscreteMeasure, ReferenceLaw};
use crate::stats::wilson_interval;
use crate::sumrules::{f_minus, f_plus, EffectivePotential, Side};
use crate::{Error, Result};

/// Smallest number of draws per ladder rung.
pub const MIN_DRAWS: usize = 100;

/// Normal quantile of the reported confidence intervals (95%).
pub const CI_Z: f64 = 1.959_963_984_540_054;

/// `sum w_i V(x_i) - sum_{i != j} w_i w_j log|x_i - x_j|`.
pub fn logarithmic_energy(mu: &DiscreteMeasure, potential: &dyn Fn(f64) -> f64) -> Result<f64> {
    let (x, w) = (mu.nodes(), mu.weights());
    let mut energy: f64 = x.iter().zip(w).map(|(&x, &w)| w * potential(x)).sum();
    let mut pairs = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let gap = (x[i] - x[j]).abs();
            if gap == 0.0 {
                return Err(invalid!("coincident nodes at {}", x[i]));
            }
            pairs += w[i] * w[j] * gap.ln();
        }
    }
    energy -= 2.0 * pairs;
    Ok(energy)
}

/// Estimated tail probability at one ladder size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub n: usize,
    pub hits: usize,
    pub draws: usize,
    pub probability: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// `-log(p) / (b' n)`, `+inf` when no draw hit the tail.
    pub rate_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeVerdict {
    /// Point estimates nonincreasing in `n`.
    pub monotone_strict: bool,
    /// Nonincreasing up to overlapping confidence intervals.
    pub monotone: bool,
    /// Every finite rate estimate within a factor 3 of the target.
    pub within_factor3: bool,
    /// Distance of the rate estimates to the target nonincreasing in `n`.
    pub approaching: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateProbeReport {
    pub x: f64,
    pub side: Side,
    pub beta: f64,
    pub seed: u64,
    pub n_ladder: Vec<usize>,
    pub estimates: Vec<TailEstimate>,
    pub target_rate: f64,
    pub verdict: ProbeVerdict,
}

/// Equilibrium law of a sampled ensemble.
pub fn ensemble_law(kind: &EnsembleKind) -> Result<ReferenceLaw> {
    match *kind {
        EnsembleKind::Hermite => Ok(ReferenceLaw::SemiCircle),
        EnsembleKind::Laguerre { tau } => ReferenceLaw::marchenko_pastur(tau),
        EnsembleKind::JacobiKn { kappa1, kappa2 } => ReferenceLaw::kesten_mckay(kappa1, kappa2),
        EnsembleKind::GeneralV => Err(Error::Unsupported(
            "no equilibrium law for a general potential".into(),
        )),
    }
}

/// Estimates `P(lambda_max > x)` (or `P(lambda_min < x)`) over the ladder of
/// sizes by direct simulation. Rung `n`, draw `i` uses seed
/// `derive_seed(spec.seed, i)`, so rungs share their coefficient streams.
pub fn probe_extreme_rate(
    spec: &EnsembleSpec,
    ladder: &[usize],
    x: f64,
    side: Side,
    draws: usize,
) -> Result<RateProbeReport> {
    let law = ensemble_law(&spec.kind)?;
    let (lo, hi) = law.support();
    let outside = match side {
        Side::Plus => x > hi,
        Side::Minus => x < lo,
    };
    if !outside {
        return Err(Error::Precondition(alloc::format!(
            "probe point {x} is not outside the support [{lo}, {hi}] on the requested side"
        )));
    }
    if draws < MIN_DRAWS {
        return Err(invalid!(
            "at least {MIN_DRAWS} draws are required, got {draws}"
        ));
    }
    if ladder.is_empty() || ladder.contains(&0) {
        return Err(invalid!("the size ladder must be nonempty and positive"));
    }
    let target_rate = match side {
        Side::Plus => f_plus(&law, x)?,
        Side::Minus => f_minus(&law, x)?,
    };
    let bp = spec.beta_prime();
    let estimates = ladder
        .iter()
        .map(|&n| {
            let rung = spec.with_n(n)?;
            let mut hits = 0;
            for i in 0..draws {
                let j = sample_matrix(&rung.with_seed(derive_seed(spec.seed, i as u64)))?;
                let below = linalg::count_below(j.b(), j.a(), x);
                let hit = match side {
                    Side::Plus => below < n,
                    Side::Minus => below > 0,
                };
                hits += hit as usize;
            }
            let p = hits as f64 / draws as f64;
            let (ci_lo, ci_hi) = wilson_interval(hits, draws, CI_Z);
            Ok(TailEstimate {
                n,
                hits,
                draws,
                probability: p,
                ci_lo,
                ci_hi,
                rate_estimate: if hits == 0 {
                    f64::INFINITY
                } else {
                    -p.ln() / (bp * n as f64)
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = judge(&estimates, target_rate);
    Ok(RateProbeReport {
        x,
        side,
        beta: spec.beta,
        seed: spec.seed,
        n_ladder: ladder.to_vec(),
        estimates,
        target_rate,
        verdict,
    })
}

fn judge(estimates: &[TailEstimate], target: f64) -> ProbeVerdict {
    let monotone_strict = estimates
        .windows(2)
        .all(|w| w[1].probability <= w[0].probability);
    let monotone = estimates.windows(2).all(|w| w[1].ci_lo <= w[0].ci_hi);
    let finite: Vec<f64> = estimates
        .iter()
        .map(|e| e.rate_estimate)
        .filter(|r| r.is_finite())
        .collect();
    let within_factor3 = !finite.is_empty()
        && finite
            .iter()
            .all(|&r| r >= target / 3.0 && r <= 3.0 * target);
    let approaching = finite.len() >= 2
        && finite
            .windows(2)
            .all(|w| (w[1] - target).abs() <= (w[0] - target).abs());
    ProbeVerdict {
        monotone_strict,
        monotone,
        within_factor3,
        approaching,
        consistent: monotone && (within_factor3 || approaching),
    }
}

/// One row of [`rate_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub x: f64,
    /// `F+-` from the outlier integrals.
    pub direct: f64,
    /// `J_V(x) - inf J_V`.
    pub effective: f64,
    pub discrepancy: f64,
}

/// Tabulates both evaluations of `F+-` on a grid. Points on the wrong side of
/// the support or outside the domain of `V` give `+inf` in both columns.
pub fn rate_curve(law: &ReferenceLaw, side: Side, grid: &[f64]) -> Result<Vec<RateRow>> {
    let ep = EffectivePotential::new(law)?;
    let (blo, bhi) = law.domain();
    grid.iter()
        .map(|&x| {
            let direct = match side {
                Side::Plus => f_plus(law, x)?,
                Side::Minus => f_minus(law, x)?,
            };
            let effective = if x >= blo && x <= bhi {
                ep.rate(x, side)?
            } else {
                f64::INFINITY
            };
            let discrepancy = if direct == effective {
                0.0
            } else {
                (direct - effective).abs()
            };
            Ok(RateRow {
                x,
                direct,
                effective,
                discrepancy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::gauss_rule;
    use crate::sumrules::f_hermite_plus;

    fn half_square(x: f64) -> f64 {
        0.5 * x * x
    }

    #[test]
    fn energy_by_hand() {
        let one = DiscreteMeasure::new(alloc::vec![0.0], alloc::vec![1.0]).unwrap();
        assert_eq!(logarithmic_energy(&one, &half_square).unwrap(), 0.0);
        let two = DiscreteMeasure::new(alloc::vec![-1.0, 1.0], alloc::vec![0.5, 0.5]).unwrap();
        let e = logarithmic_energy(&two, &half_square).unwrap();
        assert!((e - (0.5 - 0.5 * 2f64.ln())).abs() < 1e-15);
        assert!((e - 0.1534264).abs() < 1e-7);
    }

    #[test]
    fn energy_of_discretized_semicircle_tends_to_three_quarters() {
        let sc = ReferenceLaw::SemiCircle;
        let e: Vec<f64> = [32, 128, 512]
            .iter()
            .map(|&n| logarithmic_energy(&gauss_rule(&sc, n).unwrap(), &half_square).unwrap())
            .collect();
        assert!(e[0] < e[1] && e[1] < e[2], "{e:?}");
        assert!((e[2] - 0.75).abs() < 0.02, "{e:?}");
    }

    #[test]
    fn discretized_equilibrium_minimizes_energy() {
        let n = 64;
        let mu = gauss_rule(&ReferenceLaw::SemiCircle, n).unwrap();
        let base = logarithmic_energy(&mu, &half_square).unwrap();
        for s in [0.8, 0.9, 1.1, 1.25] {
            let scaled = DiscreteMeasure::new(
                mu.nodes().iter().map(|x| s * x).collect(),
                mu.weights().to_vec(),
            )
            .unwrap();
            assert!(base <= logarithmic_energy(&scaled, &half_square).unwrap() + 1e-6);
        }
        let shifted = DiscreteMeasure::new(
            mu.nodes().iter().map(|x| x + 0.3).collect(),
            mu.weights().to_vec(),
        )
        .unwrap();
        assert!(base <= logarithmic_energy(&shifted, &half_square).unwrap() + 1e-6);
    }

    #[test]
    fn probe_rejects_points_inside_the_support() {
        let spec = EnsembleSpec::new(EnsembleKind::Hermite, 50, 2.0, 1).unwrap();
        let err = probe_extreme_rate(&spec, &[50], 1.0, Side::Plus, 500).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(probe_extreme_rate(&spec, &[50], 2.5, Side::Plus, 10).is_err());
    }

    #[test]
    fn probe_target_and_ordering() {
        let spec = EnsembleSpec::new(EnsembleKind::Hermite, 50, 0.5, 3).unwrap();
        let r = probe_extreme_rate(&spec, &[20, 40, 80], 2.2, Side::Plus, 1000).unwrap();
        assert!((r.target_rate - f_hermite_plus(2.2)).abs() < 1e-15);
        for e in &r.estimates {
            assert!(e.ci_lo <= e.probability && e.probability <= e.ci_hi);
            assert!((0.0..=1.0).contains(&e.probability));
        }
        assert!(r.verdict.monotone, "{r:?}");
    }

    #[test]
    fn minus_side_probe_on_laguerre() {
        let spec = EnsembleSpec::new(EnsembleKind::Laguerre { tau: 0.5 }, 20, 1.0, 9).unwrap();
        let (lo, _) = ReferenceLaw::marchenko_pastur(0.5).unwrap().support();
        let r = probe_extreme_rate(&spec, &[10, 20], 0.9 * lo, Side::Minus, 200).unwrap();
        assert!(r.target_rate > 0.0 && r.target_rate.is_finite());
    }

    #[test]
    fn rate_curves() {
        let rows = rate_curve(
            &ReferenceLaw::SemiCircle,
            Side::Plus,
            &[2.1, 2.5, 3.0, 2.0, 1.5],
        )
        .unwrap();
        assert!(rows[..3]
            .iter()
            .all(|r| r.discrepancy < 1e-6 && r.direct > 0.0));
        assert_eq!(rows[3].direct, 0.0);
        assert_eq!(rows[3].effective, 0.0);
        assert!(rows[4].direct.is_infinite() && rows[4].discrepancy == 0.0);

        let mp = ReferenceLaw::marchenko_pastur(1.0).unwrap();
        let rows = rate_curve(&mp, Side::Minus, &[-0.5, -0.1, 0.0]).unwrap();
        assert!(rows[..2]
            .iter()
            .all(|r| r.direct.is_infinite() && r.effective.is_infinite()));
        assert_eq!((rows[2].direct, rows[2].effective), (0.0, 0.0));

        let kmk = ReferenceLaw::kesten_mckay(1.0, 2.0).unwrap();
        let (lo, hi) = kmk.support();
        let grid = [0.5 * lo, hi + 0.3 * (1.0 - hi)];
        let minus = rate_curve(&kmk, Side::Minus, &grid[..1]).unwrap();
        let plus = rate_curve(&kmk, Side::Plus, &grid[1..]).unwrap();
        assert!(minus[0].discrepancy < 1e-6 && plus[0].discrepancy < 1e-6);
    }
}
