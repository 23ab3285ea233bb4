//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p sumrule-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumrule_core::ensembles::{
    derive_seed, sample, sample_general_v_mcmc, sample_hermite_coefficients,
    sample_jacobi_verblunsky, sample_laguerre_chain, EnsembleKind, EnsembleSpec, McmcConfig,
};
use sumrule_core::jacobi::{
    coeffs_from_measure, geronimus_forward, geronimus_inverse, kesten_mckay_verblunsky,
    reference_coefficients, spectral_from_coeffs, z_compose, z_decompose, JacobiCoefficients,
    VerblunskySeq, ZChain,
};
use sumrule_core::ldp::probe_extreme_rate;
use sumrule_core::measures::{quad_moments, DiscreteMeasure, KlConfig, MeasureS1, ReferenceLaw};
use sumrule_core::stats::{effective_sample_size, ks_statistic, ks_two_sample};
use sumrule_core::sumrules::{
    f_hermite_plus, f_minus, f_minus_quadrature, f_plus, f_plus_quadrature, h_normalized,
    rate_from_effective_potential, rate_g, rate_h1, rate_h2, spectral_side, sum_side_hermite,
    sum_side_jacobi, sum_side_laguerre, verify_sum_rule, CoefficientSide, Ensemble, Side, Verdict,
    VerifyConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail<E: std::fmt::Debug>(e: E) -> String {
    format!("error: {e:?}")
}

/// Equilibrium measures give 0 on both sides.
fn zero_at_equilibrium() -> Outcome {
    let depth = 200;
    let mut worst = (0.0f64, Duration::ZERO);
    let mut lines = Vec::new();
    let cases = [
        Ensemble::Hermite,
        Ensemble::Laguerre { tau: 0.25 },
        Ensemble::Laguerre { tau: 0.5 },
        Ensemble::Laguerre { tau: 1.0 },
        Ensemble::Jacobi {
            kappa1: 0.0,
            kappa2: 0.0,
        },
        Ensemble::Jacobi {
            kappa1: 1.0,
            kappa2: 2.0,
        },
    ];
    let mut ok = true;
    for e in cases {
        let start = Instant::now();
        let law = e.law();
        let sum = match e {
            Ensemble::Hermite => {
                sum_side_hermite(&reference_coefficients(&law, depth).map_err(fail)?).value
            }
            Ensemble::Laguerre { tau } => {
                let z = z_decompose(&reference_coefficients(&law, depth).map_err(fail)?)
                    .map_err(fail)?;
                sum_side_laguerre(&z, tau).map_err(fail)?.value
            }
            Ensemble::Jacobi { kappa1, kappa2 } => {
                let v = kesten_mckay_verblunsky(kappa1, kappa2, 2 * depth - 1).map_err(fail)?;
                sum_side_jacobi(&v, kappa1, kappa2).map_err(fail)?.value
            }
        };
        let spectral = spectral_side(
            &law,
            &MeasureS1::equilibrium(law.clone()),
            &KlConfig::default(),
        )
        .map_err(fail)?
        .value;
        let took = start.elapsed();
        ok &= sum.abs() < 1e-9 && spectral.abs() < 1e-9 && took < Duration::from_secs(1);
        worst.0 = worst.0.max(sum.abs()).max(spectral.abs());
        worst.1 = worst.1.max(took);
        lines.push(format!("{e:?}: sum {sum:.1e} spectral {spectral:.1e}"));
    }
    check(
        ok,
        format!(
            "max |side| {:.2e}, slowest case {:?}; {}",
            worst.0,
            worst.1,
            lines.join("; ")
        ),
    )
}

/// Rank-one perturbations of the free matrix.
fn hermite_rank_one() -> Outcome {
    let start = Instant::now();
    let n = 200;
    let mut ok = true;
    let mut details = Vec::new();
    for c in [0.3, 0.5, 0.9, 1.5] {
        let mut b = vec![0.0; n];
        b[0] = c;
        let j = JacobiCoefficients::new(b, vec![1.0; n - 1]).map_err(fail)?;
        let mu = MeasureS1::rank_one(c).map_err(fail)?;
        let r = verify_sum_rule(
            &Ensemble::Hermite,
            &CoefficientSide::Hermite(j),
            &mu,
            &VerifyConfig::default(),
        )
        .map_err(fail)?;
        let exact = r.sum_side.value == c * c / 2.0;
        let gap = (r.sum_side.value - r.spectral_side.value).abs();
        if c > 1.0 {
            let atom = c + 1.0 / c;
            let want = f_hermite_plus(atom);
            ok &= r.spectral_side.f_plus.len() == 1
                && (r.spectral_side.f_plus[0].1 - want).abs() < 1e-15;
        }
        ok &= exact && gap < 1e-4;
        details.push(format!(
            "c={c}: sum {} spectral {:.10} gap {gap:.1e}",
            r.sum_side.value, r.spectral_side.value
        ));
    }
    let took = start.elapsed();
    ok &= took < Duration::from_secs(5);
    check(ok, format!("{}; {took:?}", details.join("; ")))
}

/// Bernstein-Szego measures with kappa1 = kappa2 = 0.
fn szego_specialization() -> Outcome {
    let e = Ensemble::Jacobi {
        kappa1: 0.0,
        kappa2: 0.0,
    };
    let mut ok = true;
    let mut details = Vec::new();
    for r in [0.2, 0.5, 0.8] {
        let mut alpha = vec![0.0; 199];
        alpha[0] = r;
        let mu = MeasureS1::bernstein_szego_unit(r).map_err(fail)?;
        let rep = verify_sum_rule(
            &e,
            &CoefficientSide::Jacobi(VerblunskySeq::new(alpha).map_err(fail)?),
            &mu,
            &VerifyConfig::default(),
        )
        .map_err(fail)?;
        let want = -(1.0 - r * r).ln();
        let (s, p) = (rep.sum_side.value, rep.spectral_side.value);
        ok &= (s - want).abs() < 1e-6 && (p - want).abs() < 1e-6;
        details.push(format!(
            "r={r}: -log(1-r^2) {want:.10} sum {s:.10} spectral {p:.10}"
        ));
    }
    check(ok, details.join("; "))
}

/// Effective-potential rates agree with the outlier integrals.
fn rates_agree() -> Outcome {
    let sc = ReferenceLaw::SemiCircle;
    let mp = ReferenceLaw::marchenko_pastur(0.5).map_err(fail)?;
    let kmk = ReferenceLaw::kesten_mckay(1.0, 2.0).map_err(fail)?;
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut compare = |law: &ReferenceLaw, x: f64, side: Side, direct: f64| -> Result<(), String> {
        let eff = rate_from_effective_potential(law, x, side).map_err(fail)?;
        worst = worst.max((eff - direct).abs());
        count += 1;
        Ok(())
    };
    for x in [-3.0, -2.4, 2.1, 2.5, 3.0] {
        let (side, direct) = if x > 0.0 {
            (Side::Plus, f_hermite_plus(x))
        } else {
            (Side::Minus, f_hermite_plus(-x))
        };
        compare(&sc, x, side, direct)?;
    }
    let (lo, hi) = mp.support();
    for x in [0.5 * lo, 0.9 * lo, hi + 0.1, hi + 0.7, hi + 2.0] {
        let (side, direct) = if x < lo {
            (Side::Minus, f_minus_quadrature(&mp, x).map_err(fail)?)
        } else {
            (Side::Plus, f_plus_quadrature(&mp, x).map_err(fail)?)
        };
        compare(&mp, x, side, direct)?;
    }
    let (lo, hi) = kmk.support();
    for x in [
        0.3 * lo,
        0.8 * lo,
        hi + 0.1 * (1.0 - hi),
        hi + 0.5 * (1.0 - hi),
        hi + 0.9 * (1.0 - hi),
    ] {
        let (side, direct) = if x < lo {
            (Side::Minus, f_minus_quadrature(&kmk, x).map_err(fail)?)
        } else {
            (Side::Plus, f_plus_quadrature(&kmk, x).map_err(fail)?)
        };
        compare(&kmk, x, side, direct)?;
    }
    check(
        worst < 1e-6,
        format!("{count} points, max discrepancy {worst:.2e}"),
    )
}

/// Finite-n H-functional identities and determinant identities.
fn finite_n_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_h = [0.0f64; 3];
    for i in 0..100u64 {
        let n = rng.random_range(1..=30);
        let beta = [1.0, 2.0, 4.0][rng.random_range(0..3)];
        let seed = derive_seed(5, i);

        let spec = EnsembleSpec::new(EnsembleKind::Hermite, n, beta, seed).map_err(fail)?;
        let j = sample_hermite_coefficients(&spec).map_err(fail)?;
        let want: f64 = j.b().iter().map(|b| b * b / 2.0).sum::<f64>()
            + j.a().iter().map(|a| rate_g(a * a)).sum::<f64>();
        let h = h_normalized(&Ensemble::Hermite, &j).map_err(fail)?;
        worst_h[0] = worst_h[0].max((h - want).abs() / want.abs().max(1.0));

        let tau = rng.random_range(0.1..=1.0);
        let spec =
            EnsembleSpec::new(EnsembleKind::Laguerre { tau }, n, beta, seed).map_err(fail)?;
        let z = sample_laguerre_chain(&spec).map_err(fail)?;
        let zv = z.values();
        let odd: f64 = zv.iter().step_by(2).map(|&v| rate_g(v)).sum();
        let even: f64 = zv.iter().skip(1).step_by(2).map(|&v| rate_g(v / tau)).sum();
        let want = odd / tau + even + zv[2 * n - 2].ln();
        let h = h_normalized(&Ensemble::Laguerre { tau }, &z_compose(&z)).map_err(fail)?;
        worst_h[1] = worst_h[1].max((h - want).abs() / want.abs().max(1.0));

        let (k1, k2) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
        let spec = EnsembleSpec::new(
            EnsembleKind::JacobiKn {
                kappa1: k1,
                kappa2: k2,
            },
            n,
            beta,
            seed,
        )
        .map_err(fail)?;
        let v = sample_jacobi_verblunsky(&spec).map_err(fail)?;
        let al = v.values();
        let reference = kesten_mckay_verblunsky(k1, k2, 2).map_err(fail)?;
        let r = reference.values();
        let boundary = |prev: f64, last: f64| {
            let p = if n == 1 {
                std::f64::consts::LN_2
            } else {
                (1.0 - prev).ln()
            };
            p + (1.0 - last * last).ln()
        };
        let sum: f64 = al
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                if k % 2 == 0 {
                    rate_h2(x, k1, k2)
                } else {
                    rate_h1(x, k1, k2)
                }
            })
            .sum();
        let prev = if n == 1 { 0.0 } else { al[2 * n - 3] };
        let want = sum + boundary(prev, al[2 * n - 2]) - boundary(r[1], r[0]);
        let t = geronimus_forward(&v).map_err(fail)?;
        let h = h_normalized(
            &Ensemble::Jacobi {
                kappa1: k1,
                kappa2: k2,
            },
            &t,
        )
        .map_err(fail)?;
        worst_h[2] = worst_h[2].max((h - want).abs() / want.abs().max(1.0));
    }
    let mut worst_det = 0.0f64;
    for i in 0..100u64 {
        let n = rng.random_range(1..=50);
        let (k1, k2) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
        let spec = EnsembleSpec::new(
            EnsembleKind::JacobiKn {
                kappa1: k1,
                kappa2: k2,
            },
            n,
            2.0,
            derive_seed(6, i),
        )
        .map_err(fail)?;
        let v = sample_jacobi_verblunsky(&spec).map_err(fail)?;
        let t = geronimus_forward(&v).map_err(fail)?;
        let (mut minus, mut plus) = (2.0, 2.0);
        for (k, a) in v.values().iter().enumerate() {
            minus *= 1.0 - a;
            plus *= if k % 2 == 0 { 1.0 + a } else { 1.0 - a };
        }
        let dm = t.shifted_determinant(2.0, -1.0);
        let dp = t.shifted_determinant(2.0, 1.0);
        worst_det = worst_det
            .max(((dm - minus) / minus).abs())
            .max(((dp - plus) / plus).abs());
    }
    let ok = worst_h.iter().all(|&e| e <= 1e-10) && worst_det <= 1e-10;
    check(
        ok,
        format!(
            "H relative errors (Hermite, Laguerre, Jacobi) {:.1e} {:.1e} {:.1e}; det(2I-+T) relative error {worst_det:.1e}",
            worst_h[0], worst_h[1], worst_h[2]
        ),
    )
}

/// Atom at zero: both sides infinite.
fn divergence_case() -> Outcome {
    let tau = 0.5;
    let depth = 200;
    let mu = MeasureS1::mp_with_atom_at_zero(tau).map_err(fail)?;
    let law = ReferenceLaw::marchenko_pastur(tau).map_err(fail)?;
    let discrete = mu
        .discretize(law.support(), Default::default())
        .map_err(fail)?;
    let lanczos = z_decompose(&coeffs_from_measure(&discrete, 12).map_err(fail)?).map_err(fail)?;
    let chain: Vec<f64> = (0..2 * depth - 1)
        .map(|k| if k % 2 == 0 { tau } else { 1.0 })
        .collect();
    let chain_ok = lanczos
        .values()
        .iter()
        .zip(&chain)
        .all(|(a, b)| (a - b).abs() < 1e-9);
    let z = ZChain::new(chain).map_err(fail)?;
    let r = verify_sum_rule(
        &Ensemble::Laguerre { tau },
        &CoefficientSide::Laguerre(z),
        &mu,
        &VerifyConfig::default(),
    )
    .map_err(fail)?;
    let ps = &r.sum_side.partial_sums;
    let step = ps[1] - ps[0];
    let linear = step > 0.0
        && ps
            .windows(2)
            .take(depth - 2)
            .all(|w| ((w[1] - w[0]) - step).abs() < 1e-12);
    let f_zero = f_minus(&law, 0.0).map_err(fail)?;
    let ok = chain_ok
        && r.verdict == Verdict::PassInfinite
        && r.sum_side.divergent
        && linear
        && f_zero.is_infinite()
        && r.spectral_side.value.is_infinite();
    check(
        ok,
        format!(
            "verdict {:?}, partial sums grow by {step:.6} per term up to {:.3} at depth {depth}, F-(0) = {f_zero}, spectral {}",
            r.verdict,
            r.sum_side.partial_total(),
            r.spectral_side.value
        ),
    )
}

/// Favard round trips on random discrete measures.
fn favard_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut moments, mut zr, mut gr) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.random_range(1..=40);
        let mut pairs: Vec<(f64, f64)> = Vec::new();
        while pairs.len() < n {
            let x: f64 = rng.random_range(-1.9..1.9);
            if pairs.iter().all(|p| (p.0 - x).abs() > 1e-2) {
                pairs.push((x, rng.random_range(0.05..1.0)));
            }
        }
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        let mu = DiscreteMeasure::from_pairs(pairs.iter().map(|&(x, w)| (x, w / total)).collect())
            .map_err(fail)?;
        let j = coeffs_from_measure(&mu, n).map_err(fail)?;
        let back = spectral_from_coeffs(&j).map_err(fail)?;
        for (a, b) in quad_moments(&mu, 2 * n - 1)
            .iter()
            .zip(quad_moments(&back, 2 * n - 1))
        {
            moments = moments.max((a - b).abs() / a.abs().max(1.0));
        }
        let g = geronimus_forward(&geronimus_inverse(&j).map_err(fail)?).map_err(fail)?;
        gr = gr.max(max_diff(&j, &g));
        let shifted = DiscreteMeasure::new(
            mu.nodes().iter().map(|x| x + 2.0).collect(),
            mu.weights().to_vec(),
        )
        .map_err(fail)?;
        let jh = coeffs_from_measure(&shifted, n).map_err(fail)?;
        let zz = z_compose(&z_decompose(&jh).map_err(fail)?);
        zr = zr.max(max_diff(&jh, &zz));
    }
    check(
        moments <= 1e-9 && zr <= 1e-12 && gr <= 1e-12,
        format!("moments {moments:.1e}, z round trip {zr:.1e}, Geronimus round trip {gr:.1e}"),
    )
}

fn max_diff(x: &JacobiCoefficients, y: &JacobiCoefficients) -> f64 {
    x.b()
        .iter()
        .zip(y.b())
        .chain(x.a().iter().zip(y.a()))
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

/// Large draws follow the equilibrium laws.
fn equilibrium_convergence() -> Outcome {
    let start = Instant::now();
    let cases = [
        (EnsembleKind::Hermite, ReferenceLaw::SemiCircle),
        (
            EnsembleKind::Laguerre { tau: 0.5 },
            ReferenceLaw::marchenko_pastur(0.5).map_err(fail)?,
        ),
        (
            EnsembleKind::JacobiKn {
                kappa1: 0.0,
                kappa2: 0.0,
            },
            ReferenceLaw::Arcsine01,
        ),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (kind, law) in cases {
        let spec = EnsembleSpec::new(kind, 2000, 2.0, 8).map_err(fail)?;
        let d = sample(&spec).map_err(fail)?;
        let ks = ks_statistic(&d.eigenvalues, |x| law.cdf(x).unwrap_or(f64::NAN));
        ok &= ks < 0.05;
        details.push(format!("{kind:?}: KS {ks:.4}"));
    }
    let took = start.elapsed();
    ok &= took < Duration::from_secs(30);
    check(ok, format!("{}; {took:?}", details.join("; ")))
}

/// Metropolis chain for V = x^2/2 against the direct tridiagonal sampler.
fn mcmc_cross_validation() -> Outcome {
    let start = Instant::now();
    let (n, beta) = (10, 2.0);
    let spec = EnsembleSpec::new(EnsembleKind::GeneralV, n, beta, 31).map_err(fail)?;
    let config = McmcConfig {
        steps: 3_000_000,
        thinning: 100,
        ..McmcConfig::default()
    };
    let out = sample_general_v_mcmc(
        &spec,
        &|x: f64| 0.5 * x * x,
        (f64::NEG_INFINITY, f64::INFINITY),
        &config,
    )
    .map_err(fail)?;
    let b1: Vec<f64> = out.trace.iter().map(|d| d.b1).collect();
    let top: Vec<f64> = out.trace.iter().map(|d| d.lambda_max).collect();
    let ess = effective_sample_size(&b1).min(effective_sample_size(&top));

    let direct = EnsembleSpec::new(EnsembleKind::Hermite, n, beta, 0).map_err(fail)?;
    let mut db1 = Vec::new();
    let mut dtop = Vec::new();
    for i in 0..20_000u64 {
        let d = sample(&direct.with_seed(derive_seed(32, i))).map_err(fail)?;
        db1.push(d.coefficients.matrix().b()[0]);
        dtop.push(d.largest());
    }
    let p_b1 = ks_two_sample(&b1, &db1).p_value;
    let p_top = ks_two_sample(&top, &dtop).p_value;
    let ok = ess >= 1e4 && p_b1 > 0.01 && p_top > 0.01;
    check(
        ok,
        format!(
            "ESS {ess:.0} from {} recorded states (acceptance {:.2}), KS p-values b1 {p_b1:.3}, lambda_max {p_top:.3}; {:?}",
            out.trace.len(),
            out.acceptance_rate,
            start.elapsed()
        ),
    )
}

/// Monte Carlo tail fractions of the largest eigenvalue.
fn ldp_probe() -> Outcome {
    let start = Instant::now();
    let spec = EnsembleSpec::new(EnsembleKind::Hermite, 50, 0.5, 10).map_err(fail)?;
    let r = probe_extreme_rate(&spec, &[50, 100, 200], 2.2, Side::Plus, 5000).map_err(fail)?;
    let target = f_plus(&ReferenceLaw::SemiCircle, 2.2).map_err(fail)?;
    let v = &r.verdict;
    let ok = v.monotone_strict
        && (v.within_factor3 || v.approaching)
        && (r.target_rate - target).abs() < 1e-15;
    let rows: Vec<String> = r
        .estimates
        .iter()
        .map(|e| {
            format!(
                "n={} p={:.4} [{:.4}, {:.4}] rate {:.4}",
                e.n, e.probability, e.ci_lo, e.ci_hi, e.rate_estimate
            )
        })
        .collect();
    check(
        ok,
        format!(
            "beta {}, target F+(2.2) = {:.7}; {}; factor-3 {} approaching {}; {:?}",
            r.beta,
            r.target_rate,
            rows.join("; "),
            v.within_factor3,
            v.approaching,
            start.elapsed()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("zero at equilibrium", zero_at_equilibrium),
        ("Hermite rank-one sum rule", hermite_rank_one),
        ("Szego specialization", szego_specialization),
        ("effective-potential rates", rates_agree),
        ("finite-n identities", finite_n_identities),
        ("divergence case (atom at zero)", divergence_case),
        ("Favard round trip", favard_round_trip),
        (
            "equilibrium convergence of ensembles",
            equilibrium_convergence,
        ),
        ("MCMC cross-validation", mcmc_cross_validation),
        ("LDP probe sanity", ldp_probe),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{took:.2?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
