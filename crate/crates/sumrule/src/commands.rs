//! The four commands. Each returns the rendered document and an exit code.

use serde::Serialize;
use sumrule_core::ensembles::{empirical_measure, sample, EnsembleSpec};
use sumrule_core::ldp::{probe_extreme_rate, rate_curve, CI_Z};
use sumrule_core::measures::{KlConfig, KlStatus};
use sumrule_core::quadrature::CosineQuadrature;
use sumrule_core::sumrules::{verify_sum_rule, Side, TailConfig, Verdict, VerifyConfig};

use crate::config::{Command, EnsembleConfig, Format, RunConfig, SideName};
use crate::error::Result;
use crate::inputs::{coefficient_side, read_coefficients, resolve_measure};
use crate::report::{cell, csv_document, json_document, reals, Header, Real};

/// Exit codes of the command-line contract.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INPUT: u8 = 1;
    pub const FAIL: u8 = 2;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: u8,
}

pub fn execute(config: &RunConfig, timestamp: &str) -> Result<Outcome> {
    config.validate()?;
    let header = Header::new(config);
    match config.command {
        Command::Verify => verify(config, &header, timestamp),
        Command::Sample => sample_cmd(config, &header, timestamp),
        Command::Rates => rates(config, &header, timestamp),
        Command::Probe => probe(config, &header, timestamp),
    }
}

fn layout(config: &RunConfig) -> CosineQuadrature {
    CosineQuadrature {
        panels: config.panels,
        order: config.order,
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::PassInfinite => "PASS-inf",
        Verdict::Fail => "FAIL",
    }
}

#[derive(Serialize)]
struct OutlierRow {
    position: Real,
    rate: Real,
}

#[derive(Serialize)]
struct SumSideBody {
    value: Real,
    divergent: bool,
    tail_average: Real,
    partial_total: Real,
    terms: Vec<Real>,
    partial_sums: Vec<Real>,
}

#[derive(Serialize)]
struct MembershipBody {
    holds: bool,
    ordered: bool,
    in_domain: bool,
    total_mass: Real,
}

#[derive(Serialize)]
struct SpectralBody {
    value: Real,
    kl: Real,
    kl_status: &'static str,
    sum_f_plus: Real,
    sum_f_minus: Real,
    outliers_plus: Vec<OutlierRow>,
    outliers_minus: Vec<OutlierRow>,
    membership: MembershipBody,
}

#[derive(Serialize)]
struct VerifyBody<'a> {
    ensemble: &'a EnsembleConfig,
    measure: &'a str,
    verdict: &'static str,
    abs_gap: Real,
    tolerance: Real,
    truncation_depth: usize,
    sum_side: SumSideBody,
    spectral_side: SpectralBody,
}

fn verify(config: &RunConfig, header: &Header, timestamp: &str) -> Result<Outcome> {
    let ensemble = config.ensemble.sum_rule()?;
    let label = config.measure.as_deref().unwrap_or_default();
    let mut input = resolve_measure(label, &ensemble, config.depth)?;
    if let Some(path) = &config.coefficients {
        input.coefficients = coefficient_side(&ensemble, read_coefficients(path)?)?;
    }
    let vc = VerifyConfig {
        kl: KlConfig {
            layout: layout(config),
            cap: config.kl_cap,
        },
        tail: TailConfig {
            window: config.tail_window,
            eps_tail: config.eps_tail,
        },
        tolerance: config.tolerance,
        discretization: layout(config),
    };
    let r = verify_sum_rule(&ensemble, &input.coefficients, &input.measure, &vc)?;
    let exit_code = if r.verdict == Verdict::Fail {
        exit::FAIL
    } else {
        exit::OK
    };
    let s = &r.sum_side;
    let p = &r.spectral_side;
    let outliers = |v: &[(f64, f64)]| {
        v.iter()
            .map(|&(position, rate)| OutlierRow {
                position: Real(position),
                rate: Real(rate),
            })
            .collect::<Vec<_>>()
    };
    let text = match config.output.format {
        Format::Json => json_document(
            header,
            timestamp,
            &VerifyBody {
                ensemble: &config.ensemble,
                measure: &input.label,
                verdict: verdict_name(r.verdict),
                abs_gap: Real(r.abs_gap),
                tolerance: Real(r.tolerance),
                truncation_depth: r.truncation_depth,
                sum_side: SumSideBody {
                    value: Real(s.value),
                    divergent: s.divergent,
                    tail_average: Real(s.tail_average),
                    partial_total: Real(s.partial_total()),
                    terms: reals(&s.terms),
                    partial_sums: reals(&s.partial_sums),
                },
                spectral_side: SpectralBody {
                    value: Real(p.value),
                    kl: Real(p.kl.value),
                    kl_status: match p.kl.status {
                        KlStatus::Finite => "finite",
                        KlStatus::Vanishing => "vanishing",
                        KlStatus::CapTriggered => "cap-triggered",
                    },
                    sum_f_plus: Real(p.sum_f_plus),
                    sum_f_minus: Real(p.sum_f_minus),
                    outliers_plus: outliers(&p.f_plus),
                    outliers_minus: outliers(&p.f_minus),
                    membership: MembershipBody {
                        holds: p.membership.holds(),
                        ordered: p.membership.ordered,
                        in_domain: p.membership.in_domain,
                        total_mass: Real(p.membership.total_mass),
                    },
                },
            },
        ),
        Format::Csv => {
            let notes = [
                ("measure", input.label.clone()),
                ("verdict", verdict_name(r.verdict).to_owned()),
                ("sum_side", cell(s.value)),
                ("spectral_side", cell(p.value)),
                ("abs_gap", cell(r.abs_gap)),
            ]
            .map(|(k, v)| (k.to_owned(), v));
            let rows: Vec<Vec<String>> = s
                .terms
                .iter()
                .zip(&s.partial_sums)
                .enumerate()
                .map(|(k, (t, ps))| vec![(k + 1).to_string(), cell(*t), cell(*ps)])
                .collect();
            csv_document(
                header,
                timestamp,
                &notes,
                &["k", "term", "partial_sum"],
                &rows,
            )
        }
    };
    Ok(Outcome { text, exit_code })
}

#[derive(Serialize)]
struct Coefficients {
    a: Vec<Real>,
    b: Vec<Real>,
}

#[derive(Serialize)]
struct SampleBody<'a> {
    ensemble: &'a EnsembleConfig,
    n: usize,
    beta: Real,
    weighted: bool,
    eigenvalues: Vec<Real>,
    weights: Vec<Real>,
    coefficients: Coefficients,
}

fn sample_cmd(config: &RunConfig, header: &Header, timestamp: &str) -> Result<Outcome> {
    let spec = EnsembleSpec::new(
        config.ensemble.sampler(),
        config.n,
        config.beta,
        config.seed,
    )?;
    let data = sample(&spec)?;
    let mu = empirical_measure(&data, config.weighted)?;
    let j = data.coefficients.matrix();
    let text = match config.output.format {
        Format::Json => json_document(
            header,
            timestamp,
            &SampleBody {
                ensemble: &config.ensemble,
                n: config.n,
                beta: Real(config.beta),
                weighted: config.weighted,
                eigenvalues: reals(mu.nodes()),
                weights: reals(mu.weights()),
                coefficients: Coefficients {
                    a: reals(j.a()),
                    b: reals(j.b()),
                },
            },
        ),
        Format::Csv => {
            let rows: Vec<Vec<String>> = mu
                .nodes()
                .iter()
                .zip(mu.weights())
                .enumerate()
                .map(|(i, (x, w))| vec![(i + 1).to_string(), cell(*x), cell(*w)])
                .collect();
            let notes = [
                (
                    "ensemble".to_owned(),
                    config.ensemble.kind.name().to_owned(),
                ),
                ("n".to_owned(), config.n.to_string()),
                ("beta".to_owned(), cell(config.beta)),
                ("weighted".to_owned(), config.weighted.to_string()),
            ];
            csv_document(
                header,
                timestamp,
                &notes,
                &["index", "eigenvalue", "weight"],
                &rows,
            )
        }
    };
    Ok(Outcome {
        text,
        exit_code: exit::OK,
    })
}

#[derive(Serialize)]
struct RateRowBody {
    x: Real,
    direct: Real,
    effective: Real,
    discrepancy: Real,
}

#[derive(Serialize)]
struct RatesBody<'a> {
    ensemble: &'a EnsembleConfig,
    side: SideName,
    support: [Real; 2],
    max_discrepancy: Real,
    rows: Vec<RateRowBody>,
}

fn rates(config: &RunConfig, header: &Header, timestamp: &str) -> Result<Outcome> {
    let law = config.ensemble.sum_rule()?.law();
    let side: Side = config.side.into();
    let grid = config.rate_grid();
    let rows = rate_curve(&law, side, &grid)?;
    let (lo, hi) = law.support();
    let inside = |x: f64| match side {
        Side::Plus => x < hi,
        Side::Minus => x > lo,
    };
    let exit_code = if grid.iter().all(|&x| inside(x)) {
        exit::INPUT
    } else {
        exit::OK
    };
    let max_discrepancy = rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max);
    let text = match config.output.format {
        Format::Json => json_document(
            header,
            timestamp,
            &RatesBody {
                ensemble: &config.ensemble,
                side: config.side,
                support: [Real(lo), Real(hi)],
                max_discrepancy: Real(max_discrepancy),
                rows: rows
                    .iter()
                    .map(|r| RateRowBody {
                        x: Real(r.x),
                        direct: Real(r.direct),
                        effective: Real(r.effective),
                        discrepancy: Real(r.discrepancy),
                    })
                    .collect(),
            },
        ),
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        cell(r.x),
                        cell(r.direct),
                        cell(r.effective),
                        cell(r.discrepancy),
                    ]
                })
                .collect();
            let notes = [
                ("support".to_owned(), format!("{lo}:{hi}")),
                ("max_discrepancy".to_owned(), cell(max_discrepancy)),
            ];
            csv_document(
                header,
                timestamp,
                &notes,
                &["x", "direct", "effective", "discrepancy"],
                &table,
            )
        }
    };
    Ok(Outcome { text, exit_code })
}

#[derive(Serialize)]
struct EstimateBody {
    n: usize,
    hits: usize,
    draws: usize,
    probability: Real,
    ci_lo: Real,
    ci_hi: Real,
    rate_estimate: Real,
}

#[derive(Serialize)]
struct VerdictBody {
    monotone_strict: bool,
    monotone: bool,
    within_factor3: bool,
    approaching: bool,
    consistent: bool,
}

#[derive(Serialize)]
struct ProbeBody<'a> {
    ensemble: &'a EnsembleConfig,
    x: Real,
    side: SideName,
    beta: Real,
    draws: usize,
    ci_z: Real,
    target_rate: Real,
    estimates: Vec<EstimateBody>,
    verdict: VerdictBody,
}

fn probe(config: &RunConfig, header: &Header, timestamp: &str) -> Result<Outcome> {
    let x = config.x.unwrap_or(f64::NAN);
    let spec = EnsembleSpec::new(
        config.ensemble.sampler(),
        config.nladder[0],
        config.beta,
        config.seed,
    )?;
    let r = probe_extreme_rate(&spec, &config.nladder, x, config.side.into(), config.draws)?;
    let text = match config.output.format {
        Format::Json => json_document(
            header,
            timestamp,
            &ProbeBody {
                ensemble: &config.ensemble,
                x: Real(x),
                side: config.side,
                beta: Real(config.beta),
                draws: config.draws,
                ci_z: Real(CI_Z),
                target_rate: Real(r.target_rate),
                estimates: r
                    .estimates
                    .iter()
                    .map(|e| EstimateBody {
                        n: e.n,
                        hits: e.hits,
                        draws: e.draws,
                        probability: Real(e.probability),
                        ci_lo: Real(e.ci_lo),
                        ci_hi: Real(e.ci_hi),
                        rate_estimate: Real(e.rate_estimate),
                    })
                    .collect(),
                verdict: VerdictBody {
                    monotone_strict: r.verdict.monotone_strict,
                    monotone: r.verdict.monotone,
                    within_factor3: r.verdict.within_factor3,
                    approaching: r.verdict.approaching,
                    consistent: r.verdict.consistent,
                },
            },
        ),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .estimates
                .iter()
                .map(|e| {
                    vec![
                        e.n.to_string(),
                        cell(e.probability),
                        cell(e.ci_lo),
                        cell(e.ci_hi),
                        cell(e.rate_estimate),
                        cell(r.target_rate),
                    ]
                })
                .collect();
            let notes = [
                ("x".to_owned(), cell(x)),
                ("beta".to_owned(), cell(config.beta)),
                ("draws".to_owned(), config.draws.to_string()),
                ("consistent".to_owned(), r.verdict.consistent.to_string()),
            ];
            csv_document(
                header,
                timestamp,
                &notes,
                &["n", "p_hat", "ci_lo", "ci_hi", "rate_estimate", "target"],
                &rows,
            )
        }
    };
    Ok(Outcome {
        text,
        exit_code: exit::OK,
    })
}
