use sumrule_core::ensembles::{empirical_measure, sample, EnsembleKind, EnsembleSpec};
use sumrule_core::jacobi::{coeffs_from_measure, spectral_from_coeffs};
use sumrule_core::ldp::rate_curve;
use sumrule_core::measures::MeasureS1;
use sumrule_core::sumrules::{
    verify_sum_rule, CoefficientSide, Ensemble, Side, Verdict, VerifyConfig,
};

#[test]
fn sampled_matrix_is_recovered_from_its_spectral_measure() {
    let spec = EnsembleSpec::new(EnsembleKind::Hermite, 30, 2.0, 11).unwrap();
    let data = sample(&spec).unwrap();
    let j = data.coefficients.matrix();
    let mu = spectral_from_coeffs(j).unwrap();
    let back = coeffs_from_measure(&mu, 30).unwrap();
    for (x, y) in j.b().iter().zip(back.b()) {
        assert!((x - y).abs() < 1e-9);
    }
    for (x, y) in j.a().iter().zip(back.a()) {
        assert!((x - y).abs() < 1e-9);
    }
    let weighted = empirical_measure(&data, true).unwrap();
    assert!((weighted.total_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn laguerre_samples_are_nonnegative() {
    let spec = EnsembleSpec::new(EnsembleKind::Laguerre { tau: 0.5 }, 200, 1.0, 3).unwrap();
    let data = sample(&spec).unwrap();
    assert!(data.eigenvalues.iter().all(|&x| x >= 0.0));
}

#[test]
fn rank_one_measure_verifies_from_its_own_coefficients() {
    let mu = MeasureS1::rank_one(0.5).unwrap();
    let r = verify_sum_rule(
        &Ensemble::Hermite,
        &CoefficientSide::FromMeasure { depth: 200 },
        &mu,
        &VerifyConfig::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!((r.sum_side.value - 0.125).abs() < 1e-9);
}

#[test]
fn kesten_mckay_equilibrium_has_zero_on_both_sides() {
    let e = Ensemble::jacobi(1.0, 2.0).unwrap();
    let mu = MeasureS1::equilibrium(e.law());
    let r = verify_sum_rule(
        &e,
        &CoefficientSide::FromMeasure { depth: 100 },
        &mu,
        &VerifyConfig::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.sum_side.value.abs() < 1e-8 && r.spectral_side.value.abs() < 1e-8);
}

#[test]
fn rate_curve_matches_the_closed_form() {
    let law = Ensemble::Hermite.law();
    let rows = rate_curve(&law, Side::Plus, &[2.2, 3.0]).unwrap();
    // (x/2) sqrt(x^2 - 4) - 2 ln((x + sqrt(x^2 - 4)) / 2)
    let closed = |x: f64| {
        let s = (x * x - 4.0).sqrt();
        0.5 * x * s - 2.0 * ((x + s) / 2.0).ln()
    };
    for r in rows {
        assert!((r.direct - closed(r.x)).abs() < 1e-10);
        assert!(r.discrepancy < 1e-6);
    }
}
