//! Cross-module flows: generated sets through spectra, certificates and scans.

use fpspectra::harness::{estimate_exponent, run_scan, ExperimentConfig, Preset};
use fpspectra::{
    chain_certificate, det_spectrum, gen_set, make_field, parse_set_spec, Error, FpSet,
    SetFamilySpec, SpectrumKind, SpectrumOptions,
};

#[test]
fn scan_interval_thm1i() {
    let mut cfg = ExperimentConfig::new(
        Preset::Thm1i,
        101,
        SetFamilySpec::interval(1, 0),
        vec![4, 8, 16],
    );
    cfg.trials = 2;
    let rs = run_scan(&cfg).unwrap();
    assert_eq!(rs.len(), 6);
    let ctx = make_field(101).unwrap();
    for r in &rs {
        let a = gen_set(ctx, &SetFamilySpec::interval(1, r.card_a)).unwrap();
        let f2 = det_spectrum(&a, 2, &SpectrumOptions::default())
            .unwrap()
            .card();
        assert_eq!(r.measured, f2 as f64);
        assert!((r.bound - (r.card_a as f64).powf(1.5)).abs() < 1e-9);
        assert!((r.ratio - r.measured / r.bound).abs() < 1e-12);
        assert!(r.exact);
    }
    let fit = estimate_exponent(&rs).unwrap();
    assert!(fit.slope > 0.0);
}

#[test]
fn scan_thm3_explicit() {
    let cfg = ExperimentConfig::new(Preset::Thm3, 5, SetFamilySpec::explicit(vec![0, 1]), vec![]);
    let rs = run_scan(&cfg).unwrap();
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0].measured, 3.0);
    assert!((rs[0].bound - 2f64.powf(1.5)).abs() < 1e-12);
    assert!((rs[0].ratio - 1.0607).abs() < 1e-4);
}

#[test]
fn scan_conj1_singleton() {
    let cfg = ExperimentConfig::new(Preset::Conj1, 101, SetFamilySpec::random(0, 0), vec![1]);
    let r = &run_scan(&cfg).unwrap()[0];
    assert_eq!((r.measured, r.bound, r.ratio), (1.0, 1.0, 1.0));
}

#[test]
fn out_of_window_sizes_are_flagged_not_dropped() {
    // |A| = 40 > 101^{1/2} for thm4.
    let mut cfg =
        ExperimentConfig::new(Preset::Thm4, 101, SetFamilySpec::random(0, 0), vec![5, 40]);
    cfg.budget = 1_000_000;
    let rs = run_scan(&cfg).unwrap();
    assert_eq!(rs.len(), 2);
    assert!(rs[0].hypothesis_ok);
    assert!(rs[1].hypothesis_violated());
    assert!(!rs[1].exact);
}

#[test]
fn bad_configs() {
    let mut cfg = ExperimentConfig::new(Preset::Thm1i, 100, SetFamilySpec::random(0, 0), vec![4]);
    assert!(matches!(run_scan(&cfg), Err(Error::ConfigInvalid(_))));
    cfg.p = 101;
    cfg.trials = 0;
    assert!(matches!(run_scan(&cfg), Err(Error::ConfigInvalid(_))));
    let mut cfg = ExperimentConfig::new(Preset::Dist2, 101, SetFamilySpec::random(0, 0), vec![30]);
    cfg.d = Some(3);
    assert!(matches!(
        run_scan(&cfg),
        Err(Error::BudgetExceededWithoutCertificate(_))
    ));
}

#[test]
fn certificate_below_exact_spectrum() {
    let ctx = make_field(31).unwrap();
    let a = parse_set_spec(ctx, "random:size=3,seed=9").unwrap();
    for d in 2..=4 {
        let cert = chain_certificate(&a, d, SpectrumKind::Det).unwrap();
        let exact = det_spectrum(&a, d, &SpectrumOptions::unlimited()).unwrap();
        assert!(cert.subset.is_subset(&exact.values), "d={d}");
        assert_eq!(cert.reevaluate().unwrap(), cert.subset);
    }
}

#[test]
fn sampled_spectrum_is_lower_bound() {
    let ctx = make_field(101).unwrap();
    let a = gen_set(ctx, &SetFamilySpec::random(4, 2)).unwrap();
    let exact = det_spectrum(&a, 3, &SpectrumOptions::unlimited()).unwrap();
    let opts = SpectrumOptions {
        budget: 20_000,
        seed: 3,
        ..Default::default()
    };
    let sampled = det_spectrum(&a, 3, &opts).unwrap();
    assert!(!sampled.exact);
    assert!(sampled.values.is_subset(&exact.values));
    assert!(sampled.matrices_enumerated <= 20_000);
}

#[test]
fn degenerate_sets() {
    let ctx = make_field(7).unwrap();
    let zero = FpSet::from_elements(ctx, &[0]).unwrap();
    assert_eq!(
        det_spectrum(&zero, 3, &SpectrumOptions::default())
            .unwrap()
            .values
            .to_vec(),
        vec![0]
    );
    let empty = FpSet::from_elements(ctx, &[]).unwrap();
    assert_eq!(
        det_spectrum(&empty, 2, &SpectrumOptions::default()).unwrap_err(),
        Error::EmptySet
    );
}
