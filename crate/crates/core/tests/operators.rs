//! End-to-end behaviour of the public API on the standard filters.

use cascade_core::cascade::fourier::{obstruction_box, obstruction_gaussian, Gaussian, ObstructionVerdict};
use cascade_core::cascade::{cascade_step, cascade_trace, convergence_diagnose, GridFn, Verdict};
use cascade_core::filter::validate;
use cascade_core::ruelle::{fixed_space, invariant_degree, ruelle_apply, spectral_scan, FixedSpace, ScanConfig};
use cascade_core::wold::{abstract_model_check, wold_sets, ShannonConfig};
use cascade_core::{ratio, AnyPoly, Error, ExactPoly, ExactScalar, IntervalSet, LaurentPoly, QmfFilter};

fn one() -> ExactScalar {
    ExactScalar::from_int(1)
}

#[test]
fn json_filters_match_constructors() {
    let haar = QmfFilter::from_json(r#"{"kind":"laurent","mask":[[1,1],[1,1]]}"#).unwrap();
    assert_eq!(haar, QmfFilter::haar());
    let shannon = QmfFilter::from_json(r#"{"kind":"band","support":[[-1,2],[1,2]]}"#).unwrap();
    assert_eq!(shannon, QmfFilter::shannon());
    assert!(matches!(QmfFilter::from_json(r#"{"kind":"wavelet"}"#), Err(Error::Parse(_))));
    assert!(matches!(QmfFilter::from_json(r#"{"kind":"band","support":[[1,2],[-1,2]]}"#), Err(Error::Parse(_))));
}

#[test]
fn validation_verdicts() {
    for f in [QmfFilter::haar(), QmfFilter::cubic(), QmfFilter::shannon(), QmfFilter::daubechies4()] {
        assert!(validate(&f).all_pass(), "{f:?}");
    }
    let bad = validate(&QmfFilter::exact_mask(0, &[(1, 1), (11, 10)]));
    assert!(!bad.check("qmf").unwrap().pass);
}

#[test]
fn box_scaling_functions_are_fixed() {
    let haar_phi = GridFn::box_int(0, 1, one());
    // Grid functions compare by representation, so equality is tested through the difference.
    assert!(cascade_step(&QmfFilter::haar(), &haar_phi).unwrap().sub(&haar_phi).is_zero());
    let cubic_phi = GridFn::box_int(0, 3, ExactScalar::from_ratio(1, 3));
    assert!(cascade_step(&QmfFilter::cubic(), &cubic_phi).unwrap().sub(&cubic_phi).is_zero());

    let rows = cascade_trace(|h| cascade_step(&QmfFilter::haar(), h), Some(&haar_phi), &haar_phi, 8).unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.norm_diff_phi == Some(0.0) && r.p2_deviation == 0.0));
}

#[test]
fn haar_diagnosis_of_translate() {
    // F = χ_[1,2): p(φ, F) = z, so p(φ,F)(1) = 1 and the cascade converges.
    let phi = GridFn::box_int(0, 1, one());
    let f = GridFn::box_int(1, 2, one());
    let r = convergence_diagnose(&QmfFilter::haar(), &phi, &f, 6).unwrap();
    assert!(r.p2_phi_is_one && r.p2_f_is_one);
    assert_eq!(r.verdict, Some(Verdict::Converges));
    assert!(r.trace.iter().all(|row| (row.norm_diff_sq - row.via_inner).abs() < 1e-15));
    assert!(r.trace.last().unwrap().norm_diff_sq < r.trace[0].norm_diff_sq);
}

#[test]
fn cubic_fixed_space_contains_eigenfunction() {
    let f = QmfFilter::cubic();
    let alpha = LaurentPoly::new(-2, [1, 2, 3, 2, 1].iter().map(|&k| ExactScalar::from_ratio(k, 9)).collect());
    assert_eq!(ruelle_apply(&f, &AnyPoly::Exact(alpha.clone())).unwrap(), AnyPoly::Exact(alpha));
    let n = invariant_degree(&f).unwrap();
    match fixed_space(&f, n).unwrap() {
        FixedSpace::Exact(basis) => assert!(!basis.is_empty()),
        FixedSpace::Float { .. } => panic!("exact filter gave a float basis"),
    }
    assert!(matches!(fixed_space(&f, n - 1), Err(Error::DegreeBound { .. })));
    let scan = spectral_scan(&QmfFilter::haar(), 4, &ScanConfig::default()).unwrap();
    assert!(scan.multiplicity_of_one >= 1);
    assert_eq!(ruelle_apply(&QmfFilter::haar(), &AnyPoly::Exact(ExactPoly::one())).unwrap(), AnyPoly::Exact(ExactPoly::one()));
}

#[test]
fn shannon_wold_sets() {
    let s = wold_sets(&QmfFilter::shannon(), 3, ratio(16, 1)).unwrap();
    let e = s.e.restrict(&ratio(0, 1), &ratio(4, 1));
    assert_eq!(e, IntervalSet::interval(ratio(1, 1), ratio(3, 1)));
    assert_eq!(s.e_inf_window, IntervalSet::interval(ratio(-1, 1), ratio(1, 1)));
    assert!(s.tiling().exact && s.monotone_in_window());
    assert!(matches!(wold_sets(&QmfFilter::shannon(), 3, ratio(15, 1)), Err(Error::Window { .. })));
}

#[test]
fn obstruction_verdicts() {
    assert_eq!(obstruction_box(1, 1, 10_000).unwrap().verdict, ObstructionVerdict::ExactZero);
    assert_eq!(obstruction_box(7, 5, 10_000).unwrap().verdict, ObstructionVerdict::Obstructed);
    assert_eq!(obstruction_gaussian(Gaussian { s: 0.1 }, 10_000).verdict, ObstructionVerdict::Obstructed);
    assert_eq!(obstruction_gaussian(Gaussian { s: 1.0 }, 10_000).verdict, ObstructionVerdict::BelowSignificance);
    assert!(obstruction_box(0, 1, 10).is_err());
}

#[test]
fn sub_isometry_model_on_float_filter() {
    let r = abstract_model_check(&QmfFilter::daubechies4(), 5, 64, 10, 9).unwrap();
    assert!(r.max_residual() <= 1e-10, "{r:?}");
}

#[test]
fn shannon_trace_short_run() {
    let t = cascade_core::wold::shannon_experiment(ShannonConfig { patches: 16, cells: 32, n_max: 3 }).unwrap();
    assert_eq!(t.rows.len(), 4);
    assert!(t.pythagoras_defect() < 1e-8);
    assert!(t.to_csv().starts_with("n,inf_diff,B_norm,total\n"));
}
