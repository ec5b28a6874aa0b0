//! The subcommands. Each returns its artifacts and the list of failed checks.

use cascade_core::cascade::fourier::{obstruction_gaussian, obstruction_grid, Gaussian, ObstructionReport, Spectrum, OBSTRUCTION_N_MAX};
use cascade_core::cascade::{
    cascade_step, cascade_step_float, cascade_trace, convergence_diagnose, convergence_diagnose_band, DiagnoseReport,
    ExactGridFn, GridFn,
};
use cascade_core::filter::validate;
use cascade_core::laurent::LaurentPoly;
use cascade_core::ruelle::{fixed_space, invariant_degree, spectral_scan, FixedSpace, ScanConfig, SpectralScan};
use cascade_core::scalar::ratio;
use cascade_core::wold::{abstract_model_check, shannon_experiment_for, wold_sets, ShannonConfig, TilingReport, WoldDump};
use cascade_core::zak::{commutation_harness, dictionary_check, zak_isometry_check, HarnessReport, IsometryReport, RelationStats};
use cascade_core::{ExactScalar, QmfFilter};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::artifact::{Artifact, Outcome};
use crate::config::{ExperimentConfig, StartSpec};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Cascade,
    Ruelle,
    ZakHarness,
    Wold,
    ModelCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cascade => "cascade",
            Command::Ruelle => "ruelle",
            Command::ZakHarness => "zak-harness",
            Command::Wold => "wold",
            Command::ModelCheck => "model-check",
        }
    }
}

pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let filter = cfg.filter()?;
    match command {
        Command::Validate => run_validate(&filter),
        Command::Cascade => run_cascade(&filter, cfg),
        Command::Ruelle => run_ruelle(&filter, cfg),
        Command::ZakHarness => run_zak(&filter, cfg),
        Command::Wold => run_wold(&filter, cfg),
        Command::ModelCheck => run_model(&filter, cfg),
    }
}

fn run_validate(filter: &QmfFilter) -> Result<Outcome, CliError> {
    let report = validate(filter);
    let mut out = Outcome::default();
    for c in &report.checks {
        out.require(format!("validate/{}", c.name), c.pass, || {
            format!("residual {}", c.exact_residual.clone().unwrap_or_else(|| c.residual.to_string()))
        });
    }
    out.artifacts.push(Artifact::json("validate.json", &report)?);
    Ok(out)
}

/// `χ_[lo, hi)/(hi − lo)` when it is a fixed point of the cascade, which is the
/// case for masks whose scaling function is a normalized box.
pub fn box_scaling_function(filter: &QmfFilter) -> Option<ExactGridFn> {
    let mask = filter.mask_exact()?;
    let (lo, hi) = (mask.lo(), mask.hi());
    if hi <= lo {
        return None;
    }
    let phi = GridFn::box_int(lo, hi, ExactScalar::from_ratio(1, hi - lo));
    cascade_step(filter, &phi).ok()?.sub(&phi).is_zero().then_some(phi)
}

#[derive(Serialize)]
struct CascadeVerdict {
    filter: &'static str,
    iters: usize,
    diagnosis: Option<DiagnoseReport>,
    obstruction: Option<ObstructionReport>,
    note: Option<String>,
}

fn check_norm_identity(out: &mut Outcome, report: &DiagnoseReport, tol: f64) {
    if !(report.p2_phi_is_one && report.p2_f_is_one) {
        return;
    }
    let worst = report.trace.iter().map(|r| (r.norm_diff_sq - r.via_inner).abs()).fold(0.0, f64::max);
    out.require("cascade/norm-identity", worst <= tol, || format!("max |direct - via inner| = {worst:e} > {tol:e}"));
}

fn run_cascade(filter: &QmfFilter, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let iters = cfg.iters.unwrap_or(8);
    let start = cfg.start.clone().unwrap_or(StartSpec::Haar);
    let mut out = Outcome::default();
    let verdict = match filter {
        QmfFilter::Band(_) => {
            let window = match &cfg.window {
                None => 15,
                Some(w) if w.is_integer() && w.to_integer().is_odd() => {
                    w.to_integer().to_i64().ok_or_else(|| CliError::Config("window too large".into()))?
                }
                Some(w) => return Err(CliError::Config(format!("band cascades need an odd integer window, got {w}"))),
            };
            let (spectrum, obstruction): (Box<dyn Spectrum>, ObstructionReport) = match start {
                StartSpec::Gauss(s) => (Box::new(Gaussian { s }), obstruction_gaussian(Gaussian { s }, OBSTRUCTION_N_MAX)),
                other => {
                    let h = other.grid_fn()?;
                    let o = obstruction_grid(&h, OBSTRUCTION_N_MAX);
                    (Box::new(h), o)
                }
            };
            let report = convergence_diagnose_band(filter, spectrum.as_ref(), window, iters, 64)?;
            check_norm_identity(&mut out, &report, cfg.tolerances.cascade);
            out.artifacts.push(Artifact::csv("trace.csv", &report.trace)?);
            CascadeVerdict { filter: filter.kind_name(), iters, diagnosis: Some(report), obstruction: Some(obstruction), note: None }
        }
        QmfFilter::Laurent(cascade_core::AnyPoly::Exact(_)) => {
            let h = start.grid_fn()?;
            let phi = box_scaling_function(filter);
            let rows = cascade_trace(|g| cascade_step(filter, g), phi.as_ref(), &h, iters)?;
            out.artifacts.push(Artifact::csv("trace.csv", &rows)?);
            match phi {
                Some(phi) => {
                    let report = convergence_diagnose(filter, &phi, &h, iters)?;
                    check_norm_identity(&mut out, &report, cfg.tolerances.cascade);
                    CascadeVerdict { filter: filter.kind_name(), iters, diagnosis: Some(report), obstruction: None, note: None }
                }
                None => CascadeVerdict {
                    filter: filter.kind_name(),
                    iters,
                    diagnosis: None,
                    obstruction: None,
                    note: Some("the scaling function is not a grid function; trace only".into()),
                },
            }
        }
        QmfFilter::Laurent(cascade_core::AnyPoly::Float(_)) => {
            let h = start.grid_fn()?.to_complex();
            let rows = cascade_trace(|g| cascade_step_float(filter, g), None, &h, iters)?;
            out.artifacts.push(Artifact::csv("trace.csv", &rows)?);
            CascadeVerdict {
                filter: filter.kind_name(),
                iters,
                diagnosis: None,
                obstruction: None,
                note: Some("float mask: no reference scaling function; trace only".into()),
            }
        }
    };
    out.artifacts.push(Artifact::json("verdict.json", &verdict)?);
    Ok(out)
}

#[derive(Serialize)]
#[serde(untagged)]
enum Coeffs {
    Exact(Vec<String>),
    Float(Vec<[f64; 2]>),
}

#[derive(Serialize)]
struct PolyDump {
    lo: i64,
    coeffs: Coeffs,
}

fn exact_dump(p: &LaurentPoly<ExactScalar>) -> PolyDump {
    PolyDump { lo: p.lo(), coeffs: Coeffs::Exact(p.coeffs().iter().map(ToString::to_string).collect()) }
}

fn float_dump(p: &LaurentPoly<num_complex::Complex64>) -> PolyDump {
    PolyDump { lo: p.lo(), coeffs: Coeffs::Float(p.coeffs().iter().map(|c| [c.re, c.im]).collect()) }
}

#[derive(Serialize)]
struct RuelleDump {
    filter: &'static str,
    degree: i64,
    dimension: usize,
    basis: Vec<PolyDump>,
    residual: Option<f64>,
    scan: SpectralScan,
}

fn run_ruelle(filter: &QmfFilter, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let degree = match cfg.degree {
        Some(d) => d,
        None if filter.is_band() => 8,
        None => invariant_degree(filter)?,
    };
    let space = fixed_space(filter, degree)?;
    let scan = spectral_scan(filter, degree, &ScanConfig::default())?;
    let mut out = Outcome::default();
    out.require("ruelle/fixed-space", space.dimension() >= 1, || "no fixed vector found".into());
    let (basis, residual) = match &space {
        FixedSpace::Exact(b) => (b.iter().map(exact_dump).collect(), None),
        FixedSpace::Float { basis, residual } => {
            let tol = cfg.tolerances.ruelle;
            out.require("ruelle/residual", *residual <= tol, || format!("{residual:e} > {tol:e}"));
            (basis.iter().map(float_dump).collect(), Some(*residual))
        }
    };
    let dump = RuelleDump { filter: filter.kind_name(), degree, dimension: space.dimension(), basis, residual, scan };
    out.artifacts.push(Artifact::json("ruelle.json", &dump)?);
    Ok(out)
}

#[derive(Serialize)]
struct ZakDump {
    harness: HarnessReport,
    isometry: IsometryReport,
    dictionary: Vec<RelationStats>,
}

fn run_zak(filter: &QmfFilter, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (n_z, n_x) = cfg.grid.unwrap_or((64, 64));
    let trials = cfg.trials.unwrap_or(50);
    let seed = cfg.seed();
    let tol = cfg.tolerances;
    let harness = commutation_harness(filter, trials, n_z, n_x, seed)?;
    let isometry = zak_isometry_check(trials, seed)?;
    let dictionary = dictionary_check(filter, trials.min(20), seed)?;
    let mut out = Outcome::default();
    for r in harness.relations.iter().chain(&dictionary) {
        out.require(format!("zak/{}", r.relation), r.max_residual <= tol.zak, || format!("{:e} > {:e}", r.max_residual, tol.zak));
    }
    out.require("zak/isometry", isometry.norm_max <= tol.isometry, || format!("{:e}", isometry.norm_max));
    out.require("zak/round-trip", isometry.round_trip_max <= tol.isometry, || format!("{:e}", isometry.round_trip_max));
    out.require("zak/box-is-one", isometry.box_is_one, || "Z(box) differs from 1".into());
    out.artifacts.push(Artifact::json("zak_harness.json", &ZakDump { harness, isometry, dictionary })?);
    Ok(out)
}

#[derive(Serialize)]
struct WoldOutput {
    sets: WoldDump,
    tiling: TilingReport,
    monotone_in_window: bool,
}

fn run_wold(filter: &QmfFilter, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let k_max = cfg.kmax.unwrap_or(3);
    let window = cfg.window.clone().unwrap_or_else(|| ratio(1 << (k_max + 1).min(62), 1));
    let sets = wold_sets(filter, k_max, window)?;
    let tiling = sets.tiling();
    let mut out = Outcome::default();
    if filter.is_band() {
        out.require("wold/tiling", tiling.exact, || format!("defect {} overlap {}", tiling.defect, tiling.overlap));
    }
    let output = WoldOutput { sets: sets.dump(), monotone_in_window: sets.monotone_in_window(), tiling };
    out.artifacts.push(Artifact::json("wold_sets.json", &output)?);

    if *filter == QmfFilter::shannon() {
        let h = cfg.start.clone().unwrap_or(StartSpec::Haar).grid_fn()?;
        let n_max = cfg.iters.map_or(Ok(20), u32::try_from).map_err(|_| CliError::Config("iters too large".into()))?;
        let trace = shannon_experiment_for(&h, ShannonConfig { n_max, ..Default::default() })?;
        let defect = trace.pythagoras_defect();
        let tol = cfg.tolerances.pythagoras;
        out.require("wold/pythagoras", defect <= tol, || format!("{defect:e} > {tol:e}"));
        if let Some(why) = &trace.truncated {
            out.require("wold/trace-complete", false, || why.clone());
        }
        out.artifacts.push(Artifact::text("shannon.csv", trace.to_csv()));
    }
    Ok(out)
}

fn run_model(filter: &QmfFilter, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let levels = cfg.levels.unwrap_or(6);
    let n = cfg.grid.map_or(128, |g| g.0);
    let trials = cfg.trials.unwrap_or(50);
    let report = abstract_model_check(filter, levels, n, trials, cfg.seed())?;
    let tol = cfg.tolerances.model;
    let mut out = Outcome::default();
    for (name, v) in [
        ("relation-1", report.relation_1),
        ("relation-2", report.relation_2),
        ("adjointness", report.adjointness),
        ("mstar-m", report.mstar_m),
        ("kernel", report.kernel),
        ("wold-sum", report.wold_sum),
    ] {
        out.require(format!("model/{name}"), v <= tol, || format!("{v:e} > {tol:e}"));
    }
    out.artifacts.push(Artifact::json("model_check.json", &report)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(filter: &str) -> ExperimentConfig {
        ExperimentConfig { filter: Some(filter.into()), ..Default::default() }
    }

    #[test]
    fn box_scaling_functions() {
        assert_eq!(box_scaling_function(&QmfFilter::haar()), Some(GridFn::box_int(0, 1, ExactScalar::from_int(1))));
        assert_eq!(box_scaling_function(&QmfFilter::cubic()), Some(GridFn::box_int(0, 3, ExactScalar::from_ratio(1, 3))));
        assert!(box_scaling_function(&QmfFilter::daubechies4()).is_none());
        assert!(box_scaling_function(&QmfFilter::shannon()).is_none());
    }

    #[test]
    fn haar_trace_is_fixed() {
        let mut c = cfg("haar");
        c.start = Some("box:0,1".parse().unwrap());
        let out = run(Command::Cascade, &c).unwrap();
        assert!(out.passed());
        let csv = String::from_utf8(out.artifacts[0].bytes.clone()).unwrap();
        assert!(csv.starts_with("n,norm_mn_h,norm_diff_phi,p2_deviation,inner_re\n"));
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("0.0")));
    }

    #[test]
    fn perturbed_mask_fails_validation() {
        let out = run(Command::Validate, &cfg("perturbed_haar")).unwrap();
        assert!(out.failures.iter().any(|f| f.check == "validate/qmf"));
        assert!(run(Command::Validate, &cfg("cubic")).unwrap().passed());
    }

    #[test]
    fn band_window_must_be_odd() {
        let mut c = cfg("shannon");
        c.window = Some(ratio(4, 1));
        assert!(run(Command::Cascade, &c).is_err());
        c.window = Some(ratio(5, 1));
        c.iters = Some(3);
        let out = run(Command::Cascade, &c).unwrap();
        assert!(out.passed(), "{:?}", out.failures);
    }
}
