//! Spectral splitting `ĥ = ĥ_B + ĥ_∞` and the Shannon cascade experiment,
//! which follows `‖Mⁿh_∞ − φ‖` and `‖Mⁿh_B‖` separately.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::cascade::fourier::{periodization_tail, FnSpectrum, FourierGridFn, PatchGrid, GAUSS_ORDER};
use crate::cascade::grid::GridFn;
use crate::filter::QmfFilter;
use crate::scalar::{ratio, Scalar};
use crate::Error;

use super::sets::{wold_sets, WoldSets};

/// `(ĥ_B, ĥ_∞)` with `ĥ_∞ = χ_{E_∞}ĥ` on the window of `wold`.
pub fn split_projection(h: &FourierGridFn, wold: &WoldSets) -> Result<(FourierGridFn, FourierGridFn), Error> {
    let inf = h.restrict(&wold.e_inf_window)?;
    let b = h.restrict(&wold.window_set().difference(&wold.e_inf_window))?;
    Ok((b, inf))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ShannonConfig {
    /// Translates `|l| ≤ patches` are stepped explicitly; the rest enter through a tail.
    pub patches: i64,
    /// Cells per patch.
    pub cells: usize,
    pub n_max: u32,
}

impl Default for ShannonConfig {
    fn default() -> Self {
        Self { patches: 128, cells: 32, n_max: 20 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShannonRow {
    pub n: u32,
    pub inf_diff: f64,
    pub b_norm: f64,
    pub total: f64,
    /// Largest `|Mⁿĥ|` found where the iterate must vanish.
    pub guard: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShannonTrace {
    pub config: ShannonConfig,
    pub rows: Vec<ShannonRow>,
    /// Why the trace stops before `n_max`, if it does.
    pub truncated: Option<String>,
}

impl ShannonTrace {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,inf_diff,B_norm,total\n");
        for r in &self.rows {
            s.push_str(&format!("{},{:.17e},{:.17e},{:.17e}\n", r.n, r.inf_diff, r.b_norm, r.total));
        }
        s
    }

    /// `max |total² − inf_diff² − B_norm²|`.
    pub fn pythagoras_defect(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.total.powi(2) - r.inf_diff.powi(2) - r.b_norm.powi(2)).abs())
            .fold(0.0, f64::max)
    }
}

fn phi_hat(omega: f64) -> f64 {
    if (-PI..PI).contains(&omega) {
        1.0
    } else {
        0.0
    }
}

fn zoom(mut g: PatchGrid, filter: &QmfFilter, n: u32) -> Result<PatchGrid, Error> {
    for _ in 0..n {
        g = g.step(filter)?;
    }
    Ok(g)
}

fn row<S: Scalar>(h: &GridFn<S>, cfg: &ShannonConfig, wold: &WoldSets, n: u32) -> Result<ShannonRow, Error> {
    let shannon = QmfFilter::shannon();
    // The support of Mⁿĥ lies within π/2ⁿ of each 2πl; patches are twice that wide.
    let half = if n == 0 { ratio(1, 1) } else { BigRational::new(2.into(), (1u64 << n).into()) };
    let centers: Vec<BigRational> = (-cfg.patches..=cfg.patches).map(|l| ratio(2 * l, 1)).collect();
    let start = PatchGrid::sample(h, &centers, &half, cfg.cells, GAUSS_ORDER)?;
    let window = wold.window_set();
    let inf = zoom(start.restrict(&wold.e_inf_window)?, &shannon, n)?;
    let b = zoom(start.restrict(&window.difference(&wold.e_inf_window))?, &shannon, n)?;
    let all = zoom(start, &shannon, n)?;

    let l_max = cfg.patches;
    let tail_start = FourierGridFn::sample(
        &FnSpectrum(|u: f64| Complex64::new(periodization_tail(h, h, u, l_max).re.max(0.0).sqrt(), 0.0)),
        ratio(0, 1),
        half,
        cfg.cells,
        GAUSS_ORDER,
    )?;
    let tail = zoom(PatchGrid::new(vec![tail_start]), &shannon, n)?.norm_sq();

    let guard = if n == 0 { 0.0 } else { all.max_outside(1.0) };
    let diff = |w: f64, v: Complex64| (v - phi_hat(w)).norm_sqr();
    Ok(ShannonRow {
        n,
        inf_diff: inf.integrate(diff).sqrt(),
        b_norm: (b.norm_sq() + tail).sqrt(),
        total: (all.integrate(diff) + tail).sqrt(),
        guard,
    })
}

/// Runs the experiment for `h` under the Shannon filter, `n = 0..=n_max`.
pub fn shannon_experiment_for<S: Scalar>(h: &GridFn<S>, cfg: ShannonConfig) -> Result<ShannonTrace, Error> {
    // The smallest window 2^{k+1}π covering every patch; on it E_∞ is resolved exactly.
    let k_max = (2 * cfg.patches + 1).max(2).ilog2();
    let wold = wold_sets(&QmfFilter::shannon(), k_max, ratio(1 << (k_max + 1), 1))?;
    let mut rows = Vec::new();
    let mut truncated = None;
    for n in 0..=cfg.n_max {
        match row(h, &cfg, &wold, n) {
            Ok(r) => rows.push(r),
            Err(e @ Error::LadderExhausted(_)) => {
                truncated = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ShannonTrace { config: cfg, rows, truncated })
}

/// The experiment for `h = χ_[0,1)`.
pub fn shannon_experiment(cfg: ShannonConfig) -> Result<ShannonTrace, Error> {
    shannon_experiment_for(&GridFn::box_int(0, 1, crate::scalar::ExactScalar::from_int(1)), cfg)
}
