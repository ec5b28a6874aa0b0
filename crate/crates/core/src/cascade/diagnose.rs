//! Cascade traces and the convergence criterion `p(φ, F)(1) = 1`.
//!
//! When `p₂(φ) = p₂(F) = 𝟙`, the iterates satisfy
//! `‖φ − MⁿF‖² = 2 − 2 Re⟨φ, MⁿF⟩`, and they converge to `φ` exactly when
//! `p(φ, F)` is continuous at `z = 1` with value 1. Continuity cannot be read off
//! finitely many coefficients, so reports carry the Cesàro value and a caveat.

use num_complex::Complex64;
use serde::Serialize;

use crate::filter::QmfFilter;
use crate::interval::IntervalSet;
use crate::laurent::{ExactPoly, LaurentPoly};
use crate::scalar::{ratio, ExactScalar, Scalar};
use crate::Error;

use super::fourier::{fourier_cascade_step, p1_band_check, BandIndicator, FourierGridFn, Spectrum, GAUSS_ORDER};
use super::grid::{correlation, ExactGridFn, GridFn};

/// Default Cesàro window.
pub const CESARO_WINDOW: usize = 1 << 10;

/// One row of a cascade trace.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub norm_mn_h: f64,
    /// `‖φ − Mⁿh‖`, absent without a reference `φ`.
    pub norm_diff_phi: Option<f64>,
    /// `max_k |p₂(Mⁿh)_k − p₂(φ)_k|`, or against `𝟙` without a reference.
    pub p2_deviation: f64,
    /// `Re⟨φ, Mⁿh⟩`.
    pub inner_re: Option<f64>,
}

/// Runs `iters` cascade steps from `h` and records one row per iterate, `n = 0..=iters`.
pub fn cascade_trace<S: Scalar>(
    step: impl Fn(&GridFn<S>) -> Result<GridFn<S>, Error>,
    phi: Option<&GridFn<S>>,
    h: &GridFn<S>,
    iters: usize,
) -> Result<Vec<TraceRow>, Error> {
    let reference = phi.map_or_else(|| LaurentPoly::one(), |p| correlation(p, p));
    let mut rows = Vec::with_capacity(iters + 1);
    let mut cur = h.clone();
    for n in 0..=iters {
        let p2 = correlation(&cur, &cur).sub(&reference);
        let dev = p2.coeffs().iter().map(Scalar::magnitude).fold(0.0, f64::max);
        let (diff, inner) = match phi {
            Some(p) => {
                let d = p.sub(&cur).norm_sq().to_complex().re.max(0.0).sqrt();
                (Some(d), Some(p.inner(&cur).to_complex().re))
            }
            None => (None, None),
        };
        rows.push(TraceRow {
            n,
            norm_mn_h: cur.norm_sq().to_complex().re.max(0.0).sqrt(),
            norm_diff_phi: diff,
            p2_deviation: dev,
            inner_re: inner,
        });
        if n < iters {
            cur = step(&cur)?;
        }
    }
    Ok(rows)
}

/// `σ_W(1) = Σ_{|k|<W} (1 − |k|/W) p_k`, the mean of the first `W` symmetric partial sums at `z = 1`.
pub fn cesaro_at_one(coeffs: impl IntoIterator<Item = (i64, Complex64)>, window: usize) -> Complex64 {
    let w = window as f64;
    coeffs
        .into_iter()
        .filter(|(k, _)| (k.unsigned_abs() as usize) < window)
        .map(|(k, c)| c * (1.0 - k.unsigned_abs() as f64 / w))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converges,
    Diverges,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnoseRow {
    pub n: usize,
    /// `‖φ − MⁿF‖²` computed directly.
    pub norm_diff_sq: f64,
    /// `2 − 2 Re⟨φ, MⁿF⟩`.
    pub via_inner: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnoseReport {
    pub p2_phi_is_one: bool,
    pub p2_f_is_one: bool,
    /// `(k, Re p_k, Im p_k)` for the computed coefficients of `p(φ, F)`.
    pub p_coefficients: Vec<(i64, f64, f64)>,
    /// Exact `p(φ, F)(1)` when `p` is a finite Laurent polynomial.
    pub exact_value_at_one: Option<String>,
    pub cesaro_window: usize,
    pub cesaro_value: f64,
    pub trace: Vec<DiagnoseRow>,
    /// Absent when a hypothesis fails.
    pub verdict: Option<Verdict>,
    pub note: String,
}

const CAVEAT: &str = "continuity of p(phi,F) at z=1 is assumed; the value is a Cesaro proxy";
const VALUE_TOL: f64 = 1e-9;

fn verdict_for(value: f64, ok: bool) -> (Option<Verdict>, String) {
    if !ok {
        return (None, "hypothesis violated: p2(phi) and p2(F) must both equal 1".into());
    }
    let v = if (value - 1.0).abs() <= VALUE_TOL { Verdict::Converges } else { Verdict::Diverges };
    (Some(v), CAVEAT.into())
}

/// Diagnosis for a laurent filter with grid-function `φ` and start `F`, all exact.
pub fn convergence_diagnose(
    filter: &QmfFilter,
    phi: &ExactGridFn,
    f: &ExactGridFn,
    n_max: usize,
) -> Result<DiagnoseReport, Error> {
    let one = ExactPoly::one();
    let (p2_phi_is_one, p2_f_is_one) = (correlation(phi, phi) == one, correlation(f, f) == one);
    let p = correlation(phi, f);
    let exact = p.terms().fold(ExactScalar::from_int(0), |acc, (_, c)| acc + c.clone());
    let cesaro = cesaro_at_one(p.terms().map(|(k, c)| (k, c.to_complex())), CESARO_WINDOW).re;

    let mut trace = Vec::with_capacity(n_max + 1);
    let mut cur = f.clone();
    for n in 0..=n_max {
        let direct = phi.sub(&cur).norm_sq();
        let via = ExactScalar::from_int(2) - ExactScalar::from_int(2) * phi.inner(&cur);
        trace.push(DiagnoseRow { n, norm_diff_sq: direct.to_f64(), via_inner: via.to_f64() });
        if n < n_max {
            cur = super::grid::cascade_step(filter, &cur)?;
        }
    }
    let (verdict, note) = verdict_for(exact.to_f64(), p2_phi_is_one && p2_f_is_one);
    Ok(DiagnoseReport {
        p2_phi_is_one,
        p2_f_is_one,
        p_coefficients: p.terms().map(|(k, c)| (k, c.to_f64(), 0.0)).collect(),
        exact_value_at_one: Some(exact.to_string()),
        cesaro_window: CESARO_WINDOW,
        cesaro_value: cesaro,
        trace,
        verdict,
        note,
    })
}

/// Diagnosis for a band filter whose scaling function has `φ̂ = χ_[−π,π)`, with a
/// start `F̂` supported in `[−W, W)`, `W = window·π` (odd `window`).
pub fn convergence_diagnose_band(
    filter: &QmfFilter,
    f_hat: &dyn Spectrum,
    window: i64,
    n_max: usize,
    n_coeffs: i64,
) -> Result<DiagnoseReport, Error> {
    let phi_hat = BandIndicator(IntervalSet::from_ratios(&[((-1, 1), (1, 1))]));
    let cells = 16 * window as usize;
    let wide = |h: &dyn Spectrum| FourierGridFn::centered(h, ratio(window, 1), cells);
    let (phi_grid, f_grid) = (wide(&phi_hat)?, wide(f_hat)?);
    let one = LaurentPoly::one();
    let p2_phi_is_one = p1_band_check(&phi_grid, &phi_grid, &one)? <= VALUE_TOL;
    let p2_f_is_one = p1_band_check(&f_grid, &f_grid, &one)? <= VALUE_TOL;

    // p(φ,F)(e^{−iω}) = F̂(ω) on [−π, π), so p_k = (1/2π)∫_{−π}^{π} F̂(ω) e^{ikω} dω.
    let base = FourierGridFn::centered(f_hat, ratio(1, 1), 64)?;
    let coeffs: Vec<(i64, Complex64)> = (-n_coeffs..=n_coeffs)
        .map(|k| {
            let re = base.integrate(|w, v| (v * Complex64::from_polar(1.0, k as f64 * w)).re);
            let im = base.integrate(|w, v| (v * Complex64::from_polar(1.0, k as f64 * w)).im);
            (k, Complex64::new(re, im))
        })
        .collect();
    let cesaro = cesaro_at_one(coeffs.iter().copied(), CESARO_WINDOW).re;

    let mut trace = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        // Mⁿ F̂ on [−π, π) only needs F̂ on [−π/2ⁿ, π/2ⁿ).
        let scale = ratio(1, 1 << n);
        let mut g = FourierGridFn::centered(f_hat, scale, 64)?;
        for _ in 0..n {
            g = fourier_cascade_step(filter, &g)?;
        }
        let inner = g.integrate(|_, v| v.re);
        // M is isometric on starts with p₂(F) = 𝟙, so ‖MⁿF‖² = ‖F‖².
        let direct = 1.0 + f_grid.norm_sq() - 2.0 * inner;
        trace.push(DiagnoseRow { n, norm_diff_sq: direct, via_inner: 2.0 - 2.0 * inner });
    }
    let (verdict, note) = verdict_for(cesaro, p2_phi_is_one && p2_f_is_one);
    Ok(DiagnoseReport {
        p2_phi_is_one,
        p2_f_is_one,
        p_coefficients: coeffs.iter().map(|(k, c)| (*k, c.re, c.im)).collect(),
        exact_value_at_one: None,
        cesaro_window: CESARO_WINDOW,
        cesaro_value: cesaro,
        trace,
        verdict,
        note: format!("{note}; coefficients by quadrature, |k| <= {n_coeffs}"),
    })
}

/// `‖F‖² = (1/2π)∫|F̂|²` on `[−W, W)`.
pub fn band_norm_sq(f_hat: &dyn Spectrum, window: i64) -> Result<f64, Error> {
    Ok(FourierGridFn::sample(f_hat, ratio(0, 1), ratio(window, 1), 16 * window as usize, GAUSS_ORDER)?.norm_sq())
}
