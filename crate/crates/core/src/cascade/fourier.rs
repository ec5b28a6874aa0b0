//! Frequency-side cascade: `(Mh)ˆ(ω) = 2^{−1/2} m₀(e^{−iω/2}) ĥ(ω/2)`.
//!
//! A [`FourierGridFn`] samples `ĥ` at composite Gauss–Legendre nodes on a window
//! `[c − r, c + r)` (units of π). One cascade step doubles `c` and `r` and maps
//! every node to a node, so iterates are exact at the nodes. Band filters are
//! discontinuous, so each step checks that the band edges stay on cell edges;
//! once they cannot, the ladder is exhausted.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::filter::QmfFilter;
use crate::interval::IntervalSet;
use crate::laurent::LaurentPoly;
use crate::scalar::{ratio, Scalar};
use crate::Error;

use super::grid::{correlation, sinc, GridFn};

/// Nodes and weights of the `g`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(g: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; g];
    let mut weights = vec![0.0; g];
    for i in 0..g {
        let mut x = (PI * (i as f64 + 0.75) / (g as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(g, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(g, x);
        nodes[g - 1 - i] = x;
        weights[g - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(g: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=g {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = g as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Something whose Fourier transform can be evaluated pointwise.
pub trait Spectrum: Sync {
    fn spectrum(&self, omega: f64) -> Complex64;
}

impl<S: Scalar> Spectrum for GridFn<S> {
    fn spectrum(&self, omega: f64) -> Complex64 {
        self.fourier(omega)
    }
}

/// `scale·χ_[a, b)` with rational endpoints.
#[derive(Clone, Debug)]
pub struct BoxSpectrum {
    pub a: BigRational,
    pub b: BigRational,
    pub scale: f64,
}

impl BoxSpectrum {
    /// `b^{−1/2} χ_[0, b)`, unit norm.
    pub fn normalized(width: BigRational) -> Self {
        let scale = 1.0 / width.to_f64().unwrap_or(f64::NAN).sqrt();
        Self { a: BigRational::zero(), b: width, scale }
    }

    pub fn width(&self) -> BigRational {
        &self.b - &self.a
    }
}

impl Spectrum for BoxSpectrum {
    fn spectrum(&self, omega: f64) -> Complex64 {
        let (a, b) = (self.a.to_f64().unwrap_or(f64::NAN), self.b.to_f64().unwrap_or(f64::NAN));
        let w = b - a;
        Complex64::from_polar(self.scale * w * sinc(omega * w / 2.0), -omega * (a + b) / 2.0)
    }
}

/// Unit-norm Gaussian `(πs²)^{−1/4} e^{−x²/(2s²)}`.
#[derive(Clone, Copy, Debug)]
pub struct Gaussian {
    pub s: f64,
}

impl Gaussian {
    /// `|ĥ(ω)|²`.
    pub fn power(&self, omega: f64) -> f64 {
        2.0 * PI.sqrt() * self.s * (-(self.s * omega).powi(2)).exp()
    }
}

impl Spectrum for Gaussian {
    fn spectrum(&self, omega: f64) -> Complex64 {
        Complex64::new(self.power(omega).sqrt(), 0.0)
    }
}

/// Indicator of an interval set on the frequency axis (endpoints in units of π).
#[derive(Clone, Debug)]
pub struct BandIndicator(pub IntervalSet);

impl Spectrum for BandIndicator {
    fn spectrum(&self, omega: f64) -> Complex64 {
        Complex64::new(if self.0.contains_radians(omega) { 1.0 } else { 0.0 }, 0.0)
    }
}

/// Adapter for closures.
pub struct FnSpectrum<F>(pub F);

impl<F: Fn(f64) -> Complex64 + Sync> Spectrum for FnSpectrum<F> {
    fn spectrum(&self, omega: f64) -> Complex64 {
        (self.0)(omega)
    }
}

/// Samples of `ĥ` at Gauss nodes of `cells` equal cells tiling `[c − r, c + r)·π`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierGridFn {
    center: BigRational,
    half_width: BigRational,
    cells: usize,
    order: usize,
    values: Vec<Complex64>,
}

/// Default Gauss order per cell.
pub const GAUSS_ORDER: usize = 8;

impl FourierGridFn {
    pub fn sample(
        h: &dyn Spectrum,
        center: BigRational,
        half_width: BigRational,
        cells: usize,
        order: usize,
    ) -> Result<Self, Error> {
        if cells == 0 || order == 0 || half_width <= BigRational::zero() {
            return Err(Error::Grid("window needs positive width, cells and order".into()));
        }
        let mut g = Self { center, half_width, cells, order, values: Vec::new() };
        g.values = g.nodes().into_iter().map(|w| h.spectrum(w)).collect();
        Ok(g)
    }

    /// The window `[−Ω, Ω)` with `Ω = half_width·π`.
    pub fn centered(h: &dyn Spectrum, half_width: BigRational, cells: usize) -> Result<Self, Error> {
        Self::sample(h, BigRational::zero(), half_width, cells, GAUSS_ORDER)
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn half_width(&self) -> &BigRational {
        &self.half_width
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    /// Left edge and width of the cells, in units of π.
    fn cell_geometry(&self) -> (BigRational, BigRational) {
        let width = &self.half_width * ratio(2, self.cells as i64);
        (&self.center - &self.half_width, width)
    }

    /// Node positions in radians.
    pub fn nodes(&self) -> Vec<f64> {
        let (start, width) = self.cell_geometry();
        let (start, width) = (to_f64(&start) * PI, to_f64(&width) * PI);
        let (x, _) = gauss_legendre(self.order);
        (0..self.cells)
            .flat_map(|c| x.iter().map(move |t| start + width * (c as f64 + (t + 1.0) / 2.0)))
            .collect()
    }

    /// Quadrature weights in radians, aligned with [`nodes`](Self::nodes).
    pub fn weights(&self) -> Vec<f64> {
        let width = to_f64(&self.cell_geometry().1) * PI;
        let (_, w) = gauss_legendre(self.order);
        (0..self.cells).flat_map(|_| w.iter().map(|wi| wi * width / 2.0)).collect()
    }

    /// `(1/2π)∫ f(ω, ĥ(ω)) dω` over the window.
    pub fn integrate(&self, f: impl Fn(f64, Complex64) -> f64) -> f64 {
        let s: f64 = self
            .nodes()
            .iter()
            .zip(self.weights())
            .zip(&self.values)
            .map(|((&w, q), &v)| q * f(w, v))
            .sum();
        s / (2.0 * PI)
    }

    /// `(1/2π)∫|ĥ|²` over the window.
    pub fn norm_sq(&self) -> f64 {
        self.integrate(|_, v| v.norm_sqr())
    }

    /// Pointwise map `ĥ(ω) ↦ f(ω, ĥ(ω))` on the same nodes.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self.nodes().into_iter().zip(&self.values).map(|(w, &v)| f(w, v)).collect();
        Self { values, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm_sqr() == 0.0)
    }

    /// Whether the point `x·π` is a cell edge of this grid.
    fn on_edge(&self, x: &BigRational) -> bool {
        let (start, width) = self.cell_geometry();
        ((x - start) / width).is_integer()
    }

    /// Multiplies by the indicator of `set`. Every cell must lie wholly inside
    /// or wholly outside `set`; this is decided exactly.
    pub fn restrict(&self, set: &IntervalSet) -> Result<Self, Error> {
        let (start, width) = self.cell_geometry();
        let mut values = self.values.clone();
        for c in 0..self.cells {
            let a = &start + &width * ratio(c as i64, 1);
            let cell = IntervalSet::interval(a.clone(), &a + &width);
            let inside = cell.intersect(set).measure();
            if inside.is_zero() {
                values[c * self.order..(c + 1) * self.order].fill(Complex64::new(0.0, 0.0));
            } else if inside != width {
                return Err(Error::LadderExhausted(format!("set edge inside the cell at {a}π")));
            }
        }
        Ok(Self { values, ..self.clone() })
    }

    /// Band edges of `filter` inside the window must be cell edges of this grid.
    fn check_band_edges(&self, filter: &QmfFilter) -> Result<(), Error> {
        let Some(set) = filter.band_support() else { return Ok(()) };
        let lo = &self.center - &self.half_width;
        let hi = &self.center + &self.half_width;
        let trace = set.restrict(&lo, &hi);
        let bad = trace
            .intervals()
            .iter()
            .flat_map(|(a, b)| [a, b])
            .find(|e| **e != lo && **e != hi && !self.on_edge(e));
        match bad {
            Some(e) => Err(Error::LadderExhausted(format!(
                "band edge {e}π falls inside a cell of width {}π",
                self.cell_geometry().1
            ))),
            None => Ok(()),
        }
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn gain(filter: &QmfFilter, omega: f64) -> Complex64 {
    filter.m0_omega(omega) * std::f64::consts::FRAC_1_SQRT_2
}

/// Per-node factors `2^{−1/2} m₀(e^{−iω})` for one step. Band filters are
/// decided exactly, one cell at a time.
fn step_gains(filter: &QmfFilter, h: &FourierGridFn) -> Result<Vec<Complex64>, Error> {
    h.check_band_edges(filter)?;
    if filter.is_band() {
        let (start, width) = h.cell_geometry();
        let half = ratio(1, 2);
        let mut out = Vec::with_capacity(h.values.len());
        for c in 0..h.cells {
            let mid = &start + &width * (ratio(c as i64, 1) + &half);
            let g = if filter.band_contains(&mid) == Some(true) { 1.0 } else { 0.0 };
            out.extend(std::iter::repeat_n(Complex64::new(g, 0.0), h.order));
        }
        Ok(out)
    } else {
        Ok(h.nodes().into_iter().map(|w| gain(filter, w)).collect())
    }
}

fn apply_gains(h: &FourierGridFn, gains: &[Complex64]) -> FourierGridFn {
    let two = ratio(2, 1);
    FourierGridFn {
        center: &h.center * &two,
        half_width: &h.half_width * &two,
        cells: h.cells,
        order: h.order,
        values: h.values.iter().zip(gains).map(|(v, g)| v * g).collect(),
    }
}

/// One cascade step on the frequency side. The output window is twice as wide
/// with the same number of cells.
pub fn fourier_cascade_step(filter: &QmfFilter, h: &FourierGridFn) -> Result<FourierGridFn, Error> {
    Ok(apply_gains(h, &step_gains(filter, h)?))
}

/// Disjoint windows stepped together; used when the support of the iterates is
/// known to concentrate on a sparse set of translates.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchGrid {
    patches: Vec<FourierGridFn>,
}

impl PatchGrid {
    pub fn sample(
        h: &dyn Spectrum,
        centers: &[BigRational],
        half_width: &BigRational,
        cells: usize,
        order: usize,
    ) -> Result<Self, Error> {
        let patches = centers
            .iter()
            .map(|c| FourierGridFn::sample(h, c.clone(), half_width.clone(), cells, order))
            .collect::<Result<_, _>>()?;
        Ok(Self { patches })
    }

    pub fn new(patches: Vec<FourierGridFn>) -> Self {
        Self { patches }
    }

    pub fn restrict(&self, set: &IntervalSet) -> Result<Self, Error> {
        Ok(Self { patches: self.patches.iter().map(|p| p.restrict(set)).collect::<Result<_, _>>()? })
    }

    pub fn patches(&self) -> &[FourierGridFn] {
        &self.patches
    }

    /// Steps every patch. Gains are shared between patches whose windows agree
    /// modulo 2π, since `m₀` is 2π-periodic.
    pub fn step(&self, filter: &QmfFilter) -> Result<Self, Error> {
        let mut cache: HashMap<(BigRational, BigRational, usize, usize), Vec<Complex64>> = HashMap::new();
        let two = ratio(2, 1);
        let mut patches = Vec::with_capacity(self.patches.len());
        for p in &self.patches {
            let phase = &p.center - (&p.center / &two).floor() * &two;
            let key = (phase, p.half_width.clone(), p.cells, p.order);
            let gains = match cache.get(&key) {
                Some(g) => g,
                None => cache.entry(key).or_insert(step_gains(filter, p)?),
            };
            patches.push(apply_gains(p, gains));
        }
        Ok(Self { patches })
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64 + Copy) -> Self {
        Self { patches: self.patches.iter().map(|p| p.map(f)).collect() }
    }

    pub fn integrate(&self, f: impl Fn(f64, Complex64) -> f64 + Copy) -> f64 {
        self.patches.iter().map(|p| p.integrate(f)).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.integrate(|_, v| v.norm_sqr())
    }

    /// Largest `|ĥ|` at nodes farther than `radius·π` from their patch centre.
    pub fn max_outside(&self, radius: f64) -> f64 {
        self.patches
            .iter()
            .flat_map(|p| {
                let c = to_f64(&p.center) * PI;
                p.nodes().into_iter().zip(p.values.clone()).filter(move |(w, _)| (w - c).abs() > radius * PI)
            })
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

/// `Σ_{m≥0} (x + b m)^{−2}` for `x, b > 0`, by Euler–Maclaurin.
pub fn inverse_square_tail(x: f64, b: f64) -> f64 {
    1.0 / (b * x) + 0.5 / (x * x) + b / (6.0 * x.powi(3)) - b.powi(3) / (30.0 * x.powi(5))
}

/// `Σ_{|l| > L} conj(ĥ₁) ĥ₂ (u + 2πl)` for grid functions, using that `ω·ĥ(ω)`
/// is periodic with period `2π·2^J`.
pub fn periodization_tail<S: Scalar>(h1: &GridFn<S>, h2: &GridFn<S>, u: f64, l_max: i64) -> Complex64 {
    let level = h1.level().max(h2.level());
    let period = 1i64 << level;
    let b = 2.0 * PI * period as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for r in 0..period {
        let base = u + 2.0 * PI * r as f64;
        let amp = h1.fourier_numerator(base).conj() * h2.fourier_numerator(base);
        // Smallest l ≡ r above l_max, largest below −l_max.
        let up = r - (r - l_max - 1).div_euclid(period) * period;
        let down = r + (-l_max - 1 - r).div_euclid(period) * period;
        let x_up = u + 2.0 * PI * up as f64;
        let x_down = -(u + 2.0 * PI * down as f64);
        total += amp * (inverse_square_tail(x_up, b) + inverse_square_tail(x_down, b));
    }
    total
}

/// Deviations between the periodization `p₁` and the correlation `p₂`.
#[derive(Clone, Debug, Serialize)]
pub struct P1Report {
    pub samples: usize,
    pub terms: i64,
    /// Truncated periodization against `p₂`.
    pub max_raw_deviation: f64,
    /// Estimated mass of the omitted terms.
    pub max_tail: f64,
    /// Truncated periodization plus tail estimate against `p₂`.
    pub max_corrected_deviation: f64,
}

/// `p₁(h₁,h₂)(e^{−iω}) = Σ_n conj(ĥ₁)ĥ₂(ω + 2πn)` for `|ω + 2πn| ≲ Ω = half_width·π`,
/// compared with `p₂(h₁,h₂)` at `samples` points of `[−π, π)`.
pub fn p1_fourier_check<S: Scalar>(h1: &GridFn<S>, h2: &GridFn<S>, half_width: u32, samples: usize) -> P1Report {
    let terms = i64::from(half_width / 2);
    let p2 = correlation(h1, h2).to_float();
    let mut report = P1Report { samples, terms, max_raw_deviation: 0.0, max_tail: 0.0, max_corrected_deviation: 0.0 };
    for s in 0..samples {
        let omega = -PI + 2.0 * PI * (s as f64 + 0.5) / samples as f64;
        let raw: Complex64 = (-terms..=terms)
            .map(|n| {
                let w = omega + 2.0 * PI * n as f64;
                h1.fourier(w).conj() * h2.fourier(w)
            })
            .sum();
        let tail = periodization_tail(h1, h2, omega, terms);
        let target = p2.eval(Complex64::from_polar(1.0, -omega));
        report.max_raw_deviation = report.max_raw_deviation.max((raw - target).norm());
        report.max_tail = report.max_tail.max(tail.norm());
        report.max_corrected_deviation = report.max_corrected_deviation.max((raw + tail - target).norm());
    }
    report
}

/// Periodization of band-limited grid samples: `Σ_l conj(ĥ₁)ĥ₂(ω + 2πl)` at the nodes
/// of one period, compared with `p₂` (max deviation). Needs a window centred at 0
/// whose cells tile `2π`.
pub fn p1_band_check(h1: &FourierGridFn, h2: &FourierGridFn, p2: &LaurentPoly<Complex64>) -> Result<f64, Error> {
    if h1.center != h2.center || h1.half_width != h2.half_width || h1.cells != h2.cells || h1.order != h2.order {
        return Err(Error::Grid("periodization needs identical grids".into()));
    }
    let (_, width) = h1.cell_geometry();
    let per = ratio(2, 1) / &width;
    if !h1.center.is_zero() || !per.is_integer() {
        return Err(Error::Grid("cells must tile a period 2π of a centred window".into()));
    }
    let per = per.to_integer().to_usize().ok_or_else(|| Error::Grid("period too large".into()))?;
    if !(h1.cells - per).is_multiple_of(2) || h1.cells < per {
        return Err(Error::Grid("window must be an odd multiple of π".into()));
    }
    let first = (h1.cells - per) / 2;
    let nodes = h1.nodes();
    let g = h1.order;
    let mut max = 0.0f64;
    for c in first..first + per {
        for j in 0..g {
            let sum: Complex64 = (c % per..h1.cells)
                .step_by(per)
                .map(|cc| h1.values[cc * g + j].conj() * h2.values[cc * g + j])
                .sum();
            let target = p2.eval(Complex64::from_polar(1.0, -nodes[c * g + j]));
            max = max.max((sum - target).norm());
        }
    }
    Ok(max)
}

/// Classification of an obstruction sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionVerdict {
    /// Every term vanishes identically.
    ExactZero,
    /// Partial sum minus tail bound exceeds the threshold: the cascade diverges.
    Obstructed,
    /// Positive but below the relative precision of `|ĥ(0)|²`.
    BelowSignificance,
    /// Not separable from zero at the threshold.
    BelowThreshold,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub n_max: u64,
    pub partial_sum: f64,
    pub tail_bound: f64,
    /// `ε·|ĥ(0)|²`: smaller sums are below double-precision significance.
    pub significance_floor: f64,
    pub threshold: f64,
    pub verdict: ObstructionVerdict,
}

/// Divergence threshold on `sum − tail`.
pub const OBSTRUCTION_THRESHOLD: f64 = 1e-9;

/// Default truncation for obstruction sums.
pub const OBSTRUCTION_N_MAX: u64 = 1_000_000;

fn classify(partial: f64, tail: f64, floor: f64, exact_zero: bool, n_max: u64) -> ObstructionReport {
    let verdict = if exact_zero {
        ObstructionVerdict::ExactZero
    } else if partial - tail > OBSTRUCTION_THRESHOLD {
        ObstructionVerdict::Obstructed
    } else if partial > 0.0 && partial < floor {
        ObstructionVerdict::BelowSignificance
    } else {
        ObstructionVerdict::BelowThreshold
    };
    ObstructionReport {
        n_max,
        partial_sum: partial,
        tail_bound: tail,
        significance_floor: floor,
        threshold: OBSTRUCTION_THRESHOLD,
        verdict,
    }
}

/// `Σ_{0<|n|≤N} term(n)` summed smallest-first.
fn symmetric_sum(n_max: u64, term: impl Fn(i64) -> f64) -> f64 {
    (1..=n_max as i64).rev().map(|n| term(n) + term(-n)).sum()
}

/// Obstruction sum for `b^{−1/2}χ_[0,b)`, `b = p/q > 0`. Terms
/// `sin²(πnb)/(bπ²n²)` vanish exactly when `nb ∈ ℤ`; the sine argument is
/// reduced rationally first.
pub fn obstruction_box(p: i64, q: i64, n_max: u64) -> Result<ObstructionReport, Error> {
    if p <= 0 || q <= 0 {
        return Err(Error::Grid("box width must be positive".into()));
    }
    let b = p as f64 / q as f64;
    let term = |n: i64| {
        let frac = (n * p).rem_euclid(q);
        if frac == 0 {
            0.0
        } else {
            let s = (PI * frac as f64 / q as f64).sin();
            s * s / (b * PI * PI * (n * n) as f64)
        }
    };
    let partial = symmetric_sum(n_max, term);
    let exact_zero = p % q == 0;
    let tail = if exact_zero { 0.0 } else { 2.0 / (b * PI * PI * n_max as f64) };
    Ok(classify(partial, tail, f64::EPSILON * b, exact_zero, n_max))
}

/// Obstruction sum for the unit-norm Gaussian of width `s`.
pub fn obstruction_gaussian(g: Gaussian, n_max: u64) -> ObstructionReport {
    let term = |n: i64| g.power(2.0 * PI * n as f64);
    let partial = symmetric_sum(n_max, term);
    // Geometric bound on the omitted terms, ratio of consecutive terms ≤ e^{−4π²s²(2N+1)}.
    let next = term(n_max as i64 + 1);
    let ratio = (-(2.0 * PI * g.s).powi(2) * (2 * n_max + 3) as f64).exp();
    let tail = 2.0 * next / (1.0 - ratio);
    classify(partial, tail, f64::EPSILON * g.power(0.0), false, n_max)
}

/// Obstruction sum for a grid function; the tail uses `|ĥ(ω)| ≤ |A|_∞/|ω|`.
pub fn obstruction_grid<S: Scalar>(h: &GridFn<S>, n_max: u64) -> ObstructionReport {
    let partial = symmetric_sum(n_max, |n| h.fourier(2.0 * PI * n as f64).norm_sqr());
    let cells: f64 = h.values().iter().map(|v| v.magnitude()).sum();
    let a_max = 2.0 * cells;
    let tail = 2.0 * a_max * a_max / (4.0 * PI * PI * n_max as f64);
    let floor = f64::EPSILON * h.fourier(0.0).norm_sqr().max(f64::MIN_POSITIVE);
    // Integer cells have ĥ(2πn) = 0 for every n ≠ 0.
    let exact_zero = h.coarsen().level() == 0;
    classify(partial, tail, floor, exact_zero, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        for k in 0..16 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((q - exact).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn box_spectrum_matches_grid_transform() {
        let b = BoxSpectrum { a: ratio(1, 1), b: ratio(3, 1), scale: 0.5 };
        let h = GridFn::box_int(1, 3, ExactScalar::from_ratio(1, 2));
        for &w in &[0.0, 0.7, -3.1, 12.0] {
            assert!((b.spectrum(w) - h.fourier(w)).norm() < 1e-14);
        }
    }

    #[test]
    fn gaussian_has_unit_norm() {
        let g = Gaussian { s: 0.7 };
        let grid = FourierGridFn::centered(&g, ratio(16, 1), 64).unwrap();
        assert!((grid.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shannon_fixed_point_and_zero() {
        let f = QmfFilter::shannon();
        let phi = BandIndicator(IntervalSet::from_ratios(&[((-1, 1), (1, 1))]));
        let h = FourierGridFn::centered(&phi, ratio(1, 2), 8).unwrap();
        let m = fourier_cascade_step(&f, &h).unwrap();
        let again = FourierGridFn::centered(&phi, ratio(1, 1), 8).unwrap();
        assert_eq!(m.values(), again.values());
        let z = FourierGridFn::centered(&FnSpectrum(|_| Complex64::new(0.0, 0.0)), ratio(1, 1), 8).unwrap();
        assert!(fourier_cascade_step(&f, &z).unwrap().is_zero());
    }

    #[test]
    fn ladder_exhaustion() {
        // Four cells on [−π, π) put the edges ±π/2 on cell edges; three cells do not.
        let one = FnSpectrum(|_| Complex64::new(1.0, 0.0));
        let ok = FourierGridFn::centered(&one, ratio(1, 1), 4).unwrap();
        assert!(fourier_cascade_step(&QmfFilter::shannon(), &ok).is_ok());
        let bad = FourierGridFn::centered(&one, ratio(1, 1), 3).unwrap();
        assert!(matches!(fourier_cascade_step(&QmfFilter::shannon(), &bad), Err(Error::LadderExhausted(_))));
    }

    #[test]
    fn haar_periodization_with_tail() {
        let phi: GridFn<ExactScalar> = GridFn::box_int(0, 1, ExactScalar::from_int(1));
        let r = p1_fourier_check(&phi, &phi, 256, 64);
        assert!(r.max_raw_deviation > 1e-5);
        assert!(r.max_corrected_deviation <= 1e-8, "{r:?}");
        let cubic: GridFn<ExactScalar> = GridFn::box_int(0, 3, ExactScalar::from_ratio(1, 3));
        let shifted = GridFn::new(2, 3, vec![ExactScalar::from_int(1), ExactScalar::from_ratio(-1, 2)]);
        let r = p1_fourier_check(&cubic, &shifted, 256, 32);
        assert!(r.max_corrected_deviation <= 1e-8, "{r:?}");
    }

    #[test]
    fn shannon_band_periodization() {
        let phi = BandIndicator(IntervalSet::from_ratios(&[((-1, 1), (1, 1))]));
        let h = FourierGridFn::centered(&phi, ratio(4, 1), 16).unwrap();
        let dev = p1_band_check(&h, &h, &LaurentPoly::one()).unwrap();
        assert!(dev <= 1e-10);
    }

    #[test]
    fn box_obstruction_sums() {
        let unit = obstruction_box(1, 1, 1000).unwrap();
        assert_eq!(unit.partial_sum, 0.0);
        assert_eq!(unit.verdict, ObstructionVerdict::ExactZero);
        // Σ_{n≠0} sin²(πnb)/(bπ²n²) = {b}(1−{b})/b.
        let r = obstruction_box(7, 5, OBSTRUCTION_N_MAX).unwrap();
        let closed = 0.4 * 0.6 / 1.4;
        assert!((r.partial_sum - closed).abs() <= r.tail_bound);
        assert_eq!(r.verdict, ObstructionVerdict::Obstructed);
    }

    #[test]
    fn gaussian_obstruction_sums() {
        let narrow = obstruction_gaussian(Gaussian { s: 0.1 }, 1000);
        let direct: f64 = (1..50).map(|n| 2.0 * Gaussian { s: 0.1 }.power(2.0 * PI * n as f64)).sum();
        assert!((narrow.partial_sum - direct).abs() < 1e-15);
        assert!(narrow.partial_sum > 0.1 && narrow.partial_sum < 1.0);
        assert_eq!(narrow.verdict, ObstructionVerdict::Obstructed);
        let unit = obstruction_gaussian(Gaussian { s: 1.0 }, 1000);
        assert!(unit.partial_sum > 0.0 && unit.partial_sum < 1e-16);
        assert_eq!(unit.verdict, ObstructionVerdict::BelowSignificance);
    }

    #[test]
    fn grid_obstruction_matches_box() {
        let phi: GridFn<ExactScalar> = GridFn::box_int(0, 1, ExactScalar::from_int(1));
        assert_eq!(obstruction_grid(&phi, 100).verdict, ObstructionVerdict::ExactZero);
        let wide: GridFn<ExactScalar> = GridFn::new(1, 0, vec![ExactScalar::from_int(1); 3]);
        let r = obstruction_grid(&wide, 20000);
        let b = obstruction_box(3, 2, 20000).unwrap();
        assert!((r.partial_sum - 1.5 * b.partial_sum).abs() < 1e-12);
        let coarse: GridFn<ExactScalar> = GridFn::box_int(0, 2, ExactScalar::from_int(1)).refine(3);
        assert_eq!(obstruction_grid(&coarse, 10).verdict, ObstructionVerdict::ExactZero);
        assert_eq!(r.verdict, ObstructionVerdict::Obstructed);
    }
}
