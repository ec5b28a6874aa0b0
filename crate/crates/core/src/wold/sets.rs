//! Frequency-side supports of the Wold components for band filters.
//!
//! All sets are exact, with endpoints in units of π.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::filter::{zero_set, zero_set_preimage, QmfFilter, ZeroSet};
use crate::interval::{IntervalSet, PeriodicDump, PeriodicIntervalSet};
use crate::rng::{self, ProbeRng};
use crate::scalar::ratio;
use crate::Error;

const LAURENT_NOTE: &str = "laurent filter: the zero set of m0 has measure zero, so ker M* = 0 and every E-set is empty";

fn pow2(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << k)
}

fn empty(period: BigRational) -> PeriodicIntervalSet {
    PeriodicIntervalSet::periodize(period, &IntervalSet::empty()).expect("positive period")
}

/// `c₀(N(m₀))` for band filters, `None` for laurent ones.
fn band_zero_set(filter: &QmfFilter) -> Option<IntervalSet> {
    match zero_set(filter) {
        ZeroSet::Band(n) => Some(n),
        ZeroSet::Points { .. } => None,
    }
}

/// `E(m₀) = ∪ 2·c₀(N(m₀)) + 4πn`, the frequency support of `ker M*`.
pub fn kernel_set(filter: &QmfFilter) -> PeriodicIntervalSet {
    match band_zero_set(filter) {
        Some(n) => {
            let doubled = n.affine(&ratio(2, 1), &BigRational::zero()).expect("nonzero scale");
            PeriodicIntervalSet::periodize(ratio(4, 1), &doubled).expect("positive period")
        }
        None => empty(ratio(4, 1)),
    }
}

/// `F_k = ∪ 2^k·c₀(N(m₀⁽ᵏ⁾)) + 2^{k+1}πn` with `N(m₀⁽ᵏ⁾) = ∪_{j<k} σ^{−j}N(m₀)`.
pub fn f_set(filter: &QmfFilter, k: u32) -> Result<PeriodicIntervalSet, Error> {
    let period = pow2(k + 1);
    if band_zero_set(filter).is_none() {
        return Ok(empty(period));
    }
    let mut zeros = IntervalSet::empty();
    for j in 0..k {
        zeros = zeros.union(&zero_set_preimage(filter, j)?);
    }
    let scaled = zeros.affine(&pow2(k), &BigRational::zero())?;
    PeriodicIntervalSet::periodize(period, &scaled)
}

/// `A ∖ B` for periodic sets whose periods divide `period`.
fn periodic_difference(a: &PeriodicIntervalSet, b: &PeriodicIntervalSet, period: &BigRational) -> PeriodicIntervalSet {
    let zero = BigRational::zero();
    let d = a.restrict(&zero, period).difference(&b.restrict(&zero, period));
    PeriodicIntervalSet::periodize(period.clone(), &d).expect("positive period")
}

#[derive(Clone, Debug, PartialEq)]
pub struct WoldSets {
    pub e: PeriodicIntervalSet,
    /// `F_0, …, F_{k_max+1}`.
    pub f: Vec<PeriodicIntervalSet>,
    /// `E_0, …, E_{k_max}`.
    pub e_k: Vec<PeriodicIntervalSet>,
    /// `[−W, W) ∖ F_{k_max+1}`.
    pub e_inf_window: IntervalSet,
    /// `W` in units of π.
    pub window: BigRational,
    pub k_max: u32,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TilingReport {
    pub window_measure: String,
    pub covered_measure: String,
    /// `measure(window ∖ (∪E_k ∪ E_inf))`.
    pub defect: String,
    /// Total measure of pairwise overlaps.
    pub overlap: String,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WoldDump {
    pub window: [String; 2],
    pub k_max: u32,
    pub e: PeriodicDump,
    pub f: Vec<PeriodicDump>,
    pub e_k: Vec<PeriodicDump>,
    pub e_inf_window: Vec<[[String; 2]; 2]>,
    pub note: Option<String>,
}

impl WoldSets {
    pub fn window_set(&self) -> IntervalSet {
        IntervalSet::interval(-self.window.clone(), self.window.clone())
    }

    fn trace(&self, s: &PeriodicIntervalSet) -> IntervalSet {
        s.restrict(&-self.window.clone(), &self.window)
    }

    /// Whether `F_k ∩ window` grows with `k`.
    pub fn monotone_in_window(&self) -> bool {
        self.f.windows(2).all(|w| self.trace(&w[0]).difference(&self.trace(&w[1])).is_empty())
    }

    /// The window traces of `E_0, …, E_{k_max}` followed by `E_inf_window`.
    pub fn pieces(&self) -> Vec<IntervalSet> {
        let mut v: Vec<_> = self.e_k.iter().map(|e| self.trace(e)).collect();
        v.push(self.e_inf_window.clone());
        v
    }

    pub fn tiling(&self) -> TilingReport {
        let pieces = self.pieces();
        let window = self.window_set();
        let union = pieces.iter().fold(IntervalSet::empty(), |acc, p| acc.union(p));
        let total: BigRational = pieces.iter().map(IntervalSet::measure).sum();
        let defect = window.difference(&union).measure();
        let overlap = total.clone() - union.measure();
        TilingReport {
            window_measure: window.measure().to_string(),
            covered_measure: total.to_string(),
            exact: defect.is_zero() && overlap.is_zero(),
            defect: defect.to_string(),
            overlap: overlap.to_string(),
        }
    }

    pub fn dump(&self) -> WoldDump {
        WoldDump {
            window: [self.window.numer().to_string(), self.window.denom().to_string()],
            k_max: self.k_max,
            e: self.e.dump(),
            f: self.f.iter().map(PeriodicIntervalSet::dump).collect(),
            e_k: self.e_k.iter().map(PeriodicIntervalSet::dump).collect(),
            e_inf_window: self.e_inf_window.endpoint_pairs(),
            note: self.note.clone(),
        }
    }
}

/// `F_k` for `k ≤ k_max + 1`, `E_k = F_{k+1} ∖ F_k` and the window approximation of `E_∞`.
/// `window` is the half-width `W` in units of π and must be at least `2^{k_max+1}`.
pub fn wold_sets(filter: &QmfFilter, k_max: u32, window: BigRational) -> Result<WoldSets, Error> {
    let need = pow2(k_max + 1);
    if window < need {
        return Err(Error::Window { got: window.to_string(), need: need.to_string() });
    }
    let f = (0..=k_max + 1).map(|k| f_set(filter, k)).collect::<Result<Vec<_>, _>>()?;
    let e_k = (0..=k_max as usize).map(|k| periodic_difference(&f[k + 1], &f[k], &pow2(k as u32 + 2))).collect();
    let last = f.last().expect("nonempty").restrict(&-window.clone(), &window);
    let e_inf_window = IntervalSet::interval(-window.clone(), window.clone()).difference(&last);
    Ok(WoldSets {
        e: kernel_set(filter),
        f,
        e_k,
        e_inf_window,
        window,
        k_max,
        note: (!filter.is_band()).then(|| LAURENT_NOTE.to_string()),
    })
}

/// A kernel element of `M*` built as a random step function on `E(m₀)` within
/// `[−W, W)`, with steps on the grid of width `π/2^res`.
#[derive(Clone, Debug)]
pub struct KernelElement {
    res: u32,
    window: i64,
    values: Vec<(BigRational, num_complex::Complex64)>,
}

impl KernelElement {
    pub fn random(filter: &QmfFilter, rng: &mut ProbeRng, window: i64, res: u32) -> Self {
        let e = kernel_set(filter);
        let step = BigRational::new(BigInt::one(), BigInt::one() << res);
        let cells = 2 * window * (1i64 << res);
        let values = (0..cells)
            .map(|c| {
                let a = ratio(-window, 1) + &step * ratio(c, 1);
                let cell = IntervalSet::interval(a.clone(), &a + &step);
                let inside = e.restrict(&a, &(&a + &step)) == cell;
                (a, if inside { rng::complex(rng) } else { num_complex::Complex64::new(0.0, 0.0) })
            })
            .collect();
        Self { res, window, values }
    }

    /// `ĝ(x·π)`.
    pub fn value(&self, x: &BigRational) -> num_complex::Complex64 {
        let scaled = (x + ratio(self.window, 1)) * pow2(self.res);
        let idx = scaled.floor().to_integer();
        usize::try_from(idx)
            .ok()
            .and_then(|i| self.values.get(i))
            .map_or(num_complex::Complex64::new(0.0, 0.0), |v| v.1)
    }
}

/// Largest `|(M*g)^(ξ)| = √2|m₀(ξ)ĝ(2ξ)|` and largest `|ĝ|` on `E(m₀) + 2π`,
/// at the points `ξ = j/2^{res+2}` (π units) of the window.
pub fn kernel_element_defects(filter: &QmfFilter, g: &KernelElement) -> (f64, f64) {
    let e_shift = kernel_set(filter);
    let step = BigRational::new(BigInt::one(), BigInt::one() << (g.res + 2));
    let n = 2 * g.window * (1i64 << (g.res + 2));
    let mut mstar = 0.0f64;
    let mut off = 0.0f64;
    for j in 0..n {
        let x = ratio(-g.window, 1) + &step * ratio(j, 1);
        if filter.band_contains(&x) == Some(true) {
            mstar = mstar.max(std::f64::consts::SQRT_2 * g.value(&(&x * ratio(2, 1))).norm());
        }
        if e_shift.contains(&(&x - ratio(2, 1))) {
            off = off.max(g.value(&x).norm());
        }
    }
    (mstar, off)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic(period: i64, list: &[(crate::interval::Fraction, crate::interval::Fraction)]) -> PeriodicIntervalSet {
        PeriodicIntervalSet::periodize(ratio(period, 1), &IntervalSet::from_ratios(list)).unwrap()
    }

    #[test]
    fn shannon_kernel_set() {
        let e = kernel_set(&QmfFilter::shannon());
        assert!(e.same_set(&periodic(4, &[((1, 1), (3, 1))])));
        assert!(kernel_set(&QmfFilter::haar()).base().is_empty());
    }

    #[test]
    fn shannon_f_sets() {
        let s = QmfFilter::shannon();
        assert!(f_set(&s, 0).unwrap().base().is_empty());
        for k in 1..6u32 {
            let p = 1i64 << k;
            let expect = periodic(2 * p, &[((-p, 1), (-1, 1)), ((1, 1), (p, 1))]);
            assert!(f_set(&s, k).unwrap().same_set(&expect), "k = {k}");
        }
    }

    #[test]
    fn shannon_e1_is_three_to_five_pi() {
        let w = wold_sets(&QmfFilter::shannon(), 3, ratio(16, 1)).unwrap();
        assert!(w.e_k[0].same_set(&w.e));
        assert!(w.e_k[1].same_set(&periodic(8, &[((3, 1), (5, 1))])));
        assert!(!w.e_k[1].same_set(&periodic(8, &[((2, 1), (6, 1))])));
    }

    #[test]
    fn shannon_window_and_tiling() {
        let w = wold_sets(&QmfFilter::shannon(), 4, ratio(32, 1)).unwrap();
        assert_eq!(w.e_inf_window, IntervalSet::from_ratios(&[((-1, 1), (1, 1))]));
        assert!(w.tiling().exact);
        assert!(w.monotone_in_window());
        let w = wold_sets(&QmfFilter::shannon(), 5, ratio(64, 1)).unwrap();
        let t = w.tiling();
        assert!(t.exact, "{t:?}");
        assert_eq!(t.window_measure, "128");
        assert!(matches!(wold_sets(&QmfFilter::shannon(), 5, ratio(32, 1)), Err(Error::Window { .. })));
    }

    #[test]
    fn laurent_short_circuits() {
        let w = wold_sets(&QmfFilter::haar(), 2, ratio(8, 1)).unwrap();
        assert!(w.note.is_some());
        assert!(w.e_k.iter().all(|e| e.base().is_empty()));
        assert_eq!(w.e_inf_window, w.window_set());
        assert!(w.tiling().exact);
    }

    #[test]
    fn other_band_filter_tiles() {
        // Support and its π-translate partition the circle.
        let f = QmfFilter::band(&IntervalSet::from_ratios(&[((-3, 4), (-1, 4)), ((0, 1), (1, 4)), ((3, 4), (1, 1))]));
        let w = wold_sets(&f, 4, ratio(40, 1)).unwrap();
        assert!(w.tiling().exact);
        assert!(w.monotone_in_window());
    }

    #[test]
    fn kernel_elements_vanish_under_adjoint() {
        let s = QmfFilter::shannon();
        let mut g = rng::seeded(21);
        for _ in 0..20 {
            let k = KernelElement::random(&s, &mut g, 8, 2);
            let (mstar, off) = kernel_element_defects(&s, &k);
            assert_eq!((mstar, off), (0.0, 0.0));
        }
    }
}
